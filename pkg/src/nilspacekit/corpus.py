"""The regenerable example corpus backing the `examples` CLI subcommand.

Every entry is a deterministic report (fixed seeds, fixed budgets) whose JSON
serialization is committed as a golden file under `golden/`.  Regeneration
plus diffing those files is the repository's cross-version regression check.
"""

from __future__ import annotations

from fractions import Fraction

from .core import (RAT, Signature, Slot, free_signature, residue_signature)
from .cubes import cube_count, enumerate_cubes
from .filtered import closure, unitriangular
from .morphisms import (MultiIndex, PolyMorphism, constant_morphism,
                        enumerate_hom_tables)
from .translations import (Translation, act, act_table, compose,
                           enumerate_translation_group, invert)
from .congruences import (FiberTransitiveCandidate, check_fiber_transitive,
                          cubespace_from_quotient, fiber_transitive_closure,
                          filtrations_equivalent, image_cubespace,
                          is_free_fiber_transitive, quotient,
                          quotient_isomorphic_to_residues, saturate_tables,
                          verify_nilspace_axioms, _orbits)
from .double_cosets import (Nilpair, double_coset_build,
                            heisenberg_isomorphism_check, nilpair_condition,
                            stabilizer_representation)
from .gowers import (FiniteAbelianGroup, correlation, gowers_norm,
                     natural_surjection, polynomial_phase_signal, e,
                     Nilcharacter)
from .jsonio import to_jsonable

CORPUS_NAMES = ("heisenberg", "plus_two_shift_quotient", "noncongruence_orbit",
                "fiber_transitivity_failure", "stabilizer_representation",
                "quadratic_phase_correlation", "golden_values")


def vertical_shift(sig: Signature, degree: int, const) -> Translation:
    """The translation adding `const` to the degree-`degree` coordinate."""
    prefer_table = not sig.is_free
    comps = []
    for i in range(degree, sig.k + 1):
        val = const if i == degree else tuple(0 for _ in sig.slots(i))
        comps.append(constant_morphism(sig.truncate(i - degree), sig.slots(i),
                                       i - degree, val,
                                       prefer_table=prefer_table))
    return Translation(sig, degree, tuple(comps))


def plus_two_shift_candidate() -> FiberTransitiveCandidate:
    """H = <x -> x+2, y -> y+2> on D_1(Z) x D_2(Z)."""
    F = free_signature([1, 1])
    return FiberTransitiveCandidate(
        F, (vertical_shift(F, 1, (2,)), vertical_shift(F, 2, (2,))))


def noncongruence_generator():
    """(x, y) -> (x, x + y) on D_1(Z_2) x D_2(Z_2)."""
    from .morphisms import TableMorphism
    sig = residue_signature([[2], [2]])
    T1 = constant_morphism(sig.truncate(0), sig.slots(1), 0, (0,),
                           prefer_table=True)
    T2 = TableMorphism.from_callable(sig.truncate(1), sig.slots(2), 1,
                                     lambda p: (p[0][0],))
    return sig, Translation(sig, 1, (T1, T2))


def shear_translation(sig: Signature, factor) -> Translation:
    """(x, y) -> (x, y + factor*x) on a two-degree signature."""
    if sig.is_free:
        T2 = PolyMorphism.make(sig.truncate(1), sig.slots(2), 1,
                               {MultiIndex.make({(1, 1): 1}): (factor,)})
    else:
        from .morphisms import TableMorphism
        m = sig.slot(2, 0).modulus
        T2 = TableMorphism.from_callable(sig.truncate(1), sig.slots(2), 1,
                                         lambda p: ((factor * p[0][0]) % m,))
    T1 = constant_morphism(sig.truncate(0), sig.slots(1), 0,
                           tuple(0 for _ in sig.slots(1)),
                           prefer_table=not sig.is_free)
    return Translation(sig, 1, (T1, T2))


def alpha_r_candidate(r: Fraction) -> FiberTransitiveCandidate:
    """Gamma = <(x, y) -> (x, y + r(x^2 + 1))> on D_1(Q) x D_3(Q)."""
    FQ = Signature(((Slot(RAT),), (), (Slot(RAT),)))
    T1 = PolyMorphism.make(FQ.truncate(0), FQ.slots(1), 0, {})
    T2 = PolyMorphism.make(FQ.truncate(1), FQ.slots(2), 1, {})
    T3 = PolyMorphism.make(FQ.truncate(2), FQ.slots(3), 2, {
        MultiIndex.make({}): (r,),
        MultiIndex.make({(1, 1): 1}): (r,),
        MultiIndex.make({(1, 1): 2}): (2 * r,)})
    return FiberTransitiveCandidate(FQ, (Translation(FQ, 1, (T1, T2, T3)),))


def gamma_prime_candidate() -> FiberTransitiveCandidate:
    """The vertical replacement: integer shifts of the degree-3 coordinate."""
    FQ = Signature(((Slot(RAT),), (), (Slot(RAT),)))
    return FiberTransitiveCandidate(
        FQ, (vertical_shift(FQ, 3, (Fraction(1),)),))


def quadratic_nilcharacter(N: int, a: int) -> Nilcharacter:
    """x -> e((a/N) x^2) through F = D_2(Q) modulo integer vertical shifts."""
    F = Signature(((), (Slot(RAT),)))
    src = free_signature([1])
    g2 = PolyMorphism.make(src, F.slots(2), 2, {
        MultiIndex.make({(1, 1): 1}): (Fraction(a, N),),
        MultiIndex.make({(1, 1): 2}): (Fraction(2 * a, N),)})
    g1 = PolyMorphism.make(src, F.slots(1), 1, {})
    action = FiberTransitiveCandidate(
        F, (vertical_shift(F, 2, (Fraction(1),)),))
    return Nilcharacter(src, (g1, g2), action, lambda rep: e(rep[1][0]))


def _heisenberg_entry() -> dict:
    pool = [Fraction(n, d) for n in (-2, -1, 0, 1, 2) for d in (1, 2)]
    return {
        "mod2": heisenberg_isomorphism_check(modulus=2),
        "mod5": heisenberg_isomorphism_check(modulus=5, samples=100, seed=0),
        "rational": heisenberg_isomorphism_check(rational_pool=pool,
                                                 samples=40, seed=0),
    }


def _plus_two_shift_entry() -> dict:
    c = plus_two_shift_candidate()
    q = quotient(c)
    return {
        "fiber_transitive": check_fiber_transitive(c)[0],
        "free_action": is_free_fiber_transitive(c),
        "representatives": [list(map(list, r)) for r in q.reps],
        "structure_groups": [list(g) for g in q.structure_groups],
        "isomorphic_to_D1Z2_x_D2Z2": quotient_isomorphic_to_residues(
            q, residue_signature([[2], [2]])),
    }


def _noncongruence_entry() -> dict:
    sig, g = noncongruence_generator()
    c = FiberTransitiveCandidate(sig, (g,))
    ok, witness = check_fiber_transitive(c)
    pts = sig.points()
    tabs = saturate_tables([act_table(sig, g)])
    orbit_of = _orbits(pts, tabs)
    class_of = lambda p: pts[orbit_of[pts.index(p)]]
    cs = image_cubespace(sig, class_of, 3)
    axioms = verify_nilspace_axioms(cs, step=sig.k)
    # the projected cube q(v1,v2,v3) = (v3, v1*v2) and its corner completions
    proj = []
    for m in range(8):
        v1, v2, v3 = m & 1, (m >> 1) & 1, (m >> 2) & 1
        proj.append(cs.points.index(class_of(((v3,), (v1 * v2,)))))
    completions = [z for z in range(len(cs.points))
                   if tuple(proj[:7]) + (z,) in cs.set_for(3)]
    return {
        "fiber_transitive": ok,
        "witness": witness,
        "classes": [list(map(list, p)) for p in cs.points],
        "axioms": axioms,
        "projected_paper_cube": proj,
        "paper_cube_corner_completions": completions,
    }


def _fiber_transitivity_failure_entry() -> dict:
    grid = [Fraction(1), Fraction(1, 2), Fraction(2, 3)]
    failures = []
    for r in grid:
        ok, witness = check_fiber_transitive(alpha_r_candidate(r),
                                             word_cap=2, box_side=2)
        failures.append({"r": r, "fiber_transitive": ok, "witness": witness})
    ok_prime, _ = check_fiber_transitive(gamma_prime_candidate(),
                                         word_cap=2, box_side=2)
    F = free_signature([1, 1])
    H = plus_two_shift_candidate()
    H_prime = FiberTransitiveCandidate(
        F, H.generators + (shear_translation(F, 2),))
    return {
        "alpha_r_grid": failures,
        "gamma_prime_fiber_transitive": ok_prime,
        "H_free": is_free_fiber_transitive(H),
        "H_prime_free": is_free_fiber_transitive(H_prime),
    }


def _stabilizer_entry() -> dict:
    out = {}
    for label, moduli in (("D1Z2_x_D2Z2", [[2], [2]]),
                          ("D1Z2", [[2]]),
                          ("D1Z3_x_D2Z3", [[3], [3]])):
        rep = stabilizer_representation(residue_signature(moduli))
        rep.pop("space")
        out[label] = rep
    return out


def _quadratic_phase_entry() -> dict:
    N, a = 64, 1
    signal = polynomial_phase_signal(FiniteAbelianGroup((N,)), (0, 0, a))
    chi = quadratic_nilcharacter(N, a)
    return {
        "N": N, "a": a,
        "u3": gowers_norm(signal, 3, budget=10**8),
        "correlation": correlation(signal, chi,
                                   natural_surjection(signal.group)),
        "nilcharacter_valid": chi.validate()["pass"],
    }


def _golden_values_entry() -> dict:
    s22 = residue_signature([[2], [2]])
    s33 = residue_signature([[3], [3]])
    F3 = free_signature([2, 1])  # D_1(Z^2) x D_2(Z)
    alpha = Translation(F3, 1, (
        constant_morphism(F3.truncate(0), F3.slots(1), 0, (1, 0)),
        PolyMorphism.make(F3.truncate(1), F3.slots(2), 1, {})))
    beta = Translation(F3, 1, (
        constant_morphism(F3.truncate(0), F3.slots(1), 0, (0, 1)),
        PolyMorphism.make(F3.truncate(1), F3.slots(2), 1,
                          {MultiIndex.make({(1, 1): 1}): (1,)})))
    comm = compose(invert(beta), compose(invert(alpha), compose(beta, alpha)))
    G2 = unitriangular(2)
    K = frozenset(closure([(1, 0, 0)], G2.mul, G2.inv))
    Gam = frozenset(closure([(0, 0, 1)], G2.mul, G2.inv))
    golden_pair = Nilpair(G2, K, Gam)
    G3 = unitriangular(3)
    center3 = frozenset((0, b, 0) for b in range(3))
    coset9 = double_coset_build(
        Nilpair(G3, frozenset([G3.identity]), center3), dim_cap=2)
    # the finite analog of the closure example, on D_1(Z_4) x D_2(Z_4)
    s44 = residue_signature([[4], [4]])
    H44 = FiberTransitiveCandidate(
        s44, (vertical_shift(s44, 1, (2,)), vertical_shift(s44, 2, (2,))))
    closure44 = fiber_transitive_closure(H44)
    shear_table = act_table(s44, shear_translation(s44, 2))
    H22 = FiberTransitiveCandidate(
        s22, (vertical_shift(s22, 1, (0,)), vertical_shift(s22, 2, (1,))))
    q22 = quotient(H22)
    return {
        "translation_counts": {
            "tran1_D1Z2_x_D2Z2": len(enumerate_translation_group(s22, 1)),
            "tran2_D1Z2_x_D2Z2": len(enumerate_translation_group(s22, 2)),
            "tran1_D1Z3_x_D2Z3": len(enumerate_translation_group(s33, 1)),
            "tran1_D1Z2": len(enumerate_translation_group(
                residue_signature([[2]]), 1)),
            "tran1_D2Z2": len(enumerate_translation_group(
                residue_signature([[], [2]]), 1)),
        },
        "hom_counts": {
            "D1Z2_to_D1Z2": len(enumerate_hom_tables(
                residue_signature([[2]]), (Slot("residues", 2),), 1)),
            "D1Z2_to_D2Z2": len(enumerate_hom_tables(
                residue_signature([[2]]), (Slot("residues", 2),), 2)),
            "D1Z3_to_D1Z3": len(enumerate_hom_tables(
                residue_signature([[3]]), (Slot("residues", 3),), 1)),
        },
        "cube_counts": {
            "D2Z2_n3": cube_count(residue_signature([[], [2]]), 3),
            "D1Z2_x_D2Z2_n2": cube_count(s22, 2),
            "enumerated_D1Z2_x_D2Z2_n2": len(enumerate_cubes(s22, 2)),
        },
        "heisenberg_commutator_on_zero": act(comm, F3.zero_point()),
        "beta_at_2_0_5": act(Translation(F3, 1, (
            constant_morphism(F3.truncate(0), F3.slots(1), 0, (0, 1)),
            PolyMorphism.make(F3.truncate(1), F3.slots(2), 1,
                              {MultiIndex.make({(1, 1): 1}): (1,)}))),
            ((2, 0), (5,))),
        "nilpair_unitriangular_Z2_elem12_elem23": {
            "condition_i": nilpair_condition(golden_pair, "i"),
            "condition_ii": nilpair_condition(golden_pair, "ii"),
        },
        "unitriangular_Z3_mod_center_points": len(coset9.reps),
        "closure_Z4": {
            "size": len(closure44),
            "contains_shear": any(act_table(s44, t) == shear_table
                                  for t in closure44),
            "equivalent_to_H": filtrations_equivalent(
                H44, FiberTransitiveCandidate(s44, tuple(closure44)),
                dim_cap=2),
        },
        "vertical_Z2_quotient": {
            "structure_groups": [list(g) for g in q22.structure_groups],
            "axioms": verify_nilspace_axioms(cubespace_from_quotient(q22),
                                             step=s22.k),
        },
    }


def build_corpus() -> dict:
    """All corpus entries, JSON-ready."""
    entries = {
        "heisenberg": _heisenberg_entry(),
        "plus_two_shift_quotient": _plus_two_shift_entry(),
        "noncongruence_orbit": _noncongruence_entry(),
        "fiber_transitivity_failure": _fiber_transitivity_failure_entry(),
        "stabilizer_representation": _stabilizer_entry(),
        "quadratic_phase_correlation": _quadratic_phase_entry(),
        "golden_values": _golden_values_entry(),
    }
    return {name: to_jsonable(entry) for name, entry in entries.items()}
