"""Acceptance gate: one test per release criterion, one printed verdict each.

Every criterion is checked at its stated tolerance and wall-clock budget;
the verdict line names the criterion so the pytest log doubles as the
acceptance report.
"""

import itertools
import random
import time
from collections import defaultdict
from fractions import Fraction

import numpy as np

from nilspacekit.congruences import (FiberTransitiveCandidate,
                                     check_fiber_transitive,
                                     cubespace_from_quotient,
                                     cubespace_from_signature,
                                     fiber_transitive_closure,
                                     filtrations_equivalent, image_cubespace,
                                     is_free_fiber_transitive, quotient,
                                     quotient_isomorphic_to_residues,
                                     saturate_tables, verify_nilspace_axioms,
                                     _orbits)
from nilspacekit.core import Slot, free_signature, residue_signature
from nilspacekit.corpus import (alpha_r_candidate, gamma_prime_candidate,
                                noncongruence_generator,
                                plus_two_shift_candidate,
                                quadratic_nilcharacter, shear_translation,
                                vertical_shift)
from nilspacekit.cubes import enumerate_cubes, is_cube_degree_k, is_point_cube
from nilspacekit.double_cosets import (Nilpair, all_subgroups,
                                       heisenberg_isomorphism_check,
                                       nilpair_condition, random_subgroup,
                                       stabilizer_representation)
from nilspacekit.filtered import (abelian_filtered, hk_cube_membership,
                                  unitriangular)
from nilspacekit.gowers import (FiniteAbelianGroup, SignalTable, correlation,
                                gowers_norm, natural_surjection,
                                polynomial_phase_signal,
                                u2_fourier_identity_gap)
from nilspacekit.morphisms import PolyMorphism, taylor_decompose, _iter_indices
from nilspacekit.translations import (act, act_table, arrow,
                                      enumerate_translation_group,
                                      is_translation_bruteforce)

S22 = residue_signature([[2], [2]])
S33 = residue_signature([[3], [3]])


def verdict(number, label, elapsed, budget):
    assert elapsed < budget, f"criterion {number} exceeded {budget}s ({elapsed:.1f}s)"
    print(f"PASS criterion {number}: {label} ({elapsed:.1f}s)")


def test_criterion_1_gray_code_host_kra_equivalence():
    started = time.time()
    cases = [((2,), "Z_2"), ((3,), "Z_3"), ((4,), "Z_4"), ((2, 2), "Z_2xZ_2")]
    for moduli, _name in cases:
        slots = tuple(Slot("residues", m) for m in moduli)
        for k in (1, 2):
            G = abelian_filtered(moduli, k)
            for n in (1, 2, 3):
                for cand in itertools.product(G.elements, repeat=1 << n):
                    assert (hk_cube_membership(G, cand, n)
                            == is_cube_degree_k(k, cand, n, slots))
    verdict(1, "Host-Kra cubes = Gray-code cubes for abelian |G| <= 4, "
               "k <= 2, n <= 3", time.time() - started, 60)


def _all_arrow_passing_maps(sig, s=1):
    """DFS over point images, pruning with every arrow constraint whose
    vertices are already assigned; the leaves are exactly the maps accepted
    by is_translation_bruteforce."""
    pts = sig.points()
    index = {p: i for i, p in enumerate(pts)}
    by_last = defaultdict(list)
    for n in range(0, sig.k + 2 - s):
        for q in enumerate_cubes(sig, n):
            idxs = tuple(index[p] for p in q)
            by_last[max(idxs)].append((idxs, q, n))
    f = [None] * len(pts)
    out = []

    def dfs(t):
        if t == len(pts):
            out.append(tuple(f))
            return
        for v in range(len(pts)):
            f[t] = v
            if all(is_point_cube(sig, arrow(sig, q, [pts[f[i]] for i in idxs],
                                            n, s), n + s)
                   for idxs, q, n in by_last[t]):
                dfs(t + 1)
        f[t] = None

    dfs(0)
    return set(out)


def test_criterion_2_translation_parametrization():
    started = time.time()
    for sig, expected in ((S22, 8), (S33, 27)):
        group = enumerate_translation_group(sig, 1)
        assert len(group) == expected
        tables = {act_table(sig, t) for t in group}
        assert len(tables) == expected
        assert tables == _all_arrow_passing_maps(sig, 1)
    # spot-check the oracle itself on the smaller space
    for t in enumerate_translation_group(S22, 1):
        assert is_translation_bruteforce(S22, lambda p: act(t, p), 1)[0]
    verdict(2, "tran_1 enumeration = arrow-criterion maps (counts 8 and 27)",
            time.time() - started, 60)


def test_criterion_3_taylor_roundtrip():
    started = time.time()
    rng = random.Random(2024)
    target = (Slot("integers"),)
    signatures = [free_signature([1]), free_signature([2]),
                  free_signature([1, 1]), free_signature([3]),
                  free_signature([1, 0, 1])]
    for _ in range(500):
        sig = rng.choice(signatures)
        coeffs = {idx: (rng.randint(-6, 6),)
                  for idx in _iter_indices(sig, 3) if rng.random() < 0.5}
        phi = PolyMorphism.make(sig, target, 3, coeffs)
        psi = taylor_decompose(phi.eval, sig, target, 3)
        assert psi.coeffs == phi.coeffs
    verdict(3, "500 random degree-<=3 morphisms survive eval -> "
               "taylor_decompose -> eval exactly", time.time() - started, 30)


def test_criterion_4_paper_example_regression():
    started = time.time()
    # (a) the +2-shift quotient
    c = plus_two_shift_candidate()
    q = quotient(c)
    assert q.structure_groups == ((2,), (2,))
    assert quotient_isomorphic_to_residues(q, S22)
    # (b) the non-congruence orbit relation
    sig, g = noncongruence_generator()
    ok, witness = check_fiber_transitive(FiberTransitiveCandidate(sig, (g,)))
    assert not ok and witness == ((((1,), (0,)), ((1,), (1,)), 1))
    pts = sig.points()
    orbit_of = _orbits(pts, saturate_tables([act_table(sig, g)]))
    class_of = lambda p: pts[orbit_of[pts.index(p)]]
    cs = image_cubespace(sig, class_of, 3)
    report = verify_nilspace_axioms(cs, step=sig.k)
    assert not report["unique_completion"]["pass"]
    proj = []
    for m in range(8):
        v1, v2, v3 = m & 1, (m >> 1) & 1, (m >> 2) & 1
        proj.append(cs.points.index(class_of(((v3,), (v1 * v2,)))))
    assert tuple(proj) in cs.set_for(3)
    # (c) alpha_r fails fiber-transitivity, the vertical replacement passes
    ok_a, w = check_fiber_transitive(alpha_r_candidate(Fraction(1, 2)),
                                     word_cap=2, box_side=2)
    assert not ok_a
    assert w == (((Fraction(0),), (), (Fraction(0),)),
                 ((Fraction(0),), (), (Fraction(1, 2),)), 2)
    assert check_fiber_transitive(gamma_prime_candidate(),
                                  word_cap=2, box_side=2)[0]
    # (d) free versus non-free actions
    F = free_signature([1, 1])
    assert is_free_fiber_transitive(c)
    assert not is_free_fiber_transitive(
        FiberTransitiveCandidate(F, c.generators + (shear_translation(F, 2),)))
    # (e) the Heisenberg isomorphism over Z_5 and a rational grid
    assert heisenberg_isomorphism_check(modulus=5, samples=100, seed=0)["pass"]
    pool = [Fraction(n, d) for n in (-2, -1, 0, 1, 2) for d in (1, 2)]
    assert heisenberg_isomorphism_check(rational_pool=pool,
                                        samples=40, seed=0)["pass"]
    verdict(4, "paper-example regression (quotient, non-congruence, "
               "fiber-transitivity, freeness, Heisenberg)",
            time.time() - started, 120)


def test_criterion_5_nilpair_condition_equivalence():
    started = time.time()
    G2 = unitriangular(2)
    subs = all_subgroups(G2)
    assert len(subs) == 10
    for K in subs:
        for Gam in subs:
            pair = Nilpair(G2, K, Gam)
            assert (nilpair_condition(pair, "i")[0]
                    == nilpair_condition(pair, "ii")[0])
    G3 = unitriangular(3)
    rng = random.Random(0)
    for _ in range(200):
        pair = Nilpair(G3, random_subgroup(G3, rng), random_subgroup(G3, rng))
        assert (nilpair_condition(pair, "i")[0]
                == nilpair_condition(pair, "ii")[0])
    verdict(5, "nilpair conditions (i) <=> (ii): 100 exhaustive Z_2 pairs "
               "+ 200 random Z_3 pairs", time.time() - started, 300)


def test_criterion_6_stabilizer_representation():
    started = time.time()
    report = stabilizer_representation(S22)
    assert report["well_defined"]
    assert report["bijective"]
    assert report["cube_preserving"]
    assert report["equivariant"]
    assert report["cube_dim_checked"] == 3
    assert report["sizes"] == {"translations": 8, "stabilizer": 2,
                               "cosets": 4, "points": 4}
    verdict(6, "K\\Tran(F) -> F bijective, cube-preserving to dim 3, "
               "equivariant on D_1(Z_2) x D_2(Z_2)", time.time() - started, 60)


def test_criterion_7_gowers_suite():
    started = time.time()
    rng = random.Random(777)
    for k in (8, 12, 16):
        G = FiniteAbelianGroup((k,))
        for _ in range(100):
            vals = np.array([complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) / 2
                             for _ in range(k)])
            f = SignalTable(G, vals)
            assert u2_fourier_identity_gap(f) < 1e-9
    G8 = FiniteAbelianGroup((8,))
    for _ in range(20):
        vals = np.array([complex(rng.uniform(-1, 1), rng.uniform(-1, 1)) / 2
                         for _ in range(8)])
        f = SignalTable(G8, vals)
        norms = [gowers_norm(f, d) for d in (1, 2, 3)]
        assert all(a <= b + 1e-9 for a, b in zip(norms, norms[1:]))
    N, a = 64, 1
    signal = polynomial_phase_signal(FiniteAbelianGroup((N,)), (0, 0, a))
    assert abs(gowers_norm(signal, 3, budget=10 ** 8) - 1.0) < 1e-9
    chi = quadratic_nilcharacter(N, a)
    assert correlation(signal, chi, natural_surjection(signal.group)) >= 0.99
    verdict(7, "U^2 Fourier identity, U^d monotonicity, quadratic U^3 = 1 "
               "and nilcharacter correlation >= 0.99",
            time.time() - started, 60)


def test_criterion_8_quotient_soundness_and_filtration_equivalence():
    started = time.time()
    # every finite quotient in the corpus satisfies the axioms up to dim k+1
    H22 = FiberTransitiveCandidate(
        S22, (vertical_shift(S22, 1, (0,)), vertical_shift(S22, 2, (1,))))
    q22 = quotient(H22)
    report = verify_nilspace_axioms(cubespace_from_quotient(q22), step=S22.k)
    assert all(part["pass"] for part in report.values())
    # the free-base quotient matches its residue model, which satisfies them too
    q = quotient(plus_two_shift_candidate())
    assert quotient_isomorphic_to_residues(q, S22)
    model = verify_nilspace_axioms(cubespace_from_signature(S22, 3), step=2)
    assert all(part["pass"] for part in model.values())
    # equivalent filtrations: H vs its fiber-transitive closure
    S44 = residue_signature([[4], [4]])
    H44 = FiberTransitiveCandidate(
        S44, (vertical_shift(S44, 1, (2,)), vertical_shift(S44, 2, (2,))))
    closure_cand = FiberTransitiveCandidate(
        S44, tuple(fiber_transitive_closure(H44)))
    assert filtrations_equivalent(H44, closure_cand, dim_cap=2)
    qa, qb = quotient(H44, dim_cap=2), quotient(closure_cand, dim_cap=2)
    assert (qa.reps, qa.rep_map, qa.cube_sets, qa.structure_groups) \
        == (qb.reps, qb.rep_map, qb.cube_sets, qb.structure_groups)
    # H vs the explicitly declared induced filtration
    H44_declared = FiberTransitiveCandidate(
        S44, H44.generators, filtration=((1, (0, 1)), (2, (1,))))
    assert filtrations_equivalent(H44, H44_declared, dim_cap=2)
    verdict(8, "corpus quotients satisfy the axioms; equivalent filtrations "
               "give identical quotients", time.time() - started, 120)
