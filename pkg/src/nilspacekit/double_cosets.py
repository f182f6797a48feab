"""Double-coset nilspaces K\\G/Gamma on finite filtered groups.

A nilpair (K, Gamma) consists of two subgroups of a filtered group G.  The
pair is groupable when the double-coset intersection identities hold, in
which case the double cosets K x Gamma carry a nilspace structure whose cubes
are the images K q Gamma of the Host-Kra cubes q of G.  This module decides
the intersection identities, materializes the coset space, represents finite
product nilspaces as coset spaces of their translation groups, and checks the
explicit isomorphism between D_1(A^2) x D_2(A) and the Heisenberg group over
A (residues or rationals).
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass
from fractions import Fraction

from .core import (BudgetExceeded, DEFAULT_BUDGET, NilspaceError, RAT,
                   Signature, Slot, enumerate_value, residue_signature)
from .cubes import (component_cube_count, cube_count, enumerate_cubes,
                    free_vertex_masks, is_point_cube, point_cube_from_free,
                    weight)
from .filtered import (FilteredGroupSpec, _peel, closure,
                       enumerate_hk_cubes, hk_cube_count,
                       hk_cube_from_coefficients, hk_cube_membership,
                       normal_form_order, unitriangular)
from .translations import act, act_table, enumerate_translation_group
from .congruences import Cubespace, compose_tables, invert_table


def _check_subgroup(G: FilteredGroupSpec, S, label: str) -> frozenset:
    S = frozenset(S)
    if G.identity not in S:
        raise NilspaceError("bad-subgroup", f"{label} misses the identity")
    for a in S:
        if G.inv(a) not in S:
            raise NilspaceError("bad-subgroup", f"{label} not inverse-closed",
                                witness=a)
        for b in S:
            if G.mul(a, b) not in S:
                raise NilspaceError("bad-subgroup", f"{label} not product-closed",
                                    witness=(a, b))
    return S


@dataclass(frozen=True)
class Nilpair:
    """Subgroups K (acting on the left) and Gamma (on the right) of G."""

    group: FilteredGroupSpec
    left: frozenset
    right: frozenset

    def __post_init__(self):
        object.__setattr__(self, "left",
                           _check_subgroup(self.group, self.left, "K"))
        object.__setattr__(self, "right",
                           _check_subgroup(self.group, self.right, "Gamma"))


def _double_coset(G: FilteredGroupSpec, K, x, Gam) -> frozenset:
    return frozenset(G.mul(G.mul(a, x), b) for a in K for b in Gam)


def nilpair_condition(pair: Nilpair, which: str):
    """Decide one of the two double-coset intersection identities.

    Condition "i":  (K x Gam) n (G_i x Gam) = (K n G_i) x Gam for all x, i.
    Condition "ii": (K x Gam) n (K x G_i)  = K x (Gam n G_i) for all x, i.
    Returns (True, None) or (False, (x, i)) with the first failing pair in
    element order.
    """
    if which not in ("i", "ii"):
        raise NilspaceError("bad-condition", f"unknown condition {which!r}")
    G = pair.group
    K, Gam = pair.left, pair.right
    for x in sorted(G.elements):
        for i in range(1, G.k + 1):
            Gi = G.term(i)
            if which == "i":
                lhs = _double_coset(G, K, x, Gam) & _double_coset(G, Gi, x, Gam)
                rhs = _double_coset(G, K & Gi, x, Gam)
            else:
                lhs = _double_coset(G, K, x, Gam) & _double_coset(G, K, x, Gi)
                rhs = _double_coset(G, K, x, Gam & Gi)
            if lhs != rhs:
                return False, (x, i)
    return True, None


@dataclass(frozen=True)
class DoubleCosetSpace:
    """The coset space K\\G/Gamma with materialized cube images.

    `reps` lists the lexicographically least element of each double coset;
    `cube_sets[n]` is the set of images (rep of Kq(v)Gamma)_v of the
    dimension-n Host-Kra cubes of G, materialized for n <= dim_cap.
    `verified` records whether intersection condition (ii) held.
    """

    pair: Nilpair
    reps: tuple
    rep_of: dict
    cube_sets: tuple
    verified: bool

    def cubespace(self) -> Cubespace:
        index = {r: i for i, r in enumerate(self.reps)}
        return Cubespace(self.reps,
                         tuple(frozenset(tuple(index[r] for r in q) for q in s)
                               for s in self.cube_sets))

    def cube_membership(self, values, n: int, budget: int = DEFAULT_BUDGET) -> bool:
        """Is the coset-valued map a cube, i.e. the image of a Host-Kra cube?

        Materialized sets answer small dimensions; above dim_cap the lift is
        searched coefficient by coefficient through the normal form, pruning
        each vertex as soon as its value is determined.
        """
        if len(values) != 1 << n:
            raise NilspaceError("dimension-mismatch",
                                f"expected {1 << n} values for dimension {n}")
        if n < len(self.cube_sets):
            return tuple(values) in self.cube_sets[n]
        G = self.pair.group
        order = normal_form_order(n)
        budget_left = [budget]

        def extend(pos: int, coeff: dict) -> bool:
            if pos == len(order):
                return True
            v = order[pos]
            prefix = G.identity
            for w in order[:pos]:
                if w & v == w:
                    prefix = G.mul(prefix, coeff[w])
            for g in sorted(G.term(weight(v))):
                budget_left[0] -= 1
                if budget_left[0] < 0:
                    raise BudgetExceeded("coset cube lift search exceeded budget")
                if self.rep_of[G.mul(prefix, g)] != values[v]:
                    continue
                coeff[v] = g
                if extend(pos + 1, coeff):
                    return True
                del coeff[v]
            return False

        return extend(0, {})


def double_coset_build(pair: Nilpair, dim_cap: int | None = None,
                       budget: int = DEFAULT_BUDGET) -> DoubleCosetSpace:
    """Materialize K\\G/Gamma with cube images up to dim_cap (default k+1)."""
    G = pair.group
    if dim_cap is None:
        dim_cap = G.k + 1
    rep_of = {}
    for x in sorted(G.elements):
        if x in rep_of:
            continue
        coset = _double_coset(G, pair.left, x, pair.right)
        rep = min(coset)
        for y in coset:
            if y in rep_of:
                raise NilspaceError("bad-partition",
                                    "double cosets fail to partition G",
                                    witness=y)
            rep_of[y] = rep
    reps = tuple(sorted(set(rep_of.values())))
    cube_sets = []
    for n in range(dim_cap + 1):
        cube_sets.append(frozenset(tuple(rep_of[v] for v in q)
                                   for q in enumerate_hk_cubes(G, n, budget)))
    verified, _ = nilpair_condition(pair, "ii")
    return DoubleCosetSpace(pair, reps, rep_of, tuple(cube_sets), verified)


def all_subgroups(G: FilteredGroupSpec):
    """Every subgroup of a finite group, by closing one generator at a time."""
    bottom = frozenset([G.identity])
    found = {bottom}
    frontier = [bottom]
    while frontier:
        nxt = []
        for S in frontier:
            for g in G.elements:
                if g in S:
                    continue
                T = frozenset(closure(set(S) | {g}, G.mul, G.inv))
                if T not in found:
                    found.add(T)
                    nxt.append(T)
        frontier = nxt
    return sorted(found, key=lambda S: (len(S), sorted(S)))


def random_subgroup(G: FilteredGroupSpec, rng: random.Random,
                    max_generators: int = 3) -> frozenset:
    gens = [rng.choice(G.elements)
            for _ in range(rng.randint(1, max_generators))]
    return frozenset(closure(gens + [G.identity], G.mul, G.inv))


# ---------------------------------------------------------------------------
# stabilizer representation of a finite product nilspace


def translation_group_spec(sig: Signature,
                           budget: int = DEFAULT_BUDGET) -> FilteredGroupSpec:
    """Tran(F) as a filtered permutation group, filtered by height."""
    pts = sig.points()
    terms = []
    for i in range(1, sig.k + 1):
        terms.append(frozenset(act_table(sig, t)
                               for t in enumerate_translation_group(sig, i, budget)))
    full = terms[0]
    elements = tuple(sorted(full))
    identity = tuple(range(len(pts)))
    return FilteredGroupSpec(elements, compose_tables, invert_table, identity,
                             (full,) + tuple(terms),
                             name=f"Tran({sig})")


def stabilizer_representation(sig: Signature, base_point=None,
                              dim_cap: int | None = None,
                              budget: int = DEFAULT_BUDGET) -> dict:
    """Represent a finite product nilspace as K\\Tran(F).

    With G = Tran(F) filtered by height and K the stabilizer of the base
    point f0, the map psi: Kg -> g^{-1}(f0) is checked to be well defined,
    bijective onto F, cube-preserving in both directions up to dimension
    dim_cap (default k+1, lowered to what the cube budget allows), and
    equivariant for the right action of G.
    """
    pts = sig.points()
    index = {p: i for i, p in enumerate(pts)}
    f0 = sig.zero_point() if base_point is None else sig.reduce_point(base_point)
    i0 = index[f0]
    G = translation_group_spec(sig, budget)
    K = frozenset(t for t in G.elements if t[i0] == i0)
    pair = Nilpair(G, K, frozenset([G.identity]))
    if dim_cap is None:
        dim_cap = sig.k + 1
    while dim_cap > 1 and hk_cube_count(G, dim_cap) > budget:
        dim_cap -= 1
    space = double_coset_build(pair, dim_cap=dim_cap, budget=budget)

    def psi_of_element(g):
        return pts[invert_table(g)[i0]]

    well_defined = True
    members = {}
    for g in G.elements:
        members.setdefault(space.rep_of[g], []).append(g)
    psi = {}
    for rep, elems in members.items():
        images = {psi_of_element(g) for g in elems}
        if len(images) != 1:
            well_defined = False
        psi[rep] = min(images)
    bijective = well_defined and sorted(psi.values()) == sorted(pts)

    cube_preserving = True
    for n in range(dim_cap + 1):
        image = {tuple(psi[r] for r in q) for q in space.cube_sets[n]}
        if image != {tuple(q) for q in enumerate_cubes(sig, n, budget)}:
            cube_preserving = False
            break

    equivariant = True
    for g in G.elements:
        pg = psi[space.rep_of[g]]
        for h in G.elements:
            lhs = psi[space.rep_of[compose_tables(g, invert_table(h))]]
            if lhs != pts[h[index[pg]]]:
                equivariant = False
                break
        if not equivariant:
            break

    ok = well_defined and bijective and cube_preserving and equivariant
    return {
        "sizes": {"translations": len(G.elements), "stabilizer": len(K),
                  "cosets": len(space.reps), "points": len(pts)},
        "well_defined": well_defined,
        "bijective": bijective,
        "cube_preserving": cube_preserving,
        "equivariant": equivariant,
        "cube_dim_checked": dim_cap,
        "space": space,
        "pass": ok,
    }


# ---------------------------------------------------------------------------
# Heisenberg isomorphism


class _RationalHeisenberg:
    """Unitriangular 3x3 matrices over the rationals, as (u12, u13, u23)."""

    identity = (Fraction(0), Fraction(0), Fraction(0))

    @staticmethod
    def mul(u, v):
        return (u[0] + v[0], u[1] + v[1] + u[0] * v[2], u[2] + v[2])

    @staticmethod
    def inv(u):
        return (-u[0], u[0] * u[2] - u[1], -u[2])


def heisenberg_point(p):
    """((x, y), (z,)) in D_1(A^2) x D_2(A)  ->  matrix entries (x, z, y)."""
    (x, y), (z,) = p
    return (x, z, y)


def heisenberg_point_inverse(u):
    a, b, c = u
    return ((a, c), (b,))


def _rational_hk_membership(values, n: int) -> bool:
    """Host-Kra membership over the rational Heisenberg lower-central series."""
    coeff = _peel(_RationalHeisenberg, values, n)
    for v, g in coeff.items():
        w = weight(v)
        if w >= 3 and g != _RationalHeisenberg.identity:
            return False
        if w == 2 and (g[0] != 0 or g[2] != 0):
            return False
    return True


def _random_point_cube(sig: Signature, n: int, rng: random.Random, pool=None):
    assigns = []
    for i in range(1, sig.k + 1):
        slots = sig.slots(i)
        free = free_vertex_masks(i, n)
        if pool is None:
            values = list(enumerate_value(slots))
            assigns.append([rng.choice(values) for _ in free])
        else:
            assigns.append([tuple(rng.choice(pool) for _ in slots)
                            for _ in free])
    return point_cube_from_free(sig, n, assigns)


def _random_hk_cube_rational(n: int, rng: random.Random, pool):
    coeff = {}
    zero = Fraction(0)
    for v in range(1 << n):
        w = weight(v)
        if w >= 3:
            coeff[v] = _RationalHeisenberg.identity
        elif w == 2:
            coeff[v] = (zero, rng.choice(pool), zero)
        else:
            coeff[v] = tuple(rng.choice(pool) for _ in range(3))
    return hk_cube_from_coefficients(_RationalHeisenberg, coeff, n)


def _random_hk_cube(G: FilteredGroupSpec, n: int, rng: random.Random):
    coeff = {v: rng.choice(sorted(G.term(weight(v)))) for v in range(1 << n)}
    return hk_cube_from_coefficients(G, coeff, n)


def _check_generator_images(points, heis_mul, reduce_point):
    """alpha and beta act as right multiplication by the stated matrices."""
    alpha_mat = (1, 0, 0)
    beta_mat = (0, 0, 1)
    for p in points:
        (x, y), (z,) = p
        alpha_p = reduce_point(((x + 1, y), (z,)))
        beta_p = reduce_point(((x, y + 1), (z + x,)))
        if heisenberg_point(alpha_p) != heis_mul(heisenberg_point(p), alpha_mat):
            return False
        if heisenberg_point(beta_p) != heis_mul(heisenberg_point(p), beta_mat):
            return False
    return True


def _tran_parameters(sig2, t):
    """(a, b, c) with t = (x, y) -> (x + a, y + b + c x) on D_1(A) x D_2(A)."""
    T1 = t.component(1)
    T2 = t.component(2)
    a = T1.eval(())[0]
    b = T2.eval((((0,),)))[0]
    one = sig2.reduce_point(((1,), (0,)))[0]
    c = (T2.eval((one,))[0] - b)
    return a, b, c


def _finite_translation_isomorphism(modulus: int, budget: int) -> bool:
    """gamma_{a,b,c} -> matrix(c, b; a) is an isomorphism Tran -> Heisenberg."""
    m = modulus
    sig2 = residue_signature([[m], [m]])
    H = unitriangular(m)
    trans = enumerate_translation_group(sig2, 1, budget)
    tables = {}
    for t in trans:
        a, b, c = (x % m for x in _tran_parameters(sig2, t))
        tables[(c, b, a)] = act_table(sig2, t)
    if len(tables) != len(H.elements):
        return False
    for u in H.elements:
        for v in H.elements:
            if compose_tables(tables[u], tables[v]) != tables[H.mul(u, v)]:
                return False
    return True


def _rational_translation_isomorphism(pool, sample_points,
                                      rng: random.Random,
                                      trials: int = 50) -> bool:
    def gamma(a, b, c):
        return lambda p: ((p[0][0] + a,), (p[1][0] + b + c * p[0][0],))

    for _ in range(trials):
        a1, b1, c1, a2, b2, c2 = (rng.choice(pool) for _ in range(6))
        u = _RationalHeisenberg.mul((c1, b1, a1), (c2, b2, a2))
        composed = gamma(u[2], u[1], u[0])
        g1, g2 = gamma(a1, b1, c1), gamma(a2, b2, c2)
        for p in sample_points:
            if g1(g2(p)) != composed(p):
                return False
    return True


def heisenberg_isomorphism_check(modulus: int | None = None,
                                 rational_pool=None,
                                 dims: int = 3,
                                 samples: int = 400,
                                 exhaustive_cap: int = 200000,
                                 seed: int = 0,
                                 budget: int = DEFAULT_BUDGET) -> dict:
    """Check that (x, y, z) -> [[1, x, z], [0, 1, y], [0, 0, 1]] is a nilspace
    isomorphism D_1(A^2) x D_2(A) -> Heisenberg(A).

    Over residues (`modulus`) the per-dimension cube comparison is exhaustive
    whenever the cube count fits under `exhaustive_cap`, otherwise a seeded
    sample of `samples` cubes is drawn on each side.  Over the rationals
    (`rational_pool` of Fraction values) both sides are always sampled.  The
    report also verifies the generator images and that gamma_{a,b,c} ->
    matrix(c, b; a) is a group isomorphism Tran(D_1 x D_2) -> Heisenberg.
    """
    if (modulus is None) == (rational_pool is None):
        raise NilspaceError("bad-input",
                            "give exactly one of modulus / rational_pool")
    rng = random.Random(seed)
    report = {"dims": [], "pass": True}

    if modulus is not None:
        m = modulus
        sig = residue_signature([[m, m], [m]])
        H = unitriangular(m)
        pts = sig.points()
        images = {heisenberg_point(p) for p in pts}
        report["points_bijective"] = (len(images) == len(pts)
                                      and images == set(H.elements))
        report["generator_images"] = _check_generator_images(
            pts, H.mul, sig.reduce_point)
        for n in range(dims + 1):
            fc, hc = cube_count(sig, n), hk_cube_count(H, n)
            entry = {"dim": n, "counts_equal": fc == hc}
            if fc <= exhaustive_cap:
                entry["mode"] = "exhaustive"
                entry["forward"] = all(
                    hk_cube_membership(H, [heisenberg_point(p) for p in q], n)
                    for q in enumerate_cubes(sig, n, budget))
                entry["backward"] = all(
                    is_point_cube(sig, [heisenberg_point_inverse(u) for u in q], n)
                    for q in enumerate_hk_cubes(H, n, budget))
            else:
                entry["mode"] = "sampled"
                entry["forward"] = all(
                    hk_cube_membership(
                        H, [heisenberg_point(p)
                            for p in _random_point_cube(sig, n, rng)], n)
                    for _ in range(samples))
                entry["backward"] = all(
                    is_point_cube(
                        sig, [heisenberg_point_inverse(u)
                              for u in _random_hk_cube(H, n, rng)], n)
                    for _ in range(samples))
            entry["pass"] = (entry["counts_equal"] and entry["forward"]
                             and entry["backward"])
            report["dims"].append(entry)
        report["translation_isomorphism"] = _finite_translation_isomorphism(
            m, budget)
    else:
        pool = [Fraction(v) if not isinstance(v, Fraction) else v
                for v in rational_pool]
        sig = Signature(((Slot(RAT), Slot(RAT)), (Slot(RAT),)))
        sample_pts = [((rng.choice(pool), rng.choice(pool)), (rng.choice(pool),))
                      for _ in range(32)]
        images = {heisenberg_point(p) for p in sample_pts}
        report["points_bijective"] = all(
            heisenberg_point_inverse(u) in sample_pts for u in images)
        report["generator_images"] = _check_generator_images(
            sample_pts, _RationalHeisenberg.mul, sig.reduce_point)
        for n in range(dims + 1):
            entry = {"dim": n, "counts_equal": True, "mode": "sampled"}
            entry["forward"] = all(
                _rational_hk_membership(
                    [heisenberg_point(p)
                     for p in _random_point_cube(sig, n, rng, pool)], n)
                for _ in range(samples))
            entry["backward"] = all(
                is_point_cube(
                    sig, [heisenberg_point_inverse(u)
                          for u in _random_hk_cube_rational(n, rng, pool)], n)
                for _ in range(samples))
            entry["pass"] = entry["forward"] and entry["backward"]
            report["dims"].append(entry)
        sample2 = [((rng.choice(pool),), (rng.choice(pool),)) for _ in range(16)]
        report["translation_isomorphism"] = _rational_translation_isomorphism(
            pool, sample2, rng)

    report["pass"] = (report["points_bijective"]
                      and report["generator_images"]
                      and report["translation_isomorphism"]
                      and all(e["pass"] for e in report["dims"]))
    return report
