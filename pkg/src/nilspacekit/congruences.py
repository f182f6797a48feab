"""Fiber-transitive filtrations, groupable congruences and quotient nilspaces.

Finite bases are handled exhaustively: generator groups are saturated by
breadth-first closure over point permutations and the fiber-transitivity
condition is checked on every orbit pair.  Free (infinite) bases are handled
in bounded form: the group is saturated up to a word-length cap and points are
sampled from an integer box; failures found this way are genuine witnesses.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .core import (BudgetExceeded, DEFAULT_BUDGET, INT, RAT, RES,
                   NilspaceError, Signature, Slot, sub_value)
from .cubes import (enumerate_cubes, free_vertex_masks, is_point_cube,
                    point_cube_from_free, weight)
from .morphisms import PolyMorphism, TableMorphism
from .translations import (Translation, act, act_table, compose,
                           enumerate_translation_group, identity_translation,
                           invert)

SATURATION_CAP = 10**5
DEFAULT_WORD_CAP = 4


@dataclass(frozen=True)
class FiberTransitiveCandidate:
    """A base nilspace with generating translations and a declared filtration.

    `filtration` maps a degree i to the indices of the generators of H_i; when
    None, the default filtration H_i = H intersect tran_i is used.
    `divisible_degrees` marks degrees where H additionally contains every
    constant vertical shift (used for dense shift groups on rational slots).
    """

    base: Signature
    generators: tuple[Translation, ...]
    filtration: tuple[tuple[int, tuple[int, ...]], ...] | None = None
    divisible_degrees: frozenset = field(default_factory=frozenset)

    def declared_level(self, i: int):
        if self.filtration is None:
            return None
        for lvl, idxs in self.filtration:
            if lvl == i:
                return tuple(self.generators[j] for j in idxs)
        return ()


# ---------------------------------------------------------------------------
# saturation

def compose_tables(t1, t2):
    return tuple(t1[i] for i in t2)


def invert_table(t):
    out = [0] * len(t)
    for i, j in enumerate(t):
        out[j] = i
    return tuple(out)


def saturate_tables(tables, cap: int = SATURATION_CAP):
    """Breadth-first closure of point permutations under composition/inverse."""
    ident = tuple(range(len(tables[0]))) if tables else ()
    seen = {ident}
    gens = list(dict.fromkeys(list(tables) + [invert_table(t) for t in tables]))
    frontier = [ident]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = compose_tables(g, a)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
                    if len(seen) > cap:
                        raise BudgetExceeded(
                            f"saturation exceeded cap {cap} elements")
        frontier = nxt
    return seen


def saturate_translations(sig: Signature, generators,
                          word_cap: int = DEFAULT_WORD_CAP):
    """All products of at most word_cap generators/inverses, in canonical form."""
    ident = identity_translation(sig, 1)
    if not generators:
        return [ident]
    gens = list(generators) + [invert(g) for g in generators]
    seen = {ident}
    ordered = [ident]
    frontier = [ident]
    for _ in range(word_cap):
        nxt = []
        for a in frontier:
            for g in gens:
                b = compose(g, a)
                if b not in seen:
                    seen.add(b)
                    ordered.append(b)
                    nxt.append(b)
        frontier = nxt
    return ordered


# ---------------------------------------------------------------------------
# heights and constants of translations in canonical form

def _component_is_zero(T) -> bool:
    if isinstance(T, PolyMorphism):
        return not T.coeffs
    return all(not any(v) for v in T.table)


def _component_max_degree(T) -> int:
    """Max filtered degree over nonzero coefficients (0 for a constant)."""
    if isinstance(T, PolyMorphism):
        return max((idx.filtered_degree() for idx, _ in T.coeffs), default=0)
    if T.is_constant:
        return 0
    return T.target_degree  # tables carry no finer certificate


def translation_height(t: Translation) -> int:
    """Largest s with t in tran_s, from the canonical component form."""
    sig = t.space
    h = sig.k
    for i in range(t.height, sig.k + 1):
        T = t.component(i)
        if T is None or _component_is_zero(T):
            continue
        h = min(h, i - _component_max_degree(T))
    return max(h, 1)


def lowest_component(t: Translation):
    """(degree, morphism) of the lowest nonzero component, or None for identity."""
    for i in range(t.height, t.space.k + 1):
        T = t.component(i)
        if T is not None and not _component_is_zero(T):
            return i, T
    return None


def constant_of(t: Translation, i: int):
    """The degree-i displacement of t when t lies in tran_i (a constant)."""
    sig = t.space
    zero = sig.zero_point()
    moved = act(t, zero)
    return sub_value(sig.slots(i), moved[i - 1], zero[i - 1])


# ---------------------------------------------------------------------------
# finite-base machinery

def _finite_context(c: FiberTransitiveCandidate, budget: int = DEFAULT_BUDGET):
    sig = c.base
    pts = sig.points()
    gen_tables = [act_table(sig, g) for g in c.generators]
    H = saturate_tables(gen_tables) if gen_tables else {tuple(range(len(pts)))}
    tran_sets = {}
    for s in range(1, sig.k + 1):
        tran_sets[s] = {act_table(sig, a)
                        for a in enumerate_translation_group(sig, s, budget)}
    levels = {1: H}
    for i in range(2, sig.k + 1):
        declared = c.declared_level(i)
        if declared is None:
            levels[i] = H & tran_sets[i]
        else:
            tabs = [act_table(sig, g) for g in declared]
            levels[i] = saturate_tables(tabs) if tabs else {tuple(range(len(pts)))}
    declared1 = c.declared_level(1)
    if declared1 is not None:
        tabs = [act_table(sig, g) for g in declared1]
        levels[1] = saturate_tables(tabs) if tabs else {tuple(range(len(pts)))}
    return pts, H, levels, tran_sets


def _orbits(pts, H):
    orbit_of = {}
    for i in range(len(pts)):
        if i in orbit_of:
            continue
        orb = {h[i] for h in H}
        rep = min(orb)
        for j in orb:
            orbit_of[j] = rep
    return orbit_of


def check_fiber_transitive(c: FiberTransitiveCandidate,
                           budget: int = DEFAULT_BUDGET,
                           word_cap: int = DEFAULT_WORD_CAP,
                           box_side: int = 3):
    """Check Eq. (fiber transitivity): orbit-equivalence plus agreement in the
    i-factor must be witnessed inside H_{i+1}.

    Returns (True, None) or (False, (x, y, i)) with the lexicographically first
    witness.  Finite bases are exhaustive; free bases are checked on a bounded
    saturation and sample box (failures are sound witnesses).
    """
    if c.base.is_finite:
        return _check_ft_finite(c, budget)
    if c.base.is_free:
        return _check_ft_free(c, word_cap, box_side)
    raise NilspaceError("unsupported-instance",
                        "base must be finite or a free signature")


def _check_ft_finite(c, budget):
    sig = c.base
    pts, H, levels, _ = _finite_context(c, budget)
    orbit_of = _orbits(pts, H)
    k = sig.k
    for xi, x in enumerate(pts):
        for yi, y in enumerate(pts):
            if orbit_of[xi] != orbit_of[yi] or xi == yi:
                continue
            # report the deepest factor in which the pair still agrees
            for i in range(k - 1, 0, -1):
                if x[:i] != y[:i]:
                    continue
                if not any(h[xi] == yi for h in levels[i + 1]):
                    return False, (x, y, i)
                break
    return True, None


def _sample_box_points(sig: Signature, side: int):
    addresses = sig.slot_addresses()
    pts = []
    for vals in itertools.product(range(side), repeat=len(addresses)):
        p = [list() for _ in range(sig.k)]
        for (i, _j), v in zip(addresses, vals):
            p[i - 1].append(v)
        pts.append(sig.reduce_point(tuple(tuple(comp) for comp in p)))
    return pts


def _differ_only_in_divisible(sig, x, y, i, divisible):
    for d in range(1, sig.k + 1):
        if x[d - 1] != y[d - 1] and not (d > i and d in divisible):
            return False
    return True


def _check_ft_free(c, word_cap, box_side):
    sig = c.base
    elements = saturate_translations(c.base, c.generators, word_cap)
    heights = [translation_height(t) for t in elements]
    samples = sorted(_sample_box_points(sig, box_side))
    k = sig.k
    for x in samples:
        for g in elements:
            y = act(g, x)
            if x == y:
                continue
            # report the deepest factor in which the pair still agrees
            for i in range(k - 1, 0, -1):
                if x[:i] != y[:i]:
                    continue
                if _differ_only_in_divisible(sig, x, y, i, c.divisible_degrees):
                    break
                found = False
                for h, hh in zip(elements, heights):
                    if hh >= i + 1 and act(h, x) == y:
                        found = True
                        break
                if not found:
                    return False, (x, y, i)
                break
    return True, None


def is_free_fiber_transitive(c: FiberTransitiveCandidate,
                             budget: int = DEFAULT_BUDGET,
                             word_cap: int = DEFAULT_WORD_CAP):
    """Lowest-nonzero-component-constant criterion for a free action.

    On finite bases the criterion is cross-checked against direct freeness of
    the saturated action (no non-identity element has a fixed point).
    """
    elements = saturate_translations(c.base, c.generators, word_cap)
    for t in sorted(elements, key=repr):
        low = lowest_component(t)
        if low is None:
            continue
        _i, T = low
        if not T.is_constant:
            return False
    if c.base.is_finite:
        pts = c.base.points()
        tabs = saturate_tables([act_table(c.base, g) for g in c.generators]) \
            if c.generators else set()
        ident = tuple(range(len(pts)))
        for t in tabs:
            if t != ident and any(t[i] == i for i in range(len(pts))):
                return False
    return True


# ---------------------------------------------------------------------------
# lattices with carried group elements (free-base reduction)

@dataclass
class DegreeLattice:
    """Echelon basis of the degree-i constants, each carried by a group element."""

    degree: int
    rows: list  # list of (vector list, Translation)
    pivots: list  # column index per row

    @property
    def full_rank(self):
        return len(self.pivots) == len(set(self.pivots))


def _power(t: Translation, n: int) -> Translation:
    if n < 0:
        return _power(invert(t), -n)
    result = identity_translation(t.space, t.space.k)
    base = t
    while n:
        if n & 1:
            result = compose(result, base)
        base = compose(base, base) if n > 1 else base
        n >>= 1
    return result


def _echelon_with_elements(vec_elt_pairs, ncols):
    """Integer/rational echelon form; row operations compose the elements."""
    rows = [(list(v), e) for v, e in vec_elt_pairs
            if any(x != 0 for x in v)]
    basis = []
    pivots = []
    col = 0
    while col < ncols and rows:
        live = [r for r in rows if r[0][col] != 0]
        rest = [r for r in rows if r[0][col] == 0]
        while len(live) > 1:
            live.sort(key=lambda r: abs(r[0][col]))
            small, big = live[0], live[1]
            q = big[0][col] // small[0][col] if small[0][col] != 0 else 0
            if isinstance(small[0][col], Fraction) or isinstance(big[0][col], Fraction):
                q = Fraction(big[0][col], small[0][col]).__floor__()
            newv = [b - q * s for b, s in zip(big[0], small[0])]
            newe = compose(big[1], _power(small[1], -q))
            live = [small] + ([([x for x in newv], newe)]
                              if any(x != 0 for x in newv) else []) + live[2:]
        if live:
            v, e = live[0]
            if v[col] < 0:
                v = [-x for x in v]
                e = invert(e)
            basis.append((v, e))
            pivots.append(col)
            rows = []
            for rv, re in rest:
                rows.append((rv, re))
        col += 1
    return basis, pivots


def build_degree_lattices(c: FiberTransitiveCandidate,
                          word_cap: int = DEFAULT_WORD_CAP):
    """Per-degree lattices eta_i(H_i) with carrying elements, from saturation."""
    sig = c.base
    elements = saturate_translations(c.base, c.generators, word_cap)
    by_degree = {i: [] for i in range(1, sig.k + 1)}
    for t in elements:
        low = lowest_component(t)
        if low is None:
            continue
        i, T = low
        if not T.is_constant:
            raise NilspaceError("not-free-fiber-transitive",
                                "lowest component is not constant", witness=t)
        by_degree[i].append((list(constant_of(t, i)), t))
    lattices = {}
    for i in range(1, sig.k + 1):
        ncols = len(sig.slots(i))
        basis, pivots = _echelon_with_elements(by_degree[i], ncols)
        lattices[i] = DegreeLattice(i, basis, pivots)
    return lattices


def canonical_rep(c: FiberTransitiveCandidate, p, lattices=None,
                  word_cap: int = DEFAULT_WORD_CAP):
    """Reduce p into the fundamental box, degree by degree."""
    sig = c.base
    if lattices is None:
        lattices = build_degree_lattices(c, word_cap)
    p = sig.reduce_point(p)
    for i in range(1, sig.k + 1):
        if i in c.divisible_degrees:
            # the group contains every vertical shift at this degree
            shift = _vertical_shift(sig, i, tuple(-x for x in p[i - 1]))
            p = act(shift, p)
            continue
        lat = lattices[i]
        for (v, elt), col in zip(lat.rows, lat.pivots):
            cur = p[i - 1][col]
            q = cur // v[col] if not isinstance(cur, Fraction) \
                else Fraction(cur, v[col]).__floor__()
            if q:
                p = act(_power(elt, -q), p)
    return p


def _vertical_shift(sig: Signature, degree: int, const) -> Translation:
    from .morphisms import constant_morphism
    comps = []
    for i in range(degree, sig.k + 1):
        val = const if i == degree else tuple(0 for _ in sig.slots(i))
        comps.append(constant_morphism(sig.truncate(i - degree), sig.slots(i),
                                       i - degree, val,
                                       prefer_table=not sig.is_free))
    return Translation(sig, degree, comps and tuple(comps) or ())


# ---------------------------------------------------------------------------
# quotients

@dataclass
class QuotientNilspace:
    base: Signature
    reps: tuple
    rep_map: dict | None  # point -> representative (finite case)
    cube_sets: dict | None  # n -> frozenset of tuples of reps (finite case)
    structure_groups: tuple  # per degree: tuple of invariant factors, or text
    candidate: FiberTransitiveCandidate | None = None
    lattices: dict | None = None

    def rep_of(self, p):
        if self.rep_map is not None:
            return self.rep_map[tuple(p)]
        return canonical_rep(self.candidate, p, self.lattices)


def _invariant_factors(relation_rows, ncols):
    """Invariant factors of Z^ncols / <rows>, via the Smith normal form."""
    from sympy import Matrix, ZZ
    from sympy.matrices.normalforms import smith_normal_form
    if ncols == 0:
        return ()
    if not relation_rows:
        return (0,) * ncols
    M = Matrix(relation_rows)
    S = smith_normal_form(M, domain=ZZ)
    diag = [abs(int(S[i, i])) for i in range(min(S.rows, S.cols))]
    rank = sum(1 for d in diag if d != 0)
    factors = [d for d in diag if d not in (0, 1)]
    factors += [0] * (ncols - rank)  # 0 stands for a free Z factor
    return tuple(factors)


def _finite_structure_groups(c, pts, levels):
    sig = c.base
    out = []
    for i in range(1, sig.k + 1):
        slots = sig.slots(i)
        ncols = len(slots)
        rows = [[0] * ncols for _ in range(ncols)]
        for j, s in enumerate(slots):
            rows[j][j] = s.modulus
        zero_idx = 0
        for h in levels[i]:
            const = sub_value(slots, pts[h[zero_idx]][i - 1], pts[zero_idx][i - 1])
            if any(const):
                rows.append([int(x) for x in const])
        out.append(_invariant_factors(rows, ncols))
    return tuple(out)


def quotient(c: FiberTransitiveCandidate, budget: int = DEFAULT_BUDGET,
             dim_cap: int | None = None,
             word_cap: int = DEFAULT_WORD_CAP) -> QuotientNilspace:
    """The orbit quotient with image cube sets and structure groups Z_i/eta_i(H_i)."""
    ok, witness = check_fiber_transitive(c, budget=budget, word_cap=word_cap)
    if not ok:
        raise NilspaceError("not-fiber-transitive",
                            f"candidate fails fiber transitivity at {witness}",
                            witness=witness)
    sig = c.base
    dims = dim_cap if dim_cap is not None else sig.k + 1
    if sig.is_finite:
        pts, H, levels, _ = _finite_context(c, budget)
        orbit_of = _orbits(pts, H)
        rep_map = {p: pts[orbit_of[i]] for i, p in enumerate(pts)}
        reps = tuple(sorted(set(rep_map.values())))
        cube_sets = {}
        for n in range(0, dims + 1):
            cube_sets[n] = frozenset(
                tuple(rep_map[p] for p in q)
                for q in enumerate_cubes(sig, n, budget))
        sgroups = _finite_structure_groups(c, pts, levels)
        return QuotientNilspace(sig, reps, rep_map, cube_sets, sgroups, c)
    if not sig.is_free:
        raise NilspaceError("unsupported-instance", "base must be finite or free")
    if not is_free_fiber_transitive(c, word_cap=word_cap):
        raise NilspaceError("unsupported-instance",
                            "infinite-base quotients need a free action")
    lattices = build_degree_lattices(c, word_cap)
    reps = []
    ranges = []
    for i in range(1, sig.k + 1):
        slots = sig.slots(i)
        if i in c.divisible_degrees:
            ranges.append([tuple(Fraction(0) for _ in slots)])
            continue
        lat = lattices[i]
        if len(lat.pivots) != len(slots):
            raise NilspaceError(
                "unsupported-instance",
                f"degree-{i} lattice has infinite index; quotient not materializable")
        per_col = []
        for (v, _e), col in zip(lat.rows, lat.pivots):
            step = v[col]
            if isinstance(step, Fraction) or step <= 0:
                if isinstance(step, Fraction):
                    raise NilspaceError("unsupported-instance",
                                        "rational lattice needs divisible flag "
                                        "or integer pivots")
            per_col.append(range(int(step)))
        ranges.append([tuple(vals) for vals in itertools.product(*per_col)])
    seen = []
    for combo in itertools.product(*ranges):
        p = sig.reduce_point(tuple(combo))
        r = canonical_rep(c, p, lattices)
        if r not in seen:
            seen.append(r)
    sgroups = []
    for i in range(1, sig.k + 1):
        slots = sig.slots(i)
        if i in c.divisible_degrees:
            sgroups.append(("divisible",))
            continue
        rows = [[int(x) for x in v] for v, _e in lattices[i].rows]
        sgroups.append(_invariant_factors(rows, len(slots)))
    return QuotientNilspace(sig, tuple(sorted(seen)), None, None,
                            tuple(sgroups), c, lattices)


def quotient_isomorphic_to_residues(quot: QuotientNilspace, target: Signature,
                                    dims: int | None = None,
                                    samples: int = 50, seed: int = 0,
                                    budget: int = DEFAULT_BUDGET) -> bool:
    """Does a free-base quotient match a finite residue signature?

    The comparison map reduces representative coordinates modulo the target
    moduli.  It must be a bijection on representatives; every target cube
    must be the reduction of a lifted-and-completed integer cube; and a
    seeded sample of integer cubes must reduce to target cubes.
    """
    import random
    sig = quot.base
    if not sig.is_free or not target.is_finite or target.k != sig.k:
        return False
    if dims is None:
        dims = sig.k + 1

    def red(p):
        return target.reduce_point(p)

    images = {red(r) for r in quot.reps}
    if len(images) != len(quot.reps) or images != set(target.points()):
        return False
    for n in range(dims + 1):
        for q in enumerate_cubes(target, n, budget):
            assigns = [[tuple(int(x) for x in q[m][i - 1])
                        for m in free_vertex_masks(i, n)]
                       for i in range(1, sig.k + 1)]
            lifted = point_cube_from_free(sig, n, assigns)
            if tuple(red(quot.rep_of(p)) for p in lifted) != tuple(q):
                return False
    rng = random.Random(seed)
    for n in range(dims + 1):
        for _ in range(samples):
            assigns = [[tuple(rng.randint(-3, 3) for _ in sig.slots(i))
                        for _ in free_vertex_masks(i, n)]
                       for i in range(1, sig.k + 1)]
            q = point_cube_from_free(sig, n, assigns)
            if not is_point_cube(target, [red(quot.rep_of(p)) for p in q], n):
                return False
    return True


# ---------------------------------------------------------------------------
# cubespaces and the nilspace axioms

@dataclass(frozen=True)
class Cubespace:
    points: tuple
    cube_sets: tuple  # cube_sets[n] = frozenset of tuples of point indices

    def set_for(self, n: int) -> frozenset:
        return self.cube_sets[n]

    @property
    def max_dim(self) -> int:
        return len(self.cube_sets) - 1


def cubespace_from_signature(sig: Signature, dims: int,
                             budget: int = DEFAULT_BUDGET) -> Cubespace:
    pts = sig.points()
    index = {p: i for i, p in enumerate(pts)}
    sets = []
    for n in range(dims + 1):
        sets.append(frozenset(tuple(index[p] for p in q)
                              for q in enumerate_cubes(sig, n, budget)))
    return Cubespace(tuple(pts), tuple(sets))


def image_cubespace(sig: Signature, class_of, dims: int,
                    budget: int = DEFAULT_BUDGET) -> Cubespace:
    """Push the cube sets of a finite nilspace through a point classifier."""
    pts = sig.points()
    classes = sorted({class_of(p) for p in pts})
    cindex = {cls: i for i, cls in enumerate(classes)}
    sets = []
    for n in range(dims + 1):
        sets.append(frozenset(tuple(cindex[class_of(p)] for p in q)
                              for q in enumerate_cubes(sig, n, budget)))
    return Cubespace(tuple(classes), tuple(sets))


def cubespace_from_quotient(q: QuotientNilspace) -> Cubespace:
    index = {r: i for i, r in enumerate(q.reps)}
    sets = []
    for n in sorted(q.cube_sets):
        sets.append(frozenset(tuple(index[r] for r in cube)
                              for cube in q.cube_sets[n]))
    return Cubespace(tuple(q.reps), tuple(sets))


def _discrete_cube_morphisms(m: int, n: int):
    """All maps {0,1}^m -> {0,1}^n with coordinates in {0, 1, u_j, 1-u_j}."""
    choices = [("const", 0), ("const", 1)]
    for j in range(m):
        choices.append(("var", j))
        choices.append(("negvar", j))
    for combo in itertools.product(choices, repeat=n):
        table = []
        for u in range(1 << m):
            v = 0
            for pos, (kind, a) in enumerate(combo):
                if kind == "const":
                    bit = a
                elif kind == "var":
                    bit = (u >> a) & 1
                else:
                    bit = 1 - ((u >> a) & 1)
                v |= bit << pos
            table.append(v)
        yield tuple(table)


def _face_subsets(n: int):
    """Faces of {0,1}^n avoiding the top vertex, as (dim, vertex tuple) pairs."""
    out = []
    top = (1 << n) - 1
    for fixed_bits in range(1, 1 << n):
        d = n - weight(fixed_bits)
        for vals in range(1 << n):
            if vals & ~fixed_bits:
                continue
            members = [v for v in range(1 << n) if (v & fixed_bits) == vals]
            if top in members:
                continue
            free = [c for c in range(n) if not (fixed_bits >> c) & 1]
            ordered = []
            for sub in range(1 << d):
                v = vals
                for pos, cbit in enumerate(free):
                    if (sub >> pos) & 1:
                        v |= 1 << cbit
                ordered.append(v)
            out.append((d, tuple(ordered)))
    return out


def verify_nilspace_axioms(cs: Cubespace, budget_dim: int | None = None,
                           step: int | None = None):
    """Check ergodicity, composition and corner completion exhaustively.

    With `step` = k given, corners of dimension k+1 must complete uniquely
    (the gluing property of a k-step nilspace).  Returns a report dict with
    per-axiom pass flags and first witnesses.
    """
    dims = budget_dim if budget_dim is not None else cs.max_dim
    dims = min(dims, cs.max_dim)
    npts = len(cs.points)
    report = {"ergodicity": {"pass": True, "witness": None},
              "composition": {"pass": True, "witness": None},
              "corner_completion": {"pass": True, "witness": None}}
    if step is not None:
        report["unique_completion"] = {"pass": True, "witness": None}

    all_pairs = {(a, b) for a in range(npts) for b in range(npts)}
    if set(cs.set_for(1)) != all_pairs:
        missing = sorted(all_pairs - set(cs.set_for(1)))
        report["ergodicity"] = {"pass": False, "witness": missing[0]}

    for n in range(dims + 1):
        for m in range(dims + 1):
            for table in _discrete_cube_morphisms(m, n):
                for q in cs.set_for(n):
                    composed = tuple(q[table[u]] for u in range(1 << m))
                    if composed not in cs.set_for(m):
                        report["composition"] = {
                            "pass": False,
                            "witness": {"n": n, "m": m, "phi": table, "cube": q}}
                        break
                if not report["composition"]["pass"]:
                    break
            if not report["composition"]["pass"]:
                break
        if not report["composition"]["pass"]:
            break

    for n in range(1, dims + 1):
        faces = _face_subsets(n)
        top = (1 << n) - 1
        corner = [None] * top

        unique_here = step is not None and n == step + 1

        def extend(v):
            if v == top:
                completions = [z for z in range(npts)
                               if tuple(corner) + (z,) in cs.set_for(n)]
                if not completions:
                    report["corner_completion"] = {
                        "pass": False,
                        "witness": {"n": n, "corner": tuple(corner)}}
                    return False
                if (unique_here and len(completions) > 1
                        and report["unique_completion"]["pass"]):
                    report["unique_completion"] = {
                        "pass": False,
                        "witness": {"n": n, "corner": tuple(corner),
                                    "completions": completions}}
                return True
            for val in range(npts):
                corner[v] = val
                ok = True
                for d, members in faces:
                    if members[-1] != v or any(corner[u] is None for u in members):
                        continue
                    if tuple(corner[u] for u in members) not in cs.set_for(d):
                        ok = False
                        break
                if ok and not extend(v + 1):
                    corner[v] = None
                    return False
                corner[v] = None
            return True

        if not extend(0):
            break
    return report


# ---------------------------------------------------------------------------
# closure and equivalence of filtrations

def fiber_transitive_closure(c: FiberTransitiveCandidate,
                             budget: int = DEFAULT_BUDGET):
    """All translations of a finite base that preserve every H-orbit."""
    sig = c.base
    if not sig.is_finite:
        raise NilspaceError("unsupported-instance",
                            "closure needs a finite nilspace")
    pts, H, _levels, _ = _finite_context(c, budget)
    orbit_of = _orbits(pts, H)
    out = []
    for alpha in enumerate_translation_group(sig, 1, budget):
        table = act_table(sig, alpha)
        if all(orbit_of[table[i]] == orbit_of[i] for i in range(len(pts))):
            out.append(alpha)
    return out


def _level_sets(c: FiberTransitiveCandidate, budget: int):
    _pts, _H, levels, _ = _finite_context(c, budget)
    return levels


def filtrations_equivalent(c1: FiberTransitiveCandidate,
                           c2: FiberTransitiveCandidate,
                           budget: int = DEFAULT_BUDGET,
                           dim_cap: int | None = None) -> bool:
    """Orbit-of-cubes comparison: the two cube groups reproduce the same
    composed cubes d*q, for every base cube q, up to the dimension budget."""
    sig = c1.base
    if sig != c2.base:
        raise NilspaceError("space-mismatch", "candidates on different bases")
    if not sig.is_finite:
        raise NilspaceError("unsupported-instance", "finite base required")
    dims = dim_cap if dim_cap is not None else sig.k + 1
    lv1 = _level_sets(c1, budget)
    lv2 = _level_sets(c2, budget)
    pts = sig.points()
    index = {p: i for i, p in enumerate(pts)}
    for n in range(dims + 1):
        gens1 = _cube_group_generators(sig, lv1, n)
        gens2 = _cube_group_generators(sig, lv2, n)
        visited = set()
        for q in enumerate_cubes(sig, n, budget):
            qi = tuple(index[p] for p in q)
            if qi in visited:
                continue
            o1 = _cube_orbit(qi, gens1)
            o2 = _cube_orbit(qi, gens2)
            if o1 != o2:
                return False
            visited |= o1
    return True


def _cube_group_generators(sig: Signature, levels, n: int):
    """Face-map generators of the Host-Kra cube group of (H, H_bullet)."""
    gens = []
    for fixed_bits in range(1 << n):
        d = weight(fixed_bits)
        level = levels.get(max(d, 1)) if d >= 1 else levels.get(1)
        if d > sig.k:
            continue
        if d == 0:
            level = levels[1]
        if not level:
            continue
        for vals in range(1 << n):
            if vals & ~fixed_bits:
                continue
            members = frozenset(v for v in range(1 << n)
                                if (v & fixed_bits) == vals)
            for h in level:
                gens.append((members, h))
    return gens


def _cube_orbit(q, gens):
    seen = {q}
    frontier = [q]
    while frontier:
        nxt = []
        for cur in frontier:
            for members, h in gens:
                new = tuple(h[v] if i in members else v
                            for i, v in enumerate(cur))
                if new not in seen:
                    seen.add(new)
                    nxt.append(new)
        frontier = nxt
    return seen


# ---------------------------------------------------------------------------
# continuous closure

def continuous_closure_embed(c: FiberTransitiveCandidate,
                             word_cap: int = DEFAULT_WORD_CAP):
    """Embed the quotient of a free base into the quotient of its rational closure.

    Returns (closure signature, lifted generators, report).  The report states
    whether the finitely many orbit representatives of F/H stay pairwise
    distinct as iota(H)-orbits in F*.
    """
    sig = c.base
    if not sig.is_free:
        raise NilspaceError("unsupported-instance", "base must be free")
    star = sig.continuous_closure()
    lifted = tuple(_lift_generator(star, g) for g in c.generators)
    cstar = FiberTransitiveCandidate(star, lifted, c.filtration,
                                     c.divisible_degrees)
    q = quotient(c, word_cap=word_cap)
    lattices = build_degree_lattices(cstar, word_cap)
    images = []
    for r in q.reps:
        pstar = star.reduce_point(r)
        images.append(canonical_rep(cstar, pstar, lattices))
    injective = len(set(images)) == len(images)
    report = {"injective": injective,
              "representatives": q.reps,
              "images": tuple(images)}
    return star, lifted, report


def _lift_generator(star: Signature, g: Translation) -> Translation:
    comps = []
    for i in range(g.height, g.space.k + 1):
        T = g.component(i)
        if not isinstance(T, PolyMorphism):
            raise NilspaceError("unsupported-instance",
                                "free-base generators must be polynomial")
        new_slots = star.slots(i)
        coeffs = {idx: tuple(Fraction(x) for x in val) for idx, val in T.coeffs}
        comps.append(PolyMorphism.make(star.truncate(i - g.height), new_slots,
                                       i - g.height, coeffs))
    return Translation(star, g.height, tuple(comps))
