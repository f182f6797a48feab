"""Morphisms between free nilspaces and into degree-t abelian targets.

A PolyMorphism stores coefficients in the binomial monomial basis, keyed by
multi-indices over the source signature's slots.  A TableMorphism stores an
explicit value table over a finite source.  Both evaluate exactly.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from .core import (BudgetExceeded, DEFAULT_BUDGET, INT, RAT, RES,
                   NilspaceError, Signature, Slot, binom, reduce_value)
from .cubes import enumerate_cubes, is_cube_degree_k, weight


@dataclass(frozen=True)
class MultiIndex:
    """Exponents keyed by slot address (degree i, slot j), both 1-based."""

    exponents: tuple[tuple[tuple[int, int], int], ...]

    @staticmethod
    def make(mapping) -> "MultiIndex":
        items = tuple(sorted((tuple(addr), int(e)) for addr, e in
                             (mapping.items() if hasattr(mapping, "items") else mapping)
                             if e))
        for (_, _), e in items:
            if e < 0:
                raise NilspaceError("bad-index", "negative exponent")
        return MultiIndex(items)

    def get(self, i: int, j: int) -> int:
        for (a, b), e in self.exponents:
            if (a, b) == (i, j):
                return e
        return 0

    def as_dict(self) -> dict:
        return {addr: e for addr, e in self.exponents}

    @property
    def is_zero(self) -> bool:
        return not self.exponents

    def filtered_degree(self) -> int:
        return sum(i * e for (i, _), e in self.exponents)


ZERO_INDEX = MultiIndex(())


def filtered_degree(idx: MultiIndex, sig: Signature) -> int:
    """Sum of degree-weighted exponent mass; validates slot addresses."""
    for (i, j), _ in idx.exponents:
        if not (1 <= i <= sig.k) or not (1 <= j <= len(sig.slots(i))):
            raise NilspaceError("index-out-of-range", f"slot ({i},{j}) not in signature")
    return idx.filtered_degree()


def _point_scalar(p, i: int, j: int):
    return p[i - 1][j - 1]


@dataclass(frozen=True)
class PolyMorphism:
    """sum_m coeff_m * prod binom(x_{i,j}, m_{i,j}), filtered degree <= target_degree."""

    source: Signature
    target_slots: tuple[Slot, ...]
    target_degree: int
    coeffs: tuple[tuple[MultiIndex, tuple], ...]

    @staticmethod
    def make(source, target_slots, target_degree, coeffs) -> "PolyMorphism":
        items = coeffs.items() if hasattr(coeffs, "items") else coeffs
        norm = []
        for idx, val in items:
            if not isinstance(idx, MultiIndex):
                idx = MultiIndex.make(idx)
            val = reduce_value(tuple(target_slots), val)
            if any(val):
                norm.append((idx, val))
        norm.sort(key=lambda kv: (kv[0].filtered_degree(), kv[0].exponents))
        return PolyMorphism(source, tuple(target_slots), target_degree, tuple(norm))

    def coeff(self, idx: MultiIndex) -> tuple:
        for i, v in self.coeffs:
            if i == idx:
                return v
        return tuple(0 for _ in self.target_slots)

    def eval(self, p) -> tuple:
        p = self.source.reduce_point(p)
        total = [Fraction(0) if s.kind == RAT else 0 for s in self.target_slots]
        for idx, val in self.coeffs:
            factor = 1
            for (i, j), e in idx.exponents:
                factor *= binom(_point_scalar(p, i, j), e)
                if factor == 0:
                    break
            if factor == 0:
                continue
            for pos in range(len(total)):
                total[pos] += val[pos] * factor
        return reduce_value(self.target_slots, tuple(total))

    @property
    def is_constant(self) -> bool:
        return all(idx.is_zero for idx, _ in self.coeffs)


@dataclass(frozen=True)
class TableMorphism:
    """Explicit value table over a finite source signature."""

    source: Signature
    target_slots: tuple[Slot, ...]
    target_degree: int
    table: tuple[tuple, ...]  # values in the order of source.points()

    @staticmethod
    def from_callable(source, target_slots, target_degree, fn) -> "TableMorphism":
        pts = source.points()
        tab = tuple(reduce_value(tuple(target_slots), fn(p)) for p in pts)
        return TableMorphism(source, tuple(target_slots), target_degree, tab)

    def eval(self, p) -> tuple:
        p = self.source.reduce_point(p)
        return self.table[self._index(p)]

    def _index(self, p) -> int:
        idx = 0
        for i in range(1, self.source.k + 1):
            for j, s in enumerate(self.source.slots(i)):
                idx = idx * s.modulus + p[i - 1][j]
        return idx

    @property
    def is_constant(self) -> bool:
        return len(set(self.table)) <= 1


def constant_morphism(source, target_slots, target_degree, value,
                      prefer_table: bool = False):
    if prefer_table or not source.is_free:
        return TableMorphism.from_callable(source, target_slots, target_degree,
                                           lambda _p: value)
    return PolyMorphism.make(source, target_slots, target_degree,
                             {ZERO_INDEX: value})


def is_morphism(phi: PolyMorphism) -> tuple[bool, str | None]:
    """Coefficient-level membership: degree bound and discreteness constraint."""
    for idx, val in phi.coeffs:
        d = filtered_degree(idx, phi.source)
        if d > phi.target_degree:
            return False, f"index {idx.as_dict()} has filtered degree {d} > {phi.target_degree}"
        touches_continuous = any(phi.source.slot(i, j).kind == RAT
                                 for (i, j), e in idx.exponents if e)
        if touches_continuous:
            for pos, s in enumerate(phi.target_slots):
                if s.is_discrete and val[pos] != 0:
                    return False, ("discrete target slot depends on a "
                                   f"continuous coordinate at index {idx.as_dict()}")
    return True, None


def _iter_indices(sig: Signature, t: int):
    """All multi-indices of filtered degree <= t over the signature's slots."""
    addresses = sig.slot_addresses()

    def rec(pos, remaining, acc):
        if pos == len(addresses):
            yield MultiIndex.make(acc)
            return
        i, j = addresses[pos]
        for e in range(remaining // i + 1):
            nxt = dict(acc)
            if e:
                nxt[(i, j)] = e
            yield from rec(pos + 1, remaining - i * e, nxt)

    yield from rec(0, t, {})


def _int_box_points(sig: Signature, side: int):
    """Integer points of the source with every coordinate in [0, side)."""
    addresses = sig.slot_addresses()
    for vals in itertools.product(range(side), repeat=len(addresses)):
        p = [list() for _ in range(sig.k)]
        for (i, _j), v in zip(addresses, vals):
            p[i - 1].append(v)
        yield sig.reduce_point(tuple(tuple(c) for c in p))


def taylor_decompose(f, sig: Signature, target_slots, t: int,
                     box_side: int | None = None) -> PolyMorphism:
    """Recover binomial-basis coefficients by discrete derivatives at 0.

    `f` is a callable on points with integer coordinates.  The coefficient at
    a multi-index m is the iterated finite difference of f at 0; the result is
    verified to reproduce f on the box [0, box_side)^slots.
    """
    target_slots = tuple(target_slots)
    addresses = sig.slot_addresses()
    side = box_side if box_side is not None else t + 2

    def point_from(vals):
        p = [list() for _ in range(sig.k)]
        for (i, _j), v in zip(addresses, vals):
            p[i - 1].append(v)
        return sig.reduce_point(tuple(tuple(c) for c in p))

    coeffs = {}
    for idx in _iter_indices(sig, t):
        m = [idx.get(i, j) for (i, j) in addresses]
        acc = None
        for w in itertools.product(*[range(e + 1) for e in m]):
            sign = (-1) ** (sum(m) - sum(w))
            mult = 1
            for me, we in zip(m, w):
                mult *= binom(me, we)
            fv = tuple(f(point_from(w)))
            term = tuple(sign * mult * x for x in fv)
            acc = term if acc is None else tuple(a + b for a, b in zip(acc, term))
        val = reduce_value(target_slots, acc)
        if any(val):
            coeffs[idx] = val
    phi = PolyMorphism.make(sig, target_slots, t, coeffs)
    for p in _int_box_points(sig, side):
        want = reduce_value(target_slots, tuple(f(p)))
        got = phi.eval(p)
        if want != got:
            raise NilspaceError(
                "non-polynomial",
                f"residual mismatch at {p}: table {want} vs decomposition {got}",
                witness=p)
    return phi


@dataclass(frozen=True)
class TorusMorphism:
    """A rational-coefficient PolyMorphism evaluated modulo 1."""

    inner: PolyMorphism

    def eval(self, p) -> tuple:
        return tuple(Fraction(x) % 1 for x in self.inner.eval(p))

    @property
    def source(self):
        return self.inner.source

    @property
    def target_degree(self):
        return self.inner.target_degree


def lift_morphism(phi, box_side: int | None = None):
    """Lift a morphism into Residues^r (to Z^r) or a TorusMorphism (to Q^r).

    Coefficients lift to least non-negative representatives; the lift is
    verified against the input on a sample box.
    """
    if isinstance(phi, TorusMorphism):
        inner = phi.inner
        lifted_slots = tuple(Slot(RAT) for _ in inner.target_slots)
        coeffs = {idx: tuple(Fraction(x) % 1 for x in val)
                  for idx, val in inner.coeffs}
        psi = PolyMorphism.make(inner.source, lifted_slots, inner.target_degree, coeffs)

        def reduce_back(v):
            return tuple(Fraction(x) % 1 for x in v)
        original = phi
    elif isinstance(phi, PolyMorphism) and all(s.kind == RES for s in phi.target_slots):
        moduli = tuple(s.modulus for s in phi.target_slots)
        lifted_slots = tuple(Slot(INT) for _ in phi.target_slots)
        coeffs = {idx: tuple(int(x) % m for x, m in zip(val, moduli))
                  for idx, val in phi.coeffs}
        psi = PolyMorphism.make(phi.source, lifted_slots, phi.target_degree, coeffs)

        def reduce_back(v):
            return tuple(int(x) % m for x, m in zip(v, moduli))
        original = phi
    else:
        raise NilspaceError("bad-lift", "target must be residues or a torus morphism")
    side = box_side if box_side is not None else 2 * max(psi.target_degree, 1) + 2
    for p in _int_box_points(psi.source, side):
        if reduce_back(psi.eval(p)) != tuple(original.eval(p)):
            raise NilspaceError("lift-mismatch", f"lift disagrees at {p}", witness=p)
    return psi


def _box_component_cubes(slots, degree, n, box_values):
    """Dimension-n cubes of D_degree over an infinite group, vertex values in a box."""
    masks = sorted(range(1 << n), key=lambda m: (weight(m), m))
    free_masks = [m for m in masks if weight(m) <= degree]
    combos = itertools.product(itertools.product(*box_values), repeat=len(free_masks))
    from .cubes import complete_corner  # completion plan reuse
    out = []
    allowed = [set(v) for v in box_values]
    for assign in combos:
        cube = [None] * (1 << n)
        for m, v in zip(free_masks, assign):
            cube[m] = v
        ok = True
        for m in masks:
            if cube[m] is not None:
                continue
            bits = [c for c in range(n) if (m >> c) & 1][: degree + 1]
            sbits = 0
            for c in bits:
                sbits |= 1 << c
            acc = None
            for sub in range(1 << (degree + 1)):
                vm = (m & ~sbits)
                w = 0
                for pos in range(degree + 1):
                    if (sub >> pos) & 1:
                        vm |= 1 << bits[pos]
                        w += 1
                if vm == m:
                    continue
                sign = -1 if w & 1 else 1
                v = cube[vm]
                acc = (tuple(sign * x for x in v) if acc is None
                       else tuple(a + sign * x for a, x in zip(acc, v)))
            sign = 1 if (degree + 1) & 1 else -1
            val = tuple(sign * x for x in acc)
            if not all(x in av for x, av in zip(val, allowed)):
                ok = False
                break
            cube[m] = val
        if ok:
            out.append(tuple(cube))
    _ = complete_corner
    return out


def is_morphism_bruteforce(f, sig: Signature, target_slots, t: int,
                           box_side: int = None, budget: int = DEFAULT_BUDGET):
    """Oracle: the image of every enumerated cube (dims <= t+1) is a degree-t cube.

    Returns (True, None) or (False, witness_cube).  For free sources, cubes are
    enumerated with vertex coordinates restricted to [0, box_side).
    """
    target_slots = tuple(target_slots)
    side = box_side if box_side is not None else t + 2
    checked = 0
    for n in range(1, t + 2):
        if sig.is_finite:
            cubes = enumerate_cubes(sig, n, budget)
        else:
            per_degree = []
            for i in range(1, sig.k + 1):
                box_values = [range(side) for _ in sig.slots(i)]
                per_degree.append(_box_component_cubes(sig.slots(i), i, n, box_values))
            cubes = [tuple(tuple(comp[m] for comp in combo) for m in range(1 << n))
                     for combo in itertools.product(*per_degree)]
        for q in cubes:
            checked += 1
            if checked > budget:
                raise BudgetExceeded(f"morphism oracle exceeded budget {budget}")
            image = [tuple(f(p)) for p in q]
            if not is_cube_degree_k(t, image, n, target_slots):
                return False, q
    return True, None


def enumerate_hom_tables(source: Signature, target_slots, t: int,
                         budget: int = DEFAULT_BUDGET):
    """All morphisms from a finite product nilspace into D_t(A), as tables.

    Candidates are filtered by the cube-image criterion on dimensions <= t+1;
    a degree-0 target admits exactly the constant maps.
    """
    target_slots = tuple(target_slots)
    pts = source.points()
    values = list(itertools.product(*[range(s.modulus) for s in target_slots]))
    if t == 0:
        return [TableMorphism(source, target_slots, 0, tuple(v for _ in pts))
                for v in values]
    total = len(values) ** len(pts)
    if total > budget:
        raise BudgetExceeded(f"{total} candidate tables exceed budget {budget}")
    cube_lists = [[(q, [pts.index(p) for p in q])
                   for q in enumerate_cubes(source, n, budget)]
                  for n in range(1, t + 2)]
    out = []
    for tab in itertools.product(values, repeat=len(pts)):
        ok = True
        for n, lst in enumerate(cube_lists, start=1):
            for _q, idxs in lst:
                image = [tab[i] for i in idxs]
                if not is_cube_degree_k(t, image, n, target_slots):
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(TableMorphism(source, target_slots, t, tab))
    return out
