"""Cube maps on abelian degree-k structures and their products.

A cube of dimension n is stored as a sequence of 2^n values indexed by the
vertex bitmask v_1 + 2 v_2 + ... + 2^(n-1) v_n (v_1 is the least significant
bit).  A corner omits the top vertex 1^n.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from .core import (BudgetExceeded, DEFAULT_BUDGET, NilspaceError, Signature,
                   Slot, enumerate_value, reduce_value)


def weight(mask: int) -> int:
    return bin(mask).count("1")


def check_dimension(values, n: int, corner: bool = False):
    want = (1 << n) - 1 if corner else (1 << n)
    if len(values) != want:
        raise NilspaceError(
            "dimension-mismatch",
            f"expected {want} vertex values for dimension {n}, got {len(values)}")


def faces(n: int, d: int):
    """All d-dimensional faces of {0,1}^n as (free coord tuple, fixed bitmask)."""
    coords = range(n)
    for free in itertools.combinations(coords, d):
        fixed = [c for c in coords if c not in free]
        for bits in itertools.product((0, 1), repeat=len(fixed)):
            base = 0
            for c, b in zip(fixed, bits):
                base |= b << c
            yield free, base


def face_vertex(free, base: int, sub: int) -> int:
    """Vertex mask of the face point with sub-vertex bitmask `sub`."""
    m = base
    for pos, c in enumerate(free):
        if (sub >> pos) & 1:
            m |= 1 << c
    return m


def _alternating_sum(values, masks):
    acc = None
    for m in masks:
        term = values[m]
        sign = -1 if weight(m) & 1 else 1
        if acc is None:
            acc = tuple(sign * x for x in term)
        else:
            acc = tuple(a + sign * x for a, x in zip(acc, term))
    return acc


def sigma(k: int, values, slots: tuple[Slot, ...]):
    """Gray-code alternating sum of a (k+1)-dimensional cube of group values."""
    check_dimension(values, k + 1)
    total = None
    for m in range(1 << (k + 1)):
        sign = -1 if weight(m) & 1 else 1
        v = values[m]
        if total is None:
            total = tuple(sign * x for x in v)
        else:
            total = tuple(a + sign * x for a, x in zip(total, v))
    return reduce_value(slots, total)


def _is_zero(slots, value) -> bool:
    return all(x == 0 for x in reduce_value(slots, value))


@lru_cache(maxsize=None)
def _signed_face_masks(n: int, d: int):
    """For each d-face: the tuple of (vertex mask, Gray-code sign) pairs."""
    out = []
    for free, base in faces(n, d):
        pairs = tuple((face_vertex(free, base, sub),
                       -1 if weight(sub) & 1 else 1)
                      for sub in range(1 << d))
        out.append(pairs)
    return tuple(out)


def is_cube_degree_k(k: int, values, n: int, slots: tuple[Slot, ...]) -> bool:
    """True iff every (k+1)-face of the map satisfies the Gray-code equation."""
    check_dimension(values, n)
    if n <= k:
        return True
    for pairs in _signed_face_masks(n, k + 1):
        total = None
        for m, sign in pairs:
            v = values[m]
            if total is None:
                total = tuple(sign * x for x in v)
            else:
                total = tuple(a + sign * x for a, x in zip(total, v))
        if not _is_zero(slots, total):
            return False
    return True


def complete_corner(k: int, corner, n: int, slots: tuple[Slot, ...]):
    """Complete a corner on a degree-k structure to a full cube.

    For n >= k+1 the completion is unique (solved from one (k+1)-face through
    the top vertex); for n <= k the missing vertex is filled with the value at
    0^n, which always yields a cube.
    """
    check_dimension(corner, n, corner=True)
    top = (1 << n) - 1
    if n <= k:
        missing = corner[0]
    else:
        sbits = (1 << (k + 1)) - 1  # face spanned by the first k+1 coords
        rest = None
        for sub in range(sbits):  # proper subsets of the face coords
            m = (top & ~sbits) | sub
            sign = -1 if weight(sub) & 1 else 1
            v = corner[m]
            if rest is None:
                rest = tuple(sign * x for x in v)
            else:
                rest = tuple(a + sign * x for a, x in zip(rest, v))
        sign = 1 if (k + 1) & 1 else -1  # (-1)^(|S|+1)
        missing = reduce_value(slots, tuple(sign * x for x in rest))
    return tuple(corner) + (tuple(missing),)


# ---------------------------------------------------------------------------
# cubes of product nilspaces (points as per-degree tuples)

def point_cube_component(values, degree_index: int):
    """Extract the degree-i component cube from a cube of points."""
    return [v[degree_index - 1] for v in values]


def is_point_cube(sig: Signature, values, n: int) -> bool:
    check_dimension(values, n)
    for i in range(1, sig.k + 1):
        comp = point_cube_component(values, i)
        if not is_cube_degree_k(i, comp, n, sig.slots(i)):
            return False
    return True


def complete_point_corner(sig: Signature, corner, n: int):
    """Componentwise corner completion in a product nilspace."""
    check_dimension(corner, n, corner=True)
    comps = []
    for i in range(1, sig.k + 1):
        comp_corner = [v[i - 1] for v in corner]
        comps.append(complete_corner(i, comp_corner, n, sig.slots(i)))
    full = []
    for m in range(1 << n):
        full.append(tuple(comp[m] for comp in comps))
    return tuple(full)


def component_cube_count(slots: tuple[Slot, ...], degree: int, n: int) -> int:
    free = sum(1 for m in range(1 << n) if weight(m) <= degree)
    size = 1
    for s in slots:
        if s.kind != "residues":
            raise NilspaceError("infinite-base", "cube set is infinite")
        size *= s.modulus
    return size ** free


def cube_count(sig: Signature, n: int) -> int:
    total = 1
    for i in range(1, sig.k + 1):
        total *= component_cube_count(sig.slots(i), i, n)
    return total


def free_vertex_masks(degree: int, n: int):
    """Vertices whose values determine a degree-`degree` cube, in solve order."""
    masks = sorted(range(1 << n), key=lambda m: (weight(m), m))
    return [m for m in masks if weight(m) <= degree]


def _completion_plans(degree: int, n: int):
    """For each forced vertex, the face equation that solves its value."""
    masks = sorted(range(1 << n), key=lambda m: (weight(m), m))
    plans = []
    for m in masks:
        if weight(m) <= degree:
            continue
        bits = [c for c in range(n) if (m >> c) & 1][: degree + 1]
        sbits = 0
        for c in bits:
            sbits |= 1 << c
        terms = []
        for sub_assign in itertools.product((0, 1), repeat=degree + 1):
            sub = 0
            w = 0
            for pos, b in enumerate(sub_assign):
                if b:
                    sub |= 1 << bits[pos]
                    w += 1
            if sub == sbits:
                continue
            vertex = (m & ~sbits) | sub
            terms.append((vertex, -1 if w & 1 else 1))
        solve_sign = 1 if (degree + 1) & 1 else -1
        plans.append((m, terms, solve_sign))
    return plans


def component_cube_from_free(slots: tuple[Slot, ...], degree: int, n: int,
                             assign, plans=None):
    """Build the cube of D_degree(A) with the given free-vertex values.

    `assign` lists values for free_vertex_masks(degree, n) in order.
    """
    if plans is None:
        plans = _completion_plans(degree, n)
    cube = [None] * (1 << n)
    for m, v in zip(free_vertex_masks(degree, n), assign):
        cube[m] = tuple(v)
    for m, terms, solve_sign in plans:
        acc = None
        for vertex, sign in terms:
            v = cube[vertex]
            if acc is None:
                acc = tuple(sign * x for x in v)
            else:
                acc = tuple(a + sign * x for a, x in zip(acc, v))
        cube[m] = reduce_value(slots, tuple(solve_sign * x for x in acc))
    return tuple(cube)


def enumerate_component_cubes(slots: tuple[Slot, ...], degree: int, n: int,
                              budget: int = DEFAULT_BUDGET):
    """All dimension-n cubes of D_degree(A) for finite A.

    Values at vertices of weight <= degree are free; the rest are forced by
    successive Gray-code completion in increasing weight order.
    """
    if component_cube_count(slots, degree, n) > budget:
        raise BudgetExceeded(
            f"component cube count exceeds budget {budget}")
    free_masks = free_vertex_masks(degree, n)
    plans = _completion_plans(degree, n)
    values = list(enumerate_value(slots))
    out = []
    for assign in itertools.product(values, repeat=len(free_masks)):
        out.append(component_cube_from_free(slots, degree, n, assign, plans))
    return out


def point_cube_from_free(sig: Signature, n: int, assigns):
    """Build a product-nilspace cube from per-degree free-vertex values."""
    comps = [component_cube_from_free(sig.slots(i), i, n, assigns[i - 1])
             for i in range(1, sig.k + 1)]
    return tuple(tuple(comp[m] for comp in comps) for m in range(1 << n))


def enumerate_cubes(sig: Signature, n: int, budget: int = DEFAULT_BUDGET):
    """All dimension-n cubes of a finite product nilspace."""
    if cube_count(sig, n) > budget:
        raise BudgetExceeded(f"cube count {cube_count(sig, n)} exceeds budget {budget}")
    per_degree = [enumerate_component_cubes(sig.slots(i), i, n, budget)
                  for i in range(1, sig.k + 1)]
    out = []
    for combo in itertools.product(*per_degree):
        out.append(tuple(tuple(comp[m] for comp in combo) for m in range(1 << n)))
    return out


def enumerate_cubes_bruteforce(sig: Signature, n: int,
                               budget: int = DEFAULT_BUDGET):
    """Oracle: filter all maps {0,1}^n -> points by the membership predicate."""
    pts = sig.points()
    total = len(pts) ** (1 << n)
    if total > budget:
        raise BudgetExceeded(f"{total} candidate maps exceed budget {budget}")
    return [cand for cand in itertools.product(pts, repeat=1 << n)
            if is_point_cube(sig, cand, n)]
