"""Finite filtered groups and their Host-Kra cube structure.

Elements are opaque hashable values with the group law supplied by callables.
A degree-k filtration G = G_0 = G_1 >= G_2 >= ... >= G_k >= {e} is stored as
explicit element sets, validated for the commutator condition
[G_i, G_j] <= G_{i+j} at construction.

Host-Kra cube membership uses the normal form: every cube factors uniquely as
q(v) = prod_{w <= v} g_w with g_w in G_{|w|}, the product taken over subsets w
of v in increasing (weight, bitmask) order.  Peeling solves the g_w vertex by
vertex and membership is the filtration constraint on each g_w.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable

from .core import BudgetExceeded, DEFAULT_BUDGET, NilspaceError
from .cubes import check_dimension, weight


def closure(elements, mul, inv, cap: int = 10**5):
    """Subgroup generated by `elements` under mul/inv (breadth-first)."""
    gens = list(elements)
    seen = set(gens)
    if not gens:
        raise NilspaceError("bad-subgroup", "need at least one generator")
    frontier = list(gens)
    gens = gens + [inv(g) for g in gens]
    while frontier:
        nxt = []
        for a in frontier:
            for g in gens:
                b = mul(a, g)
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
                    if len(seen) > cap:
                        raise BudgetExceeded(f"subgroup closure exceeded cap {cap}")
        frontier = nxt
    return seen


@dataclass(frozen=True)
class FilteredGroupSpec:
    """A finite group with a degree-k filtration."""

    elements: tuple
    mul: Callable
    inv: Callable
    identity: object
    filtration: tuple[frozenset, ...]  # index i holds G_i, i = 0..k
    name: str = "group"
    validate: bool = field(default=True)

    def __post_init__(self):
        if self.validate:
            self._check()

    @property
    def k(self) -> int:
        return len(self.filtration) - 1

    def term(self, i: int) -> frozenset:
        """G_i, with G_i = {e} for i beyond the declared degree."""
        if i <= 0:
            return self.filtration[0]
        if i >= len(self.filtration):
            return frozenset([self.identity])
        return self.filtration[i]

    def _check(self):
        full = frozenset(self.elements)
        if self.filtration[0] != full or self.term(1) != full:
            raise NilspaceError("bad-filtration", "G_0 = G_1 = G is required")
        for i in range(len(self.filtration) - 1):
            if not self.filtration[i + 1] <= self.filtration[i]:
                raise NilspaceError("bad-filtration", f"G_{i+1} not inside G_{i}")
        for sub in self.filtration:
            for a in sub:
                if self.inv(a) not in sub:
                    raise NilspaceError("bad-filtration", "term not inverse-closed")
                for b in sub:
                    if self.mul(a, b) not in sub:
                        raise NilspaceError("bad-filtration", "term not product-closed")
        kk = self.k
        for i in range(1, kk + 1):
            for j in range(1, kk + 1):
                target = self.term(i + j)
                for a in self.filtration[i]:
                    ai = self.inv(a)
                    for b in self.filtration[j]:
                        comm = self.mul(self.mul(ai, self.inv(b)), self.mul(a, b))
                        if comm not in target:
                            raise NilspaceError(
                                "bad-filtration",
                                f"[G_{i}, G_{j}] escapes G_{i+j}", witness=(a, b))


def unitriangular(modulus: int) -> FilteredGroupSpec:
    """Upper-unitriangular 3x3 matrices over Z_m, lower central filtration.

    An element (a, b, c) stands for [[1, a, b], [0, 1, c], [0, 0, 1]].
    """
    m = modulus

    def mul(u, v):
        return ((u[0] + v[0]) % m, (u[1] + v[1] + u[0] * v[2]) % m,
                (u[2] + v[2]) % m)

    def inv(u):
        return (-u[0] % m, (u[0] * u[2] - u[1]) % m, -u[2] % m)

    elements = tuple(itertools.product(range(m), repeat=3))
    full = frozenset(elements)
    center = frozenset((0, b, 0) for b in range(m))
    return FilteredGroupSpec(elements, mul, inv, (0, 0, 0),
                             (full, full, center),
                             name=f"unitriangular3(Z_{m})")


def abelian_filtered(moduli, k: int) -> FilteredGroupSpec:
    """A finite abelian group Z_{m_1} x ... with the degree-k filtration G_i = G."""
    moduli = tuple(moduli)

    def mul(u, v):
        return tuple((a + b) % m for a, b, m in zip(u, v, moduli))

    def inv(u):
        return tuple(-a % m for a, m in zip(u, moduli))

    elements = tuple(itertools.product(*[range(m) for m in moduli]))
    full = frozenset(elements)
    ident = tuple(0 for _ in moduli)
    return FilteredGroupSpec(elements, mul, inv, ident,
                             (full,) * (k + 1),
                             name=f"abelian{moduli}/deg{k}")


def group_from_table(elements, table: dict, identity,
                     filtration) -> FilteredGroupSpec:
    """Build a FilteredGroupSpec from an explicit multiplication table."""
    elements = tuple(elements)
    inv_map = {}
    for a in elements:
        for b in elements:
            if table[(a, b)] == identity:
                inv_map[a] = b
    return FilteredGroupSpec(elements, lambda a, b: table[(a, b)],
                             lambda a: inv_map[a], identity,
                             tuple(frozenset(t) for t in filtration))


@lru_cache(maxsize=None)
def normal_form_order(n: int):
    """Vertex masks in increasing (weight, bitmask) order."""
    return sorted(range(1 << n), key=lambda m: (weight(m), m))


@lru_cache(maxsize=None)
def _subset_chains(n: int):
    """For every vertex v, its subsets in normal-form order (v itself last)."""
    order = normal_form_order(n)
    return {v: tuple(w for w in order if w & v == w) for v in order}


def _peel(G: FilteredGroupSpec, values, n: int):
    """Solve the normal-form coefficients g_v of a map {0,1}^n -> G."""
    chains = _subset_chains(n)
    coeff = {}
    for v in normal_form_order(n):
        prefix = G.identity
        for w in chains[v][:-1]:
            prefix = G.mul(prefix, coeff[w])
        coeff[v] = G.mul(G.inv(prefix), values[v])
    return coeff


def hk_cube_membership(G: FilteredGroupSpec, values, n: int) -> bool:
    """True iff the map factors as a product of face maps g^F, g in G_codim(F)."""
    check_dimension(values, n)
    coeff = _peel(G, values, n)
    for v, g in coeff.items():
        if g not in G.term(weight(v)):
            return False
    # defensive: the peeled coefficients must rebuild the input exactly
    chains = _subset_chains(n)
    for v in range(1 << n):
        acc = G.identity
        for w in chains[v]:
            acc = G.mul(acc, coeff[w])
        if acc != values[v]:
            raise NilspaceError("peel-inconsistent",
                                "normal-form rebuild mismatch", witness=v)
    return True


def hk_cube_from_coefficients(G, coeff: dict, n: int):
    """Rebuild the cube q(v) = prod_{w <= v} g_w from normal-form coefficients."""
    order = normal_form_order(n)
    values = []
    for v in range(1 << n):
        acc = G.identity
        for w in order:
            if w & v == w:
                acc = G.mul(acc, coeff[w])
        values.append(acc)
    return tuple(values)


def hk_cube_count(G: FilteredGroupSpec, n: int) -> int:
    total = 1
    for v in range(1 << n):
        total *= len(G.term(weight(v)))
    return total


def enumerate_hk_cubes(G: FilteredGroupSpec, n: int,
                       budget: int = DEFAULT_BUDGET):
    """All Host-Kra cubes of dimension n, via the normal form."""
    total = hk_cube_count(G, n)
    if total > budget:
        raise BudgetExceeded(f"{total} Host-Kra cubes exceed budget {budget}")
    order = normal_form_order(n)
    choices = [sorted(G.term(weight(v))) for v in order]
    out = []
    for combo in itertools.product(*choices):
        coeff = dict(zip(order, combo))
        out.append(hk_cube_from_coefficients(G, coeff, n))
    return out


def hk_cube_group_bruteforce(G: FilteredGroupSpec, n: int,
                             budget: int = DEFAULT_BUDGET):
    """Oracle: closure of the face-map generators inside G^{2^n}."""
    gens = []
    top = (1 << n) - 1
    for fixed_bits in range(1 << n):
        # faces given by fixing the coords in `fixed_bits` to chosen values
        codim = weight(fixed_bits)
        free_bits = top & ~fixed_bits
        for vals in range(1 << n):
            if vals & ~fixed_bits:
                continue
            members = [v for v in range(1 << n) if (v & fixed_bits) == vals]
            for g in G.term(codim):
                if g == G.identity:
                    continue
                face_map = tuple(g if v in members else G.identity
                                 for v in range(1 << n))
                gens.append(face_map)
    _ = free_bits  # faces are determined by (fixed_bits, vals)
    gens = list(dict.fromkeys(gens))

    def mul(p, q):
        return tuple(G.mul(a, b) for a, b in zip(p, q))

    def inv(p):
        return tuple(G.inv(a) for a in p)

    ident = tuple(G.identity for _ in range(1 << n))
    return closure(gens + [ident], mul, inv, cap=budget)
