"""Exact representations of abelian groups, product-nilspace signatures and points.

Scalars are Python ints (integer and residue slots) or fractions.Fraction
(rational slots).  Residue scalars are kept reduced to [0, modulus).
A point of a signature with step k is a tuple of k per-degree value tuples.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

INT = "integers"
RES = "residues"
RAT = "rationals"

_KINDS = (INT, RES, RAT)


class NilspaceError(Exception):
    """Structured error with a machine-readable code."""

    def __init__(self, code: str, message: str, witness=None):
        super().__init__(message)
        self.code = code
        self.witness = witness


class BudgetExceeded(NilspaceError):
    def __init__(self, message: str):
        super().__init__("budget-exceeded", message)


DEFAULT_BUDGET = 10**7


@dataclass(frozen=True)
class Slot:
    """A single scalar slot: one copy of Z, Q or Z_m."""

    kind: str
    modulus: int | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise NilspaceError("bad-slot", f"unknown slot kind {self.kind!r}")
        if self.kind == RES:
            if self.modulus is None or self.modulus < 1:
                raise NilspaceError("bad-slot", "residue slot needs modulus >= 1")
        elif self.modulus is not None:
            raise NilspaceError("bad-slot", f"{self.kind} slot takes no modulus")

    @property
    def is_discrete(self) -> bool:
        return self.kind != RAT

    @property
    def is_finite(self) -> bool:
        return self.kind == RES

    def reduce(self, x):
        if self.kind == RES:
            return int(x) % self.modulus
        if self.kind == RAT:
            return x if isinstance(x, Fraction) else Fraction(x)
        if isinstance(x, Fraction):
            if x.denominator != 1:
                raise NilspaceError("bad-value", f"non-integer value {x} in integer slot")
            return int(x)
        return int(x)

    def elements(self) -> Iterator[int]:
        if self.kind != RES:
            raise NilspaceError("infinite-slot", f"cannot enumerate {self.kind} slot")
        return iter(range(self.modulus))


@dataclass(frozen=True)
class GroupSpec:
    """kind^rank, the JSON-facing abelian group description."""

    kind: str
    rank: int
    modulus: int | None = None

    def __post_init__(self):
        if self.rank < 0:
            raise NilspaceError("bad-group", "rank must be non-negative")
        Slot(self.kind, self.modulus)  # validate kind/modulus combination

    def slots(self) -> tuple[Slot, ...]:
        return (Slot(self.kind, self.modulus),) * self.rank


def reduce_value(slots: tuple[Slot, ...], value) -> tuple:
    value = tuple(value)
    if len(value) != len(slots):
        raise NilspaceError("bad-value", f"expected {len(slots)} scalars, got {len(value)}")
    return tuple(s.reduce(x) for s, x in zip(slots, value))


def add_value(slots: tuple[Slot, ...], u, v) -> tuple:
    return reduce_value(slots, tuple(a + b for a, b in zip(u, v)))


def neg_value(slots: tuple[Slot, ...], u) -> tuple:
    return reduce_value(slots, tuple(-a for a in u))


def sub_value(slots: tuple[Slot, ...], u, v) -> tuple:
    return reduce_value(slots, tuple(a - b for a, b in zip(u, v)))


def zero_value(slots: tuple[Slot, ...]) -> tuple:
    return tuple(Fraction(0) if s.kind == RAT else 0 for s in slots)


def enumerate_value(slots: tuple[Slot, ...]) -> Iterator[tuple]:
    return itertools.product(*[tuple(s.elements()) for s in slots])


@dataclass(frozen=True)
class Signature:
    """The shape prod_i D_i(A_i): per-degree tuples of scalar slots.

    components[i-1] holds the slots of the degree-i coordinate group A_i
    (possibly empty).  Free signatures are the all-int/rat case; finite
    product nilspaces are the all-residues case.
    """

    components: tuple[tuple[Slot, ...], ...]

    @property
    def k(self) -> int:
        return len(self.components)

    def slots(self, degree: int) -> tuple[Slot, ...]:
        return self.components[degree - 1]

    @property
    def is_free(self) -> bool:
        return all(s.kind != RES for comp in self.components for s in comp)

    @property
    def is_finite(self) -> bool:
        return all(s.kind == RES for comp in self.components for s in comp)

    def slot_addresses(self) -> list[tuple[int, int]]:
        """All (degree, slot index) pairs, 1-based, in canonical order."""
        return [(i, j + 1)
                for i in range(1, self.k + 1)
                for j in range(len(self.slots(i)))]

    def slot(self, i: int, j: int) -> Slot:
        return self.components[i - 1][j - 1]

    def zero_point(self) -> tuple:
        return tuple(zero_value(comp) for comp in self.components)

    def reduce_point(self, p) -> tuple:
        p = tuple(tuple(v) for v in p)
        if len(p) != self.k:
            raise NilspaceError("bad-point", f"expected {self.k} degree components")
        return tuple(reduce_value(comp, v) for comp, v in zip(self.components, p))

    def add_points(self, p, q) -> tuple:
        return tuple(add_value(comp, u, v)
                     for comp, u, v in zip(self.components, p, q))

    def sub_points(self, p, q) -> tuple:
        return tuple(sub_value(comp, u, v)
                     for comp, u, v in zip(self.components, p, q))

    def truncate(self, j: int) -> "Signature":
        """The j-step factor prod_{i<=j} D_i(A_i)."""
        return Signature(self.components[:j])

    def project_point(self, p, j: int) -> tuple:
        return tuple(p[:j])

    def point_count(self) -> int:
        n = 1
        for comp in self.components:
            for s in comp:
                if s.kind != RES:
                    raise NilspaceError("infinite-base", "point set is infinite")
                n *= s.modulus
        return n

    def points(self) -> list[tuple]:
        """All points of a finite signature, in lexicographic order."""
        return [tuple(vals)
                for vals in itertools.product(*[list(enumerate_value(comp))
                                                for comp in self.components])]

    def continuous_closure(self) -> "Signature":
        """Replace every integer slot by a rational slot."""
        def close(s: Slot) -> Slot:
            return Slot(RAT) if s.kind == INT else s
        return Signature(tuple(tuple(close(s) for s in comp)
                               for comp in self.components))


def free_signature(discrete, continuous=None) -> Signature:
    """prod_i D_i(Z^{a_i} x Q^{b_i}) from per-degree ranks."""
    discrete = list(discrete)
    continuous = list(continuous) if continuous is not None else [0] * len(discrete)
    if len(discrete) != len(continuous):
        raise NilspaceError("bad-signature", "rank lists must have equal length")
    comps = []
    for a, b in zip(discrete, continuous):
        comps.append((Slot(INT),) * a + (Slot(RAT),) * b)
    return Signature(tuple(comps))


def residue_signature(moduli_per_degree) -> Signature:
    """prod_i D_i(prod_j Z_{m_{i,j}}) from a per-degree list of moduli lists."""
    comps = []
    for ms in moduli_per_degree:
        if isinstance(ms, int):
            ms = [ms]
        comps.append(tuple(Slot(RES, m) for m in ms))
    return Signature(tuple(comps))


def binom(x, n: int):
    """Binomial coefficient via the falling factorial; exact for int or Fraction x."""
    if n < 0:
        raise NilspaceError("bad-binom", "negative lower index")
    if n == 0:
        return 1
    num = 1
    for t in range(n):
        num *= x - t
    den = 1
    for t in range(2, n + 1):
        den *= t
    if isinstance(x, Fraction):
        return num / den
    q, r = divmod(num, den)
    if r:
        raise NilspaceError("bad-binom", "non-integral binomial of an integer")
    return q
