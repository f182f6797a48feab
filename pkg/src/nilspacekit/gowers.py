"""Gowers uniformity norms and nilcharacter correlation on finite abelian groups.

This is the only module that uses floating point: signals are tables of
complex binary64 values over a finite abelian group given by its invariant
factors.  Nilcharacters compose an exact polynomial morphism into a free
nilspace, the canonical-representative reduction of a lattice action on that
nilspace, and a bounded window function; correlation measures the averaged
inner product against a signal over a fundamental domain.
"""

from __future__ import annotations

import cmath
import itertools
import math
from dataclasses import dataclass, field

import numpy as np
import sympy

from .core import (BudgetExceeded, DEFAULT_BUDGET, NilspaceError, Signature)
from .congruences import (FiberTransitiveCandidate, build_degree_lattices,
                          canonical_rep, is_free_fiber_transitive)
from .morphisms import PolyMorphism, is_morphism

NORM_TOL = 1e-9
INVARIANCE_TOL = 1e-12
BOUND_TOL = 1e-12


@dataclass(frozen=True)
class FiniteAbelianGroup:
    """prod_j Z/k_j with k_1 | k_2 | ... | k_n (invariant factors)."""

    factors: tuple

    def __post_init__(self):
        fs = tuple(int(k) for k in self.factors)
        object.__setattr__(self, "factors", fs)
        if not fs or any(k < 1 for k in fs):
            raise NilspaceError("bad-group", "invariant factors must be positive")
        for a, b in zip(fs, fs[1:]):
            if b % a:
                raise NilspaceError("bad-group",
                                    f"invariant factor {a} does not divide {b}")

    @classmethod
    def from_cyclic_factors(cls, moduli) -> "FiniteAbelianGroup":
        """Normalize an arbitrary product of cyclic groups to invariant factors."""
        moduli = [int(m) for m in moduli]
        if any(m < 1 for m in moduli):
            raise NilspaceError("bad-group", "cyclic factors must be positive")
        from sympy.matrices.normalforms import smith_normal_form
        diag = sympy.diag(*moduli)
        snf = smith_normal_form(diag, domain=sympy.ZZ)
        inv = [int(snf[i, i]) for i in range(len(moduli))]
        inv = [k for k in inv if k != 1] or [1]
        return cls(tuple(inv))

    @property
    def rank(self) -> int:
        return len(self.factors)

    @property
    def size(self) -> int:
        return math.prod(self.factors)

    def elements(self):
        return itertools.product(*[range(k) for k in self.factors])

    def reduce(self, x):
        return tuple(int(a) % k for a, k in zip(x, self.factors))


@dataclass(frozen=True)
class SignalTable:
    """Complex values over a finite abelian group, optionally 1-bounded."""

    group: FiniteAbelianGroup
    values: np.ndarray = field(repr=False)
    bounded: bool = True

    def __post_init__(self):
        arr = np.asarray(self.values, dtype=complex).reshape(self.group.factors)
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)
        if self.bounded and np.abs(arr).max() > 1 + BOUND_TOL:
            raise NilspaceError("unbounded-signal",
                                "signal exceeds the declared 1-bound")

    @classmethod
    def from_function(cls, group: FiniteAbelianGroup, fn,
                      bounded: bool = True) -> "SignalTable":
        arr = np.empty(group.factors, dtype=complex)
        for x in group.elements():
            arr[x] = fn(x)
        return cls(group, arr, bounded)

    def __eq__(self, other):
        return (isinstance(other, SignalTable) and self.group == other.group
                and np.array_equal(self.values, other.values))


def _shift(arr: np.ndarray, h) -> np.ndarray:
    """x -> arr[x + h], cyclically in every coordinate."""
    return np.roll(arr, shift=tuple(-hi for hi in h),
                   axis=tuple(range(arr.ndim)))


def _norm_power(arr: np.ndarray, group: FiniteAbelianGroup, d: int) -> float:
    if d == 1:
        return abs(arr.mean()) ** 2
    total = 0.0
    for h in group.elements():
        total += _norm_power(_shift(arr, h) * arr.conj(), group, d - 1)
    return total / group.size


def gowers_norm(f: SignalTable, d: int, budget: int = DEFAULT_BUDGET) -> float:
    """U^d norm: the 2^d-th root of the averaged d-fold multiplicative
    derivative E_{x,h_1..h_d} prod_w C^{|w|} f(x + w.h)."""
    if d < 1:
        raise NilspaceError("bad-degree", "Gowers norm needs d >= 1")
    cost = f.group.size ** (d + 1)
    if cost > budget:
        raise BudgetExceeded(f"U^{d} cost {cost} exceeds budget {budget}")
    power = _norm_power(f.values, f.group, d)
    return max(power, 0.0) ** (1.0 / (1 << d))


def gowers_norm_direct(f: SignalTable, d: int,
                       budget: int = DEFAULT_BUDGET) -> float:
    """Definition-chasing oracle: explicit sum over x and h_1, ..., h_d."""
    G = f.group
    cost = G.size ** (d + 1)
    if cost > budget:
        raise BudgetExceeded(f"direct U^{d} cost {cost} exceeds budget {budget}")
    arr = f.values
    total = 0.0 + 0.0j
    for x in G.elements():
        for hs in itertools.product(G.elements(), repeat=d):
            term = 1.0 + 0.0j
            for w in itertools.product((0, 1), repeat=d):
                y = x
                for wi, h in zip(w, hs):
                    if wi:
                        y = tuple(a + b for a, b in zip(y, h))
                v = arr[G.reduce(y)]
                if sum(w) & 1:
                    v = v.conjugate()
                term *= v
            total += term
    power = (total / G.size ** (d + 1)).real
    return max(power, 0.0) ** (1.0 / (1 << d))


def u2_fourier_identity_gap(f: SignalTable) -> float:
    """|U^2 norm ^ 4 - sum of |f-hat|^4| for the normalized Fourier transform."""
    hat = np.fft.fftn(f.values) / f.group.size
    return abs(gowers_norm(f, 2) ** 4 - float((np.abs(hat) ** 4).sum()))


@dataclass(frozen=True)
class NaturalSurjection:
    """Componentwise reduction Z^n -> prod_j Z/k_j with box fundamental domain."""

    group: FiniteAbelianGroup

    @property
    def rank(self) -> int:
        return self.group.rank

    def apply(self, x):
        return self.group.reduce(x)

    def fundamental_domain(self):
        return self.group.elements()


def natural_surjection(group: FiniteAbelianGroup) -> NaturalSurjection:
    return NaturalSurjection(group)


@dataclass(frozen=True)
class Nilcharacter:
    """window(canonical representative of the Gamma-orbit of g(x)).

    `source` is the 1-step free signature D_1(Z^n); `components` holds one
    PolyMorphism per degree of the free target; `action` is the lattice
    acting on the target; `window` maps canonical representatives to complex
    values of modulus at most `window_bound`.
    """

    source: Signature
    components: tuple
    action: FiberTransitiveCandidate
    window: object
    window_bound: float = 1.0

    @property
    def space(self) -> Signature:
        return self.action.base

    def validate(self, budget: int = DEFAULT_BUDGET) -> dict:
        report = {"morphisms": [], "free_action": None}
        for comp in self.components:
            ok, reason = is_morphism(comp)
            report["morphisms"].append((ok, reason))
        report["free_action"] = is_free_fiber_transitive(self.action)
        report["pass"] = (all(ok for ok, _ in report["morphisms"])
                          and report["free_action"])
        return report

    def g(self, x):
        p = (tuple(int(v) for v in x),)
        return tuple(comp.eval(p) for comp in self.components)


def nilcharacter_eval(chi: Nilcharacter, x, lattices=None) -> complex:
    if lattices is None:
        lattices = build_degree_lattices(chi.action)
    rep = canonical_rep(chi.action, chi.g(x), lattices)
    return complex(chi.window(rep))


def correlation(f: SignalTable, chi: Nilcharacter,
                surjection: NaturalSurjection) -> float:
    """|E_{x in D} f(x) conj(window(pi_Gamma(g(x))))| over the fundamental box."""
    if f.group != surjection.group:
        raise NilspaceError("domain-mismatch",
                            "signal and surjection disagree on the group")
    if surjection.rank != len(chi.source.slots(1)):
        raise NilspaceError("domain-mismatch",
                            "nilcharacter source rank differs from Z^n")
    lattices = build_degree_lattices(chi.action)
    total = 0.0 + 0.0j
    count = 0
    for x in surjection.fundamental_domain():
        total += complex(f.values[x]) * nilcharacter_eval(chi, x, lattices).conjugate()
        count += 1
    return abs(total / count)


def e(t) -> complex:
    """exp(2 pi i t), accepting exact rationals."""
    return cmath.exp(2j * cmath.pi * float(t))


def character_signal(group: FiniteAbelianGroup, freqs) -> SignalTable:
    """The additive character x -> e(sum_j freq_j x_j / k_j)."""
    freqs = tuple(freqs)
    return SignalTable.from_function(
        group,
        lambda x: e(sum(fr * xi / k for fr, xi, k
                        in zip(freqs, x, group.factors))))


def polynomial_phase_signal(group: FiniteAbelianGroup, coeffs) -> SignalTable:
    """e(P(x)/k) on a cyclic group, P given by integer coefficients (low first)."""
    if group.rank != 1:
        raise NilspaceError("bad-group", "polynomial phases need a cyclic group")
    (k,) = group.factors
    return SignalTable.from_function(
        group,
        lambda x: e(sum(c * x[0] ** j for j, c in enumerate(coeffs)) / k))
