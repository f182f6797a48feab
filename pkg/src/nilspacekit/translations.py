"""Translations of product nilspaces prod_i D_i(A_i).

A translation of height s is stored as a tuple (T_s, ..., T_k) where T_i maps
the (i-s)-step factor into D_{i-s}(A_i); the action adds T_i(x_1..x_{i-s}) to
the degree-i coordinate.  Components are PolyMorphisms on free signatures and
TableMorphisms on finite ones; composition and inversion re-normalize through
taylor_decompose so equality is decidable coefficient-wise.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache

from .core import (BudgetExceeded, DEFAULT_BUDGET, INT, RES, NilspaceError,
                   Signature, Slot, add_value, enumerate_value, reduce_value,
                   sub_value)
from .cubes import enumerate_cubes, is_point_cube
from .morphisms import (PolyMorphism, TableMorphism, constant_morphism,
                        enumerate_hom_tables, taylor_decompose)


@dataclass(frozen=True)
class Translation:
    space: Signature
    height: int
    components: tuple  # T_height .. T_k (morphisms; may be empty if height > k)

    def __post_init__(self):
        if not (1 <= self.height <= max(self.space.k, 1)):
            raise NilspaceError("bad-height", f"height {self.height} out of range")

    def component(self, i: int):
        """T_i for degree i, or None below the height."""
        if i < self.height or i > self.space.k:
            return None
        return self.components[i - self.height]


def identity_translation(sig: Signature, height: int | None = None) -> Translation:
    s = height if height is not None else sig.k
    comps = []
    for i in range(s, sig.k + 1):
        zero = tuple(0 for _ in sig.slots(i))
        comps.append(constant_morphism(sig.truncate(i - s), sig.slots(i), i - s,
                                       zero, prefer_table=not sig.is_free))
    return Translation(sig, s, tuple(comps))


def act(alpha: Translation, p) -> tuple:
    sig = alpha.space
    p = sig.reduce_point(p)
    out = list(p)
    for i in range(alpha.height, sig.k + 1):
        T = alpha.component(i)
        delta = T.eval(p[: i - alpha.height])
        out[i - 1] = add_value(sig.slots(i), p[i - 1], delta)
    return tuple(out)


def act_inverse(alpha: Translation, p) -> tuple:
    """Solve act(alpha, x) = p degree by degree (the system is triangular)."""
    sig = alpha.space
    p = sig.reduce_point(p)
    x = list(p)
    for i in range(alpha.height, sig.k + 1):
        T = alpha.component(i)
        delta = T.eval(tuple(x[: i - alpha.height]))
        x[i - 1] = sub_value(sig.slots(i), p[i - 1], delta)
    return tuple(x)


def _component_from_map(sig: Signature, i: int, s: int, fn) -> object:
    """Build T_i from the coordinate displacement of a full-space map."""
    trunc = sig.truncate(i - s)

    def g(x_trunc):
        full = tuple(x_trunc) + sig.zero_point()[i - s:]
        y = fn(full)
        return sub_value(sig.slots(i), y[i - 1], full[i - 1])

    if sig.is_free:
        return taylor_decompose(g, trunc, sig.slots(i), i - s)
    if trunc.is_finite:
        return TableMorphism.from_callable(trunc, sig.slots(i), i - s, g)
    raise NilspaceError("unsupported-signature",
                        "composition needs a free or finite nilspace")


def compose(alpha: Translation, beta: Translation) -> Translation:
    """The translation acting as alpha after beta."""
    if alpha.space != beta.space:
        raise NilspaceError("space-mismatch", "translations on different nilspaces")
    sig = alpha.space
    s = min(alpha.height, beta.height)

    def fn(p):
        return act(alpha, act(beta, p))

    comps = tuple(_component_from_map(sig, i, s, fn) for i in range(s, sig.k + 1))
    return Translation(sig, s, comps)


def invert(alpha: Translation) -> Translation:
    sig = alpha.space
    s = alpha.height

    def fn(p):
        return act_inverse(alpha, p)

    comps = tuple(_component_from_map(sig, i, s, fn) for i in range(s, sig.k + 1))
    return Translation(sig, s, comps)


def eta(j: int, alpha: Translation) -> Translation:
    """Project to the j-step factor: drop components above degree j."""
    if not (1 <= j <= alpha.space.k):
        raise NilspaceError("bad-factor", f"factor index {j} out of range")
    sig = alpha.space.truncate(j)
    s = min(alpha.height, j)
    comps = []
    for i in range(s, j + 1):
        T = alpha.component(i)
        if T is None:
            zero = tuple(0 for _ in sig.slots(i))
            T = constant_morphism(sig.truncate(i - s), sig.slots(i), i - s,
                                  zero, prefer_table=not sig.is_free)
        comps.append(T)
    return Translation(sig, s, tuple(comps))


def arrow(sig: Signature, q, fq, n: int, s: int):
    """The s-arrow <q, f o q>_s as a cube map of dimension n + s."""
    top = (1 << s) - 1
    values = []
    for m in range(1 << (n + s)):
        u = m & ((1 << n) - 1)
        w = m >> n
        values.append(fq[u] if w == top else q[u])
    return tuple(values)


def is_translation_bruteforce(sig: Signature, f, s: int,
                              budget: int = DEFAULT_BUDGET):
    """Arrow criterion: <q, f o q>_s is a cube for every cube q of dim <= k+1-s.

    `f` maps points to points on a finite nilspace.  Returns (True, None) or
    (False, (q, arrow)) with the first violating arrow.
    """
    for n in range(0, sig.k + 2 - s):
        for q in enumerate_cubes(sig, n, budget):
            fq = [tuple(f(p)) for p in q]
            arr = arrow(sig, q, fq, n, s)
            if not is_point_cube(sig, arr, n + s):
                return False, (q, arr)
    return True, None


@lru_cache(maxsize=None)
def enumerate_translation_group(sig: Signature, s: int,
                                budget: int = DEFAULT_BUDGET):
    """tran_s of a finite product nilspace = prod_i hom((i-s)-factor, D_{i-s}(A_i))."""
    per_degree = []
    for i in range(s, sig.k + 1):
        if i - s == 0:
            consts = [constant_morphism(sig.truncate(0), sig.slots(i), 0, v,
                                        prefer_table=True)
                      for v in enumerate_value(sig.slots(i))]
            per_degree.append(consts)
        else:
            per_degree.append(enumerate_hom_tables(sig.truncate(i - s),
                                                   sig.slots(i), i - s, budget))
    out = []
    for combo in itertools.product(*per_degree):
        out.append(Translation(sig, s, tuple(combo)))
    return tuple(out)


def lift_translation(alpha: Translation) -> Translation:
    """Lift through the covering that unrolls the top-degree residue factor to Z.

    Every top-component value is replaced by its least non-negative
    representative; lower components are reused verbatim.
    """
    sig = alpha.space
    k = sig.k
    top_slots = sig.slots(k)
    if not all(sl.kind == RES for sl in top_slots):
        raise NilspaceError("bad-lift", "top factor must be a residue group")
    lifted_sig = Signature(sig.components[:-1] + ((Slot(INT),) * len(top_slots),))
    comps = list(alpha.components)
    T = alpha.component(k)
    if T is None:
        return Translation(lifted_sig, alpha.height, tuple(comps))
    new_slots = (Slot(INT),) * len(top_slots)
    if isinstance(T, TableMorphism):
        lifted = TableMorphism(T.source, new_slots, T.target_degree,
                               tuple(tuple(int(x) for x in v) for v in T.table))
    else:
        lifted = PolyMorphism.make(T.source, new_slots, T.target_degree,
                                   {idx: tuple(int(x) for x in v)
                                    for idx, v in T.coeffs})
    comps[-1] = lifted
    return Translation(lifted_sig, alpha.height, tuple(comps))


def act_table(sig: Signature, alpha: Translation) -> tuple:
    """The action of alpha as a tuple of image indices over sig.points()."""
    pts = sig.points()
    index = {p: i for i, p in enumerate(pts)}
    return tuple(index[act(alpha, p)] for p in pts)
