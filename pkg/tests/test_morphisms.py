"""Polynomial morphisms, Taylor decomposition and lifting."""

import random
from fractions import Fraction

import pytest

from nilspacekit.core import (NilspaceError, Slot, binom, free_signature,
                              residue_signature)
from nilspacekit.morphisms import (MultiIndex, PolyMorphism, TableMorphism,
                                   enumerate_hom_tables, is_morphism,
                                   is_morphism_bruteforce, lift_morphism,
                                   taylor_decompose, TorusMorphism)

INT_SLOT = (Slot("integers"),)


def test_binom_identities():
    assert binom(5, 2) == 10
    assert binom(-1, 3) == -1
    assert binom(Fraction(1, 2), 2) == Fraction(-1, 8)
    assert binom(7, 0) == 1


def random_polymorphism(rng, sig, degree):
    from nilspacekit.morphisms import _iter_indices
    coeffs = {}
    for idx in _iter_indices(sig, degree):
        if rng.random() < 0.5:
            coeffs[idx] = (rng.randint(-4, 4),)
    return PolyMorphism.make(sig, INT_SLOT, degree, coeffs)


def test_taylor_roundtrip_exact():
    rng = random.Random(7)
    signatures = [free_signature([1]), free_signature([2]),
                  free_signature([1, 1]), free_signature([1, 0, 1])]
    for _ in range(100):
        sig = rng.choice(signatures)
        phi = random_polymorphism(rng, sig, 3)
        psi = taylor_decompose(phi.eval, sig, INT_SLOT, 3)
        assert psi.coeffs == phi.coeffs


def test_taylor_rejects_non_polynomial():
    sig = free_signature([1])
    with pytest.raises(NilspaceError):
        taylor_decompose(lambda p: (2 ** abs(p[0][0]),), sig, INT_SLOT, 2)


def test_is_morphism_degree_bound():
    sig = free_signature([1])
    phi = PolyMorphism.make(sig, INT_SLOT, 1,
                            {MultiIndex.make({(1, 1): 2}): (1,)})
    ok, reason = is_morphism(phi)
    assert not ok and "degree" in reason


def test_is_morphism_discreteness():
    sig = free_signature([0], [1])  # one rational degree-1 slot
    phi = PolyMorphism.make(sig, INT_SLOT, 2,
                            {MultiIndex.make({(1, 1): 1}): (1,)})
    ok, reason = is_morphism(phi)
    assert not ok and "continuous" in reason


def test_morphism_oracle_agrees():
    sig = free_signature([1])
    good = PolyMorphism.make(sig, INT_SLOT, 2,
                             {MultiIndex.make({(1, 1): 2}): (3,)})
    assert is_morphism(good) == (True, None)
    assert is_morphism_bruteforce(good.eval, sig, INT_SLOT, 2)[0]
    # x^2-as-binomials has degree 2; it is not a degree-1 morphism
    ok, witness = is_morphism_bruteforce(good.eval, sig, INT_SLOT, 1)
    assert not ok and witness is not None


def test_lift_residue_morphism():
    sig = free_signature([1])
    phi = PolyMorphism.make(sig, (Slot("residues", 4),), 2,
                            {MultiIndex.make({(1, 1): 1}): (3,),
                             MultiIndex.make({(1, 1): 2}): (2,)})
    psi = lift_morphism(phi)
    for x in range(-3, 6):
        lifted = psi.eval(((x,),))
        assert tuple(v % 4 for v in lifted) == phi.eval(((x,),))


def test_lift_torus_morphism():
    sig = free_signature([1])
    inner = PolyMorphism.make(sig, (Slot("rationals"),), 2,
                              {MultiIndex.make({(1, 1): 2}): (Fraction(5, 3),)})
    tor = TorusMorphism(inner)
    psi = lift_morphism(tor)
    for x in range(-2, 5):
        assert tuple(Fraction(v) % 1 for v in psi.eval(((x,),))) \
            == tor.eval(((x,),))


def test_hom_table_counts_golden():
    z2 = residue_signature([[2]])
    z3 = residue_signature([[3]])
    assert len(enumerate_hom_tables(z2, (Slot("residues", 2),), 1)) == 4
    assert len(enumerate_hom_tables(z2, (Slot("residues", 2),), 2)) == 4
    assert len(enumerate_hom_tables(z3, (Slot("residues", 3),), 1)) == 9


def test_hom_tables_are_exactly_the_cube_preserving_maps():
    z3 = residue_signature([[3]])
    homs = enumerate_hom_tables(z3, (Slot("residues", 3),), 1)
    tables = {h.table for h in homs}
    import itertools
    for tab in itertools.product([(0,), (1,), (2,)], repeat=3):
        phi = TableMorphism(z3, (Slot("residues", 3),), 1, tab)
        ok, _ = is_morphism_bruteforce(phi.eval, z3, (Slot("residues", 3),), 1)
        assert ok == (tab in tables)
