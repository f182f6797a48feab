"""Filtered groups and Host-Kra cube structures."""

import itertools
import random

import pytest

from nilspacekit.core import NilspaceError
from nilspacekit.filtered import (abelian_filtered, closure,
                                  enumerate_hk_cubes, hk_cube_count,
                                  hk_cube_from_coefficients,
                                  hk_cube_group_bruteforce,
                                  hk_cube_membership, normal_form_order,
                                  unitriangular)


def test_unitriangular_group_law():
    G = unitriangular(5)
    e = G.identity
    rng = random.Random(0)
    sample = [tuple(rng.randrange(5) for _ in range(3)) for _ in range(20)]
    for a in sample:
        assert G.mul(a, G.inv(a)) == e
        assert G.mul(e, a) == a
        for b, c in zip(sample, reversed(sample)):
            assert G.mul(G.mul(a, b), c) == G.mul(a, G.mul(b, c))


def test_unitriangular_commutators_are_central():
    G = unitriangular(3)
    for a in G.elements:
        for b in G.elements:
            comm = G.mul(G.mul(G.inv(a), G.inv(b)), G.mul(a, b))
            assert comm in G.term(2)


def test_bad_filtration_rejected():
    G = unitriangular(2)
    with pytest.raises(NilspaceError):
        # a non-normal chain: {e, (1,0,0)} is not commutator-closed at level 2
        from nilspacekit.filtered import FilteredGroupSpec
        FilteredGroupSpec(G.elements, G.mul, G.inv, G.identity,
                          (G.term(0), G.term(0),
                           frozenset([(0, 0, 0), (1, 0, 0)])))


def test_hk_counts_unitriangular_z2():
    G = unitriangular(2)
    assert [hk_cube_count(G, n) for n in range(4)] == [8, 64, 1024, 32768]
    assert len(enumerate_hk_cubes(G, 2)) == 1024


def test_hk_enumeration_matches_face_map_closure():
    G = unitriangular(2)
    for n in (1, 2):
        fast = set(enumerate_hk_cubes(G, n))
        slow = hk_cube_group_bruteforce(G, n)
        assert fast == slow


def test_hk_membership_agrees_with_enumeration():
    G = unitriangular(2)
    cubes = set(enumerate_hk_cubes(G, 2))
    rng = random.Random(1)
    for _ in range(300):
        cand = tuple(G.elements[rng.randrange(8)] for _ in range(4))
        assert hk_cube_membership(G, cand, 2) == (cand in cubes)


def test_normal_form_roundtrip():
    G = unitriangular(2)
    order = normal_form_order(2)
    rng = random.Random(2)
    for _ in range(50):
        coeff = {v: rng.choice(sorted(G.term(bin(v).count("1")))) for v in order}
        q = hk_cube_from_coefficients(G, coeff, 2)
        assert hk_cube_membership(G, q, 2)


def test_abelian_hk_equals_gray_code_cubes():
    from nilspacekit.core import Slot
    from nilspacekit.cubes import is_cube_degree_k
    G = abelian_filtered((3,), 1)
    slots = (Slot("residues", 3),)
    for cand in itertools.product(G.elements, repeat=4):
        assert (hk_cube_membership(G, cand, 2)
                == is_cube_degree_k(1, cand, 2, slots))


def test_closure_generates_subgroup():
    G = unitriangular(2)
    sub = closure([(1, 0, 0)], G.mul, G.inv)
    assert sub == {(0, 0, 0), (1, 0, 0)}
    assert closure([(1, 0, 0), (0, 0, 1)], G.mul, G.inv) == set(G.elements)
