"""Cube structures on abelian groups and product nilspaces."""

import itertools

from hypothesis import given, settings
from hypothesis import strategies as st

from nilspacekit.core import Slot, free_signature, residue_signature
from nilspacekit.cubes import (complete_corner, complete_point_corner,
                               component_cube_from_free, cube_count,
                               enumerate_cubes, enumerate_cubes_bruteforce,
                               free_vertex_masks, is_cube_degree_k,
                               is_point_cube, point_cube_from_free, sigma,
                               weight)

S22 = residue_signature([[2], [2]])
Z2 = (Slot("residues", 2),)
Z3 = (Slot("residues", 3),)


def test_weight():
    assert [weight(m) for m in range(8)] == [0, 1, 1, 2, 1, 2, 2, 3]


def test_sigma_of_constant_cube_is_zero():
    for k in (1, 2):
        values = [(1,)] * (1 << (k + 1))
        assert sigma(k, values, Z3) == (0,)


def test_sigma_detects_nonzero_alternating_sum():
    # flip a single vertex of a constant 2-cube: sigma_1 becomes nonzero
    values = [(0,), (0,), (0,), (1,)]
    assert sigma(1, values, Z3) != (0,)
    assert not is_cube_degree_k(1, values, 2, Z3)


def test_low_dimension_cubes_are_unconstrained():
    for values in itertools.product([(0,), (1,)], repeat=2):
        assert is_cube_degree_k(1, list(values), 1, Z2)
        assert is_cube_degree_k(2, list(values), 1, Z2)


def test_cube_counts_golden():
    assert cube_count(residue_signature([[], [2]]), 3) == 128
    assert cube_count(S22, 2) == 128
    assert len(enumerate_cubes(S22, 2)) == 128


def test_enumeration_matches_bruteforce_oracle():
    for sig, n in ((residue_signature([[2]]), 2),
                   (residue_signature([[], [2]]), 2),
                   (S22, 1),
                   (S22, 2)):
        fast = set(enumerate_cubes(sig, n))
        slow = set(enumerate_cubes_bruteforce(sig, n))
        assert fast == slow


def test_free_vertex_masks_order_and_size():
    assert free_vertex_masks(1, 2) == [0, 1, 2]
    assert free_vertex_masks(2, 3) == [0, 1, 2, 4, 3, 5, 6]


def test_free_vertex_parametrization_roundtrip():
    for q in enumerate_cubes(S22, 2):
        assigns = [[q[m][i - 1] for m in free_vertex_masks(i, 2)]
                   for i in (1, 2)]
        assert point_cube_from_free(S22, 2, assigns) == q


def test_component_cube_from_free_builds_cubes():
    for assign in itertools.product([(0,), (1,), (2,)], repeat=3):
        cube = component_cube_from_free(Z3, 1, 2, assign)
        assert is_cube_degree_k(1, cube, 2, Z3)


def test_corner_completion_unique_above_degree():
    for q in enumerate_cubes(S22, 3):
        completed = complete_point_corner(S22, q[:-1], 3)
        assert completed == q
    # n <= k: every corner completes
    corner = (((1,), (0,)), ((0,), (1,)), ((1,), (1,)))
    full = complete_point_corner(S22, corner, 2)
    assert is_point_cube(S22, full, 2)


def test_complete_corner_scalar_case():
    q = [(0,), (1,), (2,), (0,)]
    assert is_cube_degree_k(1, q, 2, Z3)
    assert complete_corner(1, q[:-1], 2, Z3) == tuple(q)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(-5, 5), min_size=7, max_size=7))
def test_integer_free_assignments_always_give_cubes(vals):
    sig = free_signature([1, 1])
    assigns = [[(v,) for v in vals[:3]], [(v,) for v in vals[3:]]]
    q = point_cube_from_free(sig, 2, assigns)
    assert is_point_cube(sig, q, 2)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 127))
def test_cube_membership_stable_under_coordinate_flip(seed):
    # reversing the first cube direction permutes vertices 2j <-> 2j+1
    cubes = enumerate_cubes(S22, 2)
    q = cubes[seed % len(cubes)]
    flipped = (q[1], q[0], q[3], q[2])
    assert is_point_cube(S22, flipped, 2)
