"""Translation groups of product nilspaces."""

import random

from nilspacekit.core import free_signature, residue_signature
from nilspacekit.corpus import shear_translation, vertical_shift
from nilspacekit.morphisms import MultiIndex, PolyMorphism, constant_morphism
from nilspacekit.translations import (Translation, act, act_inverse,
                                      act_table, compose,
                                      enumerate_translation_group, eta,
                                      identity_translation, invert,
                                      is_translation_bruteforce,
                                      lift_translation)

S22 = residue_signature([[2], [2]])


def test_translation_group_counts_golden():
    assert len(enumerate_translation_group(S22, 1)) == 8
    assert len(enumerate_translation_group(S22, 2)) == 2
    assert len(enumerate_translation_group(residue_signature([[3], [3]]), 1)) == 27
    assert len(enumerate_translation_group(residue_signature([[2]]), 1)) == 2
    assert len(enumerate_translation_group(residue_signature([[], [2]]), 1)) == 2


def test_every_enumerated_translation_passes_the_arrow_criterion():
    for s in (1, 2):
        for t in enumerate_translation_group(S22, s):
            ok, _ = is_translation_bruteforce(S22, lambda p: act(t, p), s)
            assert ok


def test_non_translation_fails_the_arrow_criterion():
    def f(p):
        # the degree-1 displacement depends on the degree-2 coordinate,
        # which no translation allows
        (x,), (y,) = p
        return (((x + y) % 2,), (y,))

    ok, witness = is_translation_bruteforce(S22, f, 1)
    assert not ok and witness is not None


def test_compose_and_invert_act_correctly():
    rng = random.Random(3)
    group = enumerate_translation_group(S22, 1)
    pts = S22.points()
    for _ in range(20):
        a, b = rng.choice(group), rng.choice(group)
        ab = compose(a, b)
        for p in pts:
            assert act(ab, p) == act(a, act(b, p))
            assert act_inverse(a, act(a, p)) == p
            assert act(invert(a), p) == act_inverse(a, p)


def test_identity_translation_is_neutral():
    ident = identity_translation(S22, 1)
    for p in S22.points():
        assert act(ident, p) == p


def test_eta_projects_to_factor():
    t = shear_translation(S22, 1)
    t1 = eta(1, t)
    for p in S22.points():
        assert act(t1, (p[0],)) == (act(t, p)[0],)


def test_heisenberg_commutator_golden():
    F3 = free_signature([2, 1])
    alpha = Translation(F3, 1, (
        constant_morphism(F3.truncate(0), F3.slots(1), 0, (1, 0)),
        PolyMorphism.make(F3.truncate(1), F3.slots(2), 1, {})))
    beta = Translation(F3, 1, (
        constant_morphism(F3.truncate(0), F3.slots(1), 0, (0, 1)),
        PolyMorphism.make(F3.truncate(1), F3.slots(2), 1,
                          {MultiIndex.make({(1, 1): 1}): (1,)})))
    comm = compose(invert(beta), compose(invert(alpha), compose(beta, alpha)))
    assert act(comm, F3.zero_point()) == ((0, 0), (1,))
    assert act(beta, ((2, 0), (5,))) == ((2, 1), (7,))


def test_lift_translation_covers_the_residue_action():
    t = shear_translation(S22, 1)
    lifted = lift_translation(t)
    for p in S22.points():
        up = act(lifted, p)
        down = tuple(tuple(x % 2 for x in comp) for comp in up)
        assert down == act(t, p)


def test_act_table_is_a_permutation():
    for t in enumerate_translation_group(S22, 1):
        table = act_table(S22, t)
        assert sorted(table) == list(range(4))


def test_vertical_shift_heights():
    t1 = vertical_shift(S22, 1, (1,))
    t2 = vertical_shift(S22, 2, (1,))
    assert t1.height == 1 and t2.height == 2
    assert act(t2, ((0,), (0,))) == ((0,), (1,))
