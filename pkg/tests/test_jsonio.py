"""Round-trips through the JSON interchange formats."""

import json
from fractions import Fraction

import pytest

from nilspacekit import jsonio
from nilspacekit.core import (NilspaceError, Slot, free_signature,
                              residue_signature)
from nilspacekit.corpus import (plus_two_shift_candidate,
                                quadratic_nilcharacter, shear_translation)
from nilspacekit.gowers import FiniteAbelianGroup, SignalTable, nilcharacter_eval


def test_scalar_roundtrip():
    assert jsonio.decode_scalar(jsonio.encode_scalar(Fraction(3, 7))) == Fraction(3, 7)
    assert jsonio.decode_scalar(jsonio.encode_scalar(5)) == 5
    with pytest.raises(NilspaceError):
        jsonio.decode_scalar("abc")
    with pytest.raises(NilspaceError):
        jsonio.decode_scalar(1.5)


def test_signature_roundtrip_and_aliases():
    for sig in (residue_signature([[2], [2]]), free_signature([1, 0], [0, 1])):
        assert jsonio.signature_from_json(jsonio.signature_to_json(sig)) == sig
    assert jsonio.signature_from_json({"moduli": [[2], [3]]}) \
        == residue_signature([[2], [3]])
    assert jsonio.signature_from_json({"discrete": [1, 1]}) \
        == free_signature([1, 1])


def test_point_and_cube_roundtrip():
    sig = residue_signature([[2], [2]])
    p = ((1,), (1,))
    assert jsonio.point_from_json(jsonio.point_to_json(p), sig) == p
    from nilspacekit.cubes import enumerate_cubes
    q = enumerate_cubes(sig, 2)[17]
    values, n = jsonio.cube_from_json(jsonio.cube_to_json(q, 2), sig)
    assert values == q and n == 2
    with pytest.raises(NilspaceError):
        jsonio.cube_from_json({"n": 2, "values": [jsonio.point_to_json(p)]}, sig)


def test_morphism_roundtrip_poly_and_table():
    sig = free_signature([1])
    from nilspacekit.morphisms import MultiIndex, PolyMorphism, TableMorphism
    phi = PolyMorphism.make(sig, (Slot("rationals"),), 2,
                            {MultiIndex.make({(1, 1): 2}): (Fraction(1, 3),)})
    assert jsonio.morphism_from_json(jsonio.morphism_to_json(phi)) == phi
    fin = residue_signature([[2]])
    tab = TableMorphism(fin, (Slot("residues", 2),), 1, ((0,), (1,)))
    assert jsonio.morphism_from_json(jsonio.morphism_to_json(tab)) == tab


def test_translation_and_candidate_roundtrip():
    sig = residue_signature([[2], [2]])
    t = shear_translation(sig, 1)
    assert jsonio.translation_from_json(jsonio.translation_to_json(t)) == t
    c = plus_two_shift_candidate()
    back = jsonio.candidate_from_json(jsonio.candidate_to_json(c))
    assert back == c


def test_group_and_nilpair_parsing():
    obj = {"group": {"unitriangular": {"size": 3, "modulus": 2}},
           "left": [[1, 0, 0]], "right": [[0, 0, 1]]}
    pair = jsonio.nilpair_from_json(obj)
    assert pair.left == frozenset([(0, 0, 0), (1, 0, 0)])
    assert pair.right == frozenset([(0, 0, 0), (0, 0, 1)])
    with pytest.raises(NilspaceError):
        jsonio.group_from_json({"unitriangular": {"size": 4, "modulus": 2}})


def test_signal_roundtrip():
    G = FiniteAbelianGroup((4,))
    f = SignalTable(G, [1, -1, 1j, -1j])
    back = jsonio.signal_from_json(jsonio.signal_to_json(f))
    assert back == f
    with pytest.raises(NilspaceError):
        jsonio.signal_from_json({"group": [4], "values": [[1, 0]]})


def test_nilcharacter_roundtrip_evaluates_identically():
    chi = quadratic_nilcharacter(8, 1)
    obj = {
        "source": jsonio.signature_to_json(chi.source),
        "components": [jsonio.morphism_to_json(c) for c in chi.components],
        "action": jsonio.candidate_to_json(chi.action),
        "window": {"e_of": [2, 0], "scale": 1},
    }
    back = jsonio.nilcharacter_from_json(obj)
    for x in range(8):
        assert abs(nilcharacter_eval(back, (x,))
                   - nilcharacter_eval(chi, (x,))) < 1e-12


def test_to_jsonable_is_json_serializable():
    payload = jsonio.to_jsonable({
        "frac": Fraction(1, 2),
        "cplx": 1 + 2j,
        "set": {3, 1, 2},
        "sig": residue_signature([[2]]),
        "nested": [(1, Fraction(2, 3))],
    })
    text = json.dumps(payload, sort_keys=True)
    assert "1/2" in text and "2/3" in text
