"""JSON interchange formats for signatures, morphisms, translations,
candidates, nilpairs, signals and nilcharacters.

Rationals are serialized as "p/q" strings; cube values are listed in vertex
bitmask order (index = sum v_i 2^(i-1), v_1 the least significant bit), which
is part of the format contract.
"""

from __future__ import annotations

from fractions import Fraction

import numpy as np

from .core import (INT, RAT, RES, NilspaceError, Signature, Slot,
                   free_signature)
from .filtered import FilteredGroupSpec, closure, group_from_table, unitriangular
from .morphisms import MultiIndex, PolyMorphism, TableMorphism
from .translations import Translation
from .congruences import FiberTransitiveCandidate
from .double_cosets import Nilpair
from .gowers import FiniteAbelianGroup, Nilcharacter, SignalTable, e


# ---------------------------------------------------------------------------
# scalars


def encode_scalar(x):
    if isinstance(x, Fraction):
        return f"{x.numerator}/{x.denominator}"
    if isinstance(x, bool):
        return x
    return int(x)


def decode_scalar(v):
    if isinstance(v, str):
        if "/" not in v:
            raise NilspaceError("parse-error", f"bad rational literal {v!r}")
        num, den = v.split("/", 1)
        return Fraction(int(num), int(den))
    if isinstance(v, (int, float)) and int(v) == v:
        return int(v)
    raise NilspaceError("parse-error", f"bad scalar {v!r}")


# ---------------------------------------------------------------------------
# signatures and points


def slot_to_json(s: Slot) -> dict:
    out = {"kind": s.kind}
    if s.kind == RES:
        out["modulus"] = s.modulus
    return out


def slot_from_json(obj) -> Slot:
    if obj["kind"] == RES:
        return Slot(RES, int(obj["modulus"]))
    return Slot(obj["kind"])


def signature_to_json(sig: Signature) -> dict:
    return {"k": sig.k,
            "degrees": [[slot_to_json(s) for s in sig.slots(i)]
                        for i in range(1, sig.k + 1)]}


def signature_from_json(obj) -> Signature:
    if "degrees" in obj:
        return Signature(tuple(tuple(slot_from_json(s) for s in deg)
                               for deg in obj["degrees"]))
    if "moduli" in obj:
        return Signature(tuple(tuple(Slot(RES, int(m)) for m in deg)
                               for deg in obj["moduli"]))
    if "discrete" in obj or "continuous" in obj:
        disc = obj.get("discrete") or [0] * len(obj.get("continuous", []))
        cont = obj.get("continuous") or [0] * len(disc)
        return free_signature(disc, cont)
    raise NilspaceError("parse-error", "unrecognized signature description")


def point_to_json(p):
    return [[encode_scalar(x) for x in comp] for comp in p]


def point_from_json(obj, sig: Signature):
    p = tuple(tuple(decode_scalar(x) for x in comp) for comp in obj)
    return sig.reduce_point(p)


def cube_to_json(values, n: int) -> dict:
    return {"n": n, "values": [point_to_json(p) for p in values]}


def cube_from_json(obj, sig: Signature):
    n = int(obj["n"])
    values = tuple(point_from_json(p, sig) for p in obj["values"])
    if len(values) != 1 << n:
        raise NilspaceError("parse-error",
                            f"cube of dimension {n} needs {1 << n} vertices")
    return values, n


# ---------------------------------------------------------------------------
# morphisms and translations


def _target_to_json(phi) -> dict:
    return {"slots": [slot_to_json(s) for s in phi.target_slots],
            "degree": phi.target_degree}


def morphism_to_json(phi) -> dict:
    out = {"source": signature_to_json(phi.source),
           "target": _target_to_json(phi)}
    if isinstance(phi, TableMorphism):
        out["table"] = [[encode_scalar(x) for x in v] for v in phi.table]
    else:
        out["coeffs"] = [
            {"index": {f"({i},{j})": exp for (i, j), exp in idx.as_dict().items()},
             "value": [encode_scalar(x) for x in val]}
            for idx, val in phi.coeffs]
    return out


def _parse_index_key(key: str):
    inner = key.strip()
    if not (inner.startswith("(") and inner.endswith(")")):
        raise NilspaceError("parse-error", f"bad index key {key!r}")
    i, j = inner[1:-1].split(",")
    return int(i), int(j)


def morphism_from_json(obj):
    source = signature_from_json(obj["source"])
    target = obj["target"]
    slots = tuple(slot_from_json(s) for s in target["slots"])
    degree = int(target["degree"])
    if "table" in obj:
        table = tuple(tuple(decode_scalar(x) for x in v) for v in obj["table"])
        return TableMorphism(source, slots, degree, table)
    coeffs = {}
    for entry in obj.get("coeffs", []):
        idx = MultiIndex.make({_parse_index_key(k): int(v)
                               for k, v in entry["index"].items()})
        coeffs[idx] = tuple(decode_scalar(x) for x in entry["value"])
    return PolyMorphism.make(source, slots, degree, coeffs)


def translation_to_json(t: Translation) -> dict:
    return {"space": signature_to_json(t.space),
            "height": t.height,
            "components": [morphism_to_json(c) for c in t.components]}


def translation_from_json(obj, space: Signature | None = None) -> Translation:
    if space is None:
        space = signature_from_json(obj["space"])
    comps = tuple(morphism_from_json(c) for c in obj["components"])
    return Translation(space, int(obj["height"]), comps)


# ---------------------------------------------------------------------------
# fiber-transitive candidates


def candidate_to_json(c: FiberTransitiveCandidate) -> dict:
    out = {"base": signature_to_json(c.base),
           "generators": [translation_to_json(g) for g in c.generators]}
    if c.filtration is not None:
        out["filtration"] = {str(lvl): list(idxs) for lvl, idxs in c.filtration}
    if c.divisible_degrees:
        out["divisible_degrees"] = sorted(c.divisible_degrees)
    return out


def candidate_from_json(obj) -> FiberTransitiveCandidate:
    base = signature_from_json(obj["base"])
    gens = tuple(translation_from_json(g, base) for g in obj["generators"])
    filtration = None
    if "filtration" in obj:
        filtration = tuple(sorted((int(lvl), tuple(idxs))
                                  for lvl, idxs in obj["filtration"].items()))
    divisible = frozenset(int(d) for d in obj.get("divisible_degrees", []))
    return FiberTransitiveCandidate(base, gens, filtration, divisible)


# ---------------------------------------------------------------------------
# filtered groups and nilpairs


def group_from_json(obj) -> FilteredGroupSpec:
    if "unitriangular" in obj:
        spec = obj["unitriangular"]
        if int(spec.get("size", 3)) != 3:
            raise NilspaceError("parse-error",
                                "only 3x3 unitriangular groups are supported")
        return unitriangular(int(spec["modulus"]))
    if "table" in obj:
        spec = obj["table"]
        elements = [tuple(x) for x in spec["elements"]]
        table = {(tuple(a), tuple(b)): tuple(v)
                 for a, b, v in spec["products"]}
        filtration = [[tuple(x) for x in term] for term in spec["filtration"]]
        return group_from_table(elements, table, tuple(spec["identity"]),
                                filtration)
    raise NilspaceError("parse-error", "unrecognized group description")


def nilpair_from_json(obj) -> Nilpair:
    G = group_from_json(obj["group"])
    def subgroup(gens):
        gens = [tuple(g) for g in gens]
        return frozenset(closure(gens + [G.identity], G.mul, G.inv))
    return Nilpair(G, subgroup(obj.get("left", [])),
                   subgroup(obj.get("right", [])))


# ---------------------------------------------------------------------------
# signals and nilcharacters


def signal_to_json(f: SignalTable) -> dict:
    flat = f.values.reshape(-1)
    return {"group": list(f.group.factors),
            "values": [[float(v.real), float(v.imag)] for v in flat],
            "bounded": f.bounded}


def signal_from_json(obj) -> SignalTable:
    group = FiniteAbelianGroup(tuple(int(k) for k in obj["group"]))
    vals = np.array([complex(re, im) for re, im in obj["values"]])
    if vals.size != group.size:
        raise NilspaceError("parse-error",
                            f"expected {group.size} values, got {vals.size}")
    return SignalTable(group, vals.reshape(group.factors),
                       bounded=bool(obj.get("bounded", True)))


def nilcharacter_from_json(obj) -> Nilcharacter:
    source = signature_from_json(obj["source"])
    comps = tuple(morphism_from_json(c) for c in obj["components"])
    action = candidate_from_json(obj["action"])
    window = obj["window"]
    if "e_of" in window:
        i, j = (int(x) for x in window["e_of"])
        scale = decode_scalar(window.get("scale", 1))
        fn = lambda rep: e(scale * rep[i - 1][j])
    else:
        raise NilspaceError("parse-error", "unsupported window description")
    return Nilcharacter(source, comps, action, fn,
                        window_bound=float(window.get("bound", 1.0)))


# ---------------------------------------------------------------------------
# reports


def to_jsonable(obj):
    """Best-effort conversion of report structures to JSON-safe values."""
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (set, frozenset)):
        return sorted(to_jsonable(v) for v in obj)
    if isinstance(obj, Fraction):
        return encode_scalar(obj)
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, np.ndarray):
        return to_jsonable(obj.tolist())
    if isinstance(obj, Signature):
        return signature_to_json(obj)
    if isinstance(obj, Translation):
        return to_jsonable(translation_to_json(obj))
    if isinstance(obj, (PolyMorphism, TableMorphism)):
        return to_jsonable(morphism_to_json(obj))
    if obj is None or isinstance(obj, (bool, int, float, str)):
        return obj
    return repr(obj)
