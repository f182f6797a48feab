"""Command-line front end.

Subcommands map one-to-one onto the library workflows; inputs are JSON files
in the interchange formats of `jsonio` and outputs are reports, printed as a
small table on a terminal or as JSON with --json / when redirected.  Exit
codes: 0 pass, 1 fail (a witness is included), 2 usage or parse error,
3 budget exceeded.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from importlib import resources

from .core import BudgetExceeded, DEFAULT_BUDGET, NilspaceError
from .congruences import (check_fiber_transitive, continuous_closure_embed,
                          cubespace_from_quotient, cubespace_from_signature,
                          fiber_transitive_closure, quotient,
                          verify_nilspace_axioms)
from .double_cosets import (double_coset_build, nilpair_condition,
                            stabilizer_representation)
from .gowers import correlation, gowers_norm, natural_surjection
from .morphisms import is_morphism, taylor_decompose
from .translations import act, is_translation_bruteforce, lift_translation
from . import jsonio
from .corpus import CORPUS_NAMES, build_corpus

GOLDEN_PACKAGE = "nilspacekit.golden"


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("NILSPACE_KIT_THREADS", "1")))
    except ValueError:
        return 1


def _load(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def _emit(report: dict, args) -> None:
    text_mode = not args.json and args.out is None and sys.stdout.isatty()
    if text_mode:
        width = max(len(k) for k in report)
        for key, value in report.items():
            if isinstance(value, (dict, list)):
                value = json.dumps(value, sort_keys=True)
            print(f"{key.ljust(width)}  {value}")
    else:
        payload = json.dumps(report, indent=2, sort_keys=True)
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(payload + "\n")
        else:
            print(payload)


def _report(command: str, status: str, args, started: float, **fields) -> dict:
    out = {"command": command, "status": status}
    out.update(jsonio.to_jsonable(fields))
    out["budget"] = args.budget
    out["timing"] = round(time.time() - started, 6)
    return out


# ---------------------------------------------------------------------------
# subcommand handlers: return (status, fields)


def _cmd_verify_nilspace(args, data):
    if "candidate" in data:
        c = jsonio.candidate_from_json(data["candidate"])
        q = quotient(c, budget=args.budget, dim_cap=args.dim_cap)
        cs = cubespace_from_quotient(q)
        step = c.base.k
    else:
        sig = jsonio.signature_from_json(data["signature"])
        dims = args.dim_cap if args.dim_cap is not None else sig.k + 1
        cs = cubespace_from_signature(sig, dims, budget=args.budget)
        step = sig.k
    report = verify_nilspace_axioms(cs, step=step)
    ok = all(part["pass"] for part in report.values())
    return ("pass" if ok else "fail"), {"axioms": report}


def _cmd_verify_translation(args, data):
    sig = jsonio.signature_from_json(data["signature"])
    t = jsonio.translation_from_json(data["translation"], sig)
    if sig.is_finite:
        ok, witness = is_translation_bruteforce(
            sig, lambda p: act(t, p), t.height, budget=args.budget)
        return ("pass" if ok else "fail"), {"height": t.height,
                                            "witness": witness}
    for i in range(t.height, sig.k + 1):
        comp = t.component(i)
        ok, reason = is_morphism(comp)
        if not ok or comp.target_degree != i - t.height:
            return "fail", {"height": t.height,
                            "witness": {"degree": i, "reason": reason}}
    return "pass", {"height": t.height, "witness": None}


def _cmd_taylor(args, data):
    sig = jsonio.signature_from_json(data["signature"])
    slots = tuple(jsonio.slot_from_json(s) for s in data["target"]["slots"])
    degree = int(data["target"]["degree"])
    table = {jsonio.point_from_json(p, sig):
             tuple(jsonio.decode_scalar(x) for x in v)
             for p, v in data["samples"]}

    def fn(p):
        if p not in table:
            raise NilspaceError("parse-error",
                                f"samples do not cover the box point {p}")
        return table[p]

    phi = taylor_decompose(fn, sig, slots, degree)
    return "pass", {"morphism": jsonio.morphism_to_json(phi)}


def _cmd_lift(args, data):
    t = jsonio.translation_from_json(data["translation"])
    lifted = lift_translation(t)
    return "pass", {"lifted": jsonio.translation_to_json(lifted)}


def _cmd_quotient(args, data):
    c = jsonio.candidate_from_json(data["candidate"] if "candidate" in data
                                   else data)
    ok, witness = check_fiber_transitive(c, budget=args.budget)
    if not ok:
        return "fail", {"fiber_transitive": False, "witness": witness}
    q = quotient(c, budget=args.budget, dim_cap=args.dim_cap)
    return "pass", {"fiber_transitive": True,
                    "representatives": [jsonio.point_to_json(r) for r in q.reps],
                    "structure_groups": [list(g) for g in q.structure_groups]}


def _cmd_closure(args, data):
    c = jsonio.candidate_from_json(data["candidate"] if "candidate" in data
                                   else data)
    if c.base.is_finite:
        gens = fiber_transitive_closure(c, budget=args.budget)
        return "pass", {"kind": "fiber-transitive-closure",
                        "size": len(gens)}
    star, lifted, report = continuous_closure_embed(c)
    return ("pass" if report["injective"] else "fail"), {
        "kind": "continuous-closure-embed",
        "signature": jsonio.signature_to_json(star),
        "injective": report["injective"],
        "representatives": report["representatives"]}


def _cmd_nilpair(args, data):
    pair = jsonio.nilpair_from_json(data)
    which = data.get("condition", "both")
    results = {}
    ok = True
    for cond in (("i", "ii") if which == "both" else (which,)):
        holds, witness = nilpair_condition(pair, cond)
        results[f"condition_{cond}"] = {"holds": holds, "witness": witness}
        ok = ok and holds
    return ("pass" if ok else "fail"), results


def _cmd_doublecoset(args, data):
    pair = jsonio.nilpair_from_json(data)
    space = double_coset_build(pair, dim_cap=args.dim_cap, budget=args.budget)
    axioms = verify_nilspace_axioms(space.cubespace())
    ok = space.verified and all(part["pass"] for part in axioms.values())
    return ("pass" if ok else "fail"), {
        "points": len(space.reps),
        "cube_set_sizes": [len(s) for s in space.cube_sets],
        "verified_groupable": space.verified,
        "axioms": axioms}


def _cmd_stabilizer(args, data):
    sig = jsonio.signature_from_json(data["signature"])
    report = stabilizer_representation(sig, dim_cap=args.dim_cap,
                                       budget=args.budget)
    report.pop("space")
    return ("pass" if report["pass"] else "fail"), report


def _cmd_gowers(args, data):
    f = jsonio.signal_from_json(data["signal"] if "signal" in data else data)
    norm = gowers_norm(f, args.degree, budget=args.budget)
    return "pass", {"norm": norm, "d": args.degree}


def _cmd_correlate(args, data):
    f = jsonio.signal_from_json(data["signal"])
    chi = jsonio.nilcharacter_from_json(data["nilcharacter"])
    value = correlation(f, chi, natural_surjection(f.group))
    return "pass", {"correlation": value}


def _cmd_examples(args, data):
    corpus = build_corpus()
    diffs = []
    for name in CORPUS_NAMES:
        resource = resources.files(GOLDEN_PACKAGE).joinpath(f"{name}.json")
        if not resource.is_file():
            diffs.append({"entry": name, "problem": "golden file missing"})
            continue
        committed = json.loads(resource.read_text(encoding="utf-8"))
        if committed != corpus[name]:
            diffs.append({"entry": name, "problem": "content differs"})
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for name in CORPUS_NAMES:
            path = os.path.join(args.out, f"{name}.json")
            with open(path, "w", encoding="utf-8") as fh:
                json.dump(corpus[name], fh, indent=2, sort_keys=True)
                fh.write("\n")
    return ("pass" if not diffs else "fail"), {
        "entries": list(CORPUS_NAMES), "diffs": diffs,
        "witness": diffs or None}


_HANDLERS = {
    "verify-nilspace": (_cmd_verify_nilspace, True),
    "verify-translation": (_cmd_verify_translation, True),
    "taylor": (_cmd_taylor, True),
    "lift": (_cmd_lift, True),
    "quotient": (_cmd_quotient, True),
    "closure": (_cmd_closure, True),
    "nilpair": (_cmd_nilpair, True),
    "doublecoset": (_cmd_doublecoset, True),
    "stabilizer": (_cmd_stabilizer, True),
    "gowers": (_cmd_gowers, True),
    "correlate": (_cmd_correlate, True),
    "examples": (_cmd_examples, False),
}


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="nilspace-kit",
        description="Exact computations on cube structures, translations, "
                    "quotients, double cosets and Gowers norms.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_fn, needs_input) in _HANDLERS.items():
        p = sub.add_parser(name)
        if needs_input:
            p.add_argument("input", help="path to a JSON input file")
        p.add_argument("--json", action="store_true",
                       help="force JSON output")
        p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                       help="enumeration budget")
        p.add_argument("--dim-cap", type=int, default=None,
                       help="cube dimension cap")
        p.add_argument("--seed", type=int, default=0,
                       help="seed for randomized checks")
        p.add_argument("--out", default=None,
                       help="write output to this path")
        if name == "gowers":
            p.add_argument("-d", "--degree", type=int, default=2,
                           help="Gowers norm degree")
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    os.environ.setdefault("OMP_NUM_THREADS", str(_threads()))
    handler, needs_input = _HANDLERS[args.command]
    started = time.time()
    try:
        data = _load(args.input) if needs_input else {}
        status, fields = handler(args, data)
    except (OSError, json.JSONDecodeError) as exc:
        _emit(_report(args.command, "error", args, started,
                      error=str(exc)), args)
        return 2
    except BudgetExceeded as exc:
        _emit(_report(args.command, "budget-exceeded", args, started,
                      error=str(exc)), args)
        return 3
    except NilspaceError as exc:
        status = "error" if exc.code == "parse-error" else "unsupported"
        _emit(_report(args.command, status, args, started,
                      error=str(exc), code=exc.code,
                      witness=exc.witness), args)
        return 2 if exc.code == "parse-error" else 1
    _emit(_report(args.command, status, args, started, **fields), args)
    return 0 if status == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
