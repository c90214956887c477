"""Batch front end: run checker suites and emit text and JSON reports.

Exit codes: 0 when every check passes, 1 on any failure, 2 on usage or
parse errors, 3 when some check is inconclusive and none failed.  Checks
reported out-of-scope do not affect the exit code.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Optional

from . import hf
from .checks import FAIL, INCONCLUSIVE, OUT_OF_SCOPE, PASS, SMALL_MAP_AXIOMS, ALL_AXIOMS, to_jsonable
from .classes import parse_class
from .core import Scope, map_with_profile

SCHEMA = 1
EXIT_OK, EXIT_FAIL, EXIT_USAGE, EXIT_INCONCLUSIVE = 0, 1, 2, 3


class UsageError(Exception):
    pass


@dataclass
class Record:
    id: str
    status: str
    witness: object = None
    counterexample: object = None
    note: str = ""
    wall_time: float = 0.0

    def to_json(self) -> dict:
        return {"id": self.id, "status": self.status, "witness": to_jsonable(self.witness),
                "counterexample": to_jsonable(self.counterexample), "note": self.note,
                "wall_time": round(self.wall_time, 6)}


@dataclass
class Report:
    command: list
    records: list = field(default_factory=list)
    output: list = field(default_factory=list)  # extra human-readable lines

    def sorted_records(self) -> list:
        return sorted(self.records, key=lambda r: r.id)

    @property
    def exit_code(self) -> int:
        statuses = {r.status for r in self.records}
        if FAIL in statuses:
            return EXIT_FAIL
        if INCONCLUSIVE in statuses:
            return EXIT_INCONCLUSIVE
        return EXIT_OK

    def to_json(self) -> dict:
        return {"schema": SCHEMA, "command": self.command, "exit_code": self.exit_code,
                "checks": [r.to_json() for r in self.sorted_records()]}


def _timed(check_id: str, fn: Callable) -> Record:
    t0 = time.perf_counter()
    rec = fn()
    rec.id = rec.id or check_id
    rec.wall_time = time.perf_counter() - t0
    return rec


def _from_axiom_report(r, prefix: str = "") -> Record:
    return Record(prefix + r.axiom, r.status, r.witness, r.counterexample, r.note)


# -- spec files -------------------------------------------------------------------

SPEC_KEYS = {"scope", "class", "axioms", "representation", "signature", "depth", "rank",
             "formula", "formulas", "env", "function", "codomain", "timeout", "jobs"}
SCOPE_KEYS = {"max_size"}


def load_spec(path: str) -> dict:
    try:
        with open(path) as fh:
            data = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise UsageError(f"cannot read spec file {path}: {exc}") from None
    if not isinstance(data, dict):
        raise UsageError("spec file must hold a JSON object")
    unknown = set(data) - SPEC_KEYS
    if unknown:
        raise UsageError(f"unknown spec key(s): {', '.join(sorted(unknown))}")
    if "class" in data:
        data["cls"] = data.pop("class")
    scope = data.get("scope")
    if isinstance(scope, dict):
        bad = set(scope) - SCOPE_KEYS
        if bad:
            raise UsageError(f"unknown scope key(s): {', '.join(sorted(bad))}")
        data["scope"] = scope.get("max_size", 3)
    if "scope" in data and not isinstance(data["scope"], int):
        raise UsageError("scope must be an integer or {\"max_size\": int}")
    if "signature" in data and isinstance(data["signature"], list):
        data["signature"] = ",".join(str(v) for v in data["signature"])
    if "axioms" in data and isinstance(data["axioms"], list):
        data["axioms"] = ",".join(data["axioms"])
    if "formulas" in data:
        if "formula" in data:
            raise UsageError("give either formula or formulas, not both")
        data["formula"] = data.pop("formulas")
    if "env" in data:
        if not isinstance(data["env"], dict):
            raise UsageError("env must map variable names to set literals")
        data["env"] = [f"{k}={v}" for k, v in data["env"].items()]
    return data


def _merge(args: argparse.Namespace, defaults: dict) -> None:
    """Fill unset flags from the spec file; explicit flags win."""
    spec = load_spec(args.spec) if args.spec else {}
    for key, value in spec.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)
    for key, value in defaults.items():
        if getattr(args, key, None) is None:
            setattr(args, key, value)


def _class(args) -> MapClass:
    try:
        return parse_class(args.cls)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def _int_list(text: str, what: str) -> list[int]:
    try:
        return [int(v) for v in str(text).split(",") if v.strip()]
    except ValueError:
        raise UsageError(f"{what} must be a comma-separated list of integers") from None


def _set_literal(text: str, what: str) -> hf.HFSet:
    try:
        return hf.hf(text)
    except SyntaxError as exc:
        raise UsageError(f"{what}: {exc}") from None


# -- subcommands ----------------------------------------------------------------------

def cmd_check_axioms(args, report: Report) -> None:
    from .checks import check_axioms

    _merge(args, {"cls": "fiber:2", "scope": 3, "axioms": ",".join(SMALL_MAP_AXIOMS)})
    cls, scope = _class(args), Scope(args.scope)
    which = [a.strip() for a in str(args.axioms).split(",") if a.strip()]
    unknown = [a for a in which if a not in ALL_AXIOMS]
    if unknown:
        raise UsageError(f"unknown axiom(s): {', '.join(unknown)}")

    def one(axiom):
        return lambda: _from_axiom_report(check_axioms(cls, scope, (axiom,), timeout=args.timeout)[0])

    with ThreadPoolExecutor(max_workers=max(1, args.jobs or 1)) as pool:
        futures = [pool.submit(_timed, a, one(a)) for a in which]
        report.records.extend(f.result() for f in futures)
    report.output.append(f"class {cls} on scope {scope.max_size}")


def cmd_scov(args, report: Report) -> None:
    from .checks import scov, scov_comparison

    _merge(args, {"cls": "fiber:2", "scope": 3})
    cls, scope = _class(args), Scope(args.scope)

    def display():
        res = scov(cls, scope)
        failing = [r.axiom for r in res.display_reports if not r.passed]
        return Record("display", PASS if res.is_display else FAIL,
                      witness={"covered_class": str(res.cls)} if res.is_display else None,
                      counterexample={"failing": failing} if failing else None,
                      note=f"closure {res.cls}")

    def closure():
        rows = scov_comparison(cls, scope)
        missing = [r for r in rows if r["covered"] and r["witness"] is None]
        extra = [r for r in rows if r["witness"] is not None and not r["covered"]]
        covered = sum(1 for r in rows if r["covered"])
        status = PASS if not missing and not extra else FAIL
        bad = (missing or extra or [None])[0]
        return Record("closure", status,
                      witness={"maps": len(rows), "covered": covered, "in_class": sum(r["in_class"] for r in rows)},
                      counterexample=None if status == PASS else {"map": bad["map"]},
                      note="every covered map has an explicit verified covering square")

    # the display verdict is informational: a non-display input still has a closure
    rec = _timed("display", display)
    if rec.status == FAIL:
        rec.status, rec.note = OUT_OF_SCOPE, rec.note + "; input is not a display class"
    report.records.append(rec)
    report.records.append(_timed("closure", closure))


def cmd_represent(args, report: Report) -> None:
    from .represent import check_representation, check_universal, pi_k, universal_small_map

    _merge(args, {"cls": "fiber:2", "scope": 3, "representation": None})
    cls, scope = _class(args), Scope(args.scope)
    k = args.representation if args.representation is not None else cls.fiber_bound_value()
    if k is None:
        raise UsageError("--representation is required for classes without a fibre bound")
    rep = pi_k(int(k))
    report.records.append(_timed("representation", lambda: _from_axiom_report(check_representation(rep, cls, scope))))
    rep2 = universal_small_map(rep)
    report.records.append(_timed("universal", lambda: _from_axiom_report(check_universal(rep2, cls, scope))))


def cmd_complete(args, report: Report) -> None:
    from .exreg import completion_report

    _merge(args, {"cls": "fiber:2", "scope": 3})
    cls, scope = _class(args), Scope(args.scope)
    t0 = time.perf_counter()
    for r in completion_report(scope, cls):
        report.records.append(_from_axiom_report(r))
    for rec in report.records:
        rec.wall_time = time.perf_counter() - t0


def cmd_wtypes(args, report: Report) -> None:
    from . import wtypes
    from .represent import pi_k

    _merge(args, {"signature": "1,2", "depth": 3, "representation": 2})
    sizes = _int_list(args.signature, "--signature")
    sig = wtypes.PolySig.from_sizes(sizes)
    depth = int(args.depth)

    def count():
        n = len(wtypes.wtype_enum(sig, depth))
        m = wtypes.wtype_count(sig, depth)
        return Record("count", PASS if n == m else FAIL, {"trees": n},
                      None if n == m else {"enumerated": n, "recurrence": m})

    def lambek():
        ok = wtypes.lambek_bijective(sig, depth)
        return Record("lambek", PASS if ok else FAIL, {"depth": depth} if ok else None,
                      None if ok else {"depth": depth})

    def span():
        f = map_with_profile(sizes)
        q = wtypes.wtype_via_span(wtypes.collection_span(f, pi_k(int(args.representation))), depth)
        via, direct = q.counts
        ok = q.in_bijection
        return Record("span", PASS if ok else FAIL, {"classes": via, "direct": direct} if ok else None,
                      None if ok else {"classes": via, "direct": direct},
                      note=f"{len(q.reflexive)} reflexive trees over the span")

    for cid, fn in (("count", count), ("lambek", lambek), ("span", span)):
        report.records.append(_timed(cid, fn))


def cmd_build_v(args, report: Report) -> None:
    from .represent import pi_k
    from .settheory import build_v

    _merge(args, {"rank": 4, "representation": None, "depth": None})
    n = int(args.rank)
    if n < 0:
        raise UsageError("--rank must be non-negative")

    def universe():
        V = hf.universe(n)
        transitive = all(c in set(V) for v in V for c in v.children)
        expected = 0 if n == 0 else 1
        for _ in range(n - 1):
            expected = 2 ** expected
        ok = transitive and len(V) == expected
        return Record("universe", PASS if ok else FAIL, {"size": len(V)} if ok else None,
                      None if ok else {"size": len(V), "expected": expected, "transitive": transitive})

    report.records.append(_timed("universe", universe))
    if args.representation is not None:
        depth = int(args.depth if args.depth is not None else max(n - 1, 0))

        def via_trees():
            built = build_v(pi_k(int(args.representation)), depth)
            ok = set(built) <= set(hf.universe(depth + 1))
            return Record("build-v", PASS if ok else FAIL, {"size": len(built), "depth": depth} if ok else None,
                          None if ok else {"outside_universe": len(set(built) - set(hf.universe(depth + 1)))})
        report.records.append(_timed("build-v", via_trees))
    if args.stats:
        report.output.append(f"|V_{n}| = {len(hf.universe(n))}")


def cmd_eval(args, report: Report) -> None:
    from .formula import FormulaSyntaxError, RankError, UnboundVariable, evaluate, is_bounded, parse_formula

    _merge(args, {"rank": 3, "formula": None, "env": []})
    if not args.formula:
        raise UsageError("--formula is required")
    formulas = args.formula if isinstance(args.formula, list) else [args.formula]
    env = {}
    for item in args.env:
        name, sep, lit = item.partition("=")
        if not sep or not name.strip():
            raise UsageError(f"--env expects name=literal, got {item!r}")
        env[name.strip()] = _set_literal(lit, f"--env {name}")
    n = int(args.rank)
    for i, text in enumerate(formulas):
        try:
            phi = parse_formula(text)
            t0 = time.perf_counter()
            value = evaluate(phi, env, n)
        except (FormulaSyntaxError, UnboundVariable, RankError) as exc:
            raise UsageError(f"formula {text!r}: {exc}") from None
        note = "" if is_bounded(phi) else f"unbounded quantifiers range over V_{n}"
        rec = Record(f"formula-{i:03d}", PASS if value else FAIL,
                     {"formula": text, "value": True} if value else None,
                     None if value else {"formula": text, "value": False}, note,
                     time.perf_counter() - t0)
        report.records.append(rec)
        report.output.append("true" if value else "false")


def cmd_fullness(args, report: Report) -> None:
    from .settheory import ParamError, check_axiom

    _merge(args, {"function": None, "codomain": None, "rank": 4})
    if not args.function:
        raise UsageError("--function is required")
    params = {"f": _set_literal(args.function, "--function")}
    if args.codomain:
        params["a"] = _set_literal(args.codomain, "--codomain")
    try:
        r = check_axiom("fullness", int(args.rank), params)
    except ParamError as exc:
        raise UsageError(str(exc)) from None
    report.records.append(Record("fullness", r.verdict, r.witness, r.counterexample, r.note))
    if r.witness is not None:
        report.output.append(hf.show(r.witness))


COMMANDS = {
    "check-axioms": cmd_check_axioms,
    "scov": cmd_scov,
    "represent": cmd_represent,
    "complete": cmd_complete,
    "wtypes": cmd_wtypes,
    "build-v": cmd_build_v,
    "eval": cmd_eval,
    "fullness": cmd_fullness,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--spec", help="restricted JSON spec file; flags override its values")
    common.add_argument("--json", metavar="PATH", help="write the JSON report here")
    common.add_argument("--timeout", type=float, default=None, help="soft per-check limit in seconds")
    common.add_argument("--jobs", type=int, default=None, help="run checks concurrently")

    parser = argparse.ArgumentParser(prog="smallmaps", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def with_class(p):
        p.add_argument("--class", dest="cls", default=None, help="fiber:K, monos, isos, all, projfiber:1,2")
        p.add_argument("--scope", type=int, default=None, help="largest object size")

    p = sub.add_parser("check-axioms", parents=[common], help="decide axioms for a class")
    with_class(p)
    p.add_argument("--axioms", default=None, help="comma-separated axiom ids (default A1-A9)")

    p = sub.add_parser("scov", parents=[common], help="cover-closure with witness squares")
    with_class(p)

    p = sub.add_parser("represent", parents=[common], help="check a representation and the universal small map")
    with_class(p)
    p.add_argument("--representation", type=int, default=None, help="use pi_k with fibres of size 0..k")

    p = sub.add_parser("complete", parents=[common], help="exact completion report")
    with_class(p)

    p = sub.add_parser("wtypes", parents=[common], help="W-type enumeration and span reduction")
    p.add_argument("--signature", default=None, help="fibre sizes, e.g. 1,2")
    p.add_argument("--depth", type=int, default=None)
    p.add_argument("--representation", type=int, default=None)

    p = sub.add_parser("build-v", parents=[common], help="the universe V_n")
    p.add_argument("--rank", type=int, default=None)
    p.add_argument("--stats", action="store_true")
    p.add_argument("--representation", type=int, default=None, help="also collapse trees over pi_k")
    p.add_argument("--depth", type=int, default=None)

    p = sub.add_parser("eval", parents=[common], help="evaluate a formula in V_n")
    p.add_argument("--rank", type=int, default=None)
    p.add_argument("--formula", action="append", default=None)
    p.add_argument("--env", action="append", default=None, help="name={literal}")

    p = sub.add_parser("fullness", parents=[common], help="full set of multi-valued sections")
    p.add_argument("--function", default=None, help="function as a set of Kuratowski pairs")
    p.add_argument("--codomain", default=None)
    p.add_argument("--rank", type=int, default=None)
    return parser


def _echo(argv: list[str]) -> list[str]:
    """The command as recorded in the report; the output path is left out so
    identical runs give identical JSON."""
    out, skip = [], False
    for tok in argv:
        if skip:
            skip = False
        elif tok == "--json":
            skip = True
        elif not tok.startswith("--json="):
            out.append(tok)
    return out


def run(argv: list[str]) -> tuple[int, Optional[Report]]:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return (EXIT_USAGE if exc.code else EXIT_OK), None
    report = Report(command=_echo(argv))
    try:
        COMMANDS[args.command](args, report)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE, None
    for rec in report.sorted_records():
        line = f"{rec.id}: {rec.status}"
        if rec.note:
            line += f"  ({rec.note})"
        print(line)
    for line in report.output:
        print(line)
    if args.json:
        with open(args.json, "w") as fh:
            json.dump(report.to_json(), fh, indent=2, sort_keys=True)
            fh.write("\n")
    return report.exit_code, report


def main(argv: Optional[list[str]] = None) -> int:
    code, _ = run(sys.argv[1:] if argv is None else argv)
    return code


if __name__ == "__main__":
    sys.exit(main())
