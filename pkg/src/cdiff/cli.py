"""Command-line front end.

Exit codes: 0 success (every prediction confirmed or within its bound),
1 at least one violated prediction, 2 usage or configuration error.

JSON keys and CSV columns are emitted in a fixed order; field elements are
always written as canonical indices.  Power maps use the convention 0^0 = 1.
"""
from __future__ import annotations

import argparse
import json
import math
import os
import sys

from . import conditions
from .errors import CDiffError, SpecParseError
from .field import parse_field_spec
from .harness import (
    CSelector,
    TheoremCase,
    conjecture_check,
    load_grid,
    run_case,
    run_grid,
    search,
    Report,
)
from .spectrum import (
    DEFAULT_BUDGET,
    Budget,
    PowerMap,
    TableMap,
    all_c_sweep,
    cddt_to_csv,
    classify,
    full_cddt,
    spectrum_to_dict,
    uniformity,
)
from .theory import get_rule

THREADS_ENV = "CDIFF_THREADS"


def _threads(value):
    if value is not None:
        return value
    env = os.environ.get(THREADS_ENV)
    if env:
        try:
            return max(1, int(env))
        except ValueError:
            raise SpecParseError(f"{THREADS_ENV} must be an integer, got {env!r}") from None
    return os.cpu_count() or 1


def parse_budget(text: str | None) -> Budget:
    """"N" sets the sweep limit; "sweep=N,ddt=M" sets either or both."""
    if not text:
        return DEFAULT_BUDGET
    sweep, ddt = DEFAULT_BUDGET.sweep_max_q, DEFAULT_BUDGET.ddt_max_q
    try:
        if "=" not in text:
            sweep = int(text)
        else:
            for part in text.split(","):
                key, val = part.split("=")
                if key.strip() == "sweep":
                    sweep = int(val)
                elif key.strip() == "ddt":
                    ddt = int(val)
                else:
                    raise ValueError(key)
    except ValueError:
        raise SpecParseError(f"bad --budget {text!r}; use N or sweep=N,ddt=M") from None
    return Budget(ddt_max_q=ddt, sweep_max_q=sweep)


def parse_c(field, text: str):
    """'all', '-1', an index or a condition name -> list of elements."""
    return CSelector.parse(text).select(field)


def read_table(field, path):
    with open(path) as fh:
        entries = [line.strip() for line in fh if line.strip()]
    try:
        return TableMap(field, [int(e) for e in entries])
    except ValueError as exc:
        raise SpecParseError(f"bad table file {path}: {exc}") from None


def _function(args, field):
    if args.table:
        return read_table(field, args.table)
    if args.d is None:
        raise SpecParseError("one of --d or --table is required")
    return PowerMap(field, args.d)


def _single_c(field, text):
    cs = parse_c(field, text)
    if len(cs) != 1:
        raise SpecParseError(f"--c {text!r} must select exactly one element here")
    return cs[0]


def _emit(args, text):
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _jsonl(objs):
    return "".join(json.dumps(o) + "\n" for o in objs)


# -- commands ---------------------------------------------------------------------

def cmd_field_info(args):
    f = parse_field_spec(args.field)
    info = {"p": f.p, "n": f.n, "q": f.q, "modulus": list(f.modulus),
            "modulus_poly": f.poly_str(), "generator": f.generator.index,
            "spec": f.spec_string()}
    if args.format == "json":
        _emit(args, json.dumps(info) + "\n")
    else:
        _emit(args, "".join(f"{k}: {v}\n" for k, v in info.items()))
    return 0


def _c_note(F, c):
    if c.index == 1:
        return "classical differential uniformity (a != 0)"
    if c.index == 0 and isinstance(F, PowerMap):
        return f"c=0: reduces to the equation (x+a)^d = b; gcd(d,q-1)={math.gcd(F.d, F.field.q - 1)}"
    return ""


def cmd_uniformity(args):
    field = parse_field_spec(args.field)
    F = _function(args, field)
    cs = parse_c(field, args.c)
    rows = all_c_sweep(F, cs, workers=_threads(args.threads), budget=parse_budget(args.budget))
    records = [{"c": c.index, "uniformity": u, "class": classify(u), "note": _c_note(F, c)}
               for c, u in rows]
    if args.format == "json":
        _emit(args, _jsonl(records))
    elif args.format == "csv":
        _emit(args, "c,uniformity,class\n" + "".join(
            f"{r['c']},{r['uniformity']},{r['class']}\n" for r in records))
    else:
        out = []
        for r in records:
            line = f"c={r['c']:<6} uniformity={r['uniformity']:<4} {r['class']}"
            if r["note"]:
                line += f"    observation: {r['note']}"
            out.append(line + "\n")
        _emit(args, "".join(out))
    return 0


def cmd_spectrum(args):
    field = parse_field_spec(args.field)
    F = _function(args, field)
    c = _single_c(field, args.c)
    res = uniformity(F, c, witnesses=args.witnesses, budget=parse_budget(args.budget))
    obj = spectrum_to_dict(res)
    if args.format == "text":
        lines = [f"field {obj['field']}  F {obj['d_or_table_digest']}  c {obj['c']}",
                 f"uniformity {obj['uniformity']} ({obj['classification']}, method {obj['method']})",
                 "spectrum " + " ".join(f"{v}:{k}" for v, k in obj["spectrum"].items())]
        if "row_spectrum" in obj:
            lines.append("a=1 row " + " ".join(f"{v}:{k}" for v, k in obj["row_spectrum"].items()))
        for w in obj["witnesses"]:
            lines.append(f"witness a={w['a']} b={w['b']} x={w['solutions']}")
        _emit(args, "\n".join(lines) + "\n")
    else:
        _emit(args, json.dumps(obj) + "\n")
    return 0


def cmd_ddt(args):
    field = parse_field_spec(args.field)
    F = _function(args, field)
    c = _single_c(field, args.c)
    table = full_cddt(F, c, budget=parse_budget(args.budget))
    if args.format == "json":
        _emit(args, json.dumps({"field": field.spec_string(), "c": c.index,
                                "table": table.tolist()}) + "\n")
    else:
        _emit(args, cddt_to_csv(table))
    return 0


def _parse_params(text):
    out = {}
    for part in (text or "").split(","):
        if not part.strip():
            continue
        try:
            key, val = part.split("=")
            out[key.strip()] = int(val)
        except ValueError:
            raise SpecParseError(f"bad --params entry {part!r}; use p=2,n=5,k=1") from None
    if not {"p", "n"} <= set(out) or set(out) - {"p", "n", "k", "d"}:
        raise SpecParseError("--params needs p and n (optionally k, d)")
    return out


def cmd_verify(args):
    budget = parse_budget(args.budget)
    if args.rule:
        get_rule(args.rule)
        prm = _parse_params(args.params)
        case = TheoremCase(args.rule, prm["p"], prm["n"], prm.get("k"), prm.get("d"),
                           c=args.c, claim=args.claim)
        report = Report([run_case(case, workers=_threads(args.threads), budget=budget)])
    else:
        report = run_grid(load_grid(args.grid), workers=_threads(args.threads), budget=budget)
    if args.format == "text":
        _emit(args, report.summary() + "\n")
    else:
        _emit(args, report.to_jsonl())
        if args.out:
            sys.stderr.write(report.summary() + "\n")
    return report.exit_code


def cmd_search(args):
    field = parse_field_spec(args.field)
    hits = search(field.p, field.n, args.umax, args.c, dedupe=not args.no_dedupe,
                  workers=_threads(args.threads), budget=parse_budget(args.budget))
    if args.format == "json":
        _emit(args, _jsonl({"d": d, "c": c.index, "uniformity": u} for d, c, u in hits))
    else:
        _emit(args, "d,c,uniformity\n" + "".join(f"{d},{c.index},{u}\n" for d, c, u in hits))
    return 0


def cmd_conjecture(args):
    field = parse_field_spec(args.field)
    info = conjecture_check(field.p, field.n)
    if args.format == "json":
        _emit(args, json.dumps(info) + "\n")
    else:
        _emit(args, "".join(f"{k}: {v}\n" for k, v in info.items()))
    return 0 if info["uniformity"] == 1 else 1


# -- parser -----------------------------------------------------------------------

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv", "text"), default=None)
    common.add_argument("--threads", type=int, default=None,
                        help=f"worker threads (default: ${THREADS_ENV} or CPU count)")
    common.add_argument("--budget", default=None, help="N (sweep limit on q) or sweep=N,ddt=M")
    common.add_argument("--out", default=None, help="write output to this file")

    fn = argparse.ArgumentParser(add_help=False)
    fn.add_argument("--field", required=True, help='"p^n" or "p^n/c0,...,cn"')
    fn.add_argument("--d", type=int, help="exponent of the power map x^d (0^0 = 1)")
    fn.add_argument("--table", help="S-box file: one canonical index per line, q lines")

    parser = argparse.ArgumentParser(prog="cdiff", description=__doc__.split("\n")[0].rstrip("."))
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field-info", parents=[common], help="describe a field construction")
    p.add_argument("--field", required=True)
    p.set_defaults(func=cmd_field_info, default_format="text")

    p = sub.add_parser("uniformity", parents=[common, fn], help="c-differential uniformity per c")
    p.add_argument("--c", default="all", help="all | -1 | <index> | " + " | ".join(conditions.NAMED))
    p.set_defaults(func=cmd_uniformity, default_format="text")

    p = sub.add_parser("spectrum", parents=[common, fn], help="full spectrum at one c")
    p.add_argument("--c", required=True)
    p.add_argument("--witnesses", type=int, default=4)
    p.set_defaults(func=cmd_spectrum, default_format="json")

    p = sub.add_parser("ddt", parents=[common, fn], help="complete c-DDT")
    p.add_argument("--c", required=True)
    p.set_defaults(func=cmd_ddt, default_format="csv")

    p = sub.add_parser("verify", parents=[common], help="check predictions against brute force")
    p.add_argument("--grid", help="JSON grid file (default: shipped desk grid)")
    p.add_argument("--rule", help="single rule id instead of a grid")
    p.add_argument("--params", help="p=..,n=..[,k=..][,d=..] for --rule")
    p.add_argument("--c", default=None, help="c selector for --rule (default: the rule's own)")
    p.add_argument("--claim", default=None, help="replace the rule's claim, e.g. '<=1' or 'pcn'")
    p.set_defaults(func=cmd_verify, default_format="text")

    p = sub.add_parser("search", parents=[common], help="find low-uniformity exponents")
    p.add_argument("--field", required=True)
    p.add_argument("--umax", type=int, default=1)
    p.add_argument("--c", default="-1")
    p.add_argument("--no-dedupe", action="store_true", help="try every d, not one per cyclotomic class")
    p.set_defaults(func=cmd_search, default_format="csv")

    p = sub.add_parser("conjecture", parents=[common],
                       help="check x^((p^n+1)/(p+1)) at c=-1 and its inverse exponent")
    p.add_argument("--field", required=True)
    p.set_defaults(func=cmd_conjecture, default_format="text")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.format is None:
        args.format = args.default_format
    try:
        return args.func(args)
    except CDiffError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 2
    except (ValueError, NotImplementedError) as exc:
        sys.stderr.write(f"error: {exc}\n")
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
