"""ternclass command line.

    ternclass classnum "2 2 295 -1 -1 0"
    ternclass label "1 1 1 0 0 0" --json
    ternclass verify examples

Exit codes: 0 ok, 1 usage or input error, 2 invariant violation (a check failed).
"""

from __future__ import annotations

import argparse
import json
import sys
from collections import Counter

from . import oracle
from .ascent import FormulaOutOfContract, class_number
from .isometry import label
from .lattice import InputError, check_gram, parse_gram, six
from .stable import stable_report
from .watson import capital_lambda, descend_to_stable

EXIT_OK, EXIT_USAGE, EXIT_INVARIANT = 0, 1, 2


def _labels_text(labels: Counter) -> str:
    return "\n".join(f"  {lab}  x{k}" for lab, k in sorted(labels.items()))


def _frac(x) -> str:
    return f"{x.numerator}/{x.denominator}"


def _load_config(path: str | None) -> dict:
    """key = value lines; '#' starts a comment."""
    if not path:
        return {}
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            key, _, val = line.partition("=")
            out[key.strip()] = val.strip().strip('"')
    return out


def cmd_classnum(args) -> tuple[dict, str]:
    g = parse_gram(args.form)
    h, rep = class_number(g, bound=args.bound, force_oracle=args.force_oracle, force_formula=args.force_formula,
                          threads=args.threads)
    data = rep.to_json()
    lines = [f"h = {h}", f"mass = {_frac(rep.mass)}", "steps:"]
    for st in rep.steps:
        lines.append(f"  m={st.m:<4} {st.method:<15} h={st.h:<6} {st.note}")
    lines.append("labels:")
    lines.append(_labels_text(rep.labels))
    lines += [f"note: {n}" for n in rep.notes]
    return data, "\n".join(lines)


def cmd_genus(args) -> tuple[dict, str]:
    g = parse_gram(args.form)
    census = oracle.enumerate_genus(g, args.bound, args.threads)
    data = dict(schema=1, **census.to_json())
    lines = [f"h = {census.h}", f"mass = {_frac(census.mass)}"]
    lines += [f"  {' '.join(map(str, six(c.gram))):<28} {c.label}" for c in census.classes]
    return data, "\n".join(lines)


def cmd_descend(args) -> tuple[dict, str]:
    chain = descend_to_stable(parse_gram(args.form))
    data = dict(schema=1, **chain.to_json())
    lines = [f"start    {' '.join(map(str, six(chain.start)))}"]
    for st in chain.steps:
        lines.append(f"m={st.m:<4} {' '.join(map(str, six(st.after))):<28} scale {st.scale}")
    lines.append(f"terminal {' '.join(map(str, six(chain.terminal)))}")
    return data, "\n".join(lines)


def cmd_label(args) -> tuple[dict, str]:
    lab = label(parse_gram(args.form))
    return {"schema": 1, "label": lab.to_json()}, str(lab)


def cmd_fiber(args) -> tuple[dict, str]:
    g = check_gram(parse_gram(args.form))
    n = capital_lambda(g, args.p)
    fib = oracle.gamma_fiber(n, g, args.p)
    data = dict(schema=1, **fib.to_json())
    lines = [f"N = {' '.join(map(str, six(n)))}", f"|fiber| = {fib.size}"]
    lines += [f"  {rec.label}  members {len(ix)}" for rec, ix in fib.classes]
    return data, "\n".join(lines)


def cmd_stable(args) -> tuple[dict, str]:
    rep = stable_report(parse_gram(args.form), bound=args.bound)
    lines = [f"h = {rep.h}", f"P = {rep.P}, Q = {rep.Q}", f"mass = {_frac(rep.mass)}", f"method = {rep.method}",
             "labels:", _labels_text(rep.labels)]
    return rep.to_json(), "\n".join(lines)


def cmd_verify(args) -> tuple[dict, str]:
    from .verify import SUITES
    rows = SUITES[args.suite]()
    data = {"schema": 1, "suite": args.suite, "passed": sum(r.ok for r in rows), "total": len(rows),
            "rows": [{"name": r.name, "ok": r.ok, "detail": r.detail, "seconds": round(r.seconds, 3)} for r in rows]}
    lines = [r.line() for r in rows] + [f"{data['passed']}/{data['total']} passed"]
    return data, "\n".join(lines)


COMMANDS = {
    "classnum": cmd_classnum,
    "genus": cmd_genus,
    "descend": cmd_descend,
    "label": cmd_label,
    "fiber": cmd_fiber,
    "stable": cmd_stable,
    "verify": cmd_verify,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--bound", type=int, default=None, help="largest discriminant the oracle may enumerate")
    common.add_argument("--threads", type=int, default=1)
    common.add_argument("--seed", type=int, default=None, help="accepted for scripting; the core is deterministic")
    common.add_argument("--config", default=None, help="key = value file with defaults (bound, threads, suite)")

    ap = argparse.ArgumentParser(prog="ternclass", description="Class numbers of positive ternary forms.")
    sub = ap.add_subparsers(dest="command", required=True)
    form_help = 'six coefficients "a11 a22 a33 a23 a13 a12" or a 3x3 matrix'
    for name in ("classnum", "genus", "descend", "label", "fiber", "stable"):
        sp = sub.add_parser(name, parents=[common])
        sp.add_argument("form", help=form_help)
        if name == "classnum":
            grp = sp.add_mutually_exclusive_group()
            grp.add_argument("--force-oracle", action="store_true")
            grp.add_argument("--force-formula", action="store_true",
                             help="fail instead of falling back to the oracle on an odd step")
        if name == "fiber":
            sp.add_argument("-p", type=int, required=True, help="odd prime of the Watson step")
    sp = sub.add_parser("verify", parents=[common])
    sp.add_argument("suite", nargs="?", choices=["examples", "tables", "stable", "appendix", "family"])
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    cfg = _load_config(args.config)
    if args.bound is None:
        args.bound = int(cfg.get("bound", oracle.DEFAULT_BOUND))
    if args.threads == 1 and "threads" in cfg:
        args.threads = int(cfg["threads"])
    if args.command == "verify" and args.suite is None:
        args.suite = cfg.get("suite")
        if args.suite is None:
            print("verify: a suite is required", file=sys.stderr)
            return EXIT_USAGE
    for flag in ("force_oracle", "force_formula"):
        if not hasattr(args, flag):
            setattr(args, flag, False)
    try:
        data, text = COMMANDS[args.command](args)
    except (InputError, oracle.BoundExceeded, ValueError) as exc:
        if isinstance(exc, FormulaOutOfContract):
            print(f"error: {exc}", file=sys.stderr)
            return EXIT_INVARIANT
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except AssertionError as exc:
        print(f"invariant violated: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    print(json.dumps(data, indent=2, sort_keys=True) if args.json else text)
    if args.command == "verify" and data["passed"] != data["total"]:
        return EXIT_INVARIANT
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
