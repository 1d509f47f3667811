"""Command-line front end.

Exit codes: 0 success or every check passed, 1 some identity verified false,
2 usage, parse, shape or specialization errors.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import jw
from .errors import (
    BudgetExceeded,
    IndexOutOfRange,
    ParseError,
    PoleAtRootOfUnity,
    ShapeMismatch,
)
from .scalars import RingTag

SUITE_NAMES = ["scalars", "tangles", "jw-generic", "jw-root", "uq", "appendix", "functor", "extended", "all"]


class UsageError(Exception):
    pass


def _odd_level(text: str) -> int:
    try:
        r = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"level must be an integer, got {text!r}")
    if r < 3 or r % 2 == 0:
        raise argparse.ArgumentTypeError(f"level must be odd and at least 3, got {r}")
    return r


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--r", type=_odd_level, default=3, help="odd level r >= 3 (default 3)")
    common.add_argument("--ring", choices=["generic", "root"], default="root")
    common.add_argument("--format", choices=["text", "json"], default="text")
    common.add_argument("--out", help="write the output to this file instead of stdout")

    parser = argparse.ArgumentParser(prog="tlfunctor", description="Temperley-Lieb categories at odd roots of unity")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("idempotent", parents=[common], help="expand f_m, g_m, h_m, p_m or i_m in the tangle basis")
    p.add_argument("kind", choices=["f", "g", "h", "p", "i"])
    p.add_argument("m", type=int)

    p = sub.add_parser("verify", parents=[common], help="run a verification suite")
    p.add_argument("--suite", choices=SUITE_NAMES, default="all")

    p = sub.add_parser("hom", parents=[common], help="dimension of Hom(X^m, X^m') by a commutant solve")
    p.add_argument("m", type=int)
    p.add_argument("m2", type=int, metavar="m'")

    p = sub.add_parser("fullness", parents=[common], help="compare the span of functor images with the hom space")
    p.add_argument("m", type=int)
    p.add_argument("m2", type=int, metavar="m'")
    p.add_argument("--budget", type=int, default=3, help="longest composite of middle morphisms (default 3)")

    p = sub.add_parser("eval", parents=[common], help="image matrix of a word such as 'p+ ; i+'")
    p.add_argument("expr")
    p.add_argument("--trace", action="store_true", help="print the slicing layers of every tangle leaf")
    return parser


def _ring(args) -> RingTag:
    return RingTag.generic() if args.ring == "generic" else RingTag.root(args.r)


def cmd_idempotent(args):
    ring = _ring(args)
    build = {"f": jw.build_f, "g": jw.build_g, "h": jw.build_h, "p": jw.build_p, "i": jw.build_i}[args.kind]
    if args.kind == "f":
        x = build(args.m, ring)
    else:
        x = build(args.m, ring, args.r)
    if args.format == "json":
        return 0, json.dumps(x.to_json(), indent=1)
    head = f"{args.kind}_{args.m}: {x.source} -> {x.target}, {len(x)} terms over {ring}"
    return 0, head + "\n" + str(x)


def cmd_verify(args):
    from .verify import run_suite

    rep = run_suite(args.suite, args.r)
    text = json.dumps(rep.to_json(), indent=1) if args.format == "json" else rep.to_text()
    return (0 if rep.ok else 1), text


def cmd_hom(args):
    from .uq import hom_dimension, tensor_power

    if args.m < 0 or args.m2 < 0:
        raise UsageError("tensor powers must be non-negative")
    d = hom_dimension(tensor_power(args.m, args.r), tensor_power(args.m2, args.r))
    if args.format == "json":
        return 0, json.dumps({"m": args.m, "m'": args.m2, "r": args.r, "dimension": d})
    return 0, f"dim Hom(X^{args.m}, X^{args.m2}) at r={args.r}: {d}"


def cmd_fullness(args):
    from .extended import fullness_check

    if args.m < 0 or args.m2 < 0:
        raise UsageError("tensor powers must be non-negative")
    try:
        res = fullness_check(args.m, args.m2, args.r, word_budget=args.budget)
    except BudgetExceeded as exc:
        msg = f"budget exceeded, no verdict: {exc}"
        return 0, json.dumps({"verdict": None, "reason": str(exc)}) if args.format == "json" else msg
    out = json.dumps(res.to_json()) if args.format == "json" else res.to_text()
    return (0 if res.full else 1), out


def cmd_eval(args):
    from .extended import parse
    from .functor import context, slice_tangle

    word = parse(args.expr, args.r)
    ctx = context(args.r)
    M = word.image(ctx)
    lines = []
    if args.trace:
        stack = [word]
        while stack:
            w = stack.pop()
            if w.op == "tangle":
                lines.append(f"layers of {w.payload.to_text()}:")
                lines += [f"  {layer}" for layer in slice_tangle(w.payload)]
            stack.extend(reversed(w.args))
    if args.format == "json":
        return 0, json.dumps(
            {
                "expr": args.expr,
                "source_dim": M.cols,
                "target_dim": M.rows,
                "rank": M.rank(),
                "entries": M.to_triplets(),
                "trace": lines,
            }
        )
    lines.append(f"{word.to_text()} : {word.source} -> {word.target}")
    lines.append(f"image {M.rows} x {M.cols}, rank {M.rank()}, {len(M.nonzero())} nonzero entries")
    for i, j in M.nonzero():
        lines.append(f"  [{i}, {j}] = {M.entry(i, j)}")
    return 0, "\n".join(lines)


COMMANDS = {
    "idempotent": cmd_idempotent,
    "verify": cmd_verify,
    "hom": cmd_hom,
    "fullness": cmd_fullness,
    "eval": cmd_eval,
}


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        code, text = COMMANDS[args.command](args)
    except PoleAtRootOfUnity as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ParseError, ShapeMismatch, IndexOutOfRange, UsageError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
