"""Command line interface.

Exit codes: 0 success or equivalent, 1 input error (or a failed
``validate``), 2 not equivalent, 3 unknown.
"""

from __future__ import annotations

import argparse
import json
import sys

from .minmodel import DegreeCapExceeded, InternalConsistencyError
from .pipeline import InputError, comparison_degree, decide_rhe, model_run
from .simplicial import FiniteSimplicialSet, validate

EXIT_OK, EXIT_INPUT, EXIT_NOT_EQUIVALENT, EXIT_UNKNOWN = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors, not "not equivalent"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="compact single-line JSON output")
    common.add_argument("--verbose", action="store_true", help="progress and audits on stderr")
    common.add_argument("--assert-simply-connected", action="store_true",
                        help="state that the inputs are simply connected (required for models)")

    p = _Parser(prog="sullivan", description="Rational homotopy of finite simplicial sets.")
    sub = p.add_subparsers(dest="command", required=True)

    mm = sub.add_parser("minimal-model", parents=[common], help="minimal model up to a degree")
    mm.add_argument("file")
    mm.add_argument("--degree", type=int, default=None, help="model degree (default: max(dim, 2))")

    eq = sub.add_parser("rht-equiv", parents=[common], help="decide rational homotopy equivalence")
    eq.add_argument("a")
    eq.add_argument("b")
    eq.add_argument("--budget", type=int, default=10000, help="solver budget (Groebner basis computations)")
    eq.add_argument("--degree", type=int, default=None, help="comparison degree (default: max of the dimensions)")

    va = sub.add_parser("validate", parents=[common], help="check the simplicial identities")
    va.add_argument("file")
    return p


def _emit(data, compact: bool) -> None:
    if compact:
        print(json.dumps(data, separators=(",", ":")))
    else:
        print(json.dumps(data, indent=2))


def _load(path: str) -> FiniteSimplicialSet:
    try:
        return FiniteSimplicialSet.load(path)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def _log(args, msg: str) -> None:
    if args.verbose:
        print(msg, file=sys.stderr)


def _run(args) -> int:
    if args.command == "validate":
        X = _load(args.file)
        problems = validate(X)
        if args.json:
            _emit(problems, True)
        else:
            for line in problems:
                print(line)
            _log(args, f"{len(problems)} violation(s)")
        return EXIT_INPUT if problems else EXIT_OK

    if args.command == "minimal-model":
        X = _load(args.file)
        d = args.degree if args.degree is not None else comparison_degree(X)
        run = model_run(X, d, args.assert_simply_connected)
        for a in run.audits:
            _log(args, str(a))
        _emit(run.state.to_json(), args.json)
        return EXIT_OK

    X, Y = _load(args.a), _load(args.b)
    v = decide_rhe(X, Y, args.budget, args.degree, args.assert_simply_connected)
    _log(args, f"d = {v.d}: {v.answer}")
    _emit(v.to_json(), args.json)
    return {"Equivalent": EXIT_OK, "NotEquivalent": EXIT_NOT_EQUIVALENT, "Unknown": EXIT_UNKNOWN}[v.answer]


def main(argv=None) -> int:
    args = _parser().parse_args(argv)
    try:
        return _run(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except DegreeCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except InternalConsistencyError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
