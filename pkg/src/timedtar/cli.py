"""Command-line front end.

Exit codes: 0 when the language is empty or a safe constraint was produced,
1 when a witness was found, 2 when the budget ran out, 3 on bad input.
"""
from __future__ import annotations

import argparse
import sys
from typing import List, Optional, TextIO

from .encode import PathError, ReplayError, replay
from .frontend import (ModelError, cfa_to_dot, format_guard, format_witness, load_model,
                       parse_witness)
from .ita import to_dot
from .model import InvalidProgram, RealTimeProgram
from .smtlib import SmtLibSolver, SolverError, cross_checker
from .synth import safe_init, synth_params, synth_robust
from .tar import Budget, Empty, Exhausted, NonEmpty, Stats, check_emptiness, explain

EXIT_EMPTY, EXIT_NONEMPTY, EXIT_BUDGET, EXIT_INPUT = 0, 1, 2, 3


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--max-iterations", type=int, default=500, metavar="N")
    common.add_argument("--max-word-length", type=int, default=64, metavar="N")
    common.add_argument("--timeout", type=float, default=300.0, metavar="SECS")
    common.add_argument("--interpolants", choices=["sp", "wp"], default="sp")
    common.add_argument("--union", choices=["extended", "plain"], default="extended")
    common.add_argument("--solver", default="internal",
                        help="'internal' or 'smtlib:<command>' to cross-check every query")
    common.add_argument("--stats", action="store_true", help="per-iteration statistics on stderr")
    common.add_argument("--witness-format", choices=["text", "machine"], default="text")

    ap = argparse.ArgumentParser(prog="timedtar",
                                 description="Trace abstraction refinement for real-time programs.")
    sub = ap.add_subparsers(dest="command", required=True)
    sub.add_parser("check", parents=[common], help="decide emptiness").add_argument("model")
    sub.add_parser("safe-init", parents=[common],
                   help="largest safe initial constraint").add_argument("model")
    sp = sub.add_parser("synth", parents=[common], help="parameter synthesis")
    sp.add_argument("--params", required=True, help="comma-separated parameter names")
    sp.add_argument("model")
    sub.add_parser("robust", parents=[common], help="robustness margin").add_argument("model")
    dp = sub.add_parser("dot", parents=[common], help="Graphviz output")
    dp.add_argument("--proof", action="store_true",
                    help="run the emptiness check and draw its proof instead of the model")
    dp.add_argument("model")
    rp = sub.add_parser("replay", parents=[common], help="replay a machine-format witness")
    rp.add_argument("model")
    rp.add_argument("witness")
    return ap


class _Run:
    def __init__(self, args, out: TextIO, err: TextIO):
        self.args, self.out, self.err = args, out, err
        self.budget = Budget(args.max_iterations, args.max_word_length, args.timeout)
        self.kw = dict(interpolants=args.interpolants, union=args.union)
        if args.stats:
            self.kw["on_iteration"] = self._stat
        if args.solver != "internal":
            if not args.solver.startswith("smtlib:"):
                raise ValueError(f"unknown solver {args.solver!r}")
            self.kw["cross_check"] = cross_checker(SmtLibSolver(args.solver[len("smtlib:"):]))

    def _stat(self, s: Stats) -> None:
        print(s.line(), file=self.err)

    def verdict(self, v) -> int:
        if isinstance(v, NonEmpty):
            if self.args.witness_format == "machine":
                self.out.write(format_witness(v.witness))
            else:
                self.out.write(explain(v))
            return EXIT_NONEMPTY
        self.out.write(explain(v))
        return EXIT_EMPTY if isinstance(v, Empty) else EXIT_BUDGET

    def constraint(self, res, extra: str = "") -> int:
        label = "safe" if res.maximal else "partial (budget hit)"
        print(f"{label}: {format_guard(res.constraint)}", file=self.out)
        if extra:
            print(extra, file=self.out)
        if self.args.stats:
            print(f"{res.iterations} strengthening rounds", file=self.err)
        return EXIT_EMPTY if res.maximal else EXIT_BUDGET


def _names(s: str) -> List[str]:
    return [x.strip() for x in s.split(",") if x.strip()]


def main(argv: Optional[List[str]] = None, out: TextIO = None, err: TextIO = None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else 0
    try:
        run = _Run(args, out, err)
        p: RealTimeProgram = load_model(args.model)
        if args.command == "check":
            return run.verdict(check_emptiness(p, run.budget, **run.kw))
        if args.command == "safe-init":
            return run.constraint(safe_init(p, run.budget, **run.kw))
        if args.command == "synth":
            return run.constraint(synth_params(p, _names(args.params), run.budget, **run.kw))
        if args.command == "robust":
            res = synth_robust(p, run.budget, **run.kw)
            margin = "unknown" if res.max_eps is None else str(res.max_eps)
            print(f"robust in {res.eps}: {format_guard(res.constraint)}", file=out)
            print(f"max {res.eps}: {margin}", file=out)
            return EXIT_EMPTY if res.status == "Maximal" else EXIT_BUDGET
        if args.command == "dot":
            if not args.proof:
                out.write(cfa_to_dot(p))
                return EXIT_EMPTY
            v = check_emptiness(p, run.budget, **run.kw)
            if v.proof is not None:
                out.write(to_dot(v.proof))
            return EXIT_EMPTY if isinstance(v, Empty) else (
                EXIT_NONEMPTY if isinstance(v, NonEmpty) else EXIT_BUDGET)
        if args.command == "replay":
            with open(args.witness, encoding="utf-8") as fh:
                tw = parse_witness(fh.read())
            replay(p, tw)
            out.write(format_witness(tw))
            return EXIT_EMPTY
    except ModelError as exc:
        for d in exc.diagnostics:
            print(f"{getattr(args, 'model', '?')}:{d}", file=err)
        return EXIT_INPUT
    except (OSError, ValueError, InvalidProgram, PathError, ReplayError, SolverError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    return EXIT_INPUT  # pragma: no cover


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
