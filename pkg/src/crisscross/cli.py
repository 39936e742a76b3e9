"""Command-line front end.

Exit codes: 0 success, 1 verification or decode failure, 2 invalid input.
Errors go to stderr prefixed with ``error:``.  Randomness comes only from
``--seed`` through numpy's PCG64 generator.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict, dataclass, field
from pathlib import Path

from . import verify
from .analysis import census
from .code import CodeParams, redundancy_bounds, sample_codeword
from .decoder import decode
from .errors import AmbiguousDecoding, CrissCrossError, DecodeFailure, EnumerationRefused, InputError
from .grid import delete_cross, format_grid, parse_grid

EXIT_OK, EXIT_FAIL, EXIT_INPUT = 0, 1, 2

SUITES = ("equivalence", "lemma-delpattern", "counts", "code", "t-equivalence", "ball-bound", "vt", "column-choice")


@dataclass
class CliConfig:
    command: str
    options: dict = field(default_factory=dict)

    def echo(self) -> str:
        return "config: " + json.dumps(asdict(self), sort_keys=True)


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise InputError(message)


def _seed(text: str) -> int:
    value = int(text)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError("seed must be in [0, 2**64)")
    return value


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="crisscross", description="Criss-cross deletion codes: sample, decode, verify.")
    p.add_argument("--echo-config", action="store_true", help="print the parsed configuration to stderr")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("sample", help="draw a random codeword")
    s.add_argument("--n", type=int, required=True)
    s.add_argument("--seed", type=_seed, required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--params-out", required=True)

    c = sub.add_parser("corrupt", help="delete one row and one column")
    c.add_argument("--in", dest="input", required=True)
    c.add_argument("--row", type=int, required=True)
    c.add_argument("--col", type=int, required=True)
    c.add_argument("--out", required=True)

    d = sub.add_parser("decode", help="recover a codeword from a received grid")
    d.add_argument("--in", dest="input", required=True)
    d.add_argument("--params", required=True)
    d.add_argument("--out", required=True)

    v = sub.add_parser("verify", help="run a verification suite, JSON lines on stdout")
    v.add_argument("suite", choices=SUITES)
    v.add_argument("--m", type=int, default=3)
    v.add_argument("--n", type=int)
    v.add_argument("--t", type=int, default=2)
    v.add_argument("--q", type=int, default=3)
    v.add_argument("--samples", type=int)
    v.add_argument("--seed", type=_seed, default=0)
    v.add_argument("--codewords", type=int, default=100)
    v.add_argument("--oracle-cases", type=int, default=20)
    v.add_argument("--pair-checks", type=int, default=20)

    ce = sub.add_parser("census", help="count good and bad arrays")
    ce.add_argument("--n", type=int, required=True)

    b = sub.add_parser("bounds", help="closed-form redundancy bounds")
    b.add_argument("--n", type=int, required=True)
    return p


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from exc


def _write(path: str, text: str) -> None:
    try:
        Path(path).write_text(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc.strerror}") from exc


def _cmd_sample(args) -> int:
    grid, params = sample_codeword(args.n, args.seed)
    _write(args.out, format_grid(grid))
    _write(args.params_out, params.to_text())
    return EXIT_OK


def _cmd_corrupt(args) -> int:
    grid = parse_grid(_read(args.input))
    if not (1 <= args.row <= grid.n_rows and 1 <= args.col <= grid.n_cols):
        raise InputError(f"({args.row}, {args.col}) outside the {grid.n_rows}x{grid.n_cols} grid")
    _write(args.out, format_grid(delete_cross(grid, args.row, args.col)))
    return EXIT_OK


def _cmd_decode(args) -> int:
    received = parse_grid(_read(args.input))
    params = CodeParams.from_text(_read(args.params))
    try:
        grid, trace = decode(received, params)
    except AmbiguousDecoding as exc:
        print(f"error: decode failure: {exc}", file=sys.stderr)
        for cand, i, j in exc.candidates:
            print(f"error: candidate row={i} col={j}\n{format_grid(cand)}", end="", file=sys.stderr)
        return EXIT_FAIL
    except DecodeFailure as exc:
        print(f"error: decode failure: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _write(args.out, format_grid(grid))
    notes = ",".join(trace.hypothesis_notes) or "none"
    print(f"case={trace.case_taken} row={trace.row_index} col={trace.col_index} notes={notes}", file=sys.stderr)
    return EXIT_OK


def _run_suite(args) -> list[verify.VerificationResult]:
    suite = args.suite
    if suite == "equivalence":
        if args.m <= 3 and args.samples is None:
            return verify.verify_equivalence(args.m)
        return [verify.verify_equivalence_sampled(args.m, args.samples or 10_000, args.seed)]
    if suite == "t-equivalence":
        return [verify.verify_t_equivalence(args.m, args.t, args.samples or 10_000, args.seed)]
    if suite == "lemma-delpattern":
        return [verify.verify_delpattern(args.n or 4, args.samples, args.seed)]
    if suite == "ball-bound":
        return [verify.verify_ball_bound(args.n or 4, args.samples, args.seed)]
    if suite == "counts":
        return [verify.verify_counts()]
    if suite == "code":
        return [
            verify.verify_code(
                args.n or 8, args.codewords, args.seed, pair_checks=args.pair_checks, oracle_cases=args.oracle_cases
            )
        ]
    if suite == "vt":
        return [verify.verify_vt(args.m, args.q, args.samples, args.seed)]
    return [verify.verify_column_choice(args.n or 5)]


def _cmd_verify(args) -> int:
    results = _run_suite(args)
    verify.emit_jsonl(results, sys.stdout)
    return EXIT_OK if all(r.passed for r in results) else EXIT_FAIL


def _cmd_census(args) -> int:
    print(census(args.n).line())
    return EXIT_OK


def _cmd_bounds(args) -> int:
    print(json.dumps(asdict(redundancy_bounds(args.n)), sort_keys=True))
    return EXIT_OK


COMMANDS = {
    "sample": _cmd_sample,
    "corrupt": _cmd_corrupt,
    "decode": _cmd_decode,
    "verify": _cmd_verify,
    "census": _cmd_census,
    "bounds": _cmd_bounds,
}


def run(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        config = CliConfig(args.command, {k: v for k, v in vars(args).items() if k not in ("command", "echo_config")})
        if args.echo_config:
            print(config.echo(), file=sys.stderr)
        return COMMANDS[args.command](args)
    except (InputError, EnumerationRefused) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except CrissCrossError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
