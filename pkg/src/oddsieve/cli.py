"""Command-line interface: ``oddsieve {enumerate,verify,bench,fit}``."""
from __future__ import annotations

import argparse
import logging
import sys

from oddsieve import bench

log = logging.getLogger("oddsieve")


class _StderrHandler(logging.Handler):
    """Writes to whatever ``sys.stderr`` is at emit time."""

    def emit(self, record: logging.LogRecord) -> None:
        print(self.format(record), file=sys.stderr)


def _configure_logging(verbose: bool) -> None:
    if not any(isinstance(h, _StderrHandler) for h in log.handlers):
        handler = _StderrHandler()
        handler.setFormatter(logging.Formatter("%(levelname)s: %(message)s"))
        log.addHandler(handler)
        log.propagate = False
    log.setLevel(logging.INFO if verbose else logging.WARNING)


def _algo(text: str) -> bench.AlgorithmId:
    try:
        return bench.AlgorithmId(text)
    except ValueError:
        choices = ", ".join(a.value for a in bench.AlgorithmId)
        raise argparse.ArgumentTypeError(f"unknown algorithm {text!r} (choose from {choices})")


def _algo_list(text: str) -> list[bench.AlgorithmId]:
    try:
        return bench.parse_ids(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc))


def _int_list(text: str) -> list[int]:
    try:
        return [int(float(t)) if "e" in t.lower() else int(t) for t in text.split(",") if t.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated list of integers: {text!r}")


def _limit(text: str) -> int:
    try:
        return int(float(text)) if "e" in text.lower() else int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"not an integer: {text!r}")


def cmd_enumerate(args) -> int:
    result = bench.run(args.algo, args.limit)
    text = "".join(f"{p}\n" for p in result.primes.tolist())
    if args.out is None:
        sys.stdout.write(text)
    else:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    print(result.count, file=sys.stderr)
    return 0


def cmd_verify(args) -> int:
    if args.limit < 11:
        raise ValueError(f"verify needs a limit >= 11, got {args.limit}")
    failures = 0
    for algo in bench.AlgorithmId:
        native = bench.native_limit(algo, args.limit)
        got = bench.ALGORITHMS[algo].run(native).primes
        where = bench.first_divergence(got, bench.expected(algo, native))
        if where is None:
            print(f"{algo.value}: ok ({len(got)} primes)")
        else:
            failures += 1
            pos, have, want = where
            print(f"{algo.value}: MISMATCH at position {pos}: got {have}, expected {want}")
    return 1 if failures else 0


def cmd_bench(args) -> int:
    records = bench.bench(args.algos, args.limits, args.reps, verify=args.verify)
    bench.write_csv(records, args.csv)
    return 0


def cmd_fit(args) -> int:
    records = bench.read_csv(args.csv)
    if args.algo is not None:
        records = [r for r in records if r.algorithm is args.algo]
        if not records:
            raise ValueError(f"no rows for {args.algo.value} in {args.csv}")
    for algo, f in bench.fit_records(records, args.model).items():
        a, b = f.coefficients
        names = ("A", "B") if f.model is bench.Model.QUAD else ("a", "b")
        print(f"{algo.value} model={f.model.value} {names[0]}={a:.6g} {names[1]}={b:.6f} r={f.correlation:.6f}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oddsieve", description="Odd-index prime enumeration.")
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("enumerate", help="print primes up to a limit")
    p.add_argument("--algo", type=_algo, required=True)
    p.add_argument("--limit", type=_limit, required=True)
    p.add_argument("--out", default=None, help="output file (default: stdout)")
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("verify", help="check every algorithm against the oracle")
    p.add_argument("--limit", type=_limit, required=True)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("bench", help="time algorithms and write a CSV")
    p.add_argument("--algos", type=_algo_list, required=True)
    p.add_argument("--limits", type=_int_list, required=True)
    p.add_argument("--reps", type=int, default=1)
    p.add_argument("--csv", required=True)
    p.add_argument("--verify", action="store_true", help="check each result against the oracle")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("fit", help="fit a growth model to benchmark timings")
    p.add_argument("--csv", required=True)
    p.add_argument("--model", choices=[m.value for m in bench.Model], required=True)
    p.add_argument("--algo", type=_algo, default=None, help="fit only this algorithm")
    p.set_defaults(func=cmd_fit)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    _configure_logging(args.verbose)
    try:
        return args.func(args)
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
