"""Command-line entry point: ``hkcheck verify|all|constants|replay``."""
from __future__ import annotations

import argparse
import json
import sys

from .errors import ConfigError
from .report import SuiteConfig, VerificationReport, measure_constants, replay_failure, run_all, run_suite
from .suites import SUITES

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("--n", type=int, default=2, help="quaternionic dimension (N = 2n)")
    p.add_argument("--rank", type=int, default=2)
    p.add_argument("--samples", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--backend", choices=("exact", "float"), default="exact")
    p.add_argument("--tolerance", type=float, default=1e-9, help="float backend only")
    p.add_argument("--report", help="write the JSON report here")
    p.add_argument("--fault-inject", action="store_true", help="flip one sign in the J dictionary (self-test)")
    p.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hkcheck", description="Randomized checks of hyperkahler linear algebra.")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run one suite")
    v.add_argument("--suite", required=True, help=", ".join(sorted(SUITES)))
    _common(v)

    a = sub.add_parser("all", help="run every suite over all supported (n, rank)")
    _common(a)

    c = sub.add_parser("constants", help="print c_n and measured ratios")
    c.add_argument("--samples", type=int, default=5)
    c.add_argument("--seed", type=int, default=0)
    c.add_argument("--rank", type=int, default=2)
    c.add_argument("--backend", choices=("exact", "float"), default="exact")
    c.add_argument("--report")

    r = sub.add_parser("replay", help="re-run the failures stored in a report")
    r.add_argument("path")
    r.add_argument("--index", type=int, help="replay only this failure")
    return parser


def _config(args, suite: str) -> SuiteConfig:
    return SuiteConfig(
        suite=suite,
        n=args.n,
        rank=args.rank,
        samples=args.samples,
        seed=args.seed,
        backend=args.backend,
        tolerance=args.tolerance,
        report=args.report,
        fault_inject=args.fault_inject,
        workers=args.workers,
    )


def _print_failures(rep: VerificationReport, limit: int = 5) -> None:
    for f in rep.failures[:limit]:
        print(f"  sample {f.get('sample')} check {f['check']}: {json.dumps(f['detail'], sort_keys=True)}")
    if len(rep.failures) > limit:
        print(f"  ... {len(rep.failures) - limit} more in the report")


def _cmd_verify(args) -> int:
    rep = run_suite(_config(args, args.suite))
    print(rep.summary_line())
    for k, v in sorted(rep.constants.items()):
        print(f"  {k} = {v}")
    _print_failures(rep)
    return EXIT_OK if rep.passed else EXIT_FAIL


def _cmd_all(args) -> int:
    base = _config(args, "all")
    if args.workers < 1 or args.samples < 1:
        raise ConfigError("samples and workers must be positive")
    summary = run_all(base)
    for d in summary["reports"]:
        rep = VerificationReport.from_dict(d)
        print(rep.summary_line())
        _print_failures(rep, 2)
    print(f"overall: {'PASS' if summary['passed'] else 'FAIL'} ({summary['wall_time']:.1f}s)")
    return EXIT_OK if summary["passed"] else EXIT_FAIL


def _cmd_constants(args) -> int:
    table = measure_constants(args.backend, args.samples, args.seed, args.rank)
    cols = ["n", "N", "c_n", "degree_identity_constant", "hr_ratio", "hr_expected_value", "hr_convention_constant"]
    print("  ".join(f"{c:>24}" if i > 1 else f"{c:>3}" for i, c in enumerate(cols)))
    for row in table["rows"]:
        print("  ".join(f"{str(row[c]):>24}" if i > 1 else f"{row[c]:>3}" for i, c in enumerate(cols)))
    if args.report:
        try:
            with open(args.report, "w", encoding="utf-8") as fh:
                json.dump(table, fh, sort_keys=True, indent=2)
        except OSError as exc:
            raise ConfigError(f"cannot write report to {args.report}: {exc}") from exc
    return EXIT_OK if all(r["passed"] for r in table["rows"]) else EXIT_FAIL


def _cmd_replay(args) -> int:
    try:
        with open(args.path, encoding="utf-8") as fh:
            rep = VerificationReport.from_json(fh.read())
    except (OSError, ValueError, TypeError) as exc:
        raise ConfigError(f"cannot read report {args.path}: {exc}") from exc
    failures = [f for f in rep.failures if "args" in f]
    if args.index is not None:
        failures = failures[args.index : args.index + 1]
    if not failures:
        print("no replayable failures")
        return EXIT_OK
    reproduced = 0
    for f in failures:
        ok, detail = replay_failure(f, rep.config)
        reproduced += not ok
        print(f"{f['check']} (sample {f.get('sample')}): {'reproduced' if not ok else 'passes now'} {json.dumps(detail, sort_keys=True, default=str)}")
    return EXIT_FAIL if reproduced else EXIT_OK


COMMANDS = {"verify": _cmd_verify, "all": _cmd_all, "constants": _cmd_constants, "replay": _cmd_replay}


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
