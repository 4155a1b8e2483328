"""Command-line entry point: ``signhbar verify | evolve | constants``.

Exit codes: 0 success, 1 at least one failing check (report still
written), 2 configuration or usage error.
"""

from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

from .config import SUITES, ConfigError, SuiteConfig, normalize_suites
from .constants import HBAR_NATURAL, HBAR_SI
from .expr import ExprError
from .simulate import run_evolve
from .verify import run_verify

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_CONFIG = 2

log = logging.getLogger("signhbar")


def _load_config(args) -> SuiteConfig:
    config = SuiteConfig.load(args.config) if args.config else SuiteConfig()
    overrides = {}
    if getattr(args, "suite", None):
        overrides["suites"] = normalize_suites(args.suite)
    if getattr(args, "seed", None) is not None:
        overrides["seed"] = args.seed
    if overrides:
        data = config.to_dict()
        data.update({k: list(v) if isinstance(v, tuple) else v for k, v in overrides.items()})
        config = SuiteConfig.from_dict(data)
    return config


def cmd_verify(args) -> int:
    config = _load_config(args)
    report = run_verify(config, timestamp=not args.no_timestamp)
    text = report.to_json()
    if args.out:
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)
    for rec in report.records:
        status = "PASS" if rec.passed else "FAIL"
        log.info("%s %-45s %-9s residual=%.3e tol=%.1e", status, rec.check_id, rec.tag, rec.residual, rec.tolerance)
    failures = report.failures()
    summary = f"{len(report.records) - len(failures)}/{len(report.records)} checks passed"
    print(summary, file=sys.stderr)
    for rec in failures:
        print(f"FAIL {rec.check_id} [{rec.tag}] residual={rec.residual:.3e} tol={rec.tolerance:.1e}", file=sys.stderr)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_evolve(args) -> int:
    config = _load_config(args)
    try:
        paths = run_evolve(config, args.out)
    except OSError as exc:
        print(f"error: cannot write to {args.out}: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    for p in paths.values():
        print(p)
    return EXIT_OK


def constants_text(hbar: float = HBAR_NATURAL) -> str:
    sign = "+" if hbar > 0 else "-"
    return "\n".join(
        [
            f"hbar (SI)              = {HBAR_SI:.3e} J*s",
            f"hbar (natural units)   = {hbar:+g}",
            f"sign convention        = {sign}1: [q, p] = {sign}i|hbar|, p = {'-' if hbar > 0 else '+'}i|hbar| d/dx",
            "flipping the sign is equivalent to an antiunitary transform of states and observables",
        ]
    ) + "\n"


def cmd_constants(args) -> int:
    if args.hbar == 0:
        print("error: hbar must be nonzero", file=sys.stderr)
        return EXIT_CONFIG
    sys.stdout.write(constants_text(args.hbar))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="signhbar", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true", help="log every check")
    sub = parser.add_subparsers(dest="command", required=True)

    v = sub.add_parser("verify", help="run verification suites and write a JSON report")
    v.add_argument("--config", help="JSON config file")
    v.add_argument("--suite", action="append", choices=SUITES, help="suite to run (repeatable)")
    v.add_argument("--seed", type=int)
    v.add_argument("--out", help="report path (default: stdout)")
    v.add_argument("--no-timestamp", action="store_true", help="omit generated_at for reproducible output")
    v.set_defaults(func=cmd_verify)

    e = sub.add_parser("evolve", help="write forward/mirror/deltas CSV trajectories")
    e.add_argument("--config", required=True, help="JSON config file")
    e.add_argument("--out", required=True, help="output directory")
    e.set_defaults(func=cmd_evolve)

    c = sub.add_parser("constants", help="print hbar and the sign convention")
    c.add_argument("--hbar", type=float, default=HBAR_NATURAL)
    c.set_defaults(func=cmd_constants)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_CONFIG if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(message)s")
    try:
        return args.func(args)
    except (ConfigError, ExprError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
