"""Command line entry point: ``koszul-tower verify | report | list-checks``."""

from __future__ import annotations

import argparse
import json
import os
import sys

from .config import ConfigError, load_config
from .suite import (DESCRIPTIONS, PREREQUISITES, RUN_ORDER, Bounds, CheckId, CheckResult,
                    Certificate, parse_check_id, run_all)

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _check_arg(text: str) -> CheckId:
    try:
        return parse_check_id(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _nonneg(text: str) -> int:
    try:
        v = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if v < 0:
        raise argparse.ArgumentTypeError("expected a nonnegative integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="koszul-tower",
                description="Exact verification of Koszul, Tor and I-adic tower statements.")
    sub = p.add_subparsers(dest="command", metavar="COMMAND", parser_class=_Parser)
    sub.required = True

    v = sub.add_parser("verify", help="run checks on an instance and write a certificate")
    v.add_argument("--config", required=True, metavar="PATH", help="instance configuration file")
    v.add_argument("--check", action="append", type=_check_arg, metavar="ID",
                   help="run only this check (repeatable); prerequisites run internally")
    v.add_argument("--s-max", type=_nonneg, metavar="N", help="override s_max")
    v.add_argument("--degree-max", type=_nonneg, metavar="N", help="override degree_max")
    v.add_argument("--seed", type=int, metavar="N", help="override the seed")
    v.add_argument("--threads", type=_nonneg, default=1, metavar="N",
                   help="worker threads for Tor cells (0 = one per CPU)")
    v.add_argument("--format", choices=("json", "text"), help="certificate format")
    v.add_argument("--out", metavar="PATH", help="certificate path (default: standard output)")
    v.add_argument("--timings", action="store_true",
                   help="record wall-clock times in the certificate (breaks byte-identical output)")

    r = sub.add_parser("report", help="summarise a JSON certificate")
    r.add_argument("certificate", metavar="CERTIFICATE")
    r.add_argument("--format", choices=("json", "text"), default="text")

    sub.add_parser("list-checks", help="list check ids, prerequisites and descriptions")
    return p


def _load_certificate(path: str) -> Certificate:
    with open(path, encoding="utf-8") as fh:
        data = json.load(fh)
    cert = Certificate(data["instance"])
    for c in data["checks"]:
        cert.checks.append(CheckResult(CheckId(c["id"]), c["status"], c.get("elapsed_ms"),
                                       c.get("witness"), c.get("payload") or {}))
    return cert


def _verify(args) -> int:
    try:
        cfg = load_config(args.config)
    except ConfigError as exc:
        print(str(exc), file=sys.stderr)
        return EXIT_USAGE
    except OSError as exc:
        print(f"cannot read config: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if args.s_max is not None:
        cfg.s_max = args.s_max
    if args.degree_max is not None:
        cfg.degree_max = args.degree_max
    if args.seed is not None:
        cfg.seed = args.seed
    if args.format is not None:
        cfg.format = args.format
    if args.out is not None:
        cfg.output = args.out
    ctx = cfg.context()
    if cfg.s_max < 1:
        print("VALIDATION_ERROR: s_max must be at least 1", file=sys.stderr)
        return EXIT_USAGE
    if cfg.degree_max < max(ctx.seq_degrees):
        print("VALIDATION_ERROR: degree_max is below the largest sequence degree", file=sys.stderr)
        return EXIT_USAGE
    selection = args.check if args.check else cfg.selection
    threads = args.threads if args.threads else (os.cpu_count() or 1)
    cert = run_all(ctx, Bounds(cfg.s_max, cfg.degree_max), cfg.seed, selection, threads)
    body = cert.to_json(args.timings) if cfg.format == "json" else cert.to_text(args.timings)
    summary = cert.to_text(timings=True)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(body)
        sys.stdout.write(summary)
        sys.stdout.write(f"certificate written to {cfg.output}\n")
    else:
        sys.stdout.write(body)
        if cfg.format == "json":
            sys.stderr.write(summary)
    return EXIT_PASS if cert.overall == "PASS" else EXIT_FAIL


def _report(args) -> int:
    try:
        cert = _load_certificate(args.certificate)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        print(f"cannot read certificate: {exc}", file=sys.stderr)
        return EXIT_USAGE
    timings = any(c.elapsed_ms is not None for c in cert.checks)
    sys.stdout.write(cert.to_text(timings) if args.format == "text" else cert.to_json(timings))
    return EXIT_PASS if cert.overall == "PASS" else EXIT_FAIL


def _list_checks(args) -> int:
    width = max(len(c.value) for c in RUN_ORDER)
    for c in RUN_ORDER:
        pre = ", ".join(p.value for p in PREREQUISITES.get(c, ())) or "-"
        print(f"{c.value:<{width}}  requires: {pre:<25}  {DESCRIPTIONS[c]}")
    return EXIT_PASS


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_PASS
    handler = {"verify": _verify, "report": _report, "list-checks": _list_checks}[args.command]
    return handler(args)


if __name__ == "__main__":
    sys.exit(main())
