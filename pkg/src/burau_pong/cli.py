"""Command-line front end: ``burau-pong <command> [options]``.

Exit codes: 0 when no check failed, 1 when some check failed, 2 for usage
and I/O errors.
"""

from __future__ import annotations

import argparse
import os
import sys
from typing import Optional, Sequence

from .burau import BuiltinError, builtin
from .exactfield import _is_prime
from .pingpong import (
    Certificate,
    SampleSpec,
    angles_suite,
    check_builtin,
    free_word_check,
    intersection_suite,
    minset_scan,
    opposition_suite,
    push_suite,
    run_disjointness,
    run_pong,
)
from .render import FIGURES, render

__all__ = ["main", "build_parser"]

SUITES = ("intersection", "opposition", "push", "minset", "angles")

EXIT_PASS, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _char(text: str) -> int:
    try:
        p = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"characteristic must be an integer, got {text!r}")
    if p != 0 and not _is_prime(p):
        raise argparse.ArgumentTypeError(f"characteristic must be 0 or a prime, got {p}")
    return p


def _seed(text: str) -> int:
    try:
        s = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}")
    if not 0 <= s < 2**64:
        raise argparse.ArgumentTypeError("seed must fit in an unsigned 64-bit integer")
    return s


def _positive(text: str) -> int:
    try:
        n = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}")
    if n < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {n}")
    return n


def _nonneg(text: str) -> int:
    n = int(text) if text.lstrip("-").isdigit() else None
    if n is None or n < 0:
        raise argparse.ArgumentTypeError(f"expected a non-negative integer, got {text!r}")
    return n


def _pair(text: str) -> tuple:
    table = {"f": 1, "f^-1": -1, "finv": -1, "k": 1, "k^-1": -1, "kinv": -1}
    parts = [x.strip() for x in text.split(",")]
    if len(parts) != 2 or parts[0] not in ("f", "f^-1", "finv") or parts[1] not in ("k", "k^-1", "kinv"):
        raise argparse.ArgumentTypeError("pair must look like f,k or f^-1,k^-1")
    return table[parts[0]], table[parts[1]]


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--char", type=_char, default=0, help="0 for Q(t) or a prime p for F_p(t) (default 0)")
    common.add_argument("--out", default=None,
                        help="output directory (default ./certificates, or ./figures for render)")
    common.add_argument("--format", choices=("json",), default="json", help="certificate format")
    common.add_argument("--seed", type=_seed, default=1, help="campaign seed (default 1)")
    common.add_argument("--no-timing", action="store_true",
                        help="write elapsed_ms = 0 so certificates are byte-identical across runs")
    common.add_argument("--quiet", action="store_true", help="only print the summary line")

    parser = _Parser(prog="burau-pong", description="Exact ping-pong certificates for f and k acting on the A~2 building.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("check", parents=[common], help="verify the built-in constants")
    p.add_argument("--constants", default=None, help="read the constants from this file instead")

    p = sub.add_parser("verify", parents=[common], help="run a deterministic suite")
    p.add_argument("suite", choices=SUITES)
    p.add_argument("--radius", type=_nonneg, default=None,
                   help="box radius (intersection default 8, minset default 4)")
    p.add_argument("--nmax", type=_nonneg, default=15, help="power range for push (default 15)")

    p = sub.add_parser("pingpong", parents=[common], help="disjointness and containment campaigns")
    p.add_argument("--mode", choices=("metric", "simplicial", "both"), default="both")
    p.add_argument("--m", type=_positive, default=3)
    p.add_argument("--n", type=_positive, default=3)
    p.add_argument("--samples", type=_positive, default=200)
    p.add_argument("--complexity", type=_positive, default=6, help="max factors per random matrix")
    p.add_argument("--max-degree", type=_nonneg, default=3, help="max |degree| of elementary entries")

    p = sub.add_parser("free", parents=[common], help="check reduced words in f^m, k^n")
    p.add_argument("--m", type=_positive, default=3)
    p.add_argument("--n", type=_positive, default=3)
    p.add_argument("--maxlen", type=_positive, default=8)

    p = sub.add_parser("render", parents=[common], help="write an SVG figure")
    p.add_argument("figure", choices=FIGURES)
    p.add_argument("--pair", type=_pair, default=(1, 1), help="apartment for apartment_pair, e.g. f,k^-1")
    p.add_argument("--radius", type=_nonneg, default=6)
    return parser


def _report(cert: Certificate, args) -> None:
    if not args.quiet:
        for c in cert.checks:
            print(f"  [{c['status']:4}] {c['name']}")
            if c["status"] == "fail" and "witness" in c:
                print(f"         witness: {c['witness']}")
    print(f"{cert.campaign} (char {cert.char}): {cert.summary.upper()}")


def _merge(name: str, params: dict, char: int, seed: int, parts) -> Certificate:
    cert = Certificate(name, params, char, seed)
    for part in parts:
        for c in part.checks:
            entry = dict(c)
            entry["name"] = f"{part.campaign}: {c['name']}"
            cert.checks.append(entry)
        cert.elapsed_ms += part.elapsed_ms
    return cert


def _run(args) -> Certificate:
    char = args.char
    if args.command == "check":
        text = None
        if args.constants:
            try:
                with open(args.constants, encoding="utf-8") as fh:
                    text = fh.read()
            except OSError as exc:
                raise UsageError(f"cannot read constants file: {exc}")
        try:
            return check_builtin(char, text)
        except BuiltinError as exc:
            cert = Certificate("check", {"source": "file" if text else "builtin"}, char, 0)
            cert.add(f"constants entry {exc.entry}", False, str(exc))
            return cert
    if args.command == "verify":
        if args.suite == "intersection":
            return intersection_suite(8 if args.radius is None else args.radius, char)
        if args.suite == "opposition":
            return opposition_suite(char)
        if args.suite == "push":
            return push_suite(args.nmax, char)
        if args.suite == "minset":
            return minset_scan(4 if args.radius is None else args.radius, char, args.seed)
        return angles_suite(char)
    if args.command == "pingpong":
        spec = SampleSpec(args.seed, args.samples, args.complexity, args.max_degree)
        modes = ("metric", "simplicial") if args.mode == "both" else (args.mode,)
        parts = []
        for mode in modes:
            parts.append(run_disjointness(mode, spec, char))
            parts.append(run_pong(args.m, args.n, mode, spec, char))
        params = {"m": args.m, "n": args.n, "mode": args.mode, "spec": spec.as_dict()}
        return _merge(f"pingpong_{args.mode}_m{args.m}_n{args.n}", params, char, args.seed, parts)
    if args.command == "free":
        return free_word_check(args.m, args.n, args.maxlen, char)
    raise UsageError(f"unknown command {args.command!r}")


def _render(args) -> int:
    svg = render(builtin(args.char), args.figure, args.pair, args.radius)
    out = args.out or "figures"
    name = args.figure
    if args.figure == "apartment_pair":
        tag = {(1, 1): "f_k", (1, -1): "f_kinv", (-1, 1): "finv_k", (-1, -1): "finv_kinv"}[args.pair]
        name += "_" + tag
    path = os.path.join(out, f"{name}_r{args.radius}_char{args.char}.svg")
    try:
        os.makedirs(out, exist_ok=True)
        with open(path, "w", encoding="utf-8") as fh:
            fh.write(svg)
    except OSError as exc:
        print(f"burau-pong: cannot write {path}: {exc}", file=sys.stderr)
        return EXIT_USAGE
    print(path)
    return EXIT_PASS


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code is not None else EXIT_USAGE
    if args.command == "render":
        return _render(args)
    try:
        cert = _run(args)
    except UsageError as exc:
        print(f"burau-pong: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BuiltinError as exc:
        print(f"burau-pong: constants check failed at {exc.entry}: {exc}", file=sys.stderr)
        return EXIT_FAIL
    _report(cert, args)
    try:
        path = cert.write(args.out or "certificates", timing=not args.no_timing)
    except OSError as exc:
        print(f"burau-pong: cannot write certificate: {exc}", file=sys.stderr)
        return EXIT_USAGE
    if not args.quiet:
        print(f"certificate: {path}")
    return EXIT_PASS if cert.passed else EXIT_FAIL


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
