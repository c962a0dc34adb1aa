"""Command-line front end.

    dendrite-ifs c-digits --count N [--mode canonical | --mode file PATH]
    dendrite-ifs verify all|separation|disjoint|osc|onepoint|tree|density
                 [--depth N] [--h P/Q] [--precision-start N] [--precision-cap N]
                 [--mode ...] [--report PATH]
    dendrite-ifs render --depth N --out PATH [--overlay D delta segment labels]
    dendrite-ifs graph --depth N --out PATH [--h P/Q]

Exit status: 0 pass, 1 fail, 2 inconclusive, 64 usage error.
"""

from __future__ import annotations

import argparse
import sys
from fractions import Fraction

from . import report as rpt
from .dendrite import adjacency_graph, write_edge_list
from .interval import format_rational, parse_rational
from .render import OVERLAYS, SceneSpec, write_scene
from .suite import CHECKS, DEFAULT_DEPTHS, ConfigError, RunConfig, run_suite
from .ternary import CANONICAL, EXPLICIT_FILE, CConstant, DigitFileError, DigitStream, StreamExhausted

EX_USAGE = 64


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EX_USAGE, f"{self.prog}: usage error: {message}\n")


def _rational(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _positive(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected an integer, got {text!r}") from None
    if value < 1:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {value}")
    return value


def _add_mode(p: argparse.ArgumentParser) -> None:
    p.add_argument(
        "--mode",
        nargs="+",
        default=[CANONICAL],
        metavar="MODE",
        help="'canonical' (default) or 'file PATH' for an explicit digit file",
    )


def _mode(values) -> tuple:
    if values == [CANONICAL]:
        return CANONICAL, None
    if len(values) == 2 and values[0] == EXPLICIT_FILE:
        return EXPLICIT_FILE, values[1]
    raise UsageError(f"--mode expects 'canonical' or 'file PATH', got {' '.join(values)!r}")


def _stream(mode: str, path) -> DigitStream:
    if mode == CANONICAL:
        return DigitStream.canonical()
    try:
        return DigitStream.from_file(path)
    except FileNotFoundError:
        raise UsageError(f"digit file not found: {path}") from None
    except DigitFileError as exc:
        raise UsageError(f"bad digit file {path}: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="dendrite-ifs", description="Exact verification and rendering for the four-map dendrite system.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("c-digits", help="print the first N base-3 digits of c")
    p.add_argument("--count", type=_positive, required=True)
    _add_mode(p)

    p = sub.add_parser("verify", help="run verification checks")
    p.add_argument("check", choices=("all",) + CHECKS)
    p.add_argument("--depth", type=_positive, help="depth for the check (for 'all': every check)")
    p.add_argument("--h", type=_rational, default=Fraction(2, 9), help="h as P/Q (default 2/9)")
    p.add_argument("--precision-start", type=_positive, default=128)
    p.add_argument("--precision-cap", type=_positive, default=100_000)
    p.add_argument("--report", metavar="PATH")
    _add_mode(p)

    p = sub.add_parser("render", help="render cells and overlays to SVG")
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--overlay", nargs="*", default=[], choices=OVERLAYS)
    p.add_argument("--delta-depth", type=int, default=2)
    p.add_argument("--width", type=_positive, default=1000)
    p.add_argument("--h", type=_rational, default=Fraction(2, 9))

    p = sub.add_parser("graph", help="write the depth-N adjacency graph as an edge list")
    p.add_argument("--depth", type=_positive, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--h", type=_rational, default=Fraction(2, 9))
    p.add_argument("--precision-cap", type=_positive, default=100_000)
    return parser


def _cmd_c_digits(args) -> int:
    stream = _stream(*_mode(args.mode))
    try:
        print(stream.digits(args.count))
    except StreamExhausted as exc:
        raise UsageError(str(exc)) from None
    return 0


def _cmd_verify(args) -> int:
    mode, path = _mode(args.mode)
    if mode == EXPLICIT_FILE:
        _stream(mode, path)  # surface file errors before any check runs
    checks = CHECKS if args.check == "all" else (args.check,)
    depths = dict(DEFAULT_DEPTHS)
    if args.depth is not None:
        for name in checks:
            depths[name] = args.depth
    config = RunConfig(
        h=args.h,
        depths=depths,
        precision_start=args.precision_start,
        precision_cap=args.precision_cap,
        mode=mode,
        digit_file=path,
        report_path=args.report,
    )
    try:
        config.validate()
    except ConfigError as exc:
        raise UsageError(str(exc)) from None
    reports = run_suite(config, checks)
    for r in reports:
        margin = "" if r.min_margin is None else f" min_margin~{float(r.min_margin):.6g}"
        print(f"{r.check_name}: {r.result} (depth {r.depth}, {r.items_checked} items{margin})")
        for f in r.failures[:5]:
            subject = f.get("word") or f.get("words") or f.get("target") or ""
            print(f"  witness: {f.get('kind')} {subject}".rstrip())
    return rpt.overall_exit_code(reports)


def _cmd_render(args) -> int:
    try:
        spec = SceneSpec(depth=args.depth, overlays=frozenset(args.overlay), delta_depth=args.delta_depth, width=args.width)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    if not 0 < args.h < 1:
        raise UsageError("h must satisfy 0 < h < 1")
    count = write_scene(spec, args.out, args.h)
    print(f"wrote {count} cells to {args.out}")
    return 0


def _cmd_graph(args) -> int:
    if not 0 < args.h < 1:
        raise UsageError("h must satisfy 0 < h < 1")
    graph = adjacency_graph(args.depth, args.h, CConstant(precision_cap=args.precision_cap))
    write_edge_list(graph, args.out)
    print(f"wrote {len(graph.edges)} edges over {len(graph.vertices)} cells to {args.out} (h={format_rational(args.h)})")
    return rpt.EXIT_CODES[rpt.INCONCLUSIVE] if graph.unknown_pairs else 0


COMMANDS = {"c-digits": _cmd_c_digits, "verify": _cmd_verify, "render": _cmd_render, "graph": _cmd_graph}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"dendrite-ifs: usage error: {exc}", file=sys.stderr)
        return EX_USAGE
    except OSError as exc:
        print(f"dendrite-ifs: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
