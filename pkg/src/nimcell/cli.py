"""nimcell command line: solve | ca | reduce | equiv | check | render."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .cellular import ca_rows, find_pattern
from .circuits import bracket_from_rule, gates_from_expr
from .errors import BoxMismatch, DimensionMismatch, NimcellError, ShapeMismatch
from .formats import (
    InputError,
    game_from_json,
    game_to_json,
    gadget_to_json,
    read_pbm,
    read_text,
    report_to_json,
    rule_from_json,
    write_csv,
    write_pbm,
)
from .games import ModularGame, resolve_threads, solve_invariant_exact, solve_modular
from .reductions import augment_101, invariant_from_modular
from .verify import check_emulation, check_gadget, compile_rule, equiv_bounded

EXIT_OK, EXIT_INPUT, EXIT_SHAPE, EXIT_MISMATCH = 0, 1, 2, 3


def parse_box(text: str) -> tuple[int, ...]:
    try:
        box = tuple(int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"box must be comma-separated integers, got {text!r}")
    if not box or any(b < 1 for b in box):
        raise argparse.ArgumentTypeError(f"box bounds must be >= 1, got {text!r}")
    return box


def _emit(data: bytes, out) -> None:
    if out is None or out == "-":
        sys.stdout.buffer.write(data)
        sys.stdout.flush()
    else:
        Path(out).write_bytes(data)


def _load_game(path):
    return game_from_json(read_text(path))


def _load_rule(path):
    return rule_from_json(read_text(path))


def cmd_solve(args) -> int:
    game = _load_game(args.game)
    d = 2 if isinstance(game, ModularGame) else game.d
    if len(args.box) != d:
        print(f"box has {len(args.box)} dimensions, game has {d}", file=sys.stderr)
        return EXIT_SHAPE
    if isinstance(game, ModularGame):
        grid = solve_modular(game, args.box)
    else:
        grid = solve_invariant_exact(game, args.box, threads=args.threads)
        if not grid.all_reliable:
            print(f"warning: {int((~grid.reliable).sum())} cells left unsettled", file=sys.stderr)
    fmt = args.format or ("pbm" if d == 2 else "csv")
    if fmt == "pbm":
        if d != 2:
            print("pbm output needs a two-dimensional box", file=sys.stderr)
            return EXIT_SHAPE
        data = write_pbm(grid.bits)
    else:
        data = write_csv(grid.p_positions())
    _emit(data, args.output)
    return EXIT_OK


def cmd_ca(args) -> int:
    rule = _load_rule(args.rule)
    if args.find is not None:
        hit = find_pattern(rule, args.find, args.T, args.W)
        print("NOT-FOUND-WITHIN-BOUND" if hit is None else f"FOUND {hit[0]} {hit[1]}")
        return EXIT_OK
    rows = ca_rows(rule, args.T, args.W)
    _emit(write_pbm(rows.to_array().T), args.output)
    return EXIT_OK


def cmd_reduce(args) -> int:
    rule = _load_rule(args.rule)
    outs = args.output
    game = compile_rule(rule)
    if args.target == "modular":
        Path(outs[0]).write_text(game_to_json(game))
    elif args.target == "modular-101-pair":
        if len(outs) != 2:
            print("modular-101-pair needs two output paths", file=sys.stderr)
            return EXIT_INPUT
        g1, g2 = augment_101(gates_from_expr(bracket_from_rule(rule)))
        Path(outs[0]).write_text(game_to_json(g1))
        Path(outs[1]).write_text(game_to_json(g2))
    else:
        inv, spec = invariant_from_modular(game)
        out = Path(outs[0])
        out.write_text(game_to_json(inv))
        sidecar = out.with_name(out.name.removesuffix(".json") + ".gadget.json")
        sidecar.write_text(gadget_to_json(spec))
    return EXIT_OK


def cmd_equiv(args) -> int:
    a, b = _load_game(args.a), _load_game(args.b)
    try:
        diff = equiv_bounded(a, b, args.box, threads=args.threads)
    except (ShapeMismatch, DimensionMismatch, BoxMismatch) as exc:
        print(f"shape mismatch: {exc}", file=sys.stderr)
        return EXIT_SHAPE
    if diff is None:
        print("EQUAL-WITHIN-BOX")
    else:
        print("DIFFER at (" + ",".join(str(c) for c in diff) + ")")
    return EXIT_OK


def cmd_check(args) -> int:
    if args.emulation is not None:
        T, W = args.emulation
        report = check_emulation(_load_rule(args.file), T, W)
    else:
        game = _load_game(args.file)
        if not isinstance(game, ModularGame):
            print("gadget check needs a modular game file", file=sys.stderr)
            return EXIT_SHAPE
        if len(args.gadget) != 2:
            print("gadget box must be two-dimensional", file=sys.stderr)
            return EXIT_SHAPE
        report = check_gadget(game, args.gadget, threads=args.threads)
    _emit(report_to_json(report).encode(), args.output)
    return EXIT_OK if report.all_match else EXIT_MISMATCH


def cmd_render(args) -> int:
    bits = read_pbm(Path(args.pbm).read_bytes())
    on, off = args.chars[0], args.chars[1]
    width, height = bits.shape
    for y in range(height - 1, -1, -1):
        print(f"{y:>4} " + "".join(on if bits[x, y] else off for x in range(width)))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="nimcell", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    def threads(sp):
        sp.add_argument("--threads", type=int, default=None, help="solver threads (default $NIMCELL_THREADS or 1)")

    s = sub.add_parser("solve", help="solve a game file over a box")
    s.add_argument("game")
    s.add_argument("--box", type=parse_box, required=True)
    s.add_argument("--format", choices=["pbm", "csv"])
    s.add_argument("-o", "--output")
    threads(s)
    s.set_defaults(func=cmd_solve)

    s = sub.add_parser("ca", help="run a rule file, or search it for a pattern")
    s.add_argument("rule")
    s.add_argument("T", type=int)
    s.add_argument("W", type=int)
    s.add_argument("--find", metavar="PATTERN")
    s.add_argument("-o", "--output")
    s.set_defaults(func=cmd_ca)

    s = sub.add_parser("reduce", help="compile a rule file into game files")
    s.add_argument("rule")
    s.add_argument("target", choices=["modular", "modular-101-pair", "invariant"])
    s.add_argument("-o", "--output", nargs="+", required=True)
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("equiv", help="compare two games inside a box")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--box", type=parse_box, required=True)
    threads(s)
    s.set_defaults(func=cmd_equiv)

    s = sub.add_parser("check", help="verify emulation of a rule, or the gadget of a modular game")
    s.add_argument("file")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--emulation", type=int, nargs=2, metavar=("T", "W"))
    g.add_argument("--gadget", type=parse_box, metavar="W,H")
    s.add_argument("-o", "--output")
    threads(s)
    s.set_defaults(func=cmd_check)

    s = sub.add_parser("render", help="draw a PBM file as text, y upwards")
    s.add_argument("pbm")
    s.add_argument("--chars", default="#.", help="two characters for P and non-P cells")
    s.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if hasattr(args, "threads"):
        args.threads = resolve_threads(args.threads)
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (DimensionMismatch, ShapeMismatch, BoxMismatch) as exc:
        print(f"shape error: {exc}", file=sys.stderr)
        return EXIT_SHAPE
    except (NimcellError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
