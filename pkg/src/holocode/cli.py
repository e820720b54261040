"""Command-line entry point: ``holocode <subcommand> ...``."""

from __future__ import annotations

import argparse
import logging
import sys

from . import code_builder, erasure, simulate, tensor_analysis
from .errors import CapacityError, ParseError
from .pauli import SEEDS, seed_by_name

EXIT_OK, EXIT_USAGE, EXIT_CAPACITY, EXIT_IO = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _check_seed(args) -> int:
    seed = seed_by_name(args.seed)
    if args.mode == "perfect":
        failures = tensor_analysis.perfect_failures(seed)
    else:
        failures = tensor_analysis.block_perfect_failures(seed)
    print(f"{args.seed} {args.mode}: {'true' if not failures else 'false'}")
    for part in failures[: args.show]:
        legs = [seed.leg_order[i] for i in part.a_legs]
        print("  not an isometry from A = {" + ",".join(legs) + "}")
    if len(failures) > args.show:
        print(f"  ... {len(failures) - args.show} more")
    return EXIT_OK


def _build(args) -> int:
    code = code_builder.build_code(args.seed, args.radius)
    code_builder.export_code(code, args.out)
    print(f"wrote {args.out}: n={code.n} k={code.k} rate={float(code_builder.code_rate(code)):.4f}")
    return EXIT_OK


def _decode(args) -> int:
    code = code_builder.import_code(args.code)
    eps = erasure.ErasurePattern.from_str(args.erasure.strip())
    if eps.n != code.n:
        raise ValueError(f"erasure mask has {eps.n} bits, code has {code.n} qubits")
    decoders = ["optimal", "greedy"] if args.decoder == "both" else [args.decoder]
    for name in decoders:
        if name == "optimal":
            v = erasure.is_recoverable_optimal(code, eps, args.tile, types=args.types, witness=True)
            print(f"optimal: {'recoverable' if v.recoverable else 'lost'}")
            if args.witness:
                for kind, lam in v.witnesses.items():
                    print(f"  lambda_{kind}: {'none' if lam is None else lam}")
        else:
            ok = erasure.is_recoverable_greedy(code.get_tiling(), eps, args.tile)
            print(f"greedy: {'recoverable' if ok else 'lost'}")
    return EXIT_OK


def _config(args) -> simulate.SimulationConfig:
    return simulate.SimulationConfig(
        seed=args.seed,
        radius=args.radius,
        decoder=args.decoder,
        trials=args.trials,
        rng_seed=args.rng_seed,
        exact_cutoff=args.cutoff,
        types=args.types,
        tile=args.tile,
        workers=args.workers,
    )


def _simulate(args) -> int:
    cfg = _config(args)
    cfg.validate()
    curve = simulate.simulate(cfg)
    simulate.write_curve_csv(curve, args.out)
    print(f"wrote {args.out}: {len(curve.entries)} weights, n={curve.n}")
    return EXIT_OK


def _threshold(args) -> int:
    curves = [simulate.read_curve_csv(p) for p in args.curves]
    report = simulate.find_threshold(curves)
    print(report.summary())
    if args.mixed:
        ps = [i / args.grid for i in range(args.grid + 1)]
        with open(args.mixed, "w", encoding="ascii") as fh:
            fh.write(simulate.format_mixed_csv(curves, ps))
    return EXIT_OK


def _plot(args) -> int:
    curves = [simulate.read_curve_csv(p) for p in args.curves]
    points = [simulate.read_curve_csv(p) for p in args.points]
    simulate.plot_curves(curves, args.out, points)
    print(f"wrote {args.out}")
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="holocode", description="Holographic stabilizer codes and erasure decoding.")
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    seeds = sorted(SEEDS)

    s = sub.add_parser("check-seed", help="test a seed tensor for (block-)perfection")
    s.add_argument("--seed", choices=seeds, required=True)
    s.add_argument("--mode", choices=("perfect", "block"), default="perfect")
    s.add_argument("--show", type=int, default=5, help="failing partitions to list")
    s.set_defaults(func=_check_seed)

    s = sub.add_parser("build", help="build a code and write it to a text file")
    s.add_argument("--seed", choices=[n for n in seeds if n != "bell"], required=True)
    s.add_argument("--radius", type=int, required=True)
    s.add_argument("--out", required=True)
    s.set_defaults(func=_build)

    s = sub.add_parser("decode", help="decide recoverability of one erasure pattern")
    s.add_argument("--code", required=True)
    s.add_argument("--erasure", required=True, help="bit string, 1 marks an erased qubit")
    s.add_argument("--decoder", choices=("optimal", "greedy", "both"), default="both")
    s.add_argument("--tile", type=int, default=0)
    s.add_argument("--types", choices=erasure.TYPES, default="both")
    s.add_argument("--witness", action="store_true")
    s.set_defaults(func=_decode)

    s = sub.add_parser("simulate", help="estimate P_rec(a) and write a curve CSV")
    s.add_argument("--seed", choices=[n for n in seeds if n != "bell"], required=True)
    s.add_argument("--radius", type=int, required=True)
    s.add_argument("--decoder", choices=simulate.DECODERS, default="optimal")
    s.add_argument("--trials", type=int, default=10_000)
    s.add_argument("--rng-seed", type=int, default=0)
    s.add_argument("--cutoff", type=int, default=1_000_000, help="enumerate weights with at most this many patterns")
    s.add_argument("--types", choices=erasure.TYPES, default="both")
    s.add_argument("--tile", type=int, default=0)
    s.add_argument("--workers", type=int, default=1)
    s.add_argument("--out", required=True)
    s.set_defaults(func=_simulate)

    s = sub.add_parser("threshold", help="locate crossings between curves of successive radii")
    s.add_argument("--curves", nargs="+", required=True)
    s.add_argument("--mixed", help="also write R,p,p_rec on a grid to this CSV")
    s.add_argument("--grid", type=int, default=100)
    s.set_defaults(func=_threshold)

    s = sub.add_parser("plot", help="plot mixed recovery curves to SVG")
    s.add_argument("--curves", nargs="+", required=True)
    s.add_argument("--points", nargs="*", default=[], help="curves drawn as markers")
    s.add_argument("--out", required=True)
    s.set_defaults(func=_plot)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except CapacityError as exc:
        print(f"capacity error: {exc}", file=sys.stderr)
        return EXIT_CAPACITY
    except (OSError, ParseError) as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return EXIT_IO
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
