"""``termorder`` command line: order, compile, fidelity, noisy.

Each subcommand takes hamiltonian files or fixture names, an optional flat
``key = value`` config file, and flag overrides. CSV goes to ``--out`` when
given, otherwise to stdout. Failures exit nonzero after printing one JSON
line to stderr, e.g. ``{"error": "ConfigError", "message": "..."}``.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

from . import bench


def _common(p: argparse.ArgumentParser) -> None:
    p.add_argument("hamiltonians", nargs="*", help="*.ham files or shipped fixture names")
    p.add_argument("--config", help="flat key=value config file")
    p.add_argument("--strategies", help="comma-separated, e.g. lex,tsp,mctsp,random:3")
    p.add_argument("-r", "--trotter", dest="r", type=int)
    p.add_argument("-t", "--time", dest="t", type=float, help="evolution time for compile/noisy")
    p.add_argument("--arch", choices=("ladder", "star", "star_ancilla"))
    p.add_argument("--seed", type=int)
    p.add_argument("--cover-mode", choices=("auto", "exact", "greedy"))
    p.add_argument("--out", help="output directory")
    p.add_argument("--set", action="append", default=[], metavar="KEY=VALUE", help="any config key")
    p.add_argument("-v", "--verbose", action="store_true")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="termorder", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("order", help="term permutations, clique stats, predicted CNOTs")
    _common(p)
    p.add_argument("--dump-tsp", action="store_true", help="also write the CNOT distance matrices")

    p = sub.add_parser("compile", help="circuits and gate-count CSV")
    _common(p)

    p = sub.add_parser("fidelity", help="process fidelity over a time grid")
    _common(p)
    p.add_argument("--t-max", type=float)
    p.add_argument("--t-step", type=float)
    p.add_argument("--enumerate", action="store_const", const=True, help="sweep every clique permutation")

    p = sub.add_parser("noisy", help="Hellinger metrics under depolarizing noise")
    _common(p)
    p.add_argument("--p", help="comma-separated error rates")
    p.add_argument("--shots", type=int)
    p.add_argument("--initial-states", help="comma-separated: entangled_pair,equal_superposition,complex")
    p.add_argument("--dump-distributions", action="store_true")
    return parser


def _config(args) -> bench.BenchConfig:
    over = {k: getattr(args, k, None) for k in (
        "strategies", "r", "t", "arch", "seed", "cover_mode", "out", "t_max", "t_step",
        "enumerate", "p", "shots", "initial_states",
    )}
    if args.hamiltonians:
        over["hamiltonians"] = args.hamiltonians
    for item in args.set:
        if "=" not in item:
            raise bench.ConfigError(f"--set expects KEY=VALUE, got {item!r}")
        k, v = item.split("=", 1)
        over[k.strip()] = v.strip()
    return bench.load_config(args.config, over)


def _emit(text: str, out: Path | None, name: str) -> None:
    if out is None:
        sys.stdout.write(text)
    else:
        out.mkdir(parents=True, exist_ok=True)
        (out / name).write_text(text)


def run(args) -> None:
    cfg = _config(args)
    out = Path(cfg.out) if cfg.out else None
    if args.command == "order":
        rows = bench.cmd_order(cfg)
        _emit(bench.rows_to_csv(rows, bench.ORDER_COLUMNS), out, "order.csv")
        if args.dump_tsp:
            text = "".join(bench.distance_report(h) for h in cfg.hamiltonians)
            _emit(text, out, "distances.txt")
    elif args.command == "compile":
        rows = bench.cmd_compile(cfg, out / "circuits" if out else None)
        _emit(bench.rows_to_csv(rows, bench.COMPILE_COLUMNS), out, "compile.csv")
    elif args.command == "fidelity":
        series, summary = bench.cmd_fidelity(cfg)
        if out is None:
            sys.stdout.write(bench.rows_to_csv(summary, bench.FIDELITY_SUMMARY_COLUMNS))
        else:
            _emit(bench.rows_to_csv(series, bench.FIDELITY_COLUMNS), out, "fidelity.csv")
            _emit(bench.rows_to_csv(summary, bench.FIDELITY_SUMMARY_COLUMNS), out, "fidelity_summary.csv")
    elif args.command == "noisy":
        dump = out / "distributions" if (out and args.dump_distributions) else None
        rows = bench.cmd_noisy(cfg, dump)
        _emit(bench.rows_to_csv(rows, bench.NOISY_COLUMNS), out, "noisy.csv")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        run(args)
    except (ValueError, OSError) as e:
        print(json.dumps({"error": type(e).__name__, "message": str(e)}), file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
