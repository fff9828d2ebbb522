"""Command-line front end.

Subcommands: gen, matrix, simulate, sweep, diagnose, analyze.
Exit codes: 0 success, 2 usage or validation problem, 3 numerical failure,
4 resource limit.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .analysis import classify, fit_beta, last_decade
from .errors import NumericalError, ResourceLimitError, ValidationError
from .experiment import (
    ExperimentConfig,
    RunSpec,
    execute_run,
    independence_banner,
    preset,
    read_moment_csv,
    run_sweep,
)
from .hybrid import DEFAULT_VALUE_MAP, letters_to_values, value_letters, write_potential_csv
from .sources import ExplicitSource, resolve_source, resolve_substitution
from .substitution import primitivity_power, spectral_info
from .symbolic import factor_statistics, witness_search

DIAGNOSE_WINDOW = 1 << 16
DIAGNOSE_LENGTHS = (4, 8, 16, 32)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hybridqc",
        description="Hybrid quasicrystal potentials: generation, transport, diagnostics.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="print the first letters of a source")
    p.add_argument("source", help="catalogue name, periodic:<pattern>, or file:<path>")
    p.add_argument("length", type=int)
    p.add_argument("--output", type=Path, help="write to a file instead of stdout")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("matrix", help="substitution matrix and spectral report")
    p.add_argument("source")
    p.set_defaults(func=cmd_matrix)

    p = sub.add_parser("simulate", help="run one potential and fit its exponent")
    p.add_argument("--config", type=Path, help="INI config file")
    p.add_argument("--parent-a", help="first parent source")
    p.add_argument("--parent-b", help="second parent source (default: pure parent-a run)")
    p.add_argument("--kappa", type=float)
    p.add_argument("--shift", type=int, default=0)
    p.add_argument("--lambda", dest="coupling", type=float)
    p.add_argument("--N", dest="n_sites", type=int)
    p.add_argument("--T-max", dest="t_max", type=float)
    p.add_argument("--dt", help="time step or 'auto'")
    p.add_argument("--output", type=Path, help="output directory")
    p.add_argument("--potential-csv", type=Path, help="also dump the potential as n,V_n")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("sweep", help="run a sweep over shifts/kappas and summarize")
    p.add_argument("--config", type=Path)
    p.add_argument("--preset", choices=("fig1", "fig2", "fig3"))
    p.add_argument("--full", action="store_true", help="use the full lattice size")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--output", type=Path)
    p.add_argument("--kappas", help="comma-separated mixing weights")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("diagnose", help="symbolic diagnostics for a pair of sources")
    p.add_argument("source_a")
    p.add_argument("source_b")
    p.add_argument("--window", type=int, default=DIAGNOSE_WINDOW)
    p.add_argument("--max-word-len", type=int, default=8)
    p.add_argument("--shift-range", type=int, default=0)
    p.add_argument("--lengths", default=",".join(str(n) for n in DIAGNOSE_LENGTHS))
    p.add_argument("--kappa", type=float, default=0.5)
    p.add_argument("--output", type=Path, help="directory for diagnostics CSV files")
    p.set_defaults(func=cmd_diagnose)

    p = sub.add_parser("analyze", help="re-fit the exponent on an existing moment CSV")
    p.add_argument("csv", type=Path)
    p.add_argument("--t-min", type=float)
    p.add_argument("--t-max", type=float)
    p.set_defaults(func=cmd_analyze)

    return parser


def cmd_gen(args) -> int:
    word = resolve_source(args.source).prefix(args.length)
    if args.output:
        args.output.write_text(word + "\n")
    else:
        print(word)
    return 0


def cmd_matrix(args) -> int:
    sub, seed, literal = resolve_substitution(args.source)
    m = sub.matrix()
    info = spectral_info(m)
    power = primitivity_power(sub)
    print(f"substitution {sub.name or args.source}: "
          + ", ".join(f"{a} -> {img}" for a, img in sub.images.items()))
    if literal:
        print("literal map: " + ", ".join(f"{k} -> {v}" for k, v in literal.items()))
    print(f"seed: {seed}")
    print("matrix (rows count letters in each image):")
    for letter, row in zip(m.alphabet, m.entries):
        print(f"  {letter}: " + " ".join(str(e) for e in row))
    print(f"dominant eigenvalue: {info.dominant:.12g}")
    print("other moduli: " + (", ".join(f"{x:.12g}" for x in info.others) or "none"))
    print(f"primitivity power: {power if power is not None else 'not found (<= 16)'}")
    verdict = "yes" if info.pisot else "no"
    if info.indeterminate:
        verdict += " (a modulus sits on the unit circle within margin)"
    print(f"pisot: {verdict}")
    return 0


def _config_from_args(args) -> ExperimentConfig:
    cfg = ExperimentConfig.from_ini(args.config) if args.config else ExperimentConfig()
    if getattr(args, "parent_a", None):
        cfg.parent_a = args.parent_a
    if getattr(args, "parent_b", None):
        cfg.parent_b = args.parent_b
    if getattr(args, "kappa", None) is not None:
        cfg.kappa = args.kappa
        cfg.kappas = None
    if getattr(args, "coupling", None) is not None:
        cfg.coupling = args.coupling
    if getattr(args, "n_sites", None) is not None:
        cfg.n_sites = args.n_sites
    if getattr(args, "t_max", None) is not None:
        cfg.t_max = args.t_max
    if getattr(args, "dt", None) is not None:
        cfg.dt = "auto" if args.dt == "auto" else float(args.dt)
    if getattr(args, "output", None) is not None:
        cfg.output_dir = args.output
    return cfg


def cmd_simulate(args) -> int:
    if args.config is None and args.parent_a is None:
        raise ValidationError("simulate needs --parent-a or --config")
    cfg = _config_from_args(args)
    if args.parent_b is None and args.config is None:
        # pure single-source run: mix the source with itself at full weight
        cfg.parent_b = cfg.parent_a
        kappa = 1.0 if args.kappa is None else args.kappa
    else:
        kappa = cfg.kappa if args.kappa is None else args.kappa
    cfg.shifts = (args.shift,)
    cfg.kappa, cfg.kappas = kappa, None
    cfg.validate()
    spec = RunSpec(cfg.parent_a, cfg.parent_b, args.shift, kappa)
    result = execute_run(cfg, spec)
    if args.potential_csv:
        from .experiment import build_potential

        with open(args.potential_csv, "w") as fh:
            write_potential_csv(build_potential(cfg, spec), fh)
    print(f"run {spec.run_id}: beta = {result.fit.beta:.4f} "
          f"(residual {result.fit.residual:.3g}), regime = {result.regime.label}")
    if result.csv_path:
        print(f"moments written to {result.csv_path}")
    return 0


def cmd_sweep(args) -> int:
    if bool(args.config) == bool(args.preset):
        raise ValidationError("sweep needs exactly one of --config or --preset")
    if args.preset:
        cfg, runs = preset(args.preset, full=args.full, output_dir=args.output)
    else:
        cfg = ExperimentConfig.from_ini(args.config)
        if args.output is not None:
            cfg.output_dir = args.output
        runs = None
    if args.kappas:
        cfg.kappas = tuple(float(v) for v in args.kappas.split(",") if v.strip())
        runs = None if args.preset is None else _respread_kappas(runs, cfg)
    outcome = run_sweep(cfg, runs=runs, jobs=args.jobs)
    print(outcome.banner)
    for r in outcome.results:
        print(f"{r.spec.run_id}: beta = {r.fit.beta:.4f} "
              f"(residual {r.fit.residual:.3g}), regime = {r.regime.label}")
    if outcome.summary_path:
        print(f"summary written to {outcome.summary_path}")
    return 0


def _respread_kappas(runs: list[RunSpec] | None, cfg: ExperimentConfig) -> list[RunSpec] | None:
    """Replace each preset run's kappa by every configured mixing weight."""
    if runs is None:
        return None
    return [
        RunSpec(r.parent_a, r.parent_b, r.shift, kappa)
        for r in runs
        for kappa in cfg.kappa_values()
    ]


def cmd_diagnose(args) -> int:
    lengths = tuple(int(v) for v in args.lengths.split(",") if v.strip())
    window = args.window
    usable = tuple(n for n in lengths if window >= 1000 * n)
    if not usable:
        raise ValidationError(
            f"window {window} supports no requested length; need window >= 1000*n"
        )
    if usable != lengths:
        skipped = sorted(set(lengths) - set(usable))
        print(f"skipping lengths {skipped}: window {window} below 1000x the length")
    lengths = usable
    src_a = resolve_source(args.source_a)
    src_b = resolve_source(args.source_b)

    print(independence_banner(args.source_a, args.source_b))

    witnesses = witness_search(src_a, src_b, args.max_word_len, window,
                               shift_range=args.shift_range)
    if witnesses:
        print(f"{len(witnesses)} witness pairs never align over a {window}-letter window:")
        for w in witnesses[:500]:
            print(f"  ({w.r}, {w.s}) over shifts {w.shift_range}")
        if len(witnesses) > 500:
            print(f"  ... {len(witnesses) - 500} more")
    else:
        print(f"no witness up to length {args.max_word_len} "
              f"over a {window}-letter window (consistent with a minimal product)")

    va = letters_to_values(src_a.window(0, window), DEFAULT_VALUE_MAP)
    vb = letters_to_values(src_b.window(0, window), DEFAULT_VALUE_MAP)
    mixed = args.kappa * va + (1.0 - args.kappa) * vb
    hybrid_src = ExplicitSource(value_letters(mixed), name="hybrid")

    tables = []
    for label, src in (("a", src_a), ("b", src_b), ("hybrid", hybrid_src)):
        stats = factor_statistics(src, lengths, window)
        tables.append((label, src.name, stats))
        print(f"factor statistics for {label} = {src.name} (window {window}):")
        print("  n  p_n  eta_hat      score")
        for row in stats:
            print(f"  {row.n:<3d}{row.p_n:<5d}{row.eta_hat:<13.6g}{row.score:.6g}")

    if args.output:
        args.output.mkdir(parents=True, exist_ok=True)
        for label, name, stats in tables:
            path = args.output / f"factors_{label}.csv"
            with open(path, "w") as fh:
                fh.write(f"# sequence = {name}\n# window = {window}\n")
                fh.write("n,p_n,eta_hat,score\n")
                for row in stats:
                    fh.write(f"{row.n},{row.p_n},{row.eta_hat:.17g},{row.score:.17g}\n")
        print(f"diagnostics written to {args.output}")
    return 0


def cmd_analyze(args) -> int:
    meta, series = read_moment_csv(args.csv)
    t_lo, t_hi = last_decade(series)
    if args.t_min is not None:
        t_lo = args.t_min
    if args.t_max is not None:
        t_hi = args.t_max
    fit = fit_beta(series, t_lo, t_hi)
    regime = classify(series, fit)
    run_id = meta.get("run_id", str(args.csv))
    print(f"{run_id}: beta = {fit.beta:.4f} over [{t_lo:g}, {t_hi:g}] "
          f"({fit.n_points} points, residual {fit.residual:.3g}), regime = {regime.label}")
    return 0


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ValidationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except ResourceLimitError as exc:
        print(f"resource limit: {exc}", file=sys.stderr)
        return 4
    except NumericalError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
