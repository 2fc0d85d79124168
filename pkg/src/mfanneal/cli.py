"""Command-line interface: solve, benchmark, oracle and compare-terms.

Exit codes: 0 success, 2 unusable input (missing or malformed file, size
guard, bad flag value), 3 solver breakdown (self-consistent mode hit its
oscillation temperature), 1 unexpected internal error. Machine-readable
results go to files; stdout carries a short human summary.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__
from .classical import (
    MODE_GRADIENT,
    MODE_SELF_CONSISTENT,
    ClassicalAnnealConfig,
    classical_anneal,
    mixing_term_table,
)
from .ensemble import (
    OBJECTIVE_CUT,
    NoiseSpec,
    TrialRecord,
    _aggregate,
    _spin_digest,
    amplitude_sweep,
    run_trials,
)
from .io import (
    GsetFormatError,
    ResultRecord,
    load_gset,
    write_ecdf_csv,
    write_results_csv,
    write_results_json,
)
from .model import IsingModel, cut_value, ising_energy, maxcut_to_ising
from .oracle import exact_max_cut
from .quantum import QuantumAnnealConfig
from .spectral import rescale_model

MODE_QUANTUM = "quantum"
MODE_CLASSICAL_GRAD = "classical-gradient"
MODE_CLASSICAL_SC = "classical-sc"

EXIT_OK = 0
EXIT_INTERNAL = 1
EXIT_BAD_INPUT = 2
EXIT_BREAKDOWN = 3

DEFAULT_SWEEP = (0.05, 0.1, 0.2, 0.4)


class BreakdownExit(RuntimeError):
    """Raised to map a self-consistent breakdown onto exit code 3."""


def _add_common(parser):
    parser.add_argument("--input", required=True, help="G-set graph file")
    parser.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    parser.add_argument("--out", default=None, help="output file path")
    parser.add_argument("--format", choices=("csv", "json"), default="csv",
                        help="output format (default csv)")
    parser.add_argument("--threads", type=int, default=os.cpu_count() or 1,
                        help="worker processes for trials; results do not "
                             "depend on this (default: available parallelism)")


def _add_solver_flags(parser):
    parser.add_argument("--ds", type=float, default=0.001,
                        help="schedule step for the quantum anneal (default 0.001)")
    parser.add_argument("--dt", type=float, default=None,
                        help="temperature step for classical modes "
                             "(default: t_start/1000)")
    parser.add_argument("--delta", type=float, default=1.0,
                        help="transverse strength (default 1)")
    parser.add_argument("--inner-tol", type=float, default=1e-8,
                        help="inner gradient tolerance (default 1e-8)")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="mfanneal",
        description="Mean-field annealing for QUBO/Ising/Max-Cut problems",
    )
    parser.add_argument("--version", action="version", version=f"mfanneal {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_solve = sub.add_parser("solve", help="run a single anneal on one instance")
    _add_common(p_solve)
    _add_solver_flags(p_solve)
    p_solve.add_argument("--mode", choices=(MODE_QUANTUM, MODE_CLASSICAL_GRAD,
                                            MODE_CLASSICAL_SC),
                         default=MODE_QUANTUM, help="solver mode (default quantum)")
    p_solve.add_argument("--amplitude", type=float, default=0.1,
                         help="symmetry-breaking noise amplitude; 0 disables "
                              "the draw (default 0.1)")

    p_bench = sub.add_parser("benchmark",
                             help="noise-ensemble trials over an amplitude sweep")
    _add_common(p_bench)
    _add_solver_flags(p_bench)
    p_bench.add_argument("--amplitude", type=float, action="append", default=None,
                         help="sweep amplitude, repeatable "
                              f"(default {' '.join(map(str, DEFAULT_SWEEP))})")
    p_bench.add_argument("--trials", type=int, default=200,
                         help="trials per amplitude (default 200)")
    p_bench.add_argument("--no-figures", action="store_true",
                         help="skip rendering the report figures")

    p_oracle = sub.add_parser("oracle", help="exhaustive optimum for small instances")
    p_oracle.add_argument("--input", required=True, help="G-set graph file")

    p_terms = sub.add_parser("compare-terms",
                             help="tabulate the entropy and transverse mixing terms")
    p_terms.add_argument("--t-over-delta", type=float, default=1.0,
                         help="temperature in units of the transverse strength "
                              "(default 1.0)")
    p_terms.add_argument("--points", type=int, default=101,
                         help="number of magnetization samples (default 101)")
    p_terms.add_argument("--out", default=None,
                         help="CSV output path (default: stdout)")
    return parser


def _validate_positive(name, value):
    if value is not None and value <= 0:
        raise ValueError(f"--{name} must be positive, got {value}")


def _load_graph(path):
    if not Path(path).is_file():
        raise FileNotFoundError(f"input file not found: {path}")
    return load_gset(path)


def _quantum_config(args):
    _validate_positive("ds", args.ds)
    _validate_positive("delta", args.delta)
    _validate_positive("inner-tol", args.inner_tol)
    return QuantumAnnealConfig(delta=args.delta, ds=args.ds,
                               inner_tol=args.inner_tol)


def _write_record(record, args, figures=True):
    if args.out is None:
        return []
    out = Path(args.out)
    written = []
    if args.format == "json":
        out.write_text(write_results_json(record), encoding="utf-8")
        written.append(out)
    else:
        out.write_text(write_results_csv(record), encoding="utf-8")
        written.append(out)
        ecdf_path = out.with_suffix(".ecdf.csv")
        ecdf_path.write_text(write_ecdf_csv(record), encoding="utf-8")
        written.append(ecdf_path)
    if figures:
        from . import plots

        ecdf_png = out.with_suffix(".ecdf.png")
        stats_png = out.with_suffix(".stats.png")
        plots.save_ecdf_figure(record.batches, ecdf_png)
        written.append(ecdf_png)
        if len(record.batches) > 1:
            plots.save_sweep_stats_figure(record.batches, stats_png)
            written.append(stats_png)
    return written


def cmd_solve(args):
    graph = _load_graph(args.input)
    model = maxcut_to_ising(graph)
    t0 = time.perf_counter()
    if args.mode == MODE_QUANTUM:
        cfg = _quantum_config(args)
        batch = run_trials(model, NoiseSpec(amplitude=args.amplitude,
                                            master_seed=args.seed, n_trials=1),
                           cfg, graph=graph, n_workers=1)
        config_echo = {"mode": args.mode, "ds": args.ds, "delta": args.delta,
                       "inner_tol": args.inner_tol, "amplitude": args.amplitude}
    else:
        mode = MODE_GRADIENT if args.mode == MODE_CLASSICAL_GRAD else MODE_SELF_CONSISTENT
        if args.dt is not None:
            _validate_positive("dt", args.dt)
        _validate_positive("inner-tol", args.inner_tol)
        scaled, _ = rescale_model(model, tol=1e-8, max_iter=100_000,
                                  seed=args.seed, fallback_abs=True)
        rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(args.seed)))
        noise = rng.uniform(-1.0, 1.0, scaled.n) * args.amplitude
        noisy = IsingModel(J=scaled.J, h=scaled.h + noise, offset=scaled.offset)
        cfg = ClassicalAnnealConfig(dt=args.dt, inner_tol=args.inner_tol, mode=mode)
        result = classical_anneal(noisy, cfg, seed=args.seed)
        if result.broke_down:
            raise BreakdownExit(
                f"self-consistent iteration broke down at T = "
                f"{result.breakdown_temperature:.6g}")
        value = cut_value(graph, result.spins)
        record_row = TrialRecord(index=0, value=value,
                                 spin_digest=_spin_digest(result.spins))
        batch = _aggregate(args.amplitude, OBJECTIVE_CUT,
                           [(record_row, result.spins)])
        config_echo = {"mode": args.mode, "dt": args.dt,
                       "inner_tol": args.inner_tol, "amplitude": args.amplitude}
    wall = time.perf_counter() - t0

    energy = ising_energy(model, batch.best_spins)
    print(f"cut value: {batch.best:g}")
    print(f"ising energy: {energy:g}")
    record = ResultRecord(problem=str(args.input), solver=args.mode,
                          config=config_echo, seed=args.seed, batches=[batch],
                          wall_clock_s=wall, version=__version__)
    for path in _write_record(record, args, figures=False):
        print(f"wrote {path}")
    return EXIT_OK


def cmd_benchmark(args):
    graph = _load_graph(args.input)
    model = maxcut_to_ising(graph)
    cfg = _quantum_config(args)
    amplitudes = args.amplitude if args.amplitude else list(DEFAULT_SWEEP)
    if any(a < 0 for a in amplitudes):
        raise ValueError("amplitudes must be non-negative")
    if args.trials < 1:
        raise ValueError("--trials must be at least 1")
    if args.threads < 1:
        raise ValueError("--threads must be at least 1")

    base = NoiseSpec(amplitude=amplitudes[0], master_seed=args.seed,
                     n_trials=args.trials)
    t0 = time.perf_counter()
    batches = amplitude_sweep(model, amplitudes, base, cfg, graph=graph,
                              n_workers=args.threads)
    wall = time.perf_counter() - t0

    print(f"{'amplitude':>10} {'trials':>7} {'failed':>7} "
          f"{'mean':>10} {'std':>9} {'best':>8}")
    for b in batches:
        print(f"{b.amplitude:>10g} {b.n_trials:>7d} {b.n_failed:>7d} "
              f"{b.mean:>10.2f} {b.std:>9.2f} {b.best:>8g}")
    overall = max(b.best for b in batches)
    print(f"overall best: {overall:g}")

    config_echo = {"ds": args.ds, "delta": args.delta, "inner_tol": args.inner_tol,
                   "amplitudes": list(map(float, amplitudes)), "trials": args.trials}
    record = ResultRecord(problem=str(args.input), solver=MODE_QUANTUM,
                          config=config_echo, seed=args.seed, batches=batches,
                          wall_clock_s=wall, version=__version__)
    for path in _write_record(record, args, figures=not args.no_figures):
        print(f"wrote {path}")
    return EXIT_OK


def cmd_oracle(args):
    graph = _load_graph(args.input)
    result = exact_max_cut(graph)
    print(f"vertices: {graph.n_vertices}  edges: {graph.n_edges}")
    print(f"exact max cut: {result.best_value:g}")
    print(f"optimal configurations: {result.num_optima}")
    return EXIT_OK


def cmd_compare_terms(args):
    if args.points < 2:
        raise ValueError("--points must be at least 2")
    _validate_positive("t-over-delta", args.t_over_delta)
    table = mixing_term_table(args.t_over_delta, args.points)
    lines = ["m,entropy_term,transverse_term"]
    lines += [f"{float(m)!r},{float(e)!r},{float(t)!r}" for m, e, t in table]
    text = "\n".join(lines) + "\n"
    if args.out is None:
        sys.stdout.write(text)
    else:
        out = Path(args.out)
        out.write_text(text, encoding="utf-8")
        print(f"wrote {out}")
        from . import plots

        fig_path = out.with_suffix(".png")
        plots.save_mixing_terms_figure(table, fig_path)
        print(f"wrote {fig_path}")
    return EXIT_OK


_COMMANDS = {
    "solve": cmd_solve,
    "benchmark": cmd_benchmark,
    "oracle": cmd_oracle,
    "compare-terms": cmd_compare_terms,
}


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return _COMMANDS[args.command](args)
    except BreakdownExit as exc:
        print(f"solver breakdown: {exc}", file=sys.stderr)
        return EXIT_BREAKDOWN
    except (FileNotFoundError, GsetFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT
    except Exception as exc:  # noqa: BLE001 - boundary of the process
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_INTERNAL


if __name__ == "__main__":
    sys.exit(main())
