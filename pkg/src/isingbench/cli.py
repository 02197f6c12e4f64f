"""Command-line interface.

Commands: generate, solve, verify, benchmark, kp, orderstats.  Exit codes:
0 success, 1 runtime failure, 2 usage error.  Instance and sample JSON
files are byte-deterministic for fixed flags and seed (they embed version,
command line and seed but no timestamp); CSV/SVG reports additionally
carry a timestamp line.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from pathlib import Path

import numpy as np

from . import __version__, generator, knapsack, metrics, orderstats, serialize, svg, topology
from .model import IsingModel, hardness_ratio
from .quadrature import QuadratureError
from .solvers import (
    SaConfig,
    SqaConfig,
    external_solver,
    simulated_annealing,
    simulated_quantum_annealing,
    solve_exact,
)

EXIT_OK, EXIT_RUNTIME, EXIT_USAGE = 0, 1, 2


class UsageError(ValueError):
    """Invalid command-line specification."""


# -- spec string parsing ------------------------------------------------------


def _split_spec(spec: str) -> tuple[str, str]:
    name, _, rest = spec.partition(":")
    return name.strip().lower(), rest


def parse_topology_spec(spec: str) -> topology.HardwareGraph:
    """chimera:M,N,T | pegasus:M | zephyr:M[,T] | file:PATH"""
    name, rest = _split_spec(spec)
    try:
        if name == "chimera":
            m, n, t = (int(v) for v in rest.split(","))
            return topology.build_chimera(m, n, t)
        if name == "pegasus":
            return topology.build_pegasus(int(rest))
        if name == "zephyr":
            parts = [int(v) for v in rest.split(",")]
            if len(parts) == 1:
                return topology.build_zephyr(parts[0])
            m, t = parts
            return topology.build_zephyr(m, t)
        if name == "file":
            return topology.load_graph(Path(rest).read_text())
    except (ValueError, OSError) as exc:
        raise UsageError(f"bad topology spec {spec!r}: {exc}") from exc
    raise UsageError(f"unknown topology family {name!r}")


def parse_dist_spec(spec: str) -> generator.CoefficientDistribution:
    """uniform:lo,hi | normal:mu,sigma,lo,hi | table:v=p,v=p,..."""
    name, rest = _split_spec(spec)
    try:
        if name == "uniform":
            lo, hi = (float(v) for v in rest.split(","))
            return generator.uniform(lo, hi)
        if name == "normal":
            mu, sigma, lo, hi = (float(v) for v in rest.split(","))
            return generator.truncated_normal(mu, sigma, lo, hi)
        if name == "table":
            rows = []
            for item in rest.split(","):
                v, _, p = item.partition("=")
                rows.append((float(v), float(p)))
            return generator.discrete(rows)
    except UsageError:
        raise
    except ValueError as exc:
        raise UsageError(f"bad distribution spec {spec!r}: {exc}") from exc
    raise UsageError(f"unknown distribution kind {name!r}")


def parse_dist_pair(args) -> tuple:
    if args.dist is not None:
        if args.dist_h or args.dist_J:
            raise UsageError("give either --dist or the --dist-h/--dist-J pair")
        name, rest = _split_spec(args.dist)
        if name == "cbfm":
            return generator.cbfm_distributions()
        if name == "f":
            try:
                return generator.uniform_hardness_family(float(rest))
            except ValueError as exc:
                raise UsageError(str(exc)) from exc
        raise UsageError(f"unknown combined distribution {args.dist!r}")
    if not (args.dist_h and args.dist_J):
        raise UsageError("need --dist, or both --dist-h and --dist-J")
    return parse_dist_spec(args.dist_h), parse_dist_spec(args.dist_J)


def _parse_kv(rest: str) -> dict:
    out = {}
    if rest:
        for item in rest.split(","):
            k, sep, v = item.partition("=")
            if not sep:
                raise UsageError(f"expected key=value, got {item!r}")
            out[k.strip()] = v.strip()
    return out


def parse_solver_spec(spec: str, seed: int):
    """exact | sa[:k=v,...] | sqa[:k=v,...] | ext:COMMAND

    Returns (label, callable(model, threads) -> SampleSet).
    """
    name, rest = _split_spec(spec)
    if name == "exact":
        return "exact", lambda model, threads: solve_exact(model)
    if name == "ext":
        if not rest:
            raise UsageError("ext solver needs a command, e.g. ext:python solver.py")
        return "ext", lambda model, threads: external_solver(model, rest)
    kv = _parse_kv(rest)
    try:
        if name == "sa":
            config = SaConfig(
                num_reads=int(kv.pop("reads", 100)),
                sweeps=int(kv.pop("sweeps", 1000)),
                beta_schedule=kv.pop("schedule", "geometric"),
                beta_hot=float(kv.pop("beta_hot")) if "beta_hot" in kv else None,
                beta_cold=float(kv.pop("beta_cold")) if "beta_cold" in kv else None,
                seed=int(kv.pop("seed", seed)),
            )
            if kv:
                raise UsageError(f"unknown sa option(s): {sorted(kv)}")
            return "sa", lambda model, threads: simulated_annealing(model, config, threads)
        if name == "sqa":
            config = SqaConfig(
                num_reads=int(kv.pop("reads", 50)),
                sweeps=int(kv.pop("sweeps", 500)),
                trotter_slices=int(kv.pop("slices", 32)),
                temperature=float(kv.pop("temp", 0.05)),
                gamma_initial=float(kv.pop("gamma_hot", 3.0)),
                gamma_final=float(kv.pop("gamma_cold", 0.01)),
                seed=int(kv.pop("seed", seed)),
            )
            if kv:
                raise UsageError(f"unknown sqa option(s): {sorted(kv)}")
            return "sqa", lambda model, threads: simulated_quantum_annealing(
                model, config, threads
            )
    except UsageError:
        raise
    except ValueError as exc:
        raise UsageError(f"bad solver spec {spec!r}: {exc}") from exc
    raise UsageError(f"unknown solver {name!r}")


def parse_os_dist(spec: str) -> orderstats.ContinuousDistribution:
    """uniform:lo,hi | normal:mu,sigma,lo[,hi] | exp:rate"""
    name, rest = _split_spec(spec)
    try:
        if name == "uniform":
            lo, hi = (float(v) for v in rest.split(","))
            return orderstats.uniform_dist(lo, hi)
        if name == "normal":
            parts = [float(v) for v in rest.split(",")]
            if len(parts) == 3:
                mu, sigma, lo = parts
                return orderstats.truncated_normal_dist(mu, sigma, lo)
            mu, sigma, lo, hi = parts
            return orderstats.truncated_normal_dist(mu, sigma, lo, hi)
        if name == "exp":
            return orderstats.exponential_dist(float(rest))
    except ValueError as exc:
        raise UsageError(f"bad distribution spec {spec!r}: {exc}") from exc
    raise UsageError(f"unknown distribution kind {name!r}")


# -- output helpers -----------------------------------------------------------


def _provenance(args) -> dict:
    return {
        "version": __version__,
        "command": "isingbench " + " ".join(args.raw_argv),
        "seed": args.seed,
    }


def _meta_lines(args) -> list[str]:
    p = _provenance(args)
    stamp = time.strftime("%Y-%m-%dT%H:%M:%S%z")
    return [
        f"version={p['version']}",
        f"command={p['command']}",
        f"seed={p['seed']}",
        f"timestamp={stamp}",
    ]


def _out_dir(args) -> Path:
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, float):
        return repr(v)
    return str(v)


def write_table(path: Path, header: list[str], rows: list, args) -> None:
    """CSV (with '#' metadata lines) or JSON depending on --format."""
    meta = _meta_lines(args)
    if args.format == "json":
        obj = {
            "meta": dict(line.split("=", 1) for line in meta),
            "columns": header,
            "rows": [[None if c == "" else c for c in map(_cell, row)] for row in rows],
        }
        path = path.with_suffix(".json")
        path.write_text(json.dumps(obj, indent=1) + "\n")
    else:
        lines = [f"# {line}" for line in meta]
        lines.append(",".join(header))
        lines += [",".join(_cell(c) for c in row) for row in rows]
        path.write_text("\n".join(lines) + "\n")
    print(f"wrote {path}")


def write_svg(path: Path, content: str, args) -> None:
    comment = "<!-- " + "; ".join(_meta_lines(args)) + " -->\n"
    path.write_text(comment + content)
    print(f"wrote {path}")


# -- commands -----------------------------------------------------------------


def cmd_generate(args) -> int:
    graph = parse_topology_spec(args.topology)
    h_dist, j_dist = parse_dist_pair(args)
    model = generator.generate_instance(graph, h_dist, j_dist, args.seed)
    name = args.name or _default_instance_name(args)
    path = _out_dir(args) / name
    path.write_text(serialize.instance_to_json(model, provenance=_provenance(args)))
    try:
        f_str = f"{hardness_ratio(model).F:.4f}"
    except (ValueError, TypeError):
        f_str = "n/a"
    print(
        f"wrote {path}: {graph.num_nodes} nodes, {graph.num_edges} edges, "
        f"empirical F={f_str}"
    )
    return EXIT_OK


def _default_instance_name(args) -> str:
    topo = args.topology.replace(":", "-").replace(",", "x").replace("/", "_")
    dist = (args.dist or f"{args.dist_h}_{args.dist_J}").replace(":", "-").replace(",", "x")
    return f"{topo}_{dist}_s{args.seed}.json"


def _load_instance(path: str) -> IsingModel:
    return serialize.instance_from_json(Path(path).read_text())


def cmd_solve(args) -> int:
    model = _load_instance(args.instance)
    label, run = parse_solver_spec(args.solver, args.seed)
    samples = run(model, args.threads)
    name = args.name or f"{Path(args.instance).stem}_{label}.json"
    path = _out_dir(args) / name
    path.write_text(serialize.sample_set_to_json(samples, provenance=_provenance(args)))
    best = samples.best()
    print(
        f"wrote {path}: {len(samples)} records ({samples.num_samples} samples), "
        f"best energy {best.energy:.6f}"
    )
    return EXIT_OK


def cmd_verify(args) -> int:
    model = _load_instance(args.instance)
    samples = serialize.sample_set_from_json(Path(args.samples).read_text())
    try:
        worst = samples.check_energies(model, tol=args.tol)
    except ValueError as exc:
        print(f"FAIL: {exc}")
        return EXIT_RUNTIME
    print(f"OK: {len(samples)} records re-derived, max deviation {worst:.3g}")
    return EXIT_OK


def cmd_benchmark(args) -> int:
    if len(args.solver) < 2:
        raise UsageError("benchmark needs at least two --solver specs (candidate + baseline)")
    solver_specs = [parse_solver_spec(s, args.seed) for s in args.solver]
    labels = _unique_labels([label for label, _ in solver_specs])
    baseline_label = args.baseline or labels[-1]
    if baseline_label not in labels:
        raise UsageError(f"baseline {baseline_label!r} not among solvers {labels}")

    out = _out_dir(args)
    samples_dir = out / "samples"
    samples_dir.mkdir(exist_ok=True)

    rl_rows = []
    error_rows = []
    per_solver_groups: dict[str, dict] = {label: {} for label in labels}
    boxes = []
    ok_instances = 0
    for inst_path in args.instances:
        stem = Path(inst_path).stem
        try:
            model = _load_instance(inst_path)
            results = {}
            for label, (_, run) in zip(labels, solver_specs):
                samples = run(model, args.threads)
                results[label] = samples
                sp = samples_dir / f"{stem}_{label}.json"
                sp.write_text(
                    serialize.sample_set_to_json(samples, provenance=_provenance(args))
                )
        except Exception as exc:  # per-instance failure: report row, keep going
            error_rows.append([stem, str(exc)])
            continue
        ok_instances += 1
        for label in labels:
            per_solver_groups[label][stem] = results[label]
            if label == baseline_label:
                continue
            rl = metrics.relative_difference(results[label], results[baseline_label])
            rl_rows.append(
                [stem, label, rl.min, rl.q1, rl.median, rl.mean, rl.q3, rl.max]
            )
            boxes.append((f"{stem}:{label}", rl.stats))

    cons_rows = []
    for label in labels:
        for row in metrics.consistency_report(per_solver_groups[label]):
            cons_rows.append(
                [label, row.group_key, row.mean_gap, row.q1_gap, row.q3_gap, row.num_samples]
            )

    write_table(
        out / "rl_summary.csv",
        ["instance", "solver", "min", "q1", "median", "mean", "q3", "max"],
        rl_rows,
        args,
    )
    write_table(
        out / "consistency.csv",
        ["solver", "group_key", "mean_gap", "q1_gap", "q3_gap", "num_samples"],
        cons_rows,
        args,
    )
    if error_rows:
        write_table(out / "errors.csv", ["instance", "error"], error_rows, args)
        print(f"{len(error_rows)} instance(s) failed", file=sys.stderr)
    if boxes:
        write_svg(
            out / "rl_boxplot.svg",
            svg.boxplot_svg(boxes, "relative difference vs baseline minimum", "RL"),
            args,
        )
    return EXIT_OK if ok_instances else EXIT_RUNTIME


def _unique_labels(labels: list[str]) -> list[str]:
    seen: dict[str, int] = {}
    out = []
    for label in labels:
        if label in seen:
            seen[label] += 1
            out.append(f"{label}{seen[label]}")
        else:
            seen[label] = 0
            out.append(label)
    return out


def cmd_kp(args) -> int:
    root = Path(args.input)
    if root.is_dir():
        files = sorted(p for p in root.iterdir() if p.is_file())
    elif root.exists():
        files = [root]
    else:
        raise UsageError(f"no such file or directory: {root}")
    sources = [(p.name, p.read_text()) for p in files]
    try:
        batch = knapsack.batch_hardness(sources, lam=args.lam, bins=args.bins, which=args.which)
    except ValueError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    out = _out_dir(args)
    write_table(
        out / "kp_hardness.csv",
        ["file", "n", "C", "lambda", "sigma_h", "sigma_J", "F_qubo", "F_ising", "dominance"],
        [
            [
                r["file"], r["n"], r["C"], r["lambda"], r["sigma_h"], r["sigma_J"],
                r["F_qubo"], r["F_ising"], r["dominance"],
            ]
            for r in batch.rows
        ],
        args,
    )
    write_table(
        out / "kp_histogram.csv",
        ["bin_lo", "bin_hi", "count"],
        [
            [float(batch.bin_edges[k]), float(batch.bin_edges[k + 1]), int(c)]
            for k, c in enumerate(batch.counts)
        ],
        args,
    )
    write_svg(
        out / "kp_histogram.svg",
        svg.histogram_svg(
            batch.bin_edges, batch.counts,
            f"hardness ratios ({args.which}) over {len(batch.rows)} instances",
            "F",
        ),
        args,
    )
    for name, reason in batch.skipped:
        print(f"skipped {name}: {reason}", file=sys.stderr)
    return EXIT_OK


def cmd_orderstats(args) -> int:
    dist_w = parse_os_dist(args.dist_w)
    dist_c = parse_os_dist(args.dist_c) if args.dist_c else None
    if args.mode == "scaled_range" and dist_c is None:
        raise UsageError("mode scaled_range needs --dist-c")
    config = orderstats.QuadratureConfig()
    draws = orderstats.monte_carlo_range(
        dist_w, dist_c, args.n, args.mode, args.samples, args.seed
    )
    q_lo = draws[int(0.001 * len(draws))]
    q_hi = draws[min(int(0.999 * len(draws)), len(draws) - 1)]
    xs = np.linspace(q_lo, q_hi, args.grid)
    rows = []
    cdf_col, mc_col = [], []
    for x in xs:
        mc = orderstats.empirical_cdf(draws, float(x))
        try:
            c = orderstats.statistic_cdf(dist_w, dist_c, args.n, args.mode, float(x), config)
            p = orderstats.statistic_pdf(dist_w, dist_c, args.n, args.mode, float(x), config)
            converged = True
        except QuadratureError as exc:
            c, p, converged = exc.estimate, math.nan, False
        rows.append([float(x), c, p, mc, abs(c - mc), converged])
        cdf_col.append(c)
        mc_col.append(mc)
    out = _out_dir(args)
    write_table(
        out / f"orderstats_{args.mode}.csv",
        ["x", "cdf", "pdf", "mc_cdf", "abs_diff", "converged"],
        rows,
        args,
    )
    write_svg(
        out / f"orderstats_{args.mode}.svg",
        svg.lines_svg(
            [float(x) for x in xs],
            [("quadrature cdf", cdf_col), ("monte carlo cdf", mc_col)],
            f"{args.mode} cdf, n={args.n}",
            "x",
            "P",
        ),
        args,
    )
    sup = max(r[4] for r in rows)
    print(f"sup |cdf - mc_cdf| over grid: {sup:.5f}")
    return EXIT_OK


# -- parser -------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=0, help="master seed (default 0)")
    common.add_argument("--threads", type=int, default=1, help="worker threads (default 1)")
    common.add_argument("--out", default=".", help="output directory (default .)")
    common.add_argument("--format", choices=["csv", "json"], default="csv")

    parser = argparse.ArgumentParser(
        prog="isingbench",
        description="Hardware-native Ising instances, hardness analysis and "
        "annealing benchmarks",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", parents=[common], help="generate an instance file")
    p.add_argument("--topology", required=True, help="chimera:M,N,T | pegasus:M | zephyr:M[,T] | file:PATH")
    p.add_argument("--dist", help="cbfm | f:TARGET")
    p.add_argument("--dist-h", help="uniform:lo,hi | normal:mu,sigma,lo,hi | table:v=p,...")
    p.add_argument("--dist-J", help="same grammar as --dist-h")
    p.add_argument("--name", help="output filename (default derived from specs)")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("solve", parents=[common], help="run one solver on one instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--solver", required=True, help="exact | sa[:k=v,...] | sqa[:k=v,...] | ext:CMD")
    p.add_argument("--name", help="output filename")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("verify", parents=[common], help="re-check a sample set against an instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--samples", required=True)
    p.add_argument("--tol", type=float, default=1e-9)
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("benchmark", parents=[common], help="candidates vs baseline with the RL metric")
    p.add_argument("--instances", nargs="+", required=True)
    p.add_argument("--solver", action="append", required=True, help="repeat; last (or --baseline) is the baseline")
    p.add_argument("--baseline", help="label of the baseline solver")
    p.set_defaults(func=cmd_benchmark)

    p = sub.add_parser("kp", parents=[common], help="knapsack hardness reports")
    p.add_argument("--input", required=True, help="instance file or directory")
    p.add_argument("--lam", type=float, default=None, help="penalty weight (default 1 + max profit)")
    p.add_argument("--bins", type=int, default=50)
    p.add_argument("--which", choices=["ising", "qubo"], default="ising")
    p.set_defaults(func=cmd_kp)

    p = sub.add_parser("orderstats", parents=[common], help="range-law grids vs Monte Carlo")
    p.add_argument("--dist-w", required=True, help="uniform:lo,hi | normal:mu,sigma,lo[,hi] | exp:rate")
    p.add_argument("--dist-c", help="capacity distribution (scaled_range)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mode", choices=list(orderstats.MODES), required=True)
    p.add_argument("--grid", type=int, default=41)
    p.add_argument("--samples", type=int, default=200_000)
    p.set_defaults(func=cmd_orderstats)

    return parser


def main(argv=None) -> int:
    argv = sys.argv[1:] if argv is None else list(argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    args.raw_argv = argv
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # runtime failure
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    sys.exit(main())
