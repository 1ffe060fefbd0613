"""Command-line entry point: generate, solve, bench, oracle, metrics."""

import argparse
import logging
import os
import sys
from dataclasses import replace

from .. import io
from ..datagen import generate_dataset, save_dataset
from ..errors import InvalidConfig, NotADag, ParseError, ShapeMismatch, TooLarge
from ..graph import generate_random_dag, load_adjacency_csv, save_adjacency_csv, save_edge_list
from ..l0 import save_l0_result, solve_l0
from ..metrics import CSV_COLUMNS, shd
from ..solver import SolverConfig
from .config import preset_names, resolve_config
from .experiment import evaluate, run_experiment, run_external, write_reports

EXIT_OK, EXIT_FAILED, EXIT_CONFIG = 0, 1, 2


def _spec(args, default_preset="row01_default"):
    spec = resolve_config(args.config or default_preset, scale=args.scale)
    if args.seed is not None:
        spec = replace(spec, seed=args.seed)
    if getattr(args, "jobs", None) is not None:
        spec = replace(spec, jobs=args.jobs)
    if getattr(args, "timeout_s", None) is not None:
        spec = replace(spec, timeout_s=float(args.timeout_s))
    spec.validate()
    return spec


def _solver_cfg(args):
    cfg = SolverConfig()
    if args.config:
        cfg = resolve_config(args.config).solver
    overrides = {k: v for k, v in (("lambda_", args.lambda_), ("omega", args.omega),
                                    ("max_inner", args.max_inner), ("max_outer", args.max_outer),
                                    ("learning_rate", args.learning_rate)) if v is not None}
    cfg = replace(cfg, **overrides)
    cfg.validate()
    return cfg


def cmd_generate(args):
    spec = _spec(args)
    seed = spec.seed
    g = generate_random_dag(replace(spec.graph, seed=seed))
    data_cfg = replace(spec.data, seed=seed)
    if args.n is not None:
        data_cfg = replace(data_cfg, n=args.n)
    ds = generate_dataset(g, data_cfg)
    out = io.ensure_dir(args.out)
    graph_meta = {f"graph.{k}": (v.value if hasattr(v, "value") else v)
                  for k, v in vars(spec.graph).items() if k != "seed"}
    save_dataset(os.path.join(out, "data.csv"), ds, extra={"graph.seed": seed, **graph_meta})
    save_adjacency_csv(os.path.join(out, "truth.csv"), g)
    save_edge_list(os.path.join(out, "truth_edges.txt"), g)
    io.write_matrix_csv(os.path.join(out, "root_causes.csv"), ds.root_causes.c)
    print(f"wrote {ds.x.shape[0]}x{ds.x.shape[1]} dataset and {g.num_edges}-edge DAG to {out}")
    return EXIT_OK


def cmd_solve(args):
    cfg = _solver_cfg(args)
    report, res = run_external(args.data, args.truth, cfg, output_dir=args.out,
                               timeout_s=args.timeout_s)
    print(f"learned {res.weights.num_edges} edges in {res.runtime_seconds:.1f}s "
          f"(converged={res.converged}); output in {args.out}")
    if report is not None:
        print(",".join(CSV_COLUMNS))
        print(",".join(report.to_row()))
    return EXIT_OK


def cmd_bench(args):
    spec = _spec(args)
    out, rows = run_experiment(spec, args.out or os.path.join("results", spec.name))
    failed = sum(r["status"] != "ok" for r in rows)
    print(f"{len(rows)} repetitions, {failed} failed; reports in {out}")
    return EXIT_FAILED if failed else EXIT_OK


def cmd_oracle(args):
    X = io.read_matrix_csv(args.data)
    res = solve_l0(X, zero_tol=args.zero_tol)
    save_l0_result(args.out, res)
    edges = ", ".join(f"{i}->{j}" for i, j in sorted(res.best_support)) or "(empty)"
    print(f"best L0 = {res.best_l0} over {res.num_dags_enumerated} DAGs; "
          f"{len(res.ties)} minimizing support(s); best: {edges}")
    if args.truth:
        T = load_adjacency_csv(args.truth)
        print(f"SHD to truth: {shd(res.best_weights, T)}")
    return EXIT_OK


def cmd_metrics(args):
    E = load_adjacency_csv(args.estimate)
    T = load_adjacency_csv(args.truth)
    if E.shape != T.shape:
        raise ShapeMismatch(f"estimate {E.shape} and truth {T.shape} differ")
    X = io.read_matrix_csv(args.data) if args.data else None
    report = evaluate(E, T, X=X, method=args.method)
    print(",".join(CSV_COLUMNS))
    print(",".join(report.to_row()))
    if args.out:
        write_reports(args.out, [report])
    return EXIT_OK


def build_parser():
    p = argparse.ArgumentParser(prog="sparserc", description=__doc__)
    p.add_argument("-v", "--verbose", action="store_true")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, jobs=False):
        sp.add_argument("--config", help="TOML config path or preset name "
                        f"({', '.join(preset_names())})")
        sp.add_argument("--seed", type=int)
        sp.add_argument("--scale", type=int, help="multiply the configured node count")
        if jobs:
            sp.add_argument("--jobs", type=int)
            sp.add_argument("--timeout-s", type=int, dest="timeout_s")

    g = sub.add_parser("generate", help="emit a synthetic dataset with its DAG")
    common(g)
    g.add_argument("--n", type=int)
    g.add_argument("--out", default="dataset")
    g.set_defaults(func=cmd_generate)

    s = sub.add_parser("solve", help="learn a DAG from a CSV dataset")
    s.add_argument("data")
    s.add_argument("--truth")
    s.add_argument("--config", help="TOML whose [solver] table configures the solver")
    s.add_argument("--out", default="solve_out")
    s.add_argument("--timeout-s", type=int, dest="timeout_s")
    s.add_argument("--lambda", type=float, dest="lambda_")
    s.add_argument("--omega", type=float)
    s.add_argument("--learning-rate", type=float, dest="learning_rate")
    s.add_argument("--max-inner", type=int, dest="max_inner")
    s.add_argument("--max-outer", type=int, dest="max_outer")
    s.set_defaults(func=cmd_solve)

    b = sub.add_parser("bench", help="run a seeded benchmark experiment")
    common(b, jobs=True)
    b.add_argument("--out")
    b.set_defaults(func=cmd_bench)

    o = sub.add_parser("oracle", help="exhaustive L0 search (d <= 5)")
    o.add_argument("data")
    o.add_argument("--truth")
    o.add_argument("--zero-tol", type=float, default=1e-7, dest="zero_tol")
    o.add_argument("--out", default="oracle_out")
    o.set_defaults(func=cmd_oracle)

    m = sub.add_parser("metrics", help="compare two adjacency CSVs")
    m.add_argument("estimate")
    m.add_argument("truth")
    m.add_argument("--data", help="dataset CSV, enables varsortability")
    m.add_argument("--method", default="external")
    m.add_argument("--out")
    m.set_defaults(func=cmd_metrics)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InvalidConfig, ParseError, ShapeMismatch, NotADag, TooLarge, FileNotFoundError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
