"""Seeded benchmark runs: generate, solve, score, and write CSV reports."""

import csv
import logging
import math
import os
import traceback
from concurrent.futures import ProcessPoolExecutor
from dataclasses import replace

import numpy as np

from .. import io
from ..datagen import audit_frc, generate_dataset
from ..errors import ShapeMismatch, SolverTimeout
from ..graph import generate_random_dag, load_adjacency_csv
from ..l0 import solve_l0
from ..metrics import (CSV_COLUMNS, MetricsReport, edge_rates, root_cause_metrics, shd, sid,
                       varsortability, weight_losses)
from ..solver import SolverConfig, recover_root_causes, save_result, solve
from .config import repetition_seed
from .plots import line_chart_svg

log = logging.getLogger(__name__)

EXTRA_COLUMNS = ("sweep_param", "sweep_value", "status", "cycle_edges_removed",
                 "frc_sparsity", "frc_noise", "frc_passes", "l0_shd", "error")
RUN_COLUMNS = CSV_COLUMNS + EXTRA_COLUMNS
AGGREGATE_METRICS = ("shd", "sid", "tpr", "fpr", "total_edges", "nmse", "avg_l1", "max_l1",
                     "avg_l2", "c_tpr", "c_fpr", "c_nmse", "varsortability", "runtime_s")


def evaluate(est, truth, X=None, c_est=None, c_true=None, runtime=0.0, **ident):
    """Full MetricsReport for an estimated weighted adjacency against a ground-truth DAG."""
    E = np.asarray(est, dtype=float)
    T = np.asarray(truth, dtype=float)
    tpr, fpr, total = edge_rates(E, T)
    report = MetricsReport(shd=shd(E, T), sid=sid(E, T), tpr=tpr, fpr=fpr, total_edges=total,
                           runtime_seconds=runtime, d=T.shape[0], **ident)
    if np.any(T):
        report.avg_l1, report.max_l1, report.avg_l2, report.nmse_weights = weight_losses(E, T)
    if c_est is not None and c_true is not None and np.any(c_true):
        report.c_tpr, report.c_fpr, report.c_nmse = root_cause_metrics(c_est, c_true)
    if X is not None:
        report.n = X.shape[0]
        if X.shape[0] >= 2 and np.any(T):
            vs = varsortability(X, T)
            report.varsortability = None if math.isnan(vs) else vs
    return report


def run_repetition(spec, rep, sweep_value=None):
    """One repetition end to end; returns a dict keyed by RUN_COLUMNS."""
    seed = repetition_seed(spec.seed, rep)
    row = {c: None for c in RUN_COLUMNS}
    row.update(method="sparserc", seed=seed, d=spec.graph.d, n=spec.data.n, status="ok")
    if spec.sweep is not None:
        row["sweep_param"], row["sweep_value"] = spec.sweep[0], sweep_value
    try:
        g = generate_random_dag(replace(spec.graph, seed=seed))
        ds = generate_dataset(g, replace(spec.data, seed=seed ^ 0x5EED))
        res = solve(ds.x, spec.solver, timeout_s=spec.timeout_s)
        A_hat = res.weights.weights
        c_hat = recover_root_causes(ds.x, res.weights)
        report = evaluate(A_hat, g.weights, X=ds.x, c_est=c_hat, c_true=ds.root_causes.c,
                          runtime=res.runtime_seconds, method="sparserc", seed=seed)
        row.update(zip(CSV_COLUMNS, report.to_row()))
        audit = audit_frc(ds.root_causes, g)
        row.update(cycle_edges_removed=res.cycle_edges_removed, frc_sparsity=audit.sparsity_ratio,
                   frc_noise=audit.noise_ratio, frc_passes=audit.passes)
        if spec.l0_enabled:
            l0 = solve_l0(ds.x)
            B = np.zeros((g.d, g.d))
            for i, j in l0.best_support:
                B[i, j] = 1
            row["l0_shd"] = shd(B, g.weights)
    except SolverTimeout as exc:
        row.update(status="timeout", error=str(exc))
    except Exception as exc:  # recorded per row; other repetitions continue
        row.update(status="error", error=f"{type(exc).__name__}: {exc}")
        log.debug("repetition %d failed\n%s", rep, traceback.format_exc())
    return row


def _fmt(v):
    if v is None:
        return "na"
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return "na" if math.isnan(v) else repr(v)
    return str(v)


def _jobs(spec):
    tasks = []
    values = spec.sweep[1] if spec.sweep is not None else [None]
    for value in values:
        sub = spec if value is None else spec.with_param(spec.sweep[0], value)
        for rep in range(spec.repetitions):
            tasks.append((sub, rep, value))
    return tasks


def _task(args):
    return run_repetition(*args)


def run_experiment(spec, output_dir=None):
    """Run every repetition (and sweep value) of ``spec`` and write the report directory.

    Writes ``runs.csv`` (one row per repetition), ``aggregate.csv`` (mean and population
    standard deviation per metric), and SVG plots under ``plots/`` when a sweep is present.
    Returns ``(report_dir, rows)``.
    """
    spec.validate()
    out = io.ensure_dir(output_dir or spec.output_dir)
    tasks = _jobs(spec)
    rows = [None] * len(tasks)
    with open(os.path.join(out, "runs.csv"), "w", newline="") as f:
        writer = csv.writer(f, lineterminator="\n")
        writer.writerow(RUN_COLUMNS)
        next_idx = 0

        def flush():
            nonlocal next_idx
            while next_idx < len(rows) and rows[next_idx] is not None:
                writer.writerow([_fmt(rows[next_idx][c]) for c in RUN_COLUMNS])
                f.flush()
                next_idx += 1

        if spec.jobs == 1 or len(tasks) == 1:
            for k, t in enumerate(tasks):
                rows[k] = _task(t)
                log.info("%s rep %d: %s", spec.name, t[1], rows[k]["status"])
                flush()
        else:
            with ProcessPoolExecutor(max_workers=min(spec.jobs, len(tasks))) as pool:
                futures = [pool.submit(_task, t) for t in tasks]
                for k, fut in enumerate(futures):
                    rows[k] = fut.result()
                    flush()
    aggregate = write_aggregate(os.path.join(out, "aggregate.csv"), rows)
    if spec.sweep is not None:
        write_plots(os.path.join(out, "plots"), spec.sweep[0], aggregate)
    io.write_keyvalue(os.path.join(out, "experiment.txt"), {
        "name": spec.name, "seed": spec.seed, "repetitions": spec.repetitions,
        "sweep": None if spec.sweep is None else spec.sweep[0],
        "failed": sum(r["status"] != "ok" for r in rows),
    })
    return out, rows


def read_runs(path):
    with open(path, newline="") as f:
        return list(csv.DictReader(f))


def _num(v):
    if v is None or v in ("na", ""):
        return None
    return float(v)


def aggregate_rows(rows):
    """Group rows by sweep value; mean and population std of each metric over ok rows."""
    groups = {}
    for r in rows:
        if r["status"] == "ok":
            groups.setdefault(_fmt(r["sweep_value"]), []).append(r)
    out = []
    for key, members in groups.items():
        for m in AGGREGATE_METRICS:
            vals = [v for v in (_num(r[m]) for r in members) if v is not None]
            if vals:
                out.append((key, m, float(np.mean(vals)), float(np.std(vals)), len(vals)))
            else:
                out.append((key, m, None, None, 0))
    return out


def write_aggregate(path, rows):
    agg = aggregate_rows(rows)
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(["sweep_value", "metric", "mean", "std", "count"])
        for key, m, mean, std, cnt in agg:
            w.writerow([key, m, _fmt(mean), _fmt(std), cnt])
    return agg


def write_plots(plot_dir, param, aggregate):
    io.ensure_dir(plot_dir)
    by_metric = {}
    for key, m, mean, std, _ in aggregate:
        if mean is None or key == "na":
            continue
        by_metric.setdefault(m, []).append((float(key), mean, std))
    for m, pts in by_metric.items():
        pts.sort()
        svg = line_chart_svg([p[0] for p in pts], [p[1] for p in pts], [p[2] for p in pts],
                             xlabel=param, ylabel=m, title=f"{m} vs {param}")
        with open(os.path.join(plot_dir, f"{m}.svg"), "w") as f:
            f.write(svg)


def run_external(data_csv, truth_csv=None, solver_cfg=None, output_dir="solve_out", timeout_s=None):
    """Solve on a CSV dataset; writes the learned graph and, given a truth CSV, metrics.csv.

    Returns ``(MetricsReport or None, SolveResult)``.
    """
    cfg = solver_cfg or SolverConfig()
    X = io.read_matrix_csv(data_csv)
    truth = None
    if truth_csv is not None:
        truth = load_adjacency_csv(truth_csv)
        if truth.shape[0] != X.shape[1]:
            raise ShapeMismatch(f"data has {X.shape[1]} columns but truth is {truth.shape[0]}x{truth.shape[1]}")
    res = solve(X, cfg, timeout_s=timeout_s)
    io.ensure_dir(output_dir)
    save_result(output_dir, res, cfg)
    report = None
    if truth is not None:
        report = evaluate(res.weights.weights, truth, X=X, runtime=res.runtime_seconds,
                          method="sparserc")
        write_reports(os.path.join(output_dir, "metrics.csv"), [report])
    return report, res


def write_reports(path, reports):
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(CSV_COLUMNS)
        for r in reports:
            w.writerow(r.to_row())


def read_reports(path):
    with open(path, newline="") as f:
        return [MetricsReport.from_row(row) for row in csv.DictReader(f)]
