"""Benchmark harness: JSON run configs, high-accuracy reference solves
with on-disk caching, solver comparison grids, trace emission and a
certificate summary report.

Config schema (JSON object):

    problem: {"kind": "synthetic_quadratic", "m", "xi", "seed",
              "tau1", "tau2"}
           | {"kind": "synthetic_logistic", "m", "n", "seed",
              "tau1", "tau2"}
           | {"kind": "quadratic_dataset" | "logistic_dataset",
              "name" or "path", "tau1", "tau2",
              "max_rows"?, "max_cols"?}
    solvers: list of {"id": "gces" | "fista" | "amgs", ...params}
             gces params: gamma0 ("zero" | "mu" | "3L0+mu" | float),
                          L0_factor?, eta_u?, eta_d?, use_memory?
             fista/amgs params: L0_factor?, eta_u?, eta_d? (amgs only)
    seeds: list of integers (one run per (solver, seed); seeds drive x0)
    max_iters, tolerance, gap_target?, L0_factor? (global default),
    reference_budget?, record_wall_time?, max_workers?

Starting points are standard-normal vectors drawn from each seed.
"""

import hashlib
import json
import math
import statistics
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .baselines import amgs_run, fista_run
from .certificates import certificate_check
from .errors import ReferenceFailureError
from .libsvm import default_cache_dir, load_dataset, parse_libsvm, truncate
from .solver import GcesConfig, run
from .trace import emit_trace_csv
from .zoo import (SyntheticSpec, as_problem, logistic_from_matrix,
                  make_synthetic, make_synthetic_logistic,
                  quadratic_from_matrix)

DEFAULT_ETA_U = 2.0
DEFAULT_ETA_D = 0.9


@dataclass
class RunConfig:
    problem: dict
    solvers: list
    seeds: list
    max_iters: int = 2000
    tolerance: float = 0.0
    gap_target: float = 1e-6
    L0_factor: float = 1.0
    reference_budget: int = 20000
    record_wall_time: bool = False
    max_workers: int = 1
    output_dir: str | None = None

    def __post_init__(self):
        if not self.solvers:
            raise ValueError("config needs at least one solver")
        if not self.L0_factor > 0:
            raise ValueError("L0_factor must be positive")
        if not self.seeds:
            raise ValueError("config needs at least one seed")


def load_config(path) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        raw = json.load(fh)
    return RunConfig(**raw)


def build_instance(problem_cfg: dict, cache_dir=None, offline: bool = False):
    """Materialize the zoo instance described by a config's problem block."""
    kind = problem_cfg.get("kind")
    p = dict(problem_cfg)
    p.pop("kind", None)
    if kind == "synthetic_quadratic":
        spec = SyntheticSpec(m=p["m"], xi=p["xi"], seed=p.get("seed", 0),
                             tau1=p.get("tau1", 0.0), tau2=p.get("tau2", 0.0))
        return make_synthetic(spec)
    if kind == "synthetic_logistic":
        return make_synthetic_logistic(m=p["m"], n=p["n"], seed=p.get("seed", 0),
                                       tau1=p.get("tau1", 0.0),
                                       tau2=p.get("tau2", 0.0))
    if kind in ("quadratic_dataset", "logistic_dataset"):
        if "path" in p:
            with open(p["path"], "r", encoding="ascii", errors="replace") as fh:
                ds = parse_libsvm(fh)
        else:
            ds = load_dataset(p["name"], cache_dir=cache_dir, offline=offline)
        if p.get("max_rows") or p.get("max_cols"):
            ds = truncate(ds, p.get("max_rows"), p.get("max_cols"))
        labels = ds.labels
        if kind == "logistic_dataset":
            present = set(np.unique(labels))
            if not present <= {-1.0, 1.0}:
                # regression-style targets: binarize at the median
                labels = np.where(labels > np.median(labels), 1.0, -1.0)
            return logistic_from_matrix(ds.features, labels,
                                        p.get("tau1", 0.0), p.get("tau2", 0.0))
        return quadratic_from_matrix(ds.features, labels,
                                     p.get("tau1", 0.0), p.get("tau2", 0.0))
    raise ValueError(f"unknown problem kind {kind!r}")


def _problem_digest(instance) -> str:
    h = hashlib.sha256()
    a = instance.A
    for arr in (a.row_offsets, a.col_indices, a.values, instance.b):
        h.update(np.ascontiguousarray(arr).tobytes())
    h.update(f"{type(instance).__name__}:{instance.tau1}:{instance.tau2}".encode())
    return h.hexdigest()[:24]


@dataclass
class Reference:
    x: np.ndarray
    F: float
    verified: bool
    residuals: dict = field(default_factory=dict)


def reference_solve(problem, budget: int = 20000, residual_tol: float = 1e-12,
                    cache_dir=None, instance=None) -> Reference:
    """High-accuracy solve used as the x* oracle.

    Runs the memory solver and fista to a tiny mapping residual (capped by
    `budget` iterations each), keeps the lower objective, and cross-checks
    that both agree to 1e-9 relative.  Budget exhaustion without agreement
    raises; results are cached on disk when an instance digest is known.
    """
    cache_file = None
    if instance is not None:
        cache = Path(cache_dir) if cache_dir is not None else default_cache_dir()
        cache.mkdir(parents=True, exist_ok=True)
        cache_file = cache / f"ref_{_problem_digest(instance)}.npz"
        if cache_file.exists():
            blob = np.load(cache_file)
            return Reference(x=blob["x"], F=float(blob["F"]),
                             verified=bool(blob["verified"]))

    x0 = np.zeros(problem.dimension)
    cfg = GcesConfig(gamma0="zero", L0=problem.lipschitz_hat,
                     max_iters=budget, tolerance=residual_tol)
    main = run(problem, cfg, x0)
    fista = fista_run(problem, L0=problem.lipschitz_hat, eta_u=DEFAULT_ETA_U,
                      max_iters=budget, tolerance=residual_tol, x0=x0)
    F_main = problem.objective(main.x)
    F_fista = problem.objective(fista.x)
    best_x, best_F = (main.x, F_main) if F_main <= F_fista else (fista.x, F_fista)
    agree = abs(F_main - F_fista) <= 1e-9 * (1.0 + abs(best_F))
    if not agree and not (main.converged or fista.converged):
        raise ReferenceFailureError(
            f"reference solvers disagree (|dF|={abs(F_main - F_fista):.3e}) "
            f"after exhausting {budget} iterations each")
    ref = Reference(x=best_x, F=best_F, verified=agree,
                    residuals={"main_converged": main.converged,
                               "fista_converged": fista.converged})
    if cache_file is not None:
        np.savez(cache_file, x=ref.x, F=ref.F, verified=ref.verified)
    return ref


def _solver_label(s: dict) -> str:
    sid = s["id"]
    if sid == "gces":
        g0 = str(s.get("gamma0", "zero")).replace("+", "")
        mem = "" if s.get("use_memory", True) else "-nomem"
        return f"gces-{g0}{mem}"
    return sid


def _execute(problem, solver_cfg, seed, base: RunConfig, reference):
    rng = np.random.default_rng(seed)
    x0 = rng.standard_normal(problem.dimension)
    ref_pair = (reference.x, reference.F)
    sid = solver_cfg["id"]
    L0 = solver_cfg.get("L0_factor", base.L0_factor) * problem.lipschitz_hat
    eta_u = solver_cfg.get("eta_u", DEFAULT_ETA_U)
    eta_d = solver_cfg.get("eta_d", DEFAULT_ETA_D)
    if sid == "gces":
        cfg = GcesConfig(gamma0=solver_cfg.get("gamma0", "zero"), L0=L0,
                         eta_u=eta_u, eta_d=eta_d, max_iters=base.max_iters,
                         tolerance=base.tolerance,
                         use_memory=solver_cfg.get("use_memory", True),
                         record_wall_time=base.record_wall_time)
        result = run(problem, cfg, x0, reference=ref_pair)
        cert = certificate_check(result.trace, problem, cfg, x0,
                                 reference.x, reference.F)
    elif sid == "fista":
        result = fista_run(problem, L0=L0, eta_u=eta_u,
                           max_iters=base.max_iters, tolerance=base.tolerance,
                           x0=x0, reference=ref_pair,
                           record_wall_time=base.record_wall_time)
        cert = None
    elif sid == "amgs":
        result = amgs_run(problem, L0=L0, eta_u=eta_u, eta_d=eta_d,
                          max_iters=base.max_iters, tolerance=base.tolerance,
                          x0=x0, reference=ref_pair,
                          record_wall_time=base.record_wall_time)
        cert = None
    else:
        raise ValueError(f"unknown solver id {sid!r}")
    return result, cert


def iterations_to_gap(trace, gap_target: float):
    for pt in trace:
        if not math.isnan(pt.gap) and pt.gap <= gap_target:
            return pt.k
    return None


def run_benchmark(cfg: RunConfig, out_dir, cache_dir=None,
                  offline: bool = False) -> dict:
    """Execute the full (solver x seed) grid.

    Writes one trace CSV per run plus report.json, and returns the report:
    per-solver median iterations to the gap target, prox-call statistics
    and certificate pass rates.  Individual run failures are recorded and
    do not abort the grid.
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    instance = build_instance(cfg.problem, cache_dir=cache_dir, offline=offline)
    problem = as_problem(instance)
    reference = reference_solve(problem, budget=cfg.reference_budget,
                                cache_dir=cache_dir, instance=instance)

    jobs = [(solver, seed) for solver in cfg.solvers for seed in cfg.seeds]

    def job(args):
        solver, seed = args
        t0 = time.monotonic()
        try:
            result, cert = _execute(problem, solver, seed, cfg, reference)
            return solver, seed, result, cert, time.monotonic() - t0, None
        except Exception as exc:
            return solver, seed, None, None, time.monotonic() - t0, repr(exc)

    if cfg.max_workers > 1:
        with ThreadPoolExecutor(max_workers=cfg.max_workers) as pool:
            outcomes = list(pool.map(job, jobs))
    else:
        outcomes = [job(j) for j in jobs]

    per_solver: dict = {}
    errors = []
    for solver, seed, result, cert, elapsed, err in outcomes:
        label = _solver_label(solver)
        if err is not None:
            errors.append({"solver": label, "seed": seed, "error": err})
            continue
        csv_path = out / f"{label}_seed{seed}.csv"
        emit_trace_csv(result.trace, csv_path)
        iters = iterations_to_gap(result.trace, cfg.gap_target)
        prox_per_iter = (result.counters.prox_calls / result.iterations
                         if result.iterations else math.nan)
        entry = per_solver.setdefault(label, {
            "iterations_to_gap": [], "prox_calls_per_iteration": [],
            "final_gap": [], "certificates": [], "wall_seconds": []})
        entry["iterations_to_gap"].append(iters)
        entry["prox_calls_per_iteration"].append(prox_per_iter)
        entry["final_gap"].append(result.trace[-1].gap)
        entry["wall_seconds"].append(elapsed)
        if cert is not None:
            entry["certificates"].append(cert.summary())

    report = {
        "problem": cfg.problem,
        "gap_target": cfg.gap_target,
        "reference_verified": reference.verified,
        "reference_objective": reference.F,
        "solvers": {},
        "errors": errors,
    }
    for label, entry in per_solver.items():
        reached = [i for i in entry["iterations_to_gap"] if i is not None]
        summary = {
            "runs": len(entry["iterations_to_gap"]),
            "reached_gap_target": len(reached),
            "median_iterations_to_gap": (statistics.median(reached)
                                         if reached else None),
            "mean_prox_calls_per_iteration": (
                float(np.mean(entry["prox_calls_per_iteration"]))
                if entry["prox_calls_per_iteration"] else None),
            "median_final_gap": float(np.median(entry["final_gap"])),
            "total_wall_seconds": float(np.sum(entry["wall_seconds"])),
        }
        certs = entry["certificates"]
        if certs:
            summary["certificates"] = {
                "gap_bound_ok": all(c["gap_bound_ok"] for c in certs),
                "initial_bound_ok": all(c["initial_bound_ok"] for c in certs),
                "line_search_ceiling_ok": all(c["line_search_ceiling_ok"]
                                              for c in certs),
                "lambda_printed_pass_rate": float(np.mean(
                    [c["lambda_printed_pass_rate"] for c in certs])),
                "lambda_maxL_pass_rate": float(np.mean(
                    [c["lambda_maxL_pass_rate"] for c in certs])),
            }
        report["solvers"][label] = summary

    report["certificate_violation"] = _has_certificate_violation(report)
    with open(out / "report.json", "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
    return report


def _has_certificate_violation(report: dict) -> bool:
    """True when a certificate that must hold was violated.

    The gap bound, the initial bound, the line-search ceiling and the
    running-max decay bound are hard guarantees; the as-printed decay
    bound is reported but informational (see certificates module notes).
    """
    for summary in report["solvers"].values():
        certs = summary.get("certificates")
        if not certs:
            continue
        if not (certs["gap_bound_ok"] and certs["initial_bound_ok"]
                and certs["line_search_ceiling_ok"]):
            return True
        if certs["lambda_maxL_pass_rate"] < 1.0:
            return True
    return False
