import json
import math

import numpy as np
import pytest

from gces import SyntheticSpec, as_problem, make_synthetic
from gces.bench import (RunConfig, build_instance, iterations_to_gap,
                        load_config, reference_solve, run_benchmark)
from gces.trace import TracePoint, emit_trace_csv, read_trace_csv
from helpers import diagonal_elastic_net_solution


def random_trace(rng, n=5):
    pts = []
    for k in range(n):
        pts.append(TracePoint(
            k=k, F=float(rng.standard_normal()), gap=float(rng.random()),
            dist=float(rng.random()), L=float(rng.random() + 0.5),
            alpha=float(rng.random()) if k else math.nan,
            gamma=float(rng.random()), lam=float(rng.random()),
            grad_calls=k * 2, prox_calls=k * 3, sec=0.0))
    return pts


class TestTraceCsv:
    def test_empty_trace_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            emit_trace_csv([], tmp_path / "t.csv")
        assert not (tmp_path / "t.csv").exists()

    def test_round_trip_bit_exact(self, rng, tmp_path):
        pts = random_trace(rng)
        # adversarial values that stress the float formatting
        pts[1].F = 0.1 + 0.2
        pts[2].F = -0.0
        pts[3].gap = float.fromhex("0x1.fffffffffffffp-3")
        path = tmp_path / "trace.csv"
        emit_trace_csv(pts, path)
        back = read_trace_csv(path)
        assert len(back) == len(pts)
        for a, b in zip(pts, back):
            for name in ("F", "gap", "dist", "L", "gamma", "lam", "sec"):
                va, vb = getattr(a, name), getattr(b, name)
                assert va == vb or (math.isnan(va) and math.isnan(vb))
            assert (a.alpha == b.alpha
                    or (math.isnan(a.alpha) and math.isnan(b.alpha)))
            assert a.grad_calls == b.grad_calls
            assert a.prox_calls == b.prox_calls

    def test_row_count_matches(self, rng, tmp_path):
        pts = random_trace(rng, n=7)
        path = tmp_path / "trace.csv"
        emit_trace_csv(pts, path)
        assert len(path.read_text().strip().splitlines()) == 8  # header + rows


@pytest.fixture
def quad_cfg():
    return RunConfig(
        problem={"kind": "synthetic_quadratic", "m": 60, "xi": 2, "seed": 11,
                 "tau1": 1e-2, "tau2": 1e-2},
        solvers=[{"id": "gces", "gamma0": "zero"}, {"id": "fista"}],
        seeds=[0, 1], max_iters=400, tolerance=0.0, gap_target=1e-6,
        reference_budget=4000)


class TestReferenceSolve:
    def test_matches_diagonal_closed_form_smooth(self, tmp_path):
        inst = make_synthetic(SyntheticSpec(m=30, xi=2, seed=3, tau1=1e-2,
                                            tau2=0.0))
        p = as_problem(inst)
        ref = reference_solve(p, budget=6000, cache_dir=tmp_path,
                              instance=inst)
        d = inst.A.values
        closed = d * inst.b / (d * d + inst.tau1)
        assert np.linalg.norm(ref.x - closed) <= 1e-8 * (1 + np.linalg.norm(closed))
        assert ref.verified

    def test_matches_closed_form_with_l1(self, tmp_path):
        inst = make_synthetic(SyntheticSpec(m=30, xi=2, seed=3, tau1=1e-2,
                                            tau2=5e-3))
        p = as_problem(inst)
        ref = reference_solve(p, budget=6000, cache_dir=tmp_path,
                              instance=inst)
        closed = diagonal_elastic_net_solution(inst.A.values, inst.b,
                                               inst.tau1, inst.tau2)
        assert abs(ref.F - p.objective(closed)) <= 1e-9 * (1 + abs(ref.F))

    def test_large_l1_weight_gives_zero(self, tmp_path):
        inst = make_synthetic(SyntheticSpec(m=20, xi=1, seed=5, tau1=1e-3,
                                            tau2=2.0))
        # tau2 >= ||A^T b||_inf forces the zero solution
        assert np.max(np.abs(inst.A.values * inst.b)) <= 2.0
        p = as_problem(inst)
        ref = reference_solve(p, budget=6000, cache_dir=tmp_path,
                              instance=inst)
        assert np.linalg.norm(ref.x) <= 1e-8

    def test_cache_hit(self, tmp_path):
        inst = make_synthetic(SyntheticSpec(m=20, xi=2, seed=8, tau1=1e-2,
                                            tau2=1e-2))
        p = as_problem(inst)
        r1 = reference_solve(p, budget=2000, cache_dir=tmp_path, instance=inst)
        cached = list(tmp_path.glob("ref_*.npz"))
        assert len(cached) == 1
        r2 = reference_solve(p, budget=2000, cache_dir=tmp_path, instance=inst)
        assert r1.F == r2.F
        np.testing.assert_array_equal(r1.x, r2.x)


class TestBuildInstance:
    def test_synthetic_kinds(self):
        q = build_instance({"kind": "synthetic_quadratic", "m": 10, "xi": 2,
                            "seed": 0, "tau1": 0.1, "tau2": 0.1})
        assert q.A.shape == (10, 10)
        l = build_instance({"kind": "synthetic_logistic", "m": 12, "n": 5,
                            "seed": 0, "tau1": 0.1, "tau2": 0.1})
        assert l.A.shape == (12, 5)

    def test_dataset_from_path_with_binarization(self, tmp_path):
        path = tmp_path / "toy.svm"
        path.write_text("0.9 1:1 2:1\n0.1 1:2\n0.5 2:1\n", encoding="ascii")
        inst = build_instance({"kind": "logistic_dataset", "path": str(path),
                               "tau1": 0.1, "tau2": 0.1})
        assert set(np.unique(inst.b)) <= {-1.0, 1.0}

    def test_dataset_truncation(self, tmp_path):
        path = tmp_path / "toy.svm"
        path.write_text("+1 1:1 3:1\n-1 2:2\n+1 3:3\n", encoding="ascii")
        inst = build_instance({"kind": "quadratic_dataset", "path": str(path),
                               "tau1": 0.1, "tau2": 0.1, "max_rows": 2,
                               "max_cols": 2})
        assert inst.A.shape == (2, 2)

    def test_unknown_kind(self):
        with pytest.raises(ValueError):
            build_instance({"kind": "mystery"})


class TestIterationsToGap:
    def test_finds_first_crossing(self, rng):
        pts = random_trace(rng, n=4)
        for i, g in enumerate([1.0, 0.5, 1e-7, 1e-9]):
            pts[i].gap = g
        assert iterations_to_gap(pts, 1e-6) == 2

    def test_none_when_never_reached(self, rng):
        pts = random_trace(rng, n=3)
        for p in pts:
            p.gap = 1.0
        assert iterations_to_gap(pts, 1e-6) is None


class TestRunBenchmark:
    def test_outputs_and_report(self, quad_cfg, tmp_path):
        out = tmp_path / "out"
        report = run_benchmark(quad_cfg, out, cache_dir=tmp_path / "cache")
        csvs = sorted(f.name for f in out.glob("*.csv"))
        assert csvs == ["fista_seed0.csv", "fista_seed1.csv",
                        "gces-zero_seed0.csv", "gces-zero_seed1.csv"]
        assert (out / "report.json").exists()
        assert report["reference_verified"]
        gces = report["solvers"]["gces-zero"]
        assert gces["reached_gap_target"] == 2
        assert gces["certificates"]["gap_bound_ok"]
        assert not report["certificate_violation"]

    def test_gap_column_nonnegative_within_slack(self, quad_cfg, tmp_path):
        out = tmp_path / "out"
        run_benchmark(quad_cfg, out, cache_dir=tmp_path / "cache")
        for csv in out.glob("*.csv"):
            for pt in read_trace_csv(csv):
                assert pt.gap >= -1e-9

    def test_deterministic_bytes(self, quad_cfg, tmp_path):
        out1, out2 = tmp_path / "a", tmp_path / "b"
        run_benchmark(quad_cfg, out1, cache_dir=tmp_path / "cache")
        run_benchmark(quad_cfg, out2, cache_dir=tmp_path / "cache")
        for f1 in sorted(out1.glob("*.csv")):
            f2 = out2 / f1.name
            assert f1.read_bytes() == f2.read_bytes()

    def test_solver_error_recorded_not_raised(self, tmp_path):
        cfg = RunConfig(
            problem={"kind": "synthetic_quadratic", "m": 20, "xi": 2,
                     "seed": 1, "tau1": 1e-2, "tau2": 1e-2},
            solvers=[{"id": "gces", "gamma0": 1e9}],  # invalid gamma0 range
            seeds=[0], max_iters=10, reference_budget=2000)
        report = run_benchmark(cfg, tmp_path / "out",
                               cache_dir=tmp_path / "cache")
        assert len(report["errors"]) == 1

    def test_parallel_matches_serial(self, quad_cfg, tmp_path):
        serial = tmp_path / "serial"
        parallel = tmp_path / "parallel"
        run_benchmark(quad_cfg, serial, cache_dir=tmp_path / "cache")
        quad_cfg.max_workers = 4
        run_benchmark(quad_cfg, parallel, cache_dir=tmp_path / "cache")
        for f1 in sorted(serial.glob("*.csv")):
            assert f1.read_bytes() == (parallel / f1.name).read_bytes()

    def test_gamma_trace_settles_for_reinforced_variants(self, tmp_path):
        # gamma converges toward its fixed point: successive increments
        # shrink over the trailing half (block envelope, strongly convex)
        cfg = RunConfig(
            problem={"kind": "synthetic_quadratic", "m": 60, "xi": 2,
                     "seed": 11, "tau1": 1e-2, "tau2": 1e-2},
            solvers=[{"id": "gces", "gamma0": "mu"},
                     {"id": "gces", "gamma0": "3L0+mu"}],
            seeds=[0], max_iters=300, reference_budget=4000)
        out = tmp_path / "out"
        run_benchmark(cfg, out, cache_dir=tmp_path / "cache")
        for name in ("gces-mu_seed0.csv", "gces-3L0mu_seed0.csv"):
            pts = read_trace_csv(out / name)
            gammas = np.array([pt.gamma for pt in pts])
            deltas = np.abs(np.diff(gammas))
            tail = deltas[len(deltas) // 2:]
            blocks = np.array_split(tail, 4)
            maxima = [b.max() for b in blocks]
            for a, b in zip(maxima, maxima[1:]):
                assert b <= a + 1e-15

    def test_config_validation(self):
        with pytest.raises(ValueError):
            RunConfig(problem={}, solvers=[], seeds=[1])
        with pytest.raises(ValueError):
            RunConfig(problem={}, solvers=[{"id": "gces"}], seeds=[])

    def test_load_config_round_trip(self, tmp_path, quad_cfg):
        path = tmp_path / "cfg.json"
        blob = {"problem": quad_cfg.problem, "solvers": quad_cfg.solvers,
                "seeds": quad_cfg.seeds, "max_iters": 50}
        path.write_text(json.dumps(blob), encoding="utf-8")
        cfg = load_config(path)
        assert cfg.max_iters == 50
        assert cfg.problem["m"] == 60
