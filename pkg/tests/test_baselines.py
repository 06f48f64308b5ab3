import math

import numpy as np
import pytest

from gces import (SyntheticSpec, amgs_run, as_problem, fista_run,
                  make_synthetic)
from conftest import simple_quadratic, smooth_quadratic
from helpers import diagonal_elastic_net_solution


def momentum_sequence(n):
    ts = [1.0]
    for _ in range(n):
        ts.append(0.5 * (1.0 + math.sqrt(1.0 + 4.0 * ts[-1] ** 2)))
    return ts


class TestFista:
    def test_converges_on_smooth_quadratic(self, rng):
        c = rng.standard_normal(6)
        p = smooth_quadratic(n=6, l_scale=1.0, mu_scale=0.2, center=c)
        res = fista_run(p, L0=1.0, eta_u=2.0, max_iters=2000, tolerance=0.0,
                        x0=np.zeros(6))
        assert res.trace[-1].F - p.objective(c) < 1e-10

    def test_momentum_scalar_recursion(self):
        ts = momentum_sequence(3)
        assert ts[1] == pytest.approx((1 + math.sqrt(5)) / 2)
        assert ts[2] == pytest.approx(0.5 * (1 + math.sqrt(1 + 4 * ts[1] ** 2)))
        assert ts[:3] == pytest.approx([1.0, 1.618033988749895,
                                        2.193527085331054])

    def test_overestimated_L_never_decreases(self, rng):
        p = simple_quadratic(n=5, l_scale=1.0, tau=0.2)
        L0 = 10.0 * p.lipschitz_hat
        res = fista_run(p, L0=L0, eta_u=2.0, max_iters=50, tolerance=0.0,
                        x0=rng.standard_normal(5))
        for pt in res.trace:
            assert pt.L == L0

    def test_L_sequence_non_decreasing(self, rng):
        p = simple_quadratic(n=8, l_scale=3.0, tau=0.4)
        res = fista_run(p, L0=0.05 * p.lipschitz_hat, eta_u=2.0, max_iters=100,
                        tolerance=0.0, x0=rng.standard_normal(8))
        ls = [pt.L for pt in res.trace]
        assert all(b >= a for a, b in zip(ls, ls[1:]))

    def test_rejects_bad_L0(self):
        p = simple_quadratic(n=2)
        with pytest.raises(ValueError):
            fista_run(p, L0=0.0, eta_u=2.0, max_iters=5, tolerance=0.0,
                      x0=np.zeros(2))


class TestAmgs:
    def test_two_prox_calls_per_iteration_without_retrials(self, rng):
        # an inflated L0 keeps eta_d shrinkage acceptable: no retrials, so
        # the count is exactly one dual and one primal prox per iteration
        p = simple_quadratic(n=6, l_scale=1.0, tau=0.3)
        res = amgs_run(p, L0=4.0 * p.lipschitz_hat, eta_u=2.0, eta_d=0.95,
                       max_iters=20, tolerance=0.0, x0=rng.standard_normal(6))
        assert res.counters.prox_calls == 2 * res.iterations

    def test_prox_accounting_with_retrials(self, rng):
        p = simple_quadratic(n=6, l_scale=1.0, tau=0.3)
        res = amgs_run(p, L0=p.lipschitz_hat, eta_u=2.0, eta_d=0.9,
                       max_iters=60, tolerance=0.0, x0=rng.standard_normal(6))
        assert res.counters.prox_calls >= 2 * res.iterations

    def test_weight_accumulator_non_decreasing(self, rng):
        p = simple_quadratic(n=5, tau=0.2)
        res = amgs_run(p, L0=p.lipschitz_hat, eta_u=2.0, eta_d=0.9,
                       max_iters=40, tolerance=0.0, x0=rng.standard_normal(5))
        coeffs = [pt.gamma for pt in res.trace[1:]]  # A_k is logged there
        assert all(b >= a for a, b in zip(coeffs, coeffs[1:]))

    def test_L_can_decrease_between_iterations(self, rng):
        p = simple_quadratic(n=5, l_scale=1.0, tau=0.2)
        res = amgs_run(p, L0=10.0 * p.lipschitz_hat, eta_u=2.0, eta_d=0.9,
                       max_iters=30, tolerance=0.0, x0=rng.standard_normal(5))
        ls = [pt.L for pt in res.trace[1:]]
        assert min(ls) < 10.0 * p.lipschitz_hat

    def test_gap_envelope_decreases_smooth(self, rng):
        # the gap sequence ripples locally, so assert a decreasing block
        # envelope down to the floating-point floor instead of strict
        # per-step monotonicity
        c = rng.standard_normal(6)
        p = smooth_quadratic(n=6, l_scale=1.0, mu_scale=0.1, center=c)
        f_star = p.objective(c)
        res = amgs_run(p, L0=1.0, eta_u=2.0, eta_d=0.9, max_iters=120,
                       tolerance=0.0, x0=np.zeros(6),
                       reference=(c, f_star))
        gaps = np.array([pt.gap for pt in res.trace])
        blocks = [gaps[i:i + 20].max() for i in range(0, 120, 20)]
        for a, b in zip(blocks, blocks[1:]):
            if a > 1e-12:
                assert b < a


class TestBothOnIllConditioned:
    def test_reach_gap_on_kappa_1e3(self, rng):
        inst = make_synthetic(SyntheticSpec(m=200, xi=3, seed=9, tau1=1e-3,
                                            tau2=1e-3))
        p = as_problem(inst)
        x_star = diagonal_elastic_net_solution(inst.A.values, inst.b,
                                               inst.tau1, inst.tau2)
        f_star = p.objective(x_star)
        x0 = rng.standard_normal(200)
        ref = (x_star, f_star)
        rf = fista_run(p, L0=p.lipschitz_hat, eta_u=2.0, max_iters=5000,
                       tolerance=0.0, x0=x0, reference=ref)
        ra = amgs_run(p, L0=p.lipschitz_hat, eta_u=2.0, eta_d=0.9,
                      max_iters=5000, tolerance=0.0, x0=x0, reference=ref)
        assert min(pt.gap for pt in rf.trace) <= 1e-6
        assert min(pt.gap for pt in ra.trace) <= 1e-8
