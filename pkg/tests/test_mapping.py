import numpy as np
import pytest

from gces import (InvalidStepError, OracleCounters, SmoothOracle, Zero,
                  apply_transfer, compute_mapping, lower_bound_certificate,
                  model_value, subdifferential_check, sufficient_decrease)
from conftest import simple_quadratic, smooth_quadratic


def scalar_half_square():
    f = SmoothOracle(dimension=1, value=lambda x: 0.5 * float(x[0] ** 2),
                     gradient=lambda x: x.copy(),
                     lipschitz_hint=1.0, strong_convexity=1.0)
    return apply_transfer(f, Zero(), 0.0, np.zeros(1))


class TestModelValue:
    def test_at_y_equals_objective(self, rng, lasso_problem):
        y = rng.standard_normal(lasso_problem.dimension)
        assert model_value(lasso_problem, 1.3, y, y) == pytest.approx(
            lasso_problem.objective(y), rel=1e-12)

    def test_hand_expansion(self):
        # f = x^2/2, g = 0, L = 1, y = 2, x = 0: 2 - 4 + 2 + 0 = 0
        p = scalar_half_square()
        assert model_value(p, 1.0, np.array([2.0]), np.array([0.0])) == \
            pytest.approx(0.0, abs=1e-14)

    def test_dominates_objective_at_valid_L(self, rng, lasso_problem):
        L = lasso_problem.lipschitz_hat
        for _ in range(100):
            y = rng.standard_normal(lasso_problem.dimension)
            x = rng.standard_normal(lasso_problem.dimension)
            assert model_value(lasso_problem, L, y, x) >= \
                lasso_problem.objective(x) - 1e-10

    def test_rejects_nonpositive_L(self, lasso_problem):
        y = np.zeros(lasso_problem.dimension)
        with pytest.raises(InvalidStepError):
            model_value(lasso_problem, 0.0, y, y)


class TestComputeMapping:
    def test_zero_regularizer_is_gradient_step(self, rng):
        p = smooth_quadratic(n=5, l_scale=2.0)
        y = rng.standard_normal(5)
        mr = compute_mapping(p, 2.0, y)
        np.testing.assert_allclose(mr.t_point, y - p.smooth_gradient(y) / 2.0,
                                   rtol=1e-14)

    def test_scalar_hand_case(self):
        p = scalar_half_square()
        mr = compute_mapping(p, 2.0, np.array([2.0]))
        np.testing.assert_allclose(mr.t_point, [1.0])
        np.testing.assert_allclose(mr.reduced_grad, [2.0])  # equals grad f(y)

    def test_reduced_grad_identity(self, rng, lasso_problem):
        y = rng.standard_normal(lasso_problem.dimension)
        mr = compute_mapping(p=lasso_problem, L=1.7, y=y)
        np.testing.assert_array_equal(mr.reduced_grad, 1.7 * (y - mr.t_point))

    def test_optimality_via_subdifferential(self, rng, lasso_problem):
        # (r - grad f(y)) / tau is a subgradient of g at the mapped point
        L = lasso_problem.lipschitz_hat
        for _ in range(50):
            y = rng.standard_normal(lasso_problem.dimension)
            mr = compute_mapping(lasso_problem, L, y)
            s = (mr.reduced_grad - mr.grad_y) / lasso_problem.tau
            assert subdifferential_check(lasso_problem.regularizer,
                                         mr.t_point, s, tol=1e-7)

    def test_argmin_property(self, rng, lasso_problem):
        L = lasso_problem.lipschitz_hat
        y = rng.standard_normal(lasso_problem.dimension)
        mr = compute_mapping(lasso_problem, L, y)
        for _ in range(100):
            x = rng.standard_normal(lasso_problem.dimension)
            assert mr.model_at_t <= model_value(lasso_problem, L, y, x) + 1e-10

    def test_counts_oracle_calls(self, rng, lasso_problem):
        c = OracleCounters()
        compute_mapping(lasso_problem, 1.0, rng.standard_normal(6), counters=c)
        assert c.gradient_calls == 1
        assert c.prox_calls == 1


class TestSufficientDecrease:
    def test_candidate_equals_y(self, rng, lasso_problem):
        y = rng.standard_normal(lasso_problem.dimension)
        assert sufficient_decrease(lasso_problem, 0.01, y, y)

    def test_holds_at_valid_L(self, rng, lasso_problem):
        L = lasso_problem.lipschitz_hat
        for _ in range(20):
            y = rng.standard_normal(lasso_problem.dimension)
            t = compute_mapping(lasso_problem, L, y).t_point
            assert sufficient_decrease(lasso_problem, L, y, t)

    def test_fails_at_tiny_L(self, rng):
        p = smooth_quadratic(n=4, l_scale=1.0)
        L = 0.01  # far below the curvature
        y = 5.0 + rng.standard_normal(4)
        t = compute_mapping(p, L, y).t_point
        assert not sufficient_decrease(p, L, y, t)


class TestLowerBoundCertificate:
    def test_scalar_equality_case(self):
        # f = x^2/2, L = mu = 1, y = 2: T = 0, r = 2, bound = 0 + 0 + 2 = F(y)
        p = scalar_half_square()
        y = np.array([2.0])
        bound = lower_bound_certificate(p, 1.0, y, y)
        assert bound == pytest.approx(p.objective(y), rel=1e-12)
        assert bound <= p.objective(y) + 1e-9

    def test_lower_bounds_random_pairs(self, rng):
        p = simple_quadratic(n=5, l_scale=3.0, mu_scale=0.2, tau=0.4)
        L = p.lipschitz_hat
        for _ in range(100):
            x = 2.0 * rng.standard_normal(5)
            y = 2.0 * rng.standard_normal(5)
            assert lower_bound_certificate(p, L, y, x) <= p.objective(x) + 1e-9

    def test_large_L_still_lower_bounds(self, rng):
        p = simple_quadratic(n=4, l_scale=1.0, tau=0.2)
        for L in (p.lipschitz_hat, 10.0, 1e4):
            x = rng.standard_normal(4)
            y = rng.standard_normal(4)
            assert lower_bound_certificate(p, L, y, x) <= p.objective(x) + 1e-9
