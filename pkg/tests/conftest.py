import numpy as np
import pytest

from gces import L1Norm, SmoothOracle, Zero, apply_transfer


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)


def simple_quadratic(n=4, center=None, l_scale=1.0, mu_scale=None, tau=1.0,
                     reg=None):
    """f(x) = 0.5 ||D (x - c)||^2 with log-spaced diagonal D^2."""
    if center is None:
        center = np.zeros(n)
    center = np.asarray(center, dtype=np.float64)
    if mu_scale is None:
        mu_scale = 0.1 * l_scale
    d2 = np.geomspace(mu_scale, l_scale, n)

    def value(x):
        return 0.5 * float(np.dot(d2, (x - center) ** 2))

    def gradient(x):
        return d2 * (x - center)

    oracle = SmoothOracle(dimension=n, value=value, gradient=gradient,
                          lipschitz_hint=l_scale, strong_convexity=mu_scale)
    return apply_transfer(oracle, reg if reg is not None else L1Norm(),
                          tau, np.zeros(n))


def smooth_quadratic(n=4, l_scale=1.0, mu_scale=0.1, center=None):
    """Smooth-only problem (zero regularizer, tau = 0)."""
    return simple_quadratic(n=n, center=center, l_scale=l_scale,
                            mu_scale=mu_scale, tau=0.0, reg=Zero())


@pytest.fixture
def lasso_problem():
    return simple_quadratic(n=6, l_scale=2.0, mu_scale=0.05, tau=0.3)
