"""Shared test oracles: finite differences, closed-form solutions, and an
independent implementation of the smooth-case accelerated method."""

import math

import numpy as np

from gces import CompositeProblem


def finite_difference_gradient(value, x, h=1e-6):
    """Central-difference gradient of a scalar function."""
    x = np.asarray(x, dtype=np.float64)
    g = np.zeros_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = h
        g[i] = (value(x + e) - value(x - e)) / (2.0 * h)
    return g


def check_gradient(oracle, rng, n_points=20, rtol=1e-5, scale=1.0):
    """Assert the oracle gradient matches central differences at random points."""
    for _ in range(n_points):
        x = scale * rng.standard_normal(oracle.dimension)
        g = np.asarray(oracle.gradient(x))
        fd = finite_difference_gradient(oracle.value, x)
        denom = max(1.0, float(np.linalg.norm(g)))
        err = float(np.linalg.norm(g - fd)) / denom
        assert err <= rtol, f"gradient mismatch {err:.2e} at a random point"


def diagonal_elastic_net_solution(diag, b, tau1, tau2):
    """Exact minimizer of 0.5(dx-b)^2 + tau1/2 x^2 + tau2|x| per coordinate."""
    db = diag * b
    soft = np.sign(db) * np.maximum(np.abs(db) - tau2, 0.0)
    return soft / (diag * diag + tau1)


def reference_fgm(p: CompositeProblem, gamma0, L0, eta_u, eta_d, n_iters, x0):
    """Textbook estimating-sequence gradient method for smooth objectives,
    with the same backtracking rule as the main solver.  Used only to
    validate the tau = 0, no-memory reduction; implemented independently
    of the solver module."""
    mu = p.mu_hat_f
    x = np.asarray(x0, dtype=np.float64).copy()
    v = x.copy()
    gamma = float(gamma0)
    L = float(L0)
    iterates = [x.copy()]
    for _ in range(n_iters):
        L_hat = eta_d * L
        while True:
            diff_sg = mu - gamma
            alpha = (diff_sg + math.sqrt(diff_sg * diff_sg
                                         + 4.0 * L_hat * gamma)) / (2.0 * L_hat)
            if alpha >= 1.0:
                L_hat *= eta_u
                continue
            gamma_next = (1.0 - alpha) * gamma + alpha * mu
            y = (gamma_next * x + alpha * gamma * v) / (gamma_next + alpha * gamma)
            g = p.smooth.gradient(y)
            f_y = p.smooth.value(y)
            x_next = y - g / L_hat
            d = x_next - y
            f_next = p.smooth.value(x_next)
            model = f_y + float(np.dot(g, d)) + 0.5 * L_hat * float(np.dot(d, d))
            if f_next <= model + 1e-12 * (1.0 + abs(f_next)):
                break
            L_hat *= eta_u
        v = ((1.0 - alpha) * gamma * v + alpha * (mu * y - L_hat * (y - x_next))) \
            / gamma_next
        x, gamma, L = x_next, gamma_next, L_hat
        iterates.append(x.copy())
    return iterates
