"""Composite gradient mapping: local model, mapping point, reduced
gradient, sufficient-decrease test and the lower-bound certificate."""

from dataclasses import dataclass

import numpy as np

from .errors import InvalidStepError
from .linalg import as_vector
from .problems import CompositeProblem, ObjectiveValue, OracleCounters

#: absolute-plus-relative slack guarding rounding in decrease tests
DECREASE_SLACK = 1e-12


@dataclass(frozen=True, eq=False)
class MappingResult:
    """Everything produced by one mapping evaluation at a point y.

    reduced_grad equals L_used * (y - t_point) by construction; grad_y and
    smooth_at_y are cached so callers can reuse them within an iteration.
    """

    t_point: np.ndarray
    reduced_grad: np.ndarray
    model_at_t: float
    objective_at_t: ObjectiveValue
    L_used: float
    grad_y: np.ndarray
    smooth_at_y: float


def model_value(p: CompositeProblem, L: float, y, x,
                counters: OracleCounters | None = None) -> float:
    """Quadratic-plus-regularizer model of F around y, evaluated at x."""
    if not L > 0:
        raise InvalidStepError(f"model needs L > 0, got {L}")
    y, x = as_vector(y), as_vector(x)
    f_y = p.smooth_value(y, counters)
    g_y = p.smooth_gradient(y, counters)
    d = x - y
    return (f_y + float(np.dot(g_y, d)) + 0.5 * L * float(np.dot(d, d))
            + p.tau * p.reg_value(x))


def _model_from_parts(p, L, smooth_at_y, grad_y, y, x):
    d = x - y
    return (smooth_at_y + float(np.dot(grad_y, d)) + 0.5 * L * float(np.dot(d, d))
            + p.tau * p.reg_value(x))


def compute_mapping(p: CompositeProblem, L: float, y,
                    counters: OracleCounters | None = None) -> MappingResult:
    """Minimize the model: a gradient step on f_hat followed by the prox of
    the tau-weighted regularizer with step tau/L."""
    if not L > 0:
        raise InvalidStepError(f"mapping needs L > 0, got {L}")
    y = as_vector(y)
    grad_y = p.smooth_gradient(y, counters)
    smooth_at_y = p.smooth_value(y, counters)
    forward = y - grad_y / L
    if p.tau > 0.0:
        t_point = p.prox(p.tau / L, forward, counters)
    else:
        if counters is not None:
            counters.prox_calls += 1
        t_point = forward
    reduced_grad = L * (y - t_point)
    model_at_t = _model_from_parts(p, L, smooth_at_y, grad_y, y, t_point)
    objective_at_t = p.evaluate(t_point, counters)
    return MappingResult(t_point=t_point, reduced_grad=reduced_grad,
                         model_at_t=model_at_t, objective_at_t=objective_at_t,
                         L_used=L, grad_y=grad_y, smooth_at_y=smooth_at_y)


def sufficient_decrease(p: CompositeProblem, L: float, y, candidate,
                        counters: OracleCounters | None = None) -> bool:
    """True iff F(candidate) <= model(y; candidate), within rounding slack."""
    f_cand = p.objective(candidate, counters)
    m = model_value(p, L, y, candidate, counters)
    return f_cand <= m + DECREASE_SLACK * (1.0 + abs(f_cand))


def lower_bound_certificate(p: CompositeProblem, L: float, y, x,
                            counters: OracleCounters | None = None) -> float:
    """Lower bound on F(x) built from the mapping at y.

    Valid whenever L >= L_hat of the smooth part; the caller owns that
    precondition.
    """
    y, x = as_vector(y), as_vector(x)
    mr = compute_mapping(p, L, y, counters)
    r = mr.reduced_grad
    d = x - y
    return (mr.objective_at_t.total
            + float(np.dot(r, d))
            + 0.5 * p.mu_hat_f * float(np.dot(d, d))
            + float(np.dot(r, r)) / (2.0 * L))
