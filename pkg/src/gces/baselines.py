"""Baseline solvers sharing the composite-problem and trace interfaces.

fista_run: momentum proximal gradient whose line search only ever grows
the Lipschitz estimate.  amgs_run: the accelerated multistep scheme that
maintains a dual averaging center, paying two projection-like operations
per iteration but tolerating decreases of the estimate.
"""

import math
import time
from dataclasses import dataclass

import numpy as np

from .errors import LineSearchError
from .linalg import as_vector
from .mapping import DECREASE_SLACK
from .problems import CompositeProblem, OracleCounters
from .solver import MAX_LINE_SEARCH_TRIALS
from .trace import SolveResult, TracePoint


@dataclass
class FistaState:
    x: np.ndarray
    x_prev: np.ndarray
    t: float
    L: float


@dataclass
class AmgsState:
    x: np.ndarray
    v: np.ndarray
    A_coeff: float
    L: float


def _gap_dist(x, F, reference):
    if reference is None:
        return math.nan, math.nan
    x_star, f_star = reference
    return F - f_star, float(np.linalg.norm(x - x_star))


def _trial_point(p, L, y, grad_y, counters):
    forward = y - grad_y / L
    if p.tau > 0.0:
        return p.prox(p.tau / L, forward, counters)
    counters.prox_calls += 1
    return forward


def fista_run(p: CompositeProblem, L0: float, eta_u: float, max_iters: int,
              tolerance: float, x0, reference=None,
              record_wall_time: bool = False) -> SolveResult:
    """Momentum proximal-gradient baseline.

    t_{k+1} = (1 + sqrt(1 + 4 t_k^2)) / 2 drives the extrapolation; the
    line search multiplies L by eta_u until the model dominates, and L is
    never decreased afterwards.
    """
    if not L0 > 0:
        raise ValueError("L0 must be positive")
    x0 = as_vector(x0)
    counters = OracleCounters()
    st = FistaState(x=x0.copy(), x_prev=x0.copy(), t=1.0, L=L0)
    t_start = time.monotonic()

    def now():
        return time.monotonic() - t_start if record_wall_time else 0.0

    trace = []
    F = p.objective(st.x, counters)
    g, d = _gap_dist(st.x, F, reference)
    trace.append(TracePoint(k=0, F=F, gap=g, dist=d, L=st.L, alpha=math.nan,
                            gamma=math.nan, lam=math.nan,
                            grad_calls=counters.gradient_calls,
                            prox_calls=counters.prox_calls, sec=now()))
    converged = False
    k = 0
    for k in range(1, max_iters + 1):
        t_next = 0.5 * (1.0 + math.sqrt(1.0 + 4.0 * st.t * st.t))
        y = st.x + ((st.t - 1.0) / t_next) * (st.x - st.x_prev)
        grad_y = p.smooth_gradient(y, counters)
        smooth_y = p.smooth_value(y, counters)
        accepted = None
        for _ in range(MAX_LINE_SEARCH_TRIALS):
            x_next = _trial_point(p, st.L, y, grad_y, counters)
            diff = x_next - y
            reg_next = p.reg_value(x_next)
            model = (smooth_y + float(np.dot(grad_y, diff))
                     + 0.5 * st.L * float(np.dot(diff, diff)) + p.tau * reg_next)
            F_next = p.smooth_value(x_next, counters) + p.tau * reg_next
            if F_next <= model + DECREASE_SLACK * (1.0 + abs(F_next)):
                accepted = (x_next, F_next, float(np.linalg.norm(diff)))
                break
            st.L *= eta_u
        if accepted is None:
            raise LineSearchError("fista: no sufficient decrease within the trial cap")
        x_next, F_next, residual = accepted
        st.x_prev, st.x, st.t = st.x, x_next, t_next
        g, d = _gap_dist(st.x, F_next, reference)
        trace.append(TracePoint(k=k, F=F_next, gap=g, dist=d, L=st.L,
                                alpha=math.nan, gamma=math.nan, lam=math.nan,
                                grad_calls=counters.gradient_calls,
                                prox_calls=counters.prox_calls, sec=now()))
        if tolerance > 0.0 and residual <= tolerance:
            converged = True
            break
    return SolveResult(x=st.x, trace=trace, converged=converged,
                       iterations=k, counters=counters, state=st)


def amgs_run(p: CompositeProblem, L0: float, eta_u: float, eta_d: float,
             max_iters: int, tolerance: float, x0, reference=None,
             record_wall_time: bool = False) -> SolveResult:
    """Accelerated multistep baseline with primal and dual prox steps.

    The dual center v_k minimizes an accumulated lower model (one prox of
    the regularizer scaled by the weight sum A_k); the primal step is the
    usual composite gradient mapping.  The estimate may shrink by eta_d
    between iterations.
    """
    if not L0 > 0:
        raise ValueError("L0 must be positive")
    x0 = as_vector(x0)
    counters = OracleCounters()
    st = AmgsState(x=x0.copy(), v=x0.copy(), A_coeff=0.0, L=L0)
    grad_acc = np.zeros_like(x0)  # sum of a_i * grad f(y_i)
    t_start = time.monotonic()

    def now():
        return time.monotonic() - t_start if record_wall_time else 0.0

    trace = []
    F = p.objective(st.x, counters)
    g, d = _gap_dist(st.x, F, reference)
    trace.append(TracePoint(k=0, F=F, gap=g, dist=d, L=st.L, alpha=math.nan,
                            gamma=math.nan, lam=math.nan,
                            grad_calls=counters.gradient_calls,
                            prox_calls=counters.prox_calls, sec=now()))
    converged = False
    k = 0
    for k in range(1, max_iters + 1):
        # dual prox: the minimizer of the accumulated model (at A = 0 the
        # model is the plain anchor quadratic, so the step is trivial but
        # still one of the iteration's two projection-like operations)
        if st.A_coeff > 0.0 and p.tau > 0.0:
            st.v = p.prox(st.A_coeff * p.tau, x0 - grad_acc, counters)
        else:
            counters.prox_calls += 1
            st.v = (x0 - grad_acc) if st.A_coeff > 0.0 else x0.copy()
        L_hat = eta_d * st.L
        accepted = None
        for _ in range(MAX_LINE_SEARCH_TRIALS):
            a = (1.0 + math.sqrt(1.0 + 2.0 * L_hat * st.A_coeff)) / L_hat
            y = (st.A_coeff * st.x + a * st.v) / (st.A_coeff + a)
            grad_y = p.smooth_gradient(y, counters)
            smooth_y = p.smooth_value(y, counters)
            x_next = _trial_point(p, L_hat, y, grad_y, counters)
            diff = x_next - y
            reg_next = p.reg_value(x_next)
            model = (smooth_y + float(np.dot(grad_y, diff))
                     + 0.5 * L_hat * float(np.dot(diff, diff)) + p.tau * reg_next)
            F_next = p.smooth_value(x_next, counters) + p.tau * reg_next
            if F_next <= model + DECREASE_SLACK * (1.0 + abs(F_next)):
                accepted = (a, grad_y, x_next, F_next, float(np.linalg.norm(diff)))
                break
            L_hat *= eta_u
        if accepted is None:
            raise LineSearchError("amgs: no sufficient decrease within the trial cap")
        a, grad_y, x_next, F_next, residual = accepted
        st.x = x_next
        st.A_coeff += a
        grad_acc = grad_acc + a * grad_y
        st.L = L_hat
        g, d = _gap_dist(st.x, F_next, reference)
        trace.append(TracePoint(k=k, F=F_next, gap=g, dist=d, L=st.L,
                                alpha=math.nan, gamma=st.A_coeff, lam=math.nan,
                                grad_calls=counters.gradient_calls,
                                prox_calls=counters.prox_calls, sec=now()))
        if tolerance > 0.0 and residual <= tolerance:
            converged = True
            break
    return SolveResult(x=st.x, trace=trace, converged=converged,
                       iterations=k, counters=counters, state=st)
