"""Accelerated composite solver driven by estimating sequences with memory.

One iteration: pick the memory weight for the previous parabola center,
run a backtracking line-search over the local Lipschitz estimate (each
trial recomputes alpha, gamma, the extrapolation point y, a proximal
gradient step and the new center v), then commit the accepted trial.  The
contraction factors lambda_k certify the convergence rate.
"""

import math
import time
from collections import deque
from dataclasses import dataclass, field

import numpy as np

from .errors import DegenerateStateError, LineSearchError
from .linalg import as_vector
from .mapping import DECREASE_SLACK
from .problems import CompositeProblem, OracleCounters
from .trace import SolveResult, TracePoint

#: hard cap on line-search trials; hitting it means a broken oracle
MAX_LINE_SEARCH_TRIALS = 64

#: how many past (gamma_j, v_j) pairs the ring retains; the shipped policy
#: weights only the most recent one, the rest exist for deeper policies
MEMORY_RING_DEPTH = 8

GAMMA0_CHOICES = ("zero", "mu", "3L0+mu")


@dataclass(frozen=True)
class GcesConfig:
    """Solver parameters.

    gamma0 selects the initial parabola stiffness: one of the named
    variants ("zero", "mu", "3L0+mu") or an explicit float, which must lie
    in [0, mu] or [2*mu, 3*L0 + mu].  eta_u/eta_d grow and shrink the
    Lipschitz estimate across line-search trials and iterations.
    tolerance stops the run once ||y - T(y)|| falls below it (0 disables).
    """

    gamma0: float | str = "zero"
    L0: float = 1.0
    eta_u: float = 2.0
    eta_d: float = 0.9
    max_iters: int = 1000
    tolerance: float = 0.0
    use_memory: bool = True
    record_wall_time: bool = False

    def __post_init__(self):
        if not self.L0 > 0:
            raise ValueError("L0 must be positive")
        if not self.eta_u > 1:
            raise ValueError("eta_u must exceed 1")
        if not 0 < self.eta_d < 1:
            raise ValueError("eta_d must lie in (0, 1)")
        if isinstance(self.gamma0, str) and self.gamma0 not in GAMMA0_CHOICES:
            raise ValueError(f"gamma0 must be a float or one of {GAMMA0_CHOICES}")


def resolve_gamma0(cfg: GcesConfig, mu_hat_f: float) -> float:
    """Turn the configured gamma0 into a number and validate its range."""
    if cfg.gamma0 == "zero":
        return 0.0
    if cfg.gamma0 == "mu":
        return mu_hat_f
    if cfg.gamma0 == "3L0+mu":
        return 3.0 * cfg.L0 + mu_hat_f
    g0 = float(cfg.gamma0)
    hi = 3.0 * cfg.L0 + mu_hat_f
    eps = 1e-12 * (1.0 + hi)
    in_low = -eps <= g0 <= mu_hat_f + eps
    in_high = 2.0 * mu_hat_f - eps <= g0 <= hi + eps
    if not (in_low or in_high):
        raise ValueError(
            f"gamma0={g0} outside [0, {mu_hat_f}] u [{2 * mu_hat_f}, {hi}]")
    return max(g0, 0.0)


@dataclass
class MemoryTerm:
    """One remembered parabola: its stiffness, center, and current weight."""

    gamma_j: float
    v_j: np.ndarray
    beta: float = 0.0


@dataclass
class GcesState:
    """Mutable per-run state; single-owner."""

    k: int
    x: np.ndarray
    v: np.ndarray
    gamma: float
    L: float
    lam: float
    memory: deque = field(
        default_factory=lambda: deque(maxlen=MEMORY_RING_DEPTH))
    counters: OracleCounters = field(default_factory=OracleCounters)
    last_trial: "Trial | None" = None
    last_trial_count: int = 0


@dataclass
class Trial:
    """The quantities produced by one accepted line-search trial."""

    L_hat: float
    alpha: float
    sigma: float
    gamma_next: float
    y: np.ndarray
    x_next: np.ndarray
    v_next: np.ndarray
    F_next: float
    residual_norm: float


def initial_state(p: CompositeProblem, cfg: GcesConfig, x0) -> GcesState:
    x0 = as_vector(x0)
    if not np.all(np.isfinite(x0)):
        raise ValueError("x0 must be finite")
    gamma0 = resolve_gamma0(cfg, p.mu_hat_f)
    return GcesState(k=0, x=x0.copy(), v=x0.copy(), gamma=gamma0,
                     L=cfg.L0, lam=1.0)


def select_beta(state: GcesState, mu_hat_f: float, use_memory: bool = True) -> None:
    """Weight the most recent remembered parabola.

    beta = min(1, mu / gamma_{k-1}) on the last stored term, then the
    weighted sum is clamped so it never exceeds min(gamma_k, mu).  All
    older terms keep weight zero.
    """
    for term in state.memory:
        term.beta = 0.0
    if not use_memory or not state.memory or mu_hat_f <= 0.0:
        return
    last = state.memory[-1]
    if last.gamma_j <= 0.0:
        return
    beta = min(1.0, mu_hat_f / last.gamma_j)
    cap = min(state.gamma, mu_hat_f)
    if beta * last.gamma_j > cap:
        beta = cap / last.gamma_j
    last.beta = beta


def memory_weight_sum(state: GcesState) -> float:
    """Sum of beta_j * gamma_j over the active memory terms."""
    return sum(t.beta * t.gamma_j for t in state.memory if t.beta > 0.0)


def compute_sigma(state: GcesState, mu_hat_f: float) -> float:
    return mu_hat_f + memory_weight_sum(state)


def solve_alpha(sigma: float, gamma: float, L: float) -> float:
    """Positive root of L a^2 = (1 - a) gamma + a sigma."""
    if not L > 0:
        raise ValueError("L must be positive")
    if sigma < 0 or gamma < 0:
        raise ValueError("sigma and gamma must be non-negative")
    if sigma == 0.0 and gamma == 0.0:
        raise DegenerateStateError("sigma = gamma = 0: the step size vanishes")
    diff = sigma - gamma
    return (diff + math.sqrt(diff * diff + 4.0 * L * gamma)) / (2.0 * L)


def update_y(x, v, gamma: float, gamma_next: float, alpha: float,
             memory) -> np.ndarray:
    """Extrapolation point: convex combination of x, v and the remembered
    centers, weighted by gamma_next, alpha*gamma and alpha^2*beta*gamma_j."""
    num = gamma_next * x + alpha * gamma * v
    den = gamma_next + alpha * gamma
    for t in memory:
        if t.beta > 0.0:
            w = alpha * alpha * t.beta * t.gamma_j
            num = num + w * t.v_j
            den += w
    if not den > 0.0:
        raise DegenerateStateError("y-update denominator vanished")
    return num / den


def update_v(v, gamma: float, alpha: float, gamma_next: float,
             mu_hat_f: float, y, reduced_grad, memory) -> np.ndarray:
    """New parabola center from the old one, the reduced gradient and the
    weighted memory centers."""
    if not gamma_next > 0.0:
        raise DegenerateStateError("gamma_next must be positive in the v-update")
    acc = mu_hat_f * y - reduced_grad
    for t in memory:
        if t.beta > 0.0:
            acc = acc + (t.beta * t.gamma_j) * t.v_j
    return ((1.0 - alpha) * gamma * v + alpha * acc) / gamma_next


def backtracking_step(p: CompositeProblem, state: GcesState,
                      cfg: GcesConfig):
    """Run the line search from eta_d * L_k; return (accepted trial, count).

    Each trial recomputes alpha, gamma, y, the proximal gradient point and
    the new center, and is accepted on sufficient decrease of the model.
    """
    select_beta(state, p.mu_hat_f, cfg.use_memory)
    sigma = compute_sigma(state, p.mu_hat_f)
    counters = state.counters
    L_hat = cfg.eta_d * state.L
    for trial_count in range(1, MAX_LINE_SEARCH_TRIALS + 1):
        alpha = solve_alpha(sigma, state.gamma, L_hat)
        if alpha >= 1.0:
            # the estimating-sequence recursions need alpha in (0, 1); this
            # happens exactly when L_hat < sigma, so grow the estimate
            L_hat *= cfg.eta_u
            continue
        gamma_next = (1.0 - alpha) * state.gamma + alpha * sigma
        y = update_y(state.x, state.v, state.gamma, gamma_next, alpha,
                     state.memory)
        grad_y = p.smooth_gradient(y, counters)
        smooth_y = p.smooth_value(y, counters)
        forward = y - grad_y / L_hat
        if p.tau > 0.0:
            x_next = p.prox(p.tau / L_hat, forward, counters)
        else:
            counters.prox_calls += 1
            x_next = forward
        d = x_next - y
        reg_next = p.reg_value(x_next)
        model = (smooth_y + float(np.dot(grad_y, d))
                 + 0.5 * L_hat * float(np.dot(d, d)) + p.tau * reg_next)
        F_next = p.smooth_value(x_next, counters) + p.tau * reg_next
        if F_next <= model + DECREASE_SLACK * (1.0 + abs(F_next)):
            reduced_grad = L_hat * (y - x_next)
            v_next = update_v(state.v, state.gamma, alpha, gamma_next,
                              p.mu_hat_f, y, reduced_grad, state.memory)
            trial = Trial(L_hat=L_hat, alpha=alpha, sigma=sigma,
                          gamma_next=gamma_next, y=y, x_next=x_next,
                          v_next=v_next, F_next=F_next,
                          residual_norm=float(np.linalg.norm(d)))
            return trial, trial_count
        L_hat *= cfg.eta_u
    raise LineSearchError(
        f"no sufficient decrease after {MAX_LINE_SEARCH_TRIALS} trials; "
        "the smooth oracle or its gradient is inconsistent")


def step(p: CompositeProblem, state: GcesState, cfg: GcesConfig) -> GcesState:
    """Advance the state by one committed iteration."""
    trial, trial_count = backtracking_step(p, state, cfg)
    if state.k >= 1:
        state.memory.append(MemoryTerm(gamma_j=state.gamma, v_j=state.v))
    state.x = trial.x_next
    state.v = trial.v_next
    state.gamma = trial.gamma_next
    state.L = trial.L_hat
    state.lam *= (1.0 - trial.alpha)
    state.k += 1
    state.last_trial = trial
    state.last_trial_count = trial_count
    return state


def run(p: CompositeProblem, cfg: GcesConfig, x0, reference=None):
    """Iterate until max_iters or the mapping residual drops below
    tolerance.  Returns a SolveResult whose trace has one row per committed
    iteration plus the starting point.

    reference, when given, is an (x_star, f_star) pair used to fill the
    gap and distance columns of the trace.
    """
    state = initial_state(p, cfg, x0)
    x_star, f_star = (reference if reference is not None else (None, math.nan))
    t_start = time.monotonic()

    def now():
        return time.monotonic() - t_start if cfg.record_wall_time else 0.0

    def gap_dist(x, F):
        if x_star is None:
            return math.nan, math.nan
        return F - f_star, float(np.linalg.norm(x - x_star))

    trace = []
    F0 = p.objective(state.x, state.counters)
    g0, d0 = gap_dist(state.x, F0)
    trace.append(TracePoint(k=0, F=F0, gap=g0, dist=d0, L=state.L,
                            alpha=math.nan, gamma=state.gamma, lam=state.lam,
                            grad_calls=state.counters.gradient_calls,
                            prox_calls=state.counters.prox_calls, sec=now()))
    converged = False
    for _ in range(cfg.max_iters):
        step(p, state, cfg)
        trial = state.last_trial
        g, d = gap_dist(state.x, trial.F_next)
        trace.append(TracePoint(
            k=state.k, F=trial.F_next, gap=g, dist=d, L=state.L,
            alpha=trial.alpha, gamma=state.gamma, lam=state.lam,
            grad_calls=state.counters.gradient_calls,
            prox_calls=state.counters.prox_calls, sec=now(),
            sigma=trial.sigma))
        if cfg.tolerance > 0.0 and trial.residual_norm <= cfg.tolerance:
            converged = True
            break
    return SolveResult(x=state.x, trace=trace, converged=converged,
                       iterations=state.k, counters=state.counters,
                       state=state)
