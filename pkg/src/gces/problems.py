"""Composite objectives F(x) = f(x) + tau * g(x) and the strong-convexity
transfer that moves all curvature of g into the smooth part."""

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import DimensionError, InvalidRegularizerError
from .linalg import as_vector
from .regularizers import Regularizer, Zero


@dataclass
class OracleCounters:
    """Per-run tallies; owned by a single solver instance."""

    value_calls: int = 0
    gradient_calls: int = 0
    prox_calls: int = 0

    def copy(self):
        return OracleCounters(self.value_calls, self.gradient_calls, self.prox_calls)


@dataclass(frozen=True)
class SmoothOracle:
    """Behavioral contract for the differentiable part f.

    `lipschitz_hint` is L_f or an upper bound; `strong_convexity` is a
    valid lower bound on the curvature (often deliberately loose).
    """

    dimension: int
    value: Callable[[np.ndarray], float]
    gradient: Callable[[np.ndarray], np.ndarray]
    lipschitz_hint: float
    strong_convexity: float = 0.0

    def __post_init__(self):
        if self.lipschitz_hint < self.strong_convexity or self.strong_convexity < 0:
            raise InvalidRegularizerError(
                "need lipschitz_hint >= strong_convexity >= 0")


@dataclass(frozen=True)
class ObjectiveValue:
    total: float
    smooth_part: float
    nonsmooth_part: float


@dataclass(frozen=True, eq=False)
class CompositeProblem:
    """F = f_hat + tau * g_hat after the transfer; immutable and shareable.

    Oracle counters are not stored here: callers pass an OracleCounters
    they own, so concurrent runs over one problem never share state.
    """

    smooth: SmoothOracle
    regularizer: Regularizer
    tau: float
    mu_hat_f: float
    lipschitz_hat: float
    anchor_x0: np.ndarray

    @property
    def dimension(self) -> int:
        return self.smooth.dimension

    def _check_dim(self, x: np.ndarray):
        if x.size != self.smooth.dimension:
            raise DimensionError(
                f"vector length {x.size} != problem dimension {self.smooth.dimension}")

    def smooth_value(self, x, counters: OracleCounters | None = None) -> float:
        x = as_vector(x)
        self._check_dim(x)
        if counters is not None:
            counters.value_calls += 1
        return float(self.smooth.value(x))

    def smooth_gradient(self, x, counters: OracleCounters | None = None) -> np.ndarray:
        x = as_vector(x)
        self._check_dim(x)
        if counters is not None:
            counters.gradient_calls += 1
        return as_vector(self.smooth.gradient(x))

    def reg_value(self, x) -> float:
        return float(self.regularizer.value(as_vector(x)))

    def prox(self, t: float, x, counters: OracleCounters | None = None) -> np.ndarray:
        if counters is not None:
            counters.prox_calls += 1
        return self.regularizer.prox(t, x)

    def evaluate(self, x, counters: OracleCounters | None = None) -> ObjectiveValue:
        smooth = self.smooth_value(x, counters)
        nonsmooth = self.reg_value(x)
        return ObjectiveValue(total=smooth + self.tau * nonsmooth,
                              smooth_part=smooth, nonsmooth_part=nonsmooth)

    def objective(self, x, counters: OracleCounters | None = None) -> float:
        return self.evaluate(x, counters).total


def apply_transfer(f: SmoothOracle, g: Regularizer, tau: float,
                   x0) -> CompositeProblem:
    """Rewrite F = f + tau*g so that g's strong convexity moves into f.

    With mu_g = 0 this is the identity.  Otherwise f_hat gains the
    quadratic (tau*mu_g/2)||x - x0||^2 and g_hat loses it; F is pointwise
    unchanged up to rounding.
    """
    x0 = as_vector(x0)
    if x0.size != f.dimension:
        raise DimensionError("anchor x0 length does not match oracle dimension")
    if tau < 0:
        raise InvalidRegularizerError("tau must be non-negative")
    mu_g = g.mu
    if mu_g < 0:
        raise InvalidRegularizerError("regularizer strong convexity must be >= 0")

    if mu_g == 0.0 or tau == 0.0:
        reg = g if tau > 0.0 else Zero()
        return CompositeProblem(
            smooth=f, regularizer=reg, tau=tau,
            mu_hat_f=f.strong_convexity, lipschitz_hat=f.lipschitz_hint,
            anchor_x0=x0)

    shift = tau * mu_g
    base_value, base_gradient = f.value, f.gradient

    def value_hat(x):
        d = x - x0
        return base_value(x) + 0.5 * shift * float(np.dot(d, d))

    def gradient_hat(x):
        return base_gradient(x) + shift * (x - x0)

    f_hat = SmoothOracle(dimension=f.dimension, value=value_hat,
                         gradient=gradient_hat,
                         lipschitz_hint=f.lipschitz_hint + shift,
                         strong_convexity=f.strong_convexity + shift)
    g_hat = g.shifted_by_quadratic(mu_g, x0)
    return CompositeProblem(smooth=f_hat, regularizer=g_hat, tau=tau,
                            mu_hat_f=f.strong_convexity + shift,
                            lipschitz_hat=f.lipschitz_hint + shift,
                            anchor_x0=x0)
