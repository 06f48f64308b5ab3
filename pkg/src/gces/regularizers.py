"""Regularizers with closed-form proximal maps.

Each regularizer knows its value, its prox, its declared strong-convexity
parameter `mu`, and how to test subgradient membership.  `brute_force_prox`
is an independent per-coordinate minimization oracle used to validate the
closed forms.
"""

import numpy as np
from scipy.optimize import minimize_scalar

from .errors import InvalidRegularizerError, InvalidStepError
from .linalg import as_vector


class Regularizer:
    """Convex function g with an O(n) prox.  Subclasses are stateless."""

    #: declared strong-convexity parameter of g (a valid lower bound)
    mu = 0.0
    #: True when g(x) = sum_i g_i(x_i)
    separable = True

    def value(self, x) -> float:
        raise NotImplementedError

    def prox(self, t: float, x) -> np.ndarray:
        """argmin_z g(z) + ||z - x||^2 / (2 t), for t > 0."""
        raise NotImplementedError

    def subdifferential_contains(self, z, s, tol: float = 1e-8) -> bool:
        """True iff s is a subgradient of g at z, within tol."""
        raise NotImplementedError

    def coordinate_value(self, i: int, z: float) -> float:
        """g_i(z) for separable g; used by the brute-force oracle."""
        raise NotImplementedError

    def shifted_by_quadratic(self, coeff: float, center) -> "Regularizer":
        """Return h(x) = g(x) - (coeff/2) ||x - center||^2 when h keeps a
        closed-form prox; reject otherwise."""
        if coeff == 0.0:
            return self
        raise InvalidRegularizerError(
            f"{type(self).__name__} has no closed-form prox after removing "
            "a quadratic term")

    def _check_step(self, t):
        if not t > 0:
            raise InvalidStepError(f"prox step must be positive, got {t}")


class Zero(Regularizer):
    """g(x) = 0; the prox is the identity."""

    def value(self, x):
        return 0.0

    def prox(self, t, x):
        self._check_step(t)
        return as_vector(x).copy()

    def subdifferential_contains(self, z, s, tol=1e-8):
        return bool(np.max(np.abs(as_vector(s)), initial=0.0) <= tol)

    def coordinate_value(self, i, z):
        return 0.0


class L1Norm(Regularizer):
    """g(x) = ||x||_1; the prox is the soft threshold."""

    def value(self, x):
        return float(np.sum(np.abs(as_vector(x))))

    def prox(self, t, x):
        self._check_step(t)
        x = as_vector(x)
        # |x_i| == t lands exactly on 0 (the closed-form limit)
        return np.sign(x) * np.maximum(np.abs(x) - t, 0.0)

    def subdifferential_contains(self, z, s, tol=1e-8):
        z, s = as_vector(z), as_vector(s)
        nonzero = np.abs(z) > tol
        ok_nz = np.all(np.abs(s[nonzero] - np.sign(z[nonzero])) <= tol)
        ok_z = np.all(np.abs(s[~nonzero]) <= 1.0 + tol)
        return bool(ok_nz and ok_z)

    def coordinate_value(self, i, z):
        return abs(z)


class SquaredL2Shifted(Regularizer):
    """g(x) = (coeff/2) ||x - center||^2 with mu = coeff.

    A scalar center broadcasts over all coordinates.
    """

    def __init__(self, center, coeff: float = 1.0):
        if coeff < 0:
            raise InvalidRegularizerError("coeff must be non-negative")
        self.center = np.atleast_1d(np.asarray(center, dtype=np.float64))
        self.coeff = float(coeff)
        self.mu = self.coeff

    def _center_for(self, n: int) -> np.ndarray:
        if self.center.size == 1:
            return np.full(n, self.center[0])
        if self.center.size != n:
            raise InvalidRegularizerError("center length does not match x")
        return self.center

    def value(self, x):
        x = as_vector(x)
        d = x - self._center_for(x.size)
        return 0.5 * self.coeff * float(np.dot(d, d))

    def prox(self, t, x):
        self._check_step(t)
        x = as_vector(x)
        # stationarity: coeff (z - c) + (z - x)/t = 0
        c = self._center_for(x.size)
        return (x + t * self.coeff * c) / (1.0 + t * self.coeff)

    def subdifferential_contains(self, z, s, tol=1e-8):
        z, s = as_vector(z), as_vector(s)
        grad = self.coeff * (z - self._center_for(z.size))
        return bool(np.max(np.abs(s - grad), initial=0.0) <= tol)

    def coordinate_value(self, i, z):
        c = self.center[0] if self.center.size == 1 else self.center[i]
        return 0.5 * self.coeff * (z - c) ** 2

    def shifted_by_quadratic(self, coeff, center):
        if coeff == 0.0:
            return self
        if coeff != self.coeff:
            raise InvalidRegularizerError(
                "can only remove the full quadratic of SquaredL2Shifted")
        anchor = as_vector(center)
        c = self._center_for(anchor.size)
        # (q/2)||x-c||^2 - (q/2)||x-x0||^2 = q (x0 - c)^T x + const
        slope = self.coeff * (anchor - c)
        offset = 0.5 * self.coeff * (float(np.dot(c, c)) - float(np.dot(anchor, anchor)))
        return Linear(slope, offset)


class Linear(Regularizer):
    """g(x) = slope^T x + offset; arises from the strong-convexity transfer."""

    separable = True

    def __init__(self, slope, offset: float = 0.0):
        self.slope = as_vector(slope)
        self.offset = float(offset)

    def value(self, x):
        return float(np.dot(self.slope, as_vector(x))) + self.offset

    def prox(self, t, x):
        self._check_step(t)
        return as_vector(x) - t * self.slope

    def subdifferential_contains(self, z, s, tol=1e-8):
        return bool(np.max(np.abs(as_vector(s) - self.slope), initial=0.0) <= tol)

    def coordinate_value(self, i, z):
        return self.slope[i] * z


class ElasticNet(Regularizer):
    """g(x) = rho ||x||_1 + ((1-rho)/2) ||x||^2.

    mu stays 0 by declaration: the benchmark problems carry their l2 term
    inside the smooth part, so this kind is never used with a transfer.
    """

    def __init__(self, l1_fraction: float):
        if not 0.0 <= l1_fraction <= 1.0:
            raise InvalidRegularizerError("l1_fraction must lie in [0, 1]")
        self.rho = float(l1_fraction)

    def value(self, x):
        x = as_vector(x)
        return float(self.rho * np.sum(np.abs(x))
                     + 0.5 * (1.0 - self.rho) * np.dot(x, x))

    def prox(self, t, x):
        self._check_step(t)
        x = as_vector(x)
        soft = np.sign(x) * np.maximum(np.abs(x) - t * self.rho, 0.0)
        return soft / (1.0 + t * (1.0 - self.rho))

    def subdifferential_contains(self, z, s, tol=1e-8):
        z, s = as_vector(z), as_vector(s)
        r = s - (1.0 - self.rho) * z
        nonzero = np.abs(z) > tol
        ok_nz = np.all(np.abs(r[nonzero] - self.rho * np.sign(z[nonzero])) <= tol)
        ok_z = np.all(np.abs(r[~nonzero]) <= self.rho + tol)
        return bool(ok_nz and ok_z)

    def coordinate_value(self, i, z):
        return self.rho * abs(z) + 0.5 * (1.0 - self.rho) * z * z


def subdifferential_check(reg: Regularizer, z, s, tol: float = 1e-8) -> bool:
    return reg.subdifferential_contains(z, s, tol=tol)


def brute_force_prox(reg: Regularizer, t: float, x, grid: int = 512) -> np.ndarray:
    """Numerically minimize the prox objective per coordinate.

    Independent oracle for testing the closed forms: coarse grid scan over
    a bracket around each coordinate, refined by bounded scalar
    minimization to ~1e-6.  Only for separable regularizers and small n.
    """
    if not t > 0:
        raise InvalidStepError(f"prox step must be positive, got {t}")
    if not reg.separable:
        raise NotImplementedError("brute_force_prox needs a separable regularizer")
    x = as_vector(x)
    if x.size > 10:
        raise ValueError("brute_force_prox is a test oracle; keep n <= 10")
    out = np.empty_like(x)
    for i, xi in enumerate(x):
        def objective(z, i=i, xi=xi):
            return reg.coordinate_value(i, z) + (z - xi) ** 2 / (2.0 * t)

        half_width = abs(xi) + 10.0 * t + 1.0
        zs = np.linspace(xi - half_width, xi + half_width, grid)
        vals = [objective(z) for z in zs]
        j = int(np.argmin(vals))
        lo = zs[max(j - 1, 0)]
        hi = zs[min(j + 1, grid - 1)]
        res = minimize_scalar(objective, bounds=(lo, hi), method="bounded",
                              options={"xatol": 1e-9})
        out[i] = res.x
    return out
