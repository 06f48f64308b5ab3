"""Benchmark problem constructors: ill-conditioned diagonal quadratics,
elastic-net least squares, and l1/l2-regularized logistic regression."""

from dataclasses import dataclass, field

import numpy as np
from scipy.special import expit

from .linalg import CsrMatrix, as_vector, spectral_norm_sq, spmv, spmv_transpose
from .problems import SmoothOracle, apply_transfer
from .regularizers import L1Norm


@dataclass(frozen=True)
class SyntheticSpec:
    """Diagonal quadratic generator: m entries drawn from the decade grid
    {10^0, ..., 10^-xi}, with 10^0 and 10^-xi always present so the loss
    curvature extremes are pinned."""

    m: int
    xi: int
    seed: int
    tau1: float = 0.0
    tau2: float = 0.0

    def __post_init__(self):
        if self.m < 2:
            raise ValueError("need m >= 2")
        if self.xi < 1:
            raise ValueError("need xi >= 1")


@dataclass(frozen=True, eq=False)
class QuadraticElasticNet:
    """0.5 ||A x - b||^2 + (tau1/2) ||x||^2 + tau2 ||x||_1."""

    A: CsrMatrix
    b: np.ndarray
    tau1: float
    tau2: float
    L_f: float          # lambda_max(A^T A) + tau1
    mu_f: float         # estimate fed to solvers: tau1 (a deliberate lower bound)
    metadata: dict = field(default_factory=dict)


@dataclass(frozen=True, eq=False)
class LogisticElasticNet:
    """(1/m) sum log(1 + exp(-b_i a_i^T x)) + (tau1/2) ||x||^2 + tau2 ||x||_1."""

    A: CsrMatrix
    b: np.ndarray       # labels in {-1, +1}
    m: int
    tau1: float
    tau2: float
    L_f: float          # lambda_max(A^T A) / (4 m) + tau1
    mu_f: float         # tau1
    metadata: dict = field(default_factory=dict)

    def __post_init__(self):
        labels = set(np.unique(self.b))
        if not labels <= {-1.0, 1.0}:
            raise ValueError(f"labels must be +-1, got {sorted(labels)}")


def make_synthetic(spec: SyntheticSpec) -> QuadraticElasticNet:
    """Diagonal instance with known curvature extremes, deterministic per seed."""
    rng = np.random.default_rng(spec.seed)
    decades = 10.0 ** -np.arange(spec.xi + 1, dtype=np.float64)
    diag = rng.choice(decades, size=spec.m)
    diag[0] = 1.0
    diag[-1] = 10.0 ** -spec.xi
    b = rng.uniform(0.0, 1.0, size=spec.m)
    A = CsrMatrix.from_diagonal(diag)
    lam_max = 1.0                      # max diag entry squared, pinned
    lam_min = 10.0 ** (-2 * spec.xi)   # min diag entry squared, pinned
    meta = {
        "diagonal": True,
        "loss_lipschitz": lam_max,
        "loss_strong_convexity": lam_min,
        # the entry-ratio convention kappa = 10^xi vs the curvature ratio 10^(2 xi)
        "condition_entries": 10.0 ** spec.xi,
        "condition_curvature": 10.0 ** (2 * spec.xi),
        "seed": spec.seed,
    }
    return QuadraticElasticNet(A=A, b=b, tau1=spec.tau1, tau2=spec.tau2,
                               L_f=lam_max + spec.tau1, mu_f=spec.tau1,
                               metadata=meta)


def quadratic_from_matrix(A: CsrMatrix, b, tau1: float, tau2: float,
                          spectral_tol: float = 1e-6) -> QuadraticElasticNet:
    """Elastic-net least squares on an arbitrary design matrix; the
    Lipschitz constant comes from a power-iteration estimate."""
    b = as_vector(b)
    if b.size != A.n_rows:
        raise ValueError("b length must equal the number of rows")
    est = spectral_norm_sq(A, tol=spectral_tol)
    meta = {"diagonal": False, "loss_lipschitz": est.value,
            "spectral_converged": est.converged}
    return QuadraticElasticNet(A=A, b=b, tau1=tau1, tau2=tau2,
                               L_f=est.value + tau1, mu_f=tau1, metadata=meta)


def quadratic_oracle(q: QuadraticElasticNet):
    """(smooth oracle, regularizer, tau) triple for the elastic-net
    quadratic; the l2 term lives in the smooth part, so the prox stays a
    plain soft threshold."""
    A, b, tau1 = q.A, q.b, q.tau1

    def value(x):
        r = spmv(A, x) - b
        return 0.5 * float(np.dot(r, r)) + 0.5 * tau1 * float(np.dot(x, x))

    def gradient(x):
        return spmv_transpose(A, spmv(A, x) - b) + tau1 * x

    oracle = SmoothOracle(dimension=A.n_cols, value=value, gradient=gradient,
                          lipschitz_hint=q.L_f, strong_convexity=q.mu_f)
    return oracle, L1Norm(), q.tau2


def logistic_from_matrix(A: CsrMatrix, labels, tau1: float, tau2: float,
                         spectral_tol: float = 1e-6) -> LogisticElasticNet:
    labels = as_vector(labels)
    if labels.size != A.n_rows:
        raise ValueError("labels length must equal the number of rows")
    est = spectral_norm_sq(A, tol=spectral_tol)
    m = A.n_rows
    meta = {"loss_lipschitz": est.value / (4.0 * m),
            "spectral_converged": est.converged}
    return LogisticElasticNet(A=A, b=labels, m=m, tau1=tau1, tau2=tau2,
                              L_f=est.value / (4.0 * m) + tau1, mu_f=tau1,
                              metadata=meta)


def logistic_oracle(l: LogisticElasticNet):
    """(smooth oracle, regularizer, tau) for regularized logistic loss.

    Evaluation goes through logaddexp, so margins of magnitude several
    hundred stay finite.
    """
    A, b, tau1, m = l.A, l.b, l.tau1, l.m

    def value(x):
        margins = b * spmv(A, x)
        # log(1 + exp(-t)) == logaddexp(0, -t), stable for any t
        loss = float(np.sum(np.logaddexp(0.0, -margins))) / m
        return loss + 0.5 * tau1 * float(np.dot(x, x))

    def gradient(x):
        margins = b * spmv(A, x)
        w = -b * expit(-margins)
        return spmv_transpose(A, w) / m + tau1 * x

    oracle = SmoothOracle(dimension=A.n_cols, value=value, gradient=gradient,
                          lipschitz_hint=l.L_f, strong_convexity=l.mu_f)
    return oracle, L1Norm(), l.tau2


def make_synthetic_logistic(m: int, n: int, seed: int, tau1: float,
                            tau2: float) -> LogisticElasticNet:
    """Random dense classification instance for smoke tests and demos."""
    rng = np.random.default_rng(seed)
    dense = rng.standard_normal((m, n)) / np.sqrt(n)
    planted = rng.standard_normal(n)
    labels = np.sign(dense @ planted + 0.1 * rng.standard_normal(m))
    labels[labels == 0] = 1.0
    A = CsrMatrix.from_dense(dense)
    return logistic_from_matrix(A, labels, tau1, tau2)


def as_problem(instance):
    """Build the CompositeProblem for a zoo instance (anchored at zero)."""
    if isinstance(instance, QuadraticElasticNet):
        oracle, reg, tau = quadratic_oracle(instance)
    elif isinstance(instance, LogisticElasticNet):
        oracle, reg, tau = logistic_oracle(instance)
    else:
        raise TypeError(f"unknown zoo instance {type(instance).__name__}")
    x0 = np.zeros(oracle.dimension)
    return apply_transfer(oracle, reg, tau, x0)
