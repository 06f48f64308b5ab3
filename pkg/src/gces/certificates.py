"""Runtime verification of the solver's convergence certificates.

Four families of checks run against a finished trace and a high-accuracy
reference solution:

* the gap bound  F(x_k) - F* <= lambda_k (F(x_0) - F* + gamma_0/2 d0^2),
* the initial-gap bound  F(x_0) - F* <= (L_hat/2) d0^2,
* the contraction-factor decay bounds for both gamma_0 regimes, and
* the line-search ceiling  L_k <= max(eta_d L_0, eta_u L_hat).

The decay bound for the upper gamma_0 regime is evaluated twice: once
exactly as printed (with the current estimate L_k) and once with the
running maximum of the estimates, which is the quantity the underlying
telescoping argument actually controls.  The printed forms are known to
fail on ill-conditioned problems at small k; see the README notes.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .problems import CompositeProblem
from .solver import GcesConfig, resolve_gamma0

#: absolute slack on gap-style comparisons
CERT_SLACK = 1e-9


@dataclass
class CertificateReport:
    gamma0: float
    mu_hat_f: float
    lambda_case: str  # "below-mu" | "upper" | "unchecked"
    iterations: int
    gap_bound_violations: list = field(default_factory=list)
    eq15_ok: bool = True
    eq15_margin: float = math.nan
    lambda_printed_violations: list = field(default_factory=list)
    lambda_maxL_violations: list = field(default_factory=list)
    ceiling_ok: bool = True
    max_L: float = math.nan
    L_ceiling: float = math.nan

    @property
    def gap_bound_ok(self) -> bool:
        return not self.gap_bound_violations

    @property
    def lambda_printed_ok(self) -> bool:
        return not self.lambda_printed_violations

    @property
    def lambda_maxL_ok(self) -> bool:
        return not self.lambda_maxL_violations

    def summary(self) -> dict:
        n = max(self.iterations + 1, 1)
        return {
            "iterations": self.iterations,
            "gap_bound_ok": self.gap_bound_ok,
            "gap_bound_pass_rate": 1.0 - len(self.gap_bound_violations) / n,
            "initial_bound_ok": self.eq15_ok,
            "lambda_case": self.lambda_case,
            "lambda_printed_pass_rate": 1.0 - len(self.lambda_printed_violations) / n,
            "lambda_maxL_pass_rate": 1.0 - len(self.lambda_maxL_violations) / n,
            "line_search_ceiling_ok": self.ceiling_ok,
        }


def certificate_check(trace, p: CompositeProblem, cfg: GcesConfig, x0,
                      x_star, f_star) -> CertificateReport:
    """Check every applicable per-iteration bound along a trace.

    The gap bound drops the nonnegative memory term from its right-hand
    side, which only weakens it, so a violation is always a real defect.
    x_star/f_star must come from a verified reference solve.
    """
    x0 = np.asarray(x0, dtype=np.float64)
    gamma0 = resolve_gamma0(cfg, p.mu_hat_f)
    mu = p.mu_hat_f
    d0_sq = float(np.dot(x0 - x_star, x0 - x_star))
    F0 = trace[0].F

    if gamma0 < mu:
        case = "below-mu"
    elif 2.0 * mu <= gamma0 <= 3.0 * cfg.L0 + mu + 1e-12 * (1.0 + cfg.L0):
        case = "upper"
    else:
        case = "unchecked"

    report = CertificateReport(gamma0=gamma0, mu_hat_f=mu, lambda_case=case,
                               iterations=trace[-1].k)

    # initial-gap bound with the known Lipschitz upper bound
    eq15_rhs = 0.5 * p.lipschitz_hat * d0_sq
    report.eq15_margin = eq15_rhs - (F0 - f_star)
    report.eq15_ok = F0 - f_star <= eq15_rhs + CERT_SLACK

    gap_budget = F0 - f_star + 0.5 * gamma0 * d0_sq
    running_max_L = trace[0].L
    for pt in trace:
        if pt.k >= 1:
            running_max_L = max(running_max_L, pt.L)
        # gap bound
        if pt.F - f_star > pt.lam * gap_budget + CERT_SLACK:
            report.gap_bound_violations.append(pt.k)
        # contraction decay bounds
        kk1sq = (pt.k + 1) ** 2
        if case == "below-mu":
            # no L appears in this regime's bound, so there is no
            # running-max variant; violations are informational only
            if pt.lam > 2.0 / kk1sq + CERT_SLACK:
                report.lambda_printed_violations.append(pt.k)
        elif case == "upper":
            denom = (gamma0 - mu) * kk1sq
            if pt.lam > 4.0 * pt.L / denom + CERT_SLACK:
                report.lambda_printed_violations.append(pt.k)
            if pt.lam > 4.0 * running_max_L / denom + CERT_SLACK:
                report.lambda_maxL_violations.append(pt.k)

    report.max_L = max((pt.L for pt in trace if pt.k >= 1), default=trace[0].L)
    report.L_ceiling = max(cfg.eta_d * cfg.L0, cfg.eta_u * p.lipschitz_hat)
    report.ceiling_ok = report.max_L <= report.L_ceiling * (1.0 + 1e-12)
    return report
