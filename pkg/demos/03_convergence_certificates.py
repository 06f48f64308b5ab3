"""Verify the solver's convergence certificates at runtime.

Runs the solver on a small quadratic, then checks every per-iteration
bound against a verified reference solution: the lambda-weighted gap
bound, the initial-gap bound, the line-search ceiling, and the decay-rate
bounds for the contraction factors.

Two decay-bound variants are reported.  The as-printed form compares
lambda_k against 2/(k+1)^2 (or 4 L_k / ((gamma0-mu)(k+1)^2) in the upper
regime); on ill-conditioned problems it fails during the warm-up phase in
which gamma_k is still far below mu, so its pass rate is informational.
The running-max variant replaces the current estimate L_k by the largest
estimate seen so far, which is what the underlying telescoping argument
controls, and is enforced.
"""

import numpy as np

from gces import (GcesConfig, SyntheticSpec, as_problem, certificate_check,
                  make_synthetic, run)
from gces.bench import reference_solve

instance = make_synthetic(SyntheticSpec(m=200, xi=3, seed=9, tau1=1e-3,
                                        tau2=1e-3))
problem = as_problem(instance)
reference = reference_solve(problem, budget=8000, instance=instance)
print(f"reference verified: {reference.verified}\n")

x0 = np.random.default_rng(1).standard_normal(200)
for gamma0 in ("zero", "3L0+mu"):
    cfg = GcesConfig(gamma0=gamma0, L0=problem.lipschitz_hat, max_iters=1500)
    result = run(problem, cfg, x0, reference=(reference.x, reference.F))
    report = certificate_check(result.trace, problem, cfg, x0,
                               reference.x, reference.F)
    s = report.summary()
    print(f"gamma0 = {gamma0} (regime: {s['lambda_case']})")
    print(f"  gap bound holds at every iteration : {s['gap_bound_ok']}")
    print(f"  initial-gap bound                  : {s['initial_bound_ok']}")
    print(f"  line-search ceiling                : {s['line_search_ceiling_ok']}")
    print(f"  decay bound, as printed            : "
          f"{s['lambda_printed_pass_rate']:.1%} of iterations")
    print(f"  decay bound, running-max form      : "
          f"{s['lambda_maxL_pass_rate']:.1%} of iterations")
    print()
