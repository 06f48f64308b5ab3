"""Sparse logistic regression with an elastic-net penalty.

Runs the three solvers on a synthetic classification instance under the
known-constants protocol (the Lipschitz estimate is not probed downwards),
then, when a cached copy of the a1a dataset is available, repeats the
comparison on real data.  Fetch it once with: gces fetch --name a1a
"""

import numpy as np

from gces import (GcesConfig, amgs_run, as_problem, fista_run,
                  logistic_from_matrix, make_synthetic_logistic, run)
from gces.bench import reference_solve
from gces.libsvm import default_cache_dir, parse_libsvm


def compare(problem, label, max_iters=3000):
    ref = reference_solve(problem, budget=10000)
    x0 = np.random.default_rng(3).standard_normal(problem.dimension)
    L = problem.lipschitz_hat
    runs = {
        "memory solver": run(problem,
                             GcesConfig(gamma0="zero", L0=L, max_iters=max_iters,
                                        eta_d=1.0 - 1e-9),
                             x0, reference=(ref.x, ref.F)),
        "fista": fista_run(problem, L0=L, eta_u=2.0, max_iters=max_iters,
                           tolerance=0.0, x0=x0, reference=(ref.x, ref.F)),
        "amgs": amgs_run(problem, L0=L, eta_u=2.0, eta_d=1.0 - 1e-9,
                         max_iters=max_iters, tolerance=0.0, x0=x0,
                         reference=(ref.x, ref.F)),
    }
    print(f"{label} (n = {problem.dimension}, L = {L:.4f})")
    for name, result in runs.items():
        hit = next((pt.k for pt in result.trace if pt.gap <= 1e-6), None)
        print(f"  {name:14s} iterations to gap 1e-6: {hit}")
    print()


synthetic = make_synthetic_logistic(m=200, n=100, seed=13, tau1=1e-3,
                                    tau2=1e-3)
compare(as_problem(synthetic), "synthetic 200x100 logistic")

a1a_path = default_cache_dir() / "a1a"
if a1a_path.exists():
    with open(a1a_path, "r", encoding="ascii", errors="replace") as fh:
        ds = parse_libsvm(fh, n_features=123)
    inst = logistic_from_matrix(ds.features, ds.labels, tau1=1e-4, tau2=1e-4)
    compare(as_problem(inst), "a1a logistic", max_iters=6000)
else:
    print("a1a not cached; skipping the real-data comparison")
    print("(run `gces fetch --name a1a` with network access to enable it)")
