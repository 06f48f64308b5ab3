"""Accelerated first-order solvers for composite convex objectives.

The package provides an estimating-sequence solver with memory terms and
backtracking line-search, FISTA and multistep baselines, closed-form
proximal operators, benchmark problem generators, LIBSVM data handling,
and runtime verification of the solver's convergence certificates.
"""

from .baselines import amgs_run, fista_run
from .certificates import CertificateReport, certificate_check
from .errors import (DegenerateStateError, DimensionError, FetchError,
                     GcesError, IntegrityError, InvalidRegularizerError,
                     InvalidStepError, LineSearchError, ParseError,
                     ReferenceFailureError, RegistryError)
from .linalg import (CsrMatrix, SpectralEstimate, axpby, dot,
                     spectral_norm_sq, spmv, spmv_transpose)
from .mapping import (MappingResult, compute_mapping, lower_bound_certificate,
                      model_value, sufficient_decrease)
from .problems import (CompositeProblem, ObjectiveValue, OracleCounters,
                       SmoothOracle, apply_transfer)
from .regularizers import (ElasticNet, L1Norm, Linear, Regularizer,
                           SquaredL2Shifted, Zero, brute_force_prox,
                           subdifferential_check)
from .solver import (GcesConfig, GcesState, MemoryTerm, backtracking_step,
                     compute_sigma, initial_state, resolve_gamma0, run,
                     select_beta, solve_alpha, step, update_v, update_y)
from .trace import SolveResult, TracePoint, emit_trace_csv, read_trace_csv
from .zoo import (LogisticElasticNet, QuadraticElasticNet, SyntheticSpec,
                  as_problem, logistic_from_matrix, logistic_oracle,
                  make_synthetic, make_synthetic_logistic, quadratic_from_matrix,
                  quadratic_oracle)

__version__ = "0.1.0"
