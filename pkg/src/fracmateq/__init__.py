"""Positive definite solutions and perturbation analysis of
X - sum_i A_i* X^{p_i} A_i = Q."""

from .bounds import (BackwardErrorReport, BoundReport, FirstOrderReport,
                     backward_error_bound, first_order_estimate, operator_bound,
                     solution_free_bound)
from .condition import ConditionReport, cond_complex, cond_real, cond_sup_oracle
from .errors import (AccuracyError, ConsistencyError, ConvergenceError,
                     DefinitenessError, FracmateqError, PreconditionError,
                     ValidationError)
from .factorization import (GramFactorization, SpectralFactorization,
                            VerificationReport, factor_gram, factor_spectral,
                            verify_factorization)
from .linalg import (EigenDecomposition, frac_power, frac_power_quadrature,
                     fro_norm, herm_eig, hermitian_part, is_pd, kron, lambda_max,
                     lambda_min, principal_sqrt, spectral_norm, unvec, vec, vec_perm)
from .model import (Perturbation, ProblemInstance, ValidationReport,
                    beta_lower_bound, perturbed, residual, residual_norm,
                    validate_instance)
from .operators import (NormEstimate, OperatorRep, build_operator,
                        build_operator_quadrature, divided_difference_kernel,
                        invertibility_margin, op_norm, p_map_rep, power_kernel,
                        power_kernel_quadrature)
from .solver import SolveReport, reference_solution, solve_fixed_point

__version__ = "0.1.0"
