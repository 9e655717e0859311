"""Fixed-point iteration for the unique positive definite solution.

For exponents in (0, 1) the map X -> Q + sum_i A_i* X^{p_i} A_i is a
contraction toward the unique PD solution from arbitrary PD starting
matrices. The iteration keeps a sliding window of the m most recent
iterates and updates

    X_{s+m+1} = Q + sum_{i=1..m} A_i* X_{s+i}^{p_i} A_i,   s = 0, 1, 2, ...

so term i draws on the iterate m - i steps back.
"""
from dataclasses import dataclass, field

import numpy as np

from . import linalg, model
from .errors import DefinitenessError, PreconditionError


@dataclass(eq=False)
class SolveReport:
    X: np.ndarray
    iterations: int
    residual_history: list
    beta: float
    converged: bool
    tol: float
    iterates: list = field(default_factory=list, repr=False)

    @property
    def final_residual(self):
        return self.residual_history[-1] if self.residual_history else np.inf


def solve_fixed_point(inst, initials=None, tol=1e-10, max_iter=10000,
                      norm="spectral", keep_iterates=False):
    """Iterate to the unique PD solution of X - sum A_i* X^{p_i} A_i = Q.

    Parameters
    ----------
    inst : ProblemInstance with all exponents in (0, 1).
    initials : optional list of m PD matrices seeding the window
        (defaults to m copies of Q).
    tol : stop once ||R(X_k)|| < tol with R(X) = Q + sum A_i* X^{p_i} A_i - X.
    norm : "spectral" (default) or "fro" for the stopping criterion.
    keep_iterates : record the full iterate sequence, initials included.

    Returns a SolveReport; converged=False (no exception) when max_iter is
    exhausted, with the partial residual history preserved.
    """
    if not inst.analysis_ready:
        raise PreconditionError("solver requires all exponents in (0, 1)")
    if tol <= 0:
        raise PreconditionError("tol must be positive")
    rep = model.validate_instance(inst)
    if not rep.valid:
        raise PreconditionError("invalid instance: " + "; ".join(rep.issues))

    m, n = inst.m, inst.n
    if initials is None:
        window = [inst.Q.copy() for _ in range(m)]
    else:
        if len(initials) != m:
            raise PreconditionError(f"expected {m} initial matrices, got {len(initials)}")
        window = []
        for k, M in enumerate(initials):
            M = np.asarray(M, dtype=complex)
            if M.shape != (n, n):
                raise PreconditionError(f"initial {k + 1} has shape {M.shape}")
            if not linalg.is_pd(M):
                raise DefinitenessError(f"initial {k + 1} is not positive definite",
                                        lambda_min=linalg.lambda_min(M))
            window.append(linalg.hermitian_part(M))

    beta = model.beta_lower_bound(inst)
    measure = linalg.spectral_norm if norm == "spectral" else linalg.fro_norm
    iterates = list(window) if keep_iterates else []
    history = []
    X = window[-1]
    converged = False
    iterations = 0
    for _ in range(max_iter):
        X = inst.Q.astype(complex).copy()
        for i, (A, p) in enumerate(inst.terms):
            X = X + A.conj().T @ linalg.frac_power(window[i], p) @ A
        X = linalg.hermitian_part(X)
        # Q > 0 and PSD increments keep iterates PD; a numerical violation
        # would poison every later fractional power, so fail loudly.
        lam = linalg.lambda_min(X)
        if lam <= 0:
            raise DefinitenessError("iterate lost positive definiteness", lambda_min=lam)
        window = window[1:] + [X]
        iterations += 1
        if keep_iterates:
            iterates.append(X)
        r = measure(model.residual(inst, X))
        history.append(r)
        if r < tol:
            converged = True
            break
    return SolveReport(X=X, iterations=iterations, residual_history=history,
                       beta=beta, converged=converged, tol=tol, iterates=iterates)


def reference_solution(inst, tol=1e-14, max_iter=50000):
    """Tight-tolerance solve used as ground truth in error tables."""
    rep = solve_fixed_point(inst, tol=tol, max_iter=max_iter)
    return rep.X
