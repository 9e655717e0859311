"""Existence certificates: coefficient factorizations through a solution.

A PD solution X of X - sum A_i* X^{p_i} A_i = Q exists iff the coefficients
factor as A_i = (W*W)^{-p_i/2} Y_i (W*W)^{1/2} with X = W*W and the stack
(Z; Y_1; ...; Y_m), Z = Q^{1/2}(W*W)^{-1/2}, column orthonormal. When every
A_i is invertible there is an equivalent spectral form A_i = (U*MU)^{-p_i/2}
V_i N U built from the eigendecomposition X = U*MU. These routines construct
the factors from a (near-)solution and verify them by round trip.
"""
from dataclasses import dataclass

import numpy as np

from . import linalg, model
from .errors import ConsistencyError, DefinitenessError, PreconditionError

NEAR_SOLUTION_RTOL = 1e-8


@dataclass(eq=False)
class GramFactorization:
    W: np.ndarray
    Y: list
    Z: np.ndarray

    def stack(self):
        return np.vstack([self.Z] + list(self.Y))


@dataclass(eq=False)
class SpectralFactorization:
    U: np.ndarray          # unitary, rows are eigenvectors of X
    M: np.ndarray          # diagonal, X = U* M U
    N: np.ndarray          # PD Hermitian, M - N^2 = U Q U*
    V: list

    def stack(self):
        return np.vstack(list(self.V))


@dataclass
class VerificationReport:
    equation_defect: float
    orthonormality_defect: float
    reconstruction_defects: list


def _check_near_solution(inst, X):
    r = linalg.spectral_norm(model.residual(inst, X))
    gate = NEAR_SOLUTION_RTOL * max(1.0, linalg.spectral_norm(X))
    if r > gate:
        raise ConsistencyError(
            f"X is not a solution: ||R(X)|| = {r:.3e} exceeds gate {gate:.3e}",
            residual_norm=r)
    return r


def factor_gram(inst, X):
    """Factor each A_i through the solution X using W = X^{1/2}.

    W is non-unique (any W with W*W = X works); the principal PD square root
    makes the output deterministic.
    """
    X = linalg.hermitian_part(np.asarray(X, dtype=complex))
    _check_near_solution(inst, X)
    W = linalg.principal_sqrt(X)
    Xinvh = linalg.frac_power(X, -0.5)
    Y = [linalg.frac_power(X, p / 2.0) @ A @ Xinvh for A, p in inst.terms]
    Z = linalg.principal_sqrt(inst.Q) @ Xinvh
    return GramFactorization(W=W, Y=Y, Z=Z)


def factor_spectral(inst, X):
    """Spectral-form factorization; requires every A_i invertible."""
    X = linalg.hermitian_part(np.asarray(X, dtype=complex))
    n = inst.n
    for k, A in enumerate(inst.matrices):
        s = np.linalg.svd(A, compute_uv=False)
        if s[-1] <= n * linalg.EPS * s[0]:
            raise PreconditionError(
                f"A_{k + 1} is singular (sigma_min = {s[-1]:.3e}); "
                "the spectral factorization requires invertible coefficients")
    _check_near_solution(inst, X)
    dec = linalg.herm_eig(X)
    U = dec.vectors.conj().T          # X = U* M U with M = diag(values)
    M = np.diag(dec.values)
    G = M - U @ inst.Q @ U.conj().T   # equals U (sum A_i* X^{p_i} A_i) U*
    gmin = linalg.lambda_min(G)
    if gmin <= 0:
        raise DefinitenessError("M - U Q U* is not positive definite", lambda_min=gmin)
    N = linalg.principal_sqrt(linalg.hermitian_part(G))
    Ninv = linalg.frac_power(linalg.hermitian_part(G), -0.5)
    V = [linalg.frac_power(X, p / 2.0) @ A @ U.conj().T @ Ninv for A, p in inst.terms]
    return SpectralFactorization(U=U, M=M, N=N, V=V)


def _reconstruct_gram(inst, fact):
    X = linalg.hermitian_part(fact.W.conj().T @ fact.W)
    rebuilt = []
    for (_, p), Yi in zip(inst.terms, fact.Y):
        rebuilt.append(linalg.frac_power(X, -p / 2.0) @ Yi @ linalg.frac_power(X, 0.5))
    return X, rebuilt


def _reconstruct_spectral(inst, fact):
    X = linalg.hermitian_part(fact.U.conj().T @ fact.M @ fact.U)
    rebuilt = []
    for (_, p), Vi in zip(inst.terms, fact.V):
        rebuilt.append(linalg.frac_power(X, -p / 2.0) @ Vi @ fact.N @ fact.U)
    return X, rebuilt


def verify_factorization(inst, fact):
    """Round-trip check: rebuild A_i and X from the factors and substitute.

    The coefficients rebuilt from the factors are substituted into the
    equation, so a corrupted factor shows up both in the orthonormality
    defect and in the equation defect. Report-only; never raises on a bad
    factorization.
    """
    if isinstance(fact, GramFactorization):
        X, rebuilt = _reconstruct_gram(inst, fact)
    elif isinstance(fact, SpectralFactorization):
        X, rebuilt = _reconstruct_spectral(inst, fact)
    else:
        raise TypeError(f"unknown factorization type {type(fact).__name__}")
    S = fact.stack()
    ortho = linalg.fro_norm(S.conj().T @ S - np.eye(inst.n))
    recon = [linalg.spectral_norm(Ai - A) for Ai, A in zip(rebuilt, inst.matrices)]
    eq = X - inst.Q
    for Ai, (_, p) in zip(rebuilt, inst.terms):
        eq = eq - Ai.conj().T @ linalg.frac_power(X, p) @ Ai
    return VerificationReport(
        equation_defect=linalg.spectral_norm(eq),
        orthonormality_defect=ortho,
        reconstruction_defects=recon,
    )
