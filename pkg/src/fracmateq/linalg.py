"""Dense complex Hermitian primitives.

Eigendecomposition with a deterministic phase convention, fractional matrix
powers (spectral form and two quadrature forms used as oracles), Kronecker /
vec machinery with the column-stacking convention vec A = (a_1^T,...,a_n^T)^T,
and scale-aware definiteness tests.
"""
from dataclasses import dataclass

import numpy as np
from scipy.special import roots_jacobi

from .errors import AccuracyError, ConvergenceError, DefinitenessError, PreconditionError

EPS = float(np.finfo(float).eps)


def hermitian_part(M):
    """Return (M + M*)/2."""
    M = np.asarray(M)
    return 0.5 * (M + M.conj().T)


def hermitian_deviation(M):
    """Frobenius distance of M from its Hermitian part."""
    M = np.asarray(M)
    return float(np.linalg.norm(M - hermitian_part(M)))


def spectral_norm(A):
    """Largest singular value."""
    return float(np.linalg.norm(np.asarray(A), 2))


def fro_norm(A):
    return float(np.linalg.norm(np.asarray(A)))


def lambda_min(H):
    return float(np.linalg.eigvalsh(hermitian_part(H))[0])


def lambda_max(H):
    return float(np.linalg.eigvalsh(hermitian_part(H))[-1])


def is_pd(H):
    """Scale-aware positive definiteness: lambda_min > n*eps*max(1, lambda_max)."""
    H = np.asarray(H)
    w = np.linalg.eigvalsh(hermitian_part(H))
    n = H.shape[0]
    return bool(w[0] > n * EPS * max(1.0, float(w[-1])))


@dataclass
class EigenDecomposition:
    """Hermitian eigendecomposition M = U diag(values) U*.

    values are ascending; each eigenvector's largest-magnitude component is
    made real positive so the decomposition is deterministic.
    """

    vectors: np.ndarray
    values: np.ndarray

    @property
    def U(self):
        return self.vectors

    def reconstruct(self):
        return self.vectors @ np.diag(self.values) @ self.vectors.conj().T


def herm_eig(M):
    """Eigendecomposition of a Hermitian matrix with fixed sort and phase.

    Raises ConvergenceError if the underlying eigensolver fails, and
    ValueError for non-finite input.
    """
    M = np.asarray(M, dtype=complex)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"square matrix required, got shape {M.shape}")
    if not np.all(np.isfinite(M)):
        raise ValueError("matrix entries must be finite")
    H = hermitian_part(M)
    try:
        w, U = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:  # pragma: no cover - LAPACK rarely fails
        raise ConvergenceError(f"eigendecomposition did not converge: {exc}") from exc
    U = U.copy()
    for k in range(U.shape[1]):
        col = U[:, k]
        i = int(np.argmax(np.abs(col)))
        a = col[i]
        if a != 0:
            U[:, k] = col * (abs(a) / a)
    return EigenDecomposition(vectors=U, values=w.astype(float))


def frac_power(M, p, eig=None):
    """Fractional power of a Hermitian positive definite matrix.

    Computed spectrally as U diag(mu_j**p) U*. Any real exponent is accepted
    (negative powers are well defined on the PD cone); the input must be PD.
    """
    dec = eig if eig is not None else herm_eig(M)
    w = dec.values
    n = len(w)
    if w[0] <= n * EPS * max(1.0, float(w[-1])):
        raise DefinitenessError("fractional power requires a positive definite matrix",
                                lambda_min=float(w[0]))
    P = dec.vectors @ np.diag(w.astype(float) ** p) @ dec.vectors.conj().T
    return hermitian_part(P)


def principal_sqrt(M):
    """Principal square root of a PD Hermitian matrix."""
    return frac_power(M, 0.5)


def _jacobi_rule(q, nodes):
    # Gauss-Jacobi rule absorbing the t^{q-1}(1-t)^{-q} weight that appears
    # after substituting lambda = t/(1-t) in integrals against lambda^{q-1}.
    x, w = roots_jacobi(nodes, -q, q - 1.0)
    t = 0.5 * (x + 1.0)
    return t, w


def frac_power_quadrature(M, q, form="i", nodes=64, rtol=None):
    """Fractional power M**q via numerical integration, with error estimate.

    Two integral forms are supported; both map (0, inf) to (0, 1) through
    lambda = t/(1-t) and absorb the lambda^{q-1} endpoint singularity into a
    Gauss-Jacobi weight, so the remaining integrand is smooth.

      form "i":  M^q = (sin q pi / pi) * int S (lam I + M)^-1 S lam^{q-1} dlam
      form "ii": M^q = (sin q pi / ((1-q) pi))
                         * int S (lam I + M)^-1 M (lam I + M)^-1 S lam^{q-1} dlam

    with S = M^{1/2}. The quadrature error is estimated by node doubling;
    if rtol is given and the estimate exceeds rtol*max(1, ||result||_F),
    AccuracyError is raised.

    Returns (value, error_estimate).
    """
    if not 0.0 < q < 1.0:
        raise PreconditionError(f"exponent must lie in (0, 1), got {q}")
    if nodes < 16:
        raise PreconditionError(f"at least 16 nodes required, got {nodes}")
    if form not in ("i", "ii"):
        raise ValueError(f"form must be 'i' or 'ii', got {form!r}")

    M = np.asarray(M, dtype=complex)
    n = M.shape[0]
    S = frac_power(M, 0.5)
    I = np.eye(n)

    def evaluate(k):
        t, w = _jacobi_rule(q, k)
        acc = np.zeros((n, n), dtype=complex)
        for tj, wj in zip(t, w):
            lam = tj / (1.0 - tj)
            R = np.linalg.solve(lam * I + M, S)  # (lam I + M)^-1 S
            if form == "i":
                F = S @ R
            else:
                F = S @ np.linalg.solve(lam * I + M, M @ R)
            acc += (wj / (1.0 - tj)) * F
        scale = np.sin(q * np.pi) / np.pi
        if form == "ii":
            scale /= (1.0 - q)
        return hermitian_part(scale * acc)

    coarse = evaluate(nodes)
    fine = evaluate(2 * nodes)
    err = float(np.linalg.norm(fine - coarse))
    if rtol is not None and err > rtol * max(1.0, float(np.linalg.norm(fine))):
        raise AccuracyError("quadrature error estimate above requested tolerance",
                            estimate=err, requested=rtol)
    return fine, err


def kron(A, B):
    """Kronecker product A (x) B = (a_ij B)."""
    return np.kron(np.asarray(A), np.asarray(B))


def vec(A):
    """Column-stacking vec: vec A = (a_1^T, ..., a_n^T)^T for columns a_j."""
    return np.asarray(A).reshape(-1, order="F")


def unvec(v, n, m=None):
    """Inverse of vec for an n x m matrix (square by default)."""
    m = n if m is None else m
    return np.asarray(v).reshape((n, m), order="F")


def vec_perm(n):
    """Permutation matrix Pi with Pi vec A = vec A^T; Pi is symmetric, Pi^2 = I."""
    if n < 1:
        raise ValueError("n must be >= 1")
    P = np.zeros((n * n, n * n))
    for r in range(n):
        for c in range(n):
            P[c * n + r, r * n + c] = 1.0
    return P
