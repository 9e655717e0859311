"""Linear-operator machinery on the solution manifold.

Two scalar kernels drive everything, both divided-difference weights on the
spectrum of the solution X = U diag(mu) U*:

* the resolvent-weighted kernel
      kappa_p(a, b) = sqrt(ab) (a^{p-1} - b^{p-1}) / (b - a),
  the closed form of (sin p pi / pi) * int_0^inf lam^{p-1} sqrt(ab) /
  ((lam+a)(lam+b)) dlam, with kappa_p(a, a) = (1-p) a^{p-1}.  It defines the
  bound operator L W = W + sum_i A_i* (kappa table o U*WU-conjugation) A_i
  used by the operator-based perturbation bound.

* the divided-difference kernel of the power function,
      d_p(a, b) = (a^p - b^p) / (a - b),   d_p(a, a) = p a^{p-1},
  the Daleckii-Krein kernel of the Frechet derivative of X -> X^p.  It
  defines the linearization F W = W - sum_i A_i* (d table o ...) A_i of the
  equation map, which feeds first-order estimates and condition numbers.

The kernels coincide exactly at p = 1/2 and differ otherwise.

Matrix representations act on vec W through

    L = I + sum_i (C_i^T (x) C_i*) D_i (U^T (x) U*),   C_i = U* A_i,

with D_i diagonal holding the kernel table in vec order. Spectral-to-spectral
operator norms are NP-hard in general; they are bracketed through the
Frobenius equivalence (sigma/sqrt(n) <= norm <= sqrt(n) sigma) and estimated
by multistart subgradient ascent over the unit spectral ball.
"""
from dataclasses import dataclass, field

import numpy as np

from . import linalg, model
from .errors import PreconditionError

_NEAR = 1e-8


def power_kernel(a, b, p):
    """Resolvent-weighted kernel kappa_p(a, b); symmetric, positive.

    Switches to the analytic limit (1-p) m^{p-1}, m = (a+b)/2, when
    |a - b| <= 1e-8 max(a, b).
    """
    if a <= 0 or b <= 0:
        raise PreconditionError("kernel arguments must be positive")
    if not 0.0 < p < 1.0:
        raise PreconditionError("kernel exponent must lie in (0, 1)")
    if abs(a - b) <= _NEAR * max(a, b):
        return (1.0 - p) * (0.5 * (a + b)) ** (p - 1.0)
    return float(np.sqrt(a * b) * (a ** (p - 1.0) - b ** (p - 1.0)) / (b - a))


def divided_difference_kernel(a, b, p):
    """Daleckii-Krein kernel (a^p - b^p)/(a - b) of the power map t -> t^p."""
    if a <= 0 or b <= 0:
        raise PreconditionError("kernel arguments must be positive")
    if abs(a - b) <= _NEAR * max(a, b):
        return p * (0.5 * (a + b)) ** (p - 1.0)
    return float((a ** p - b ** p) / (a - b))


def power_kernel_quadrature(a, b, p, nodes=120):
    """Numerical evaluation of (sin p pi/pi) int lam^{p-1} sqrt(ab) /
    ((lam+a)(lam+b)) dlam; oracle for power_kernel."""
    if a <= 0 or b <= 0:
        raise PreconditionError("kernel arguments must be positive")
    t, w = linalg._jacobi_rule(p, nodes)
    lam = t / (1.0 - t)
    g = np.sqrt(a * b) / ((lam + a) * (lam + b) * (1.0 - t))
    return float(np.sin(p * np.pi) / np.pi * np.dot(w, g))


def _kernel_table(values, p, kernel):
    n = len(values)
    K = np.empty((n, n))
    for j in range(n):
        for k in range(n):
            K[j, k] = kernel(values[j], values[k], p)
    return K


@dataclass(eq=False)
class OperatorRep:
    """Matrix representations attached to an instance at a solution X.

    L / Linv represent the bound operator; frechet / frechet_inv the
    linearization of the equation map. kernel_tables and frechet_tables hold
    the per-term n x n kernel values kappa_p(mu_j, mu_k) and d_p(mu_j, mu_k).
    """

    inst: object
    X: np.ndarray
    eig_basis: linalg.EigenDecomposition
    L: np.ndarray
    Linv: np.ndarray
    frechet: np.ndarray
    frechet_inv: np.ndarray
    kernel_tables: list
    frechet_tables: list
    B: list                      # B_i = X^{p_i} A_i
    cond_L: float
    ill_conditioned: bool
    sigma_min_L: float
    _perm: np.ndarray = field(default=None, repr=False)

    @property
    def n(self):
        return self.X.shape[0]

    def perm(self):
        if self._perm is None:
            self._perm = linalg.vec_perm(self.n)
        return self._perm

    def apply(self, W):
        n = self.n
        return linalg.unvec(self.L @ linalg.vec(np.asarray(W, dtype=complex)), n)

    def apply_inverse(self, W):
        n = self.n
        return linalg.unvec(self.Linv @ linalg.vec(np.asarray(W, dtype=complex)), n)

    def apply_frechet_inverse(self, W):
        n = self.n
        return linalg.unvec(self.frechet_inv @ linalg.vec(np.asarray(W, dtype=complex)), n)


def build_operator(inst, X):
    """Assemble both operator representations at X (normally a solution).

    A condition estimate above 1e12 sets ill_conditioned; the inverse is
    still produced.
    """
    if not inst.analysis_ready:
        raise PreconditionError("operator analysis requires exponents in (0, 1)")
    X = linalg.hermitian_part(np.asarray(X, dtype=complex))
    dec = linalg.herm_eig(X)
    if dec.values[0] <= 0:
        raise PreconditionError("X must be positive definite")
    n = inst.n
    U = dec.vectors
    UkU = linalg.kron(U.T, U.conj().T)          # vec W -> vec(U* W U)
    I2 = np.eye(n * n, dtype=complex)
    L = I2.copy()
    F = I2.copy()
    ktabs, ftabs, Bs = [], [], []
    for A, p in inst.terms:
        C = U.conj().T @ A
        K = _kernel_table(dec.values, p, power_kernel)
        D = _kernel_table(dec.values, p, divided_difference_kernel)
        ktabs.append(K)
        ftabs.append(D)
        sandwich = linalg.kron(C.T, C.conj().T)
        # diag entry at vec position of (row j, col k) is table[j, k]
        L += sandwich @ np.diag(linalg.vec(K)) @ UkU
        F -= sandwich @ np.diag(linalg.vec(D)) @ UkU
        Bs.append(linalg.frac_power(X, p, eig=dec) @ A)
    sv = np.linalg.svd(L, compute_uv=False)
    condL = float(sv[0] / sv[-1]) if sv[-1] > 0 else np.inf
    Linv = np.linalg.solve(L, I2)
    Finv = np.linalg.solve(F, I2)
    return OperatorRep(inst=inst, X=X, eig_basis=dec, L=L, Linv=Linv,
                       frechet=F, frechet_inv=Finv, kernel_tables=ktabs,
                       frechet_tables=ftabs, B=Bs, cond_L=condL,
                       ill_conditioned=bool(condL > 1e12),
                       sigma_min_L=float(sv[-1]))


def build_operator_quadrature(inst, X, nodes=120):
    """Direct quadrature of the bound operator's defining integral.

    Oracle for the closed-form assembly in build_operator: returns the
    n^2 x n^2 matrix I + sum_i (sin p_i pi/pi) int [G_i(lam)]^T (x)
    [G_i(lam)]* lam^{p_i-1} dlam with G_i(lam) = (lam I + X)^{-1} X^{1/2} A_i.
    """
    X = linalg.hermitian_part(np.asarray(X, dtype=complex))
    n = inst.n
    S = linalg.principal_sqrt(X)
    I = np.eye(n)
    L = np.eye(n * n, dtype=complex)
    for A, p in inst.terms:
        t, w = linalg._jacobi_rule(p, nodes)
        acc = np.zeros((n * n, n * n), dtype=complex)
        for tj, wj in zip(t, w):
            lam = tj / (1.0 - tj)
            G = np.linalg.solve(lam * I + X, S @ A)
            acc += (wj / (1.0 - tj)) * linalg.kron(G.T, G.conj().T)
        L += np.sin(p * np.pi) / np.pi * acc
    return L


def invertibility_margin(inst):
    """1 - sum_i ||A_i||^2 / beta^{1-p_i}; positive certifies invertibility
    of the bound operator (and of the linearization)."""
    if not inst.analysis_ready:
        raise PreconditionError("margin requires exponents in (0, 1)")
    beta = model.beta_lower_bound(inst)
    return float(1.0 - sum(linalg.spectral_norm(A) ** 2 / beta ** (1.0 - p)
                           for A, p in inst.terms))


# ---------------------------------------------------------------------------
# real-linear representations and operator norms
# ---------------------------------------------------------------------------

def real_pair_rep(M_linear, M_antilinear):
    """Real 2k x 2k representation of v -> M_linear v + M_antilinear conj(v)
    acting on stacked (Re v, Im v)."""
    A1 = M_linear.real + M_antilinear.real
    B1 = -M_linear.imag + M_antilinear.imag
    A2 = M_linear.imag + M_antilinear.imag
    B2 = M_linear.real - M_antilinear.real
    return np.block([[A1, B1], [A2, B2]])


def pair_map_rep(Linv, B, perm):
    """Real representation of Z -> unvec(Linv vec(B* Z + Z* B)).

    vec(B* Z) = (I (x) B*) vec Z and vec(Z* B) = (B^T (x) I) Pi conj(vec Z),
    so the map is linear in vec Z plus antilinear through the conjugation.
    """
    n = B.shape[0]
    M1 = Linv @ linalg.kron(np.eye(n), B.conj().T)
    M2 = Linv @ linalg.kron(B.T, np.eye(n)) @ perm
    return real_pair_rep(M1, M2)


def p_map_rep(rep, i, which="bound"):
    """Real representation of Z -> Op^{-1}(B_i* Z + Z* B_i)."""
    inv = rep.Linv if which == "bound" else rep.frechet_inv
    return pair_map_rep(inv, rep.B[i], rep.perm())


def apply_p_map(rep, i, Z, which="bound"):
    """Direct evaluation Op^{-1}(B_i* Z + Z* B_i); oracle for p_map_rep."""
    B = rep.B[i]
    W = B.conj().T @ Z + Z.conj().T @ B
    return rep.apply_inverse(W) if which == "bound" else rep.apply_frechet_inverse(W)


def apply_real_rep(R, Z):
    """Apply a real pair representation to a complex matrix argument."""
    n = int(round(np.sqrt(R.shape[0] // 2)))
    v = linalg.vec(np.asarray(Z, dtype=complex))
    g = np.concatenate([v.real, v.imag])
    out = R @ g
    return linalg.unvec(out[:n * n] + 1j * out[n * n:], n)


@dataclass
class NormEstimate:
    """Bracketed spectral-to-spectral operator norm.

    lower <= estimate <= upper always; estimate is the best value achieved
    by the multistart ascent (a certified lower bound), upper comes from the
    Frobenius/spectral equivalence. Downstream bound formulas consume
    `bound`, the conservative endpoint in rigorous mode.
    """

    lower: float
    upper: float
    estimate: float
    mode: str
    samples: int

    @property
    def bound(self):
        return self.upper if self.mode == "rigorous" else self.estimate


def _herm_sign_vertex(G):
    w, V = np.linalg.eigh(linalg.hermitian_part(G))
    s = np.where(w >= 0, 1.0, -1.0)
    return V @ np.diag(s) @ V.conj().T


def _unitary_vertex(G):
    P, _, Qh = np.linalg.svd(G)
    return P @ Qh


def op_norm(T, domain="hermitian", mode="estimate", starts=None, iters=100,
            seed=0, gain_tol=1e-6):
    """Estimate sup ||T(W)||_2 over the unit spectral ball of the domain.

    domain "hermitian": T is the complex n^2 x n^2 matrix of a map H -> H
    acting on vec W. domain "general-complex": T is the real 2n^2 x 2n^2
    pair representation of a map C^{n x n} -> H acting on (Re vec, Im vec).

    The extreme points of the spectral ball (Hermitian sign matrices,
    respectively unitaries) are hopped by subgradient ascent; each start is
    driven by its own substream of the master seed. The sigma_max witness of
    the representation is always included as a start.
    """
    if starts is None:
        starts = 64 if mode == "estimate" else 8
    if domain == "hermitian":
        n = int(round(np.sqrt(T.shape[0])))

        def apply(W):
            return linalg.unvec(T @ linalg.vec(W), n)

        def adjoint_gradient(W, u, sgn):
            g = T.conj().T @ linalg.vec(sgn * np.outer(u, u.conj()))
            return _herm_sign_vertex(linalg.unvec(g, n))

        def random_start(rng):
            G = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
            return _herm_sign_vertex(G)

        _, svals, Vh = np.linalg.svd(T)
        witness = _herm_sign_vertex(linalg.unvec(Vh[0].conj(), n))
        sigma = float(svals[0])
    elif domain == "general-complex":
        n = int(round(np.sqrt(T.shape[0] // 2)))

        def apply(Z):
            return apply_real_rep(T, Z)

        def adjoint_gradient(Z, u, sgn):
            a = linalg.vec(sgn * np.outer(u, u.conj()))
            g = T.T @ np.concatenate([a.real, a.imag])
            return _unitary_vertex(linalg.unvec(g[:n * n] + 1j * g[n * n:], n))

        def random_start(rng):
            return _unitary_vertex(rng.standard_normal((n, n))
                                   + 1j * rng.standard_normal((n, n)))

        _, svals, Vh = np.linalg.svd(T)
        g0 = Vh[0]
        witness = _unitary_vertex(linalg.unvec(g0[:n * n] + 1j * g0[n * n:], n))
        sigma = float(svals[0])
    else:
        raise ValueError(f"unknown domain {domain!r}")

    def objective(W):
        Y = linalg.hermitian_part(apply(W))
        w, V = np.linalg.eigh(Y)
        k = int(np.argmax(np.abs(w)))
        return abs(float(w[k])), V[:, k], (1.0 if w[k] >= 0 else -1.0)

    best = 0.0
    points = [witness] + [random_start(np.random.default_rng([seed, k]))
                          for k in range(starts)]
    for W in points:
        nw = linalg.spectral_norm(W)
        if nw == 0:
            continue
        W = W / nw
        val, u, sgn = objective(W)
        for _ in range(iters):
            W2 = adjoint_gradient(W, u, sgn)
            v2, u2, s2 = objective(W2)
            if v2 <= val * (1.0 + gain_tol):
                val = max(val, v2)
                break
            W, val, u, sgn = W2, v2, u2, s2
        best = max(best, val)

    rootn = np.sqrt(n)
    lower = max(best, sigma / rootn)
    return NormEstimate(lower=lower, upper=sigma * rootn,
                        estimate=lower, mode=mode, samples=starts)
