"""Condition numbers of the PD solution under weighted Frobenius norms.

Following Rice's framework, the condition number is the limiting worst-case
ratio of solution change to data change,

    c(X) = lim_{d->0} sup_{||(dA_1/eta_1, ..., dA_m/eta_m, dQ/rho)||_F <= d}
           ||dX||_F / (xi d),

with weights (xi, eta_i, rho) = (1, ..., 1) for the absolute number and
(||X||_F, ||A_i||_F, ||Q||_F) for the relative one. To first order the
solution change is dX = F^{-1}(dQ + sum_i (B_i* dA_i + dA_i* B_i)) with F
the linearization of the equation map at X and B_i = X^{p_i} A_i, which
turns the sup into the largest singular value of an assembled real block
row. Splitting real and imaginary parts (vec H = x + iy, vec E_i = a_i +
i b_i, unknown vector g = (x, y, a_1, b_1, ...)),

    F^{-1} = S + i Sig,
    F^{-1}(I (x) B_i*)        = U_i1 + i Om_i1,
    F^{-1}(B_i^T (x) I) Pi    = U_i2 + i Om_i2,
    S_c = [[S, -Sig], [Sig, S]],
    U_i = [[U_i1 + U_i2, Om_i2 - Om_i1], [Om_i1 + Om_i2, U_i1 - U_i2]],

and c(X) = sigma_max([rho S_c, eta_1 U_1, ..., eta_m U_m]) / xi. For real
data the representation collapses to S_r = F^{-1} on R^{n^2} with
U_i = S_r [I (x) (A_i^T X^{p_i}) + ((A_i^T X^{p_i}) (x) I) Pi].

A sampling sup-oracle evaluates the defining ratio directly over random
perturbation directions with projected power-iteration refinement; it can
only ever fall below the block-row value because the assembled sigma_max
relaxes the Hermitian constraint on dQ.
"""
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import PreconditionError


@dataclass(eq=False)
class ConditionReport:
    mode: str                  # "absolute" | "relative" | "custom"
    field_kind: str            # "complex" | "real"
    value: float
    scalars: dict = field(default_factory=dict)
    blocks: dict = field(default_factory=dict)


def _weights(inst, X, mode):
    if mode == "absolute":
        return 1.0, [1.0] * inst.m, 1.0
    if mode == "relative":
        return (linalg.fro_norm(X), [linalg.fro_norm(A) for A in inst.matrices],
                linalg.fro_norm(inst.Q))
    if isinstance(mode, tuple) and len(mode) == 3:
        xi, etas, rho = mode
        return float(xi), [float(e) for e in etas], float(rho)
    raise ValueError(f"mode must be 'absolute', 'relative' or (xi, etas, rho); got {mode!r}")


def _complex_blocks(rep):
    T = rep.frechet_inv
    n = rep.n
    Pi = rep.perm()
    S, Sig = T.real, T.imag
    Sc = np.block([[S, -Sig], [Sig, S]])
    Us = []
    for B in rep.B:
        M1 = T @ linalg.kron(np.eye(n), B.conj().T)
        M2 = T @ linalg.kron(B.T, np.eye(n)) @ Pi
        U1, O1 = M1.real, M1.imag
        U2, O2 = M2.real, M2.imag
        Us.append(np.block([[U1 + U2, O2 - O1], [O1 + O2, U1 - U2]]))
    return Sc, Us


def _real_blocks(rep):
    T = rep.frechet_inv
    if np.max(np.abs(T.imag)) > 1e-12 * max(1.0, np.max(np.abs(T.real))):
        raise PreconditionError("real-case condition number requires real data")
    n = rep.n
    Pi = rep.perm()
    Sr = T.real
    Us = []
    for B in rep.B:
        Bt = B.real.T         # equals A^T X^p for real data
        Us.append(Sr @ (linalg.kron(np.eye(n), Bt) + linalg.kron(Bt, np.eye(n)) @ Pi))
    return Sr, Us


def cond_complex(inst, X, rep, mode="relative"):
    """Condition number for complex data via the assembled block row."""
    xi, etas, rho = _weights(inst, X, mode)
    Sc, Us = _complex_blocks(rep)
    row = np.hstack([rho * Sc] + [e * U for e, U in zip(etas, Us)])
    value = float(np.linalg.svd(row, compute_uv=False)[0]) / xi
    return ConditionReport(mode=mode if isinstance(mode, str) else "custom",
                           field_kind="complex", value=value,
                           scalars={"xi": xi, "eta": etas, "rho": rho},
                           blocks={"S_c": Sc, "U": Us})


def cond_real(inst, X, rep, mode="relative"):
    """Condition number when all data (and hence X) are real."""
    if (np.max(np.abs(np.asarray(X).imag)) > 1e-12
            or any(np.max(np.abs(A.imag)) > 1e-12 for A in inst.matrices)
            or np.max(np.abs(inst.Q.imag)) > 1e-12):
        raise PreconditionError("real-case condition number requires real data")
    xi, etas, rho = _weights(inst, X, mode)
    Sr, Us = _real_blocks(rep)
    row = np.hstack([rho * Sr] + [e * U for e, U in zip(etas, Us)])
    value = float(np.linalg.svd(row, compute_uv=False)[0]) / xi
    return ConditionReport(mode=mode if isinstance(mode, str) else "custom",
                           field_kind="real", value=value,
                           scalars={"xi": xi, "eta": etas, "rho": rho},
                           blocks={"S_r": Sr, "U": Us})


def _hermitian_projector_apply(g, n, m):
    """Project the dQ component of g onto Hermitian matrices in place."""
    H = linalg.unvec(g[:n * n] + 1j * g[n * n:2 * n * n], n)
    H = linalg.hermitian_part(H)
    out = g.copy()
    out[:n * n] = linalg.vec(H).real
    out[n * n:2 * n * n] = linalg.vec(H).imag
    return out


def cond_sup_oracle(inst, X, rep, mode="relative", field_kind="complex",
                    samples=200, refine=60, seed=0):
    """Sampled lower bound on the defining sup of the condition number.

    Random Hermitian dQ directions and complex (or real) dA_i directions
    seed a projected power iteration on the assembled block row, keeping the
    dQ component inside the Hermitian subspace. The result can never exceed
    the closed-form value, which maximizes over the unconstrained row.
    """
    xi, etas, rho = _weights(inst, X, mode)
    n, m = rep.n, inst.m
    if field_kind == "complex":
        Sc, Us = _complex_blocks(rep)
        row = np.hstack([rho * Sc] + [e * U for e, U in zip(etas, Us)])

        def project(g):
            return _hermitian_projector_apply(g, n, m)
    else:
        Sr, Us = _real_blocks(rep)
        row = np.hstack([rho * Sr] + [e * U for e, U in zip(etas, Us)])

        def project(g):
            H = linalg.unvec(g[:n * n], n)
            out = g.copy()
            out[:n * n] = linalg.vec(0.5 * (H + H.T))
            return out

    rng = np.random.default_rng(seed)
    dim = row.shape[1]
    gram = row.T @ row
    best = 0.0
    n_starts = max(1, samples // max(1, refine))
    for _ in range(n_starts):
        g = project(rng.standard_normal(dim))
        ng = np.linalg.norm(g)
        if ng == 0:
            continue
        g = g / ng
        for _ in range(refine):
            g2 = project(gram @ g)
            n2 = np.linalg.norm(g2)
            if n2 == 0:
                break
            g = g2 / n2
        val = np.linalg.norm(row @ g) / np.linalg.norm(g)
        best = max(best, float(val))
    # plain random sampling on top of the refined starts
    for _ in range(samples):
        g = project(rng.standard_normal(dim))
        ng = np.linalg.norm(g)
        if ng > 0:
            best = max(best, float(np.linalg.norm(row @ g) / ng))
    return best / xi
