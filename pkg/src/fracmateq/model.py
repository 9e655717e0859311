"""Problem definition, validation, residuals, and the spectral floor beta.

An instance is the tuple (m, n, {A_i, p_i}, Q) of the matrix equation

    X - sum_i A_i* X^{p_i} A_i = Q,    Q Hermitian positive definite.

Instances are treated as immutable once constructed. The full analysis suite
(perturbation bounds, condition numbers) applies when every exponent lies in
(0, 1); existence machinery alone needs p_i > 0.
"""
from dataclasses import dataclass, field

import numpy as np

from . import linalg
from .errors import DefinitenessError, PreconditionError, ValidationError


class ProblemInstance:
    """Equation data. Q is symmetrized on construction; the deviation of the
    raw input from its Hermitian part is recorded in q_deviation."""

    def __init__(self, terms, Q, symmetrize_q=False):
        Q = np.asarray(Q, dtype=complex)
        if Q.ndim != 2 or Q.shape[0] != Q.shape[1]:
            raise ValidationError([f"Q must be square, got shape {Q.shape}"])
        n = Q.shape[0]
        norm_terms = []
        issues = []
        for k, (A, p) in enumerate(terms):
            A = np.asarray(A, dtype=complex)
            if A.shape != (n, n):
                issues.append(f"A_{k + 1} has shape {A.shape}, expected {(n, n)}")
            if not np.all(np.isfinite(A)):
                issues.append(f"A_{k + 1} has non-finite entries")
            norm_terms.append((A, float(p)))
        if not norm_terms:
            issues.append("at least one coefficient term is required")
        if not np.all(np.isfinite(Q)):
            issues.append("Q has non-finite entries")
        if issues:
            raise ValidationError(issues)

        dev = linalg.hermitian_deviation(Q)
        if dev > 1e-8 * max(1.0, linalg.fro_norm(Q)) and not symmetrize_q:
            raise ValidationError(
                [f"Q is not Hermitian (deviation {dev:.3e}); "
                 "pass symmetrize_q=True to accept (Q + Q*)/2"])
        self.terms = tuple(norm_terms)
        self.Q = linalg.hermitian_part(Q)
        self.q_deviation = dev

    @property
    def n(self):
        return self.Q.shape[0]

    @property
    def m(self):
        return len(self.terms)

    @property
    def exponents(self):
        return tuple(p for _, p in self.terms)

    @property
    def matrices(self):
        return tuple(A for A, _ in self.terms)

    @property
    def analysis_ready(self):
        """True when every exponent lies strictly in (0, 1)."""
        return all(0.0 < p < 1.0 for p in self.exponents)

    def coefficient_norms(self):
        return [linalg.spectral_norm(A) for A in self.matrices]

    def __repr__(self):
        return (f"ProblemInstance(n={self.n}, m={self.m}, "
                f"exponents={tuple(round(p, 6) for p in self.exponents)})")


@dataclass(eq=False)
class Perturbation:
    """Perturbation (dA_1, ..., dA_m, dQ) of an instance. dQ is Hermitian."""

    dA: list
    dQ: np.ndarray

    def __post_init__(self):
        self.dA = [np.asarray(d, dtype=complex) for d in self.dA]
        self.dQ = np.asarray(self.dQ, dtype=complex)
        if linalg.hermitian_deviation(self.dQ) > 1e-10 * max(1.0, linalg.fro_norm(self.dQ)):
            raise ValidationError(["dQ must be Hermitian"])
        self.dQ = linalg.hermitian_part(self.dQ)

    def matching(self, inst):
        n = inst.n
        return (len(self.dA) == inst.m and self.dQ.shape == (n, n)
                and all(d.shape == (n, n) for d in self.dA))

    def da_norms(self):
        return [linalg.spectral_norm(d) for d in self.dA]

    def dq_norm(self):
        return linalg.spectral_norm(self.dQ)

    @staticmethod
    def zero(inst):
        n = inst.n
        return Perturbation(dA=[np.zeros((n, n), dtype=complex) for _ in range(inst.m)],
                            dQ=np.zeros((n, n), dtype=complex))


@dataclass
class ValidationReport:
    valid: bool
    analysis_ready: bool
    q_positive_definite: bool
    q_lambda_min: float
    exponents_positive: bool
    shapes_consistent: bool
    issues: list = field(default_factory=list)


def validate_instance(inst):
    """Itemized validation; reports which analyses the instance supports."""
    issues = []
    q_min = linalg.lambda_min(inst.Q)
    q_pd = linalg.is_pd(inst.Q)
    if not q_pd:
        issues.append(f"Q is not positive definite (lambda_min = {q_min:.3e})")
    exps_pos = all(p > 0 for p in inst.exponents)
    if not exps_pos:
        bad = [p for p in inst.exponents if p <= 0]
        issues.append(f"exponents must be positive, got {bad}")
    shapes_ok = all(A.shape == (inst.n, inst.n) for A in inst.matrices)
    if not shapes_ok:
        issues.append("coefficient shape mismatch")
    analysis = inst.analysis_ready and q_pd and shapes_ok
    return ValidationReport(
        valid=q_pd and exps_pos and shapes_ok,
        analysis_ready=analysis,
        q_positive_definite=q_pd,
        q_lambda_min=q_min,
        exponents_positive=exps_pos,
        shapes_consistent=shapes_ok,
        issues=issues,
    )


def perturbed(inst, pert):
    """The instance with coefficients A_i + dA_i and right side Q + dQ."""
    if not pert.matching(inst):
        raise ValidationError(["perturbation shapes do not match the instance"])
    terms = [(A + d, p) for (A, p), d in zip(inst.terms, pert.dA)]
    return ProblemInstance(terms, inst.Q + pert.dQ)


def residual(inst, Xt):
    """R(Xt) = Q + sum_i A_i* Xt^{p_i} A_i - Xt, Hermitian by construction."""
    Xt = np.asarray(Xt, dtype=complex)
    dec = linalg.herm_eig(Xt)
    if dec.values[0] <= 0:
        raise DefinitenessError("residual requires a positive definite argument",
                                lambda_min=float(dec.values[0]))
    R = inst.Q - Xt
    for A, p in inst.terms:
        R = R + A.conj().T @ linalg.frac_power(Xt, p, eig=dec) @ A
    return linalg.hermitian_part(R)


def residual_norm(inst, Xt, norm="spectral"):
    R = residual(inst, Xt)
    return linalg.spectral_norm(R) if norm == "spectral" else linalg.fro_norm(R)


def beta_lower_bound(inst):
    """Certified spectral floor of the solution:

        beta = lambda_min(Q) + sum_i lambda_min(A_i* A_i) lambda_min(Q)^{p_i}.

    Any solution X satisfies X >= beta I; beta >= lambda_min(Q) > 0.
    """
    if not inst.analysis_ready:
        raise PreconditionError("beta requires all exponents in (0, 1)")
    qmin = linalg.lambda_min(inst.Q)
    if qmin <= 0:
        raise DefinitenessError("Q must be positive definite", lambda_min=qmin)
    beta = qmin
    for A, p in inst.terms:
        beta += linalg.lambda_min(A.conj().T @ A) * qmin ** p
    return float(beta)
