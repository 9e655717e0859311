"""Perturbation bounds and backward error for the PD solution.

Three bounds are provided:

* a solution-free relative bound xi_1 computed purely from the data norms
  and the spectral floor beta (no solve required);
* a sharper operator-based absolute bound nu that consumes norm estimates of
  the inverse bound operator and of the coefficient pair maps;
* a residual-based backward error mu ||R(Xt)|| for an approximate solution.

Condition failures make a report inapplicable instead of raising, so
parameter sweeps can tabulate condition margins.
"""
from dataclasses import dataclass, field

import numpy as np

from . import linalg, model, operators
from .errors import DefinitenessError, PreconditionError


@dataclass
class BoundReport:
    method: str
    value: float
    applicable: bool
    conditions: dict = field(default_factory=dict)
    intermediates: dict = field(default_factory=dict)


@dataclass
class BackwardErrorReport:
    residual_norm: float
    Sigma: float
    theta1: float
    mu: float
    bound: float
    applicable: bool


@dataclass(eq=False)
class FirstOrderReport:
    dX: np.ndarray
    bound: float
    l: float
    n_is: list


def solution_free_bound(inst, da_norms, dq_norm=0.0):
    """Relative bound ||Xt - X|| / ||X|| <= xi_1 from perturbation norms only.

    With beta the spectral floor,
        s = sum_i beta^{p_i} ||dA_i|| (2||A_i|| + ||dA_i||),
        b = beta + ||dQ|| - sum_i (1-p_i) beta^{p_i} ||A_i||^2,
    the bound applies when 0 < b < 2(beta - s) and
    b^2 - 4(beta - s)(s + ||dQ||) >= 0, and then

        xi_1 = 2 (s + ||dQ||) / (b + sqrt(b^2 - 4(beta-s)(s+||dQ||))).

    This combined form avoids the 0/0 in the split coefficients when all
    ||dA_i|| vanish; the split coefficients rho (per unit sum ||dA_i||) and
    omega (per unit ||dQ||) are reported when sum ||dA_i|| > 0.
    """
    if not inst.analysis_ready:
        raise PreconditionError("bound requires exponents in (0, 1)")
    if len(da_norms) != inst.m:
        raise PreconditionError(f"expected {inst.m} coefficient perturbation norms")
    beta = model.beta_lower_bound(inst)
    Anorms = inst.coefficient_norms()
    ps = inst.exponents
    s = sum(beta ** p * da * (2.0 * a + da)
            for p, a, da in zip(ps, Anorms, da_norms))
    b = beta + dq_norm - sum((1.0 - p) * beta ** p * a * a
                             for p, a in zip(ps, Anorms))
    con1 = 2.0 * (beta - s) - b
    con2 = b
    con3 = b * b - 4.0 * (beta - s) * (s + dq_norm)
    applicable = con1 > 0.0 and con2 > 0.0 and con3 >= 0.0
    inter = {"beta": beta, "s": s, "b": b}
    if applicable:
        denom = b + np.sqrt(con3)
        xi1 = 2.0 * (s + dq_norm) / denom
        if sum(da_norms) > 0.0:
            inter["rho"] = 2.0 * s / (sum(da_norms) * denom)
            inter["omega"] = 2.0 / denom
    else:
        xi1 = np.nan
    return BoundReport(method="solution-free", value=float(xi1),
                       applicable=applicable,
                       conditions={"con1": con1, "con2": con2, "con3": con3},
                       intermediates=inter)


def operator_bound(inst, X, rep, da_norms, dq_norm=0.0, norm_mode="rigorous",
                   seed=0, starts=None):
    """Absolute bound ||Xt - X|| <= nu from operator-norm estimates.

    Consumes l = ||Linv||^{-1}, zeta = ||X^{-1}||, xi_i = ||X^{p_i}|| and the
    pair-map norms n_i. In rigorous mode the conservative bracket endpoints
    of the operator norms are used, keeping nu a certified bound; estimate
    mode uses the best multistart estimates. The relative version nu/||X||
    is reported as intermediate "xi2".
    """
    if len(da_norms) != inst.m:
        raise PreconditionError(f"expected {inst.m} coefficient perturbation norms")
    X = linalg.hermitian_part(np.asarray(X, dtype=complex))
    linv_est = operators.op_norm(rep.Linv, "hermitian", mode=norm_mode,
                                 seed=seed, starts=starts)
    l = 1.0 / linv_est.bound
    lam = np.linalg.eigvalsh(X)
    zeta = 1.0 / float(lam[0])
    xis = [float(lam[-1]) ** p for p in inst.exponents]
    n_ests = [operators.op_norm(operators.p_map_rep(rep, i, "bound"),
                                "general-complex", mode=norm_mode,
                                seed=seed + 1 + i, starts=starts)
              for i in range(inst.m)]
    n_is = [e.bound for e in n_ests]
    Anorms = inst.coefficient_norms()

    theta = zeta ** 2 / l * sum(x * a * a for x, a in zip(xis, Anorms))
    eps = dq_norm / l + sum(ni * da + x / l * da * da
                            for ni, x, da in zip(n_is, xis, da_norms))
    sig = zeta / l * sum(x * (2.0 * a + da) * da
                         for x, a, da in zip(xis, Anorms, da_norms))
    con4 = 1.0 - sig
    con5 = (1.0 - sig) ** 2 / (zeta + sig * zeta + 2.0 * theta
                               + 2.0 * np.sqrt((zeta + theta) * (sig * zeta + theta))) - eps
    inner = (1.0 + zeta * eps - sig) ** 2 - 4.0 * eps * (zeta + theta)
    applicable = con4 > 0.0 and con5 > 0.0 and inner >= 0.0
    nu = (2.0 * eps / (1.0 + eps * zeta - sig + np.sqrt(inner))
          if applicable else np.nan)
    xnorm = float(lam[-1])
    return BoundReport(
        method="operator-based", value=float(nu), applicable=applicable,
        conditions={"con4": con4, "con5": con5},
        intermediates={"l": l, "zeta": zeta, "xi_i": xis, "n_i": n_is,
                       "theta": theta, "eps": eps, "sigma": sig,
                       "xi2": float(nu) / xnorm if applicable else np.nan,
                       "norm_mode": norm_mode,
                       "linv_norm": linv_est, "n_estimates": n_ests})


def first_order_estimate(inst, X, rep, pert, norm_mode="rigorous", seed=0):
    """Linearized solution change and its norm-level first-order bound.

    dX = F^{-1}(dQ + sum_i (B_i* dA_i + dA_i* B_i)) with F the linearization
    of the equation map at X; the scalar bound is (1/l_F)||dQ|| +
    sum_i n_i^F ||dA_i|| with the norms taken for the same operator.
    """
    if not pert.matching(inst):
        raise PreconditionError("perturbation shapes do not match the instance")
    E = pert.dQ.astype(complex).copy()
    for B, dA in zip(rep.B, pert.dA):
        E += B.conj().T @ dA + dA.conj().T @ B
    dX = linalg.hermitian_part(rep.apply_frechet_inverse(E))
    f_est = operators.op_norm(rep.frechet_inv, "hermitian", mode=norm_mode, seed=seed)
    n_is = [operators.op_norm(operators.p_map_rep(rep, i, "frechet"),
                              "general-complex", mode=norm_mode,
                              seed=seed + 1 + i).bound
            for i in range(inst.m)]
    l = 1.0 / f_est.bound
    bound = pert.dq_norm() / l + sum(ni * da for ni, da in zip(n_is, pert.da_norms()))
    return FirstOrderReport(dX=dX, bound=float(bound), l=l, n_is=n_is)


def backward_error_bound(inst, Xt, norm="spectral"):
    """Residual-based error bound mu ||R(Xt)|| for an approximate solution.

    Applicable when Sigma = sum_i (1-p_i) ||Xt^{p_i/2} A_i Xt^{-1/2}||^2 < 1
    and the residual is small enough that theta_1 = 1 + ||Xt^{-1}|| ||R|| -
    Sigma satisfies ||R|| < theta_1 / (2 ||Xt^{-1}||) * min(1, theta_1/2).
    """
    Xt = linalg.hermitian_part(np.asarray(Xt, dtype=complex))
    dec = linalg.herm_eig(Xt)
    if dec.values[0] <= 0:
        raise DefinitenessError("approximate solution must be positive definite",
                                lambda_min=float(dec.values[0]))
    measure = linalg.spectral_norm if norm == "spectral" else linalg.fro_norm
    rnorm = measure(model.residual(inst, Xt))
    xinv_half = linalg.frac_power(Xt, -0.5, eig=dec)
    Sigma = sum((1.0 - p) * linalg.spectral_norm(
        linalg.frac_power(Xt, p / 2.0, eig=dec) @ A @ xinv_half) ** 2
        for A, p in inst.terms)
    zt = 1.0 / float(dec.values[0])
    theta1 = 1.0 + zt * rnorm - Sigma
    applicable = (Sigma < 1.0 and theta1 > 0.0
                  and rnorm < theta1 / (2.0 * zt) * min(1.0, theta1 / 2.0))
    disc = theta1 * theta1 - 4.0 * zt * rnorm
    if disc >= 0.0 and theta1 > 0.0:
        mu = 2.0 * float(dec.values[-1]) * zt / (theta1 + np.sqrt(disc))
        bound = mu * rnorm
    else:
        mu, bound = np.nan, np.nan
    return BackwardErrorReport(residual_norm=float(rnorm), Sigma=float(Sigma),
                               theta1=float(theta1), mu=float(mu),
                               bound=float(bound), applicable=applicable)
