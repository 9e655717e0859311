"""Seeded experiment harness reproducing the reference tables.

Three benchmark instances are built from printed data:

* example1: 2x2, exponents (1/2, 1/3), Q = I; perturbation sweep over
  j in {4,...,7} with dA_1 = 10^-j S/||S||, dA_2 = 3x10^{-j-1} S/||S||,
  S = C^T + C, C a fresh standard-normal draw per run.
* example2: 5x5 pentadiagonal, exponents (1/2, 1/4), Q = I; backward-error
  sweep along the fixed-point iterates from initials (A, 2A).
* example3: 2x2 with a rank-one coefficient and a printed right side that
  is not Hermitian; it is symmetrized on load (flagged in the output) and
  swept over the coefficient parameter k for the condition number.

Runs are deterministic: every random draw comes from a substream
default_rng([seed, j, run]) of the master seed, so equal seeds give
byte-identical CSV output regardless of execution order.
"""
import csv
import io
from dataclasses import dataclass, field

import numpy as np

from . import bounds, condition, linalg, model, operators, solver
from .errors import PreconditionError

EXAMPLE1_XI1_REFERENCE = (1.9765e-4, 2.3869e-5, 1.8133e-6, 2.1028e-7)
EXAMPLE1_XI2_REFERENCE = (6.5069e-5, 7.6524e-6, 6.0514e-7, 6.9911e-8)
EXAMPLE1_CON_REFERENCE = {
    4: (1.1139, 0.9358, 0.8751, 1.0000, 0.7955),
    5: (1.1141, 0.9358, 0.8755, 1.0000, 0.7957),
    6: (1.1141, 0.9357, 0.8756, 1.0000, 0.7957),
    7: (1.1141, 0.9357, 0.8756, 1.0000, 0.7957),
}
EXAMPLE2_ERR_REFERENCE = {8: 6.1091e-4, 10: 4.0865e-5, 12: 2.6837e-6, 14: 1.7372e-7}
EXAMPLE2_BOUND_REFERENCE = {8: 7.2094e-4, 10: 4.8224e-5, 12: 3.1670e-6, 14: 2.0506e-7}
EXAMPLE3_CREL_REFERENCE = {1: 1.1888, 3: 1.1025, 5: 1.1019, 7: 1.1019, 9: 1.1019}


@dataclass
class ExperimentSpec:
    example: str
    seed: int = 0
    runs: int = 10
    sweep: tuple = None          # j values (example1) or k values (examples 2, 3)
    norm_mode: str = "estimate"
    dq_mode: str = "none"        # example1: "none" or "matched" (||dQ|| = 10^-j)

    def __post_init__(self):
        if self.example not in ("example1", "example2", "example3"):
            raise PreconditionError(f"unknown example {self.example!r}")
        if self.runs < 1:
            raise PreconditionError("runs must be >= 1")
        if self.sweep is None:
            self.sweep = {"example1": (4, 5, 6, 7),
                          "example2": (8, 10, 12, 14),
                          "example3": (1, 3, 5, 7, 9)}[self.example]
        self.sweep = tuple(int(v) for v in self.sweep)


@dataclass
class Table:
    title: str
    columns: list
    rows: list
    notes: list = field(default_factory=list)


def example1_instance():
    A = np.array([[2.0, 0.95], [0.0, 1.0]])
    s = linalg.spectral_norm(A)
    A1 = (1.0 / 3.0 + 2e-2) / s * A
    A2 = (1.0 / 6.0 + 3e-2) / s * A
    return model.ProblemInstance([(A1, 0.5), (A2, 1.0 / 3.0)], np.eye(2))


def example2_instance():
    A = example2_seed_matrix()
    s = linalg.spectral_norm(A)
    A1 = (1.0 / 3.0 + 2e-2) / s * A
    A2 = (1.0 / 6.0 + 3e-2) / s * A
    return model.ProblemInstance([(A1, 0.5), (A2, 0.25)], np.eye(5))


def example2_seed_matrix():
    return (2.0 * np.eye(5) + np.diag(np.ones(4), 1) + np.diag(np.ones(4), -1))


def example3_instance(k, symmetrize_q=True):
    a = 0.55 + 10.0 ** (-k)
    A1 = np.array([[0.0, a], [0.0, 0.0]])
    A2 = 0.5 * A1
    Q = np.array([[1.0, 1.0], [0.0, 1.0]])
    return model.ProblemInstance([(A1, 0.5), (A2, 1.0 / 3.0)], Q,
                                 symmetrize_q=symmetrize_q)


def _draw_scaled_symmetric(rng, n, target_norm):
    C = rng.standard_normal((n, n))
    S = C.T + C
    return target_norm / linalg.spectral_norm(S) * S


def run_example1(seed=0, runs=10, js=(4, 5, 6, 7), norm_mode="estimate",
                 dq_mode="none", resolve_tol=1e-12):
    """Perturbation sweep: conditions, bounds, and measured errors per j.

    dq_mode "none" perturbs only the coefficients; "matched" also perturbs
    the right side with an independent symmetrized draw of norm 10^-j (the
    interpretation that reproduces the reference condition values to all
    printed digits).
    """
    inst = example1_instance()
    X = solver.reference_solution(inst)
    rep = operators.build_operator(inst, X)
    xnorm = linalg.spectral_norm(X)
    columns = ["j", "con1", "con2", "con3", "con4", "con5",
               "gm_rel_err", "max_rel_err", "xi1", "xi2", "xi2_rigorous"]
    rows = []
    for j in js:
        da = [10.0 ** (-j), 3.0 * 10.0 ** (-j - 1)]
        dq = 10.0 ** (-j) if dq_mode == "matched" else 0.0
        free = bounds.solution_free_bound(inst, da, dq)
        op_est = bounds.operator_bound(inst, X, rep, da, dq,
                                       norm_mode=norm_mode, seed=seed)
        op_rig = bounds.operator_bound(inst, X, rep, da, dq,
                                       norm_mode="rigorous", seed=seed)
        errs = []
        for r in range(runs):
            rng = np.random.default_rng([seed, j, r])
            dA1 = _draw_scaled_symmetric(rng, 2, 10.0 ** (-j))
            dA2 = dA1 * (3.0 * 10.0 ** (-j - 1)) / (10.0 ** (-j))
            dQ = (_draw_scaled_symmetric(rng, 2, dq) if dq_mode == "matched"
                  else np.zeros((2, 2)))
            pert = model.Perturbation(dA=[dA1, dA2], dQ=dQ)
            tilted = model.perturbed(inst, pert)
            rsol = solver.solve_fixed_point(tilted, initials=[X, X],
                                            tol=resolve_tol, max_iter=5000)
            errs.append(linalg.spectral_norm(rsol.X - X) / xnorm)
        gm = float(np.exp(np.mean(np.log(errs))))
        rows.append([j, free.conditions["con1"], free.conditions["con2"],
                     free.conditions["con3"], op_est.conditions["con4"],
                     op_est.conditions["con5"], gm, max(errs), free.value,
                     op_est.intermediates["xi2"], op_rig.intermediates["xi2"]])
    notes = [f"seed={seed} runs={runs} dq_mode={dq_mode} norm_mode={norm_mode}",
             "xi1 is deterministic given the perturbation norms; xi2 uses "
             "multistart operator-norm estimates (xi2_rigorous the certified "
             "bracket endpoints)"]
    return Table(title="example1 perturbation sweep", columns=columns,
                 rows=rows, notes=notes)


def run_example2(ks=(8, 10, 12, 14), tol_reference=1e-14):
    """Backward-error sweep along the fixed-point iterates.

    Row labels follow the reference table, whose index convention is offset
    by one from the lemma-literal iterate sequence started at (A, 2A): row k
    reports iterate k-1. The offset was fixed by value matching: the row-8
    error 6.1091e-4 coincides with iterate 7 to 3e-6 relative, while
    iterate 8 differs by 9 percent.
    """
    inst = example2_instance()
    Xref = solver.reference_solution(inst, tol=tol_reference)
    A = example2_seed_matrix()
    rep = solver.solve_fixed_point(inst, initials=[A, 2.0 * A], tol=1e-15,
                                   max_iter=max(ks), keep_iterates=True)
    seq = rep.iterates            # seq[0] = first initial
    columns = ["k", "err", "mu_R", "Sigma", "theta1", "applicable", "err_le_bound"]
    rows = []
    for k in ks:
        if k < 3 or k - 2 >= len(seq):
            raise PreconditionError(f"k={k} outside the computed iterate range")
        Xk = seq[k - 2]           # row k <-> iterate k-1 (1-based)
        err = linalg.spectral_norm(Xk - Xref)
        be = bounds.backward_error_bound(inst, Xk)
        rows.append([k, err, be.bound, be.Sigma, be.theta1,
                     be.applicable, bool(err <= be.bound)])
    notes = ["row k reports lemma-literal iterate k-1 (reference tables use "
             "a label convention offset by one)",
             f"reference solution at tol {tol_reference:g}"]
    return Table(title="example2 backward-error sweep", columns=columns,
                 rows=rows, notes=notes)


def _inverse_weighted_condition(inst, X, mode="relative"):
    """Diagnostic variant: condition value with the linearization replaced
    by I + sum (X^{-1}A_i)^T kron (X^{-1}A_i)*.

    Not a derivative of the solution map; kept because it reproduces the
    reference condition values within 5 percent, which pins down how those
    values were produced.
    """
    n = inst.n
    Xr = np.asarray(X).real
    Xi = np.linalg.inv(Xr)
    L = np.eye(n * n)
    for A, _ in inst.terms:
        G = Xi @ A.real
        L = L + linalg.kron(G.T, G.conj().T).real
    Sr = np.linalg.inv(L)
    Pi = linalg.vec_perm(n)
    xi = linalg.fro_norm(X)
    blocks = [linalg.fro_norm(inst.Q) * Sr]
    for A, p in inst.terms:
        Bt = (A.conj().T.real @ linalg.frac_power(linalg.hermitian_part(X), p).real)
        blocks.append(linalg.fro_norm(A)
                      * (Sr @ (linalg.kron(np.eye(n), Bt) + linalg.kron(Bt, np.eye(n)) @ Pi)))
    row = np.hstack(blocks)
    return float(np.linalg.svd(row, compute_uv=False)[0]) / xi


def run_example3(ks=(1, 3, 5, 7, 9), oracle_samples=200, seed=0):
    """Condition-number sweep under the symmetrized right side.

    The printed right side is not Hermitian; it is symmetrized on load and
    every row carries the flag. Computed values are emitted alongside the
    reference ones with their relative deviation; the inverse-weighted
    diagnostic column shows the variant that reproduces the reference
    values.
    """
    columns = ["k", "crel", "crel_real", "oracle", "oracle_le_formula",
               "crel_reference", "rel_deviation", "crel_inverse_weighted",
               "q_symmetrized"]
    rows = []
    for k in ks:
        inst = example3_instance(k, symmetrize_q=True)
        X = solver.reference_solution(inst)
        rep = operators.build_operator(inst, X)
        rc = condition.cond_complex(inst, X, rep, mode="relative")
        rr = condition.cond_real(inst, X, rep, mode="relative")
        oracle = condition.cond_sup_oracle(inst, X, rep, mode="relative",
                                           field_kind="complex",
                                           samples=oracle_samples, seed=seed)
        ref = EXAMPLE3_CREL_REFERENCE.get(k)
        dev = abs(rc.value / ref - 1.0) if ref else float("nan")
        rows.append([k, rc.value, rr.value, oracle,
                     bool(oracle <= rc.value + 1e-9), ref, dev,
                     _inverse_weighted_condition(inst, X), True])
    notes = ["right side symmetrized on load: Q <- (Q + Q^T)/2 (printed Q "
             "is not Hermitian)",
             "computed values use the linearization of the equation map; "
             "they deviate from the reference values, which are reproduced "
             "within 5 percent only by the inverse-weighted variant in the "
             "crel_inverse_weighted column"]
    return Table(title="example3 condition-number sweep", columns=columns,
                 rows=rows, notes=notes)


def run_experiment(spec):
    if spec.example == "example1":
        return run_example1(seed=spec.seed, runs=spec.runs, js=spec.sweep,
                            norm_mode=spec.norm_mode, dq_mode=spec.dq_mode)
    if spec.example == "example2":
        return run_example2(ks=spec.sweep)
    return run_example3(ks=spec.sweep, seed=spec.seed)


def _format_cell(v, digits=None):
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        if digits is None:
            return repr(v)
        return f"{v:.{digits - 1}e}" if (v != 0 and (abs(v) < 1e-3 or abs(v) >= 1e5)) \
            else f"{v:.{digits}g}"
    return str(v)


def to_csv(table):
    """RFC-4180 CSV with full-precision floats; byte-stable for equal seeds."""
    buf = io.StringIO()
    writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\r\n")
    writer.writerow(table.columns)
    for row in table.rows:
        writer.writerow([_format_cell(v) for v in row])
    return buf.getvalue()


def to_markdown(table, digits=5):
    lines = [f"## {table.title}", ""]
    lines.append("| " + " | ".join(table.columns) + " |")
    lines.append("|" + "|".join(["---"] * len(table.columns)) + "|")
    for row in table.rows:
        lines.append("| " + " | ".join(_format_cell(v, digits) for v in row) + " |")
    if table.notes:
        lines.append("")
        for note in table.notes:
            lines.append(f"*{note}*")
    return "\n".join(lines) + "\n"
