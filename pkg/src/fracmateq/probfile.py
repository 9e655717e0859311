"""JSON problem files and report serialization.

Problem document layout (row-major nested lists, finite doubles; an omitted
"im" part means zero):

    {
      "n": 2,
      "m": 1,
      "Q": {"re": [[1.0, 0.0], [0.0, 1.0]]},
      "terms": [{"p": 0.5, "A": {"re": [[...]], "im": [[...]]}}]
    }
"""
import json

import numpy as np

from .errors import ValidationError
from .model import Perturbation, ProblemInstance


def _matrix_from_json(obj, n, label):
    if not isinstance(obj, dict) or "re" not in obj:
        raise ValidationError([f"{label}: expected an object with a 're' field"])
    re = np.asarray(obj["re"], dtype=float)
    if re.shape != (n, n):
        raise ValidationError([f"{label}: 're' must be {n}x{n}, got {re.shape}"])
    if "im" in obj and obj["im"] is not None:
        im = np.asarray(obj["im"], dtype=float)
        if im.shape != (n, n):
            raise ValidationError([f"{label}: 'im' must be {n}x{n}, got {im.shape}"])
    else:
        im = np.zeros((n, n))
    M = re + 1j * im
    if not np.all(np.isfinite(M)):
        raise ValidationError([f"{label}: entries must be finite"])
    return M


def matrix_to_json(M):
    M = np.asarray(M)
    out = {"re": M.real.tolist()}
    if np.any(M.imag != 0.0):
        out["im"] = M.imag.tolist()
    return out


def parse_problem(doc, symmetrize_q=False):
    issues = []
    if not isinstance(doc, dict):
        raise ValidationError(["top-level JSON value must be an object"])
    n = doc.get("n")
    m = doc.get("m")
    if not isinstance(n, int) or n < 1:
        issues.append("'n' must be a positive integer")
    if not isinstance(m, int) or m < 1:
        issues.append("'m' must be a positive integer")
    terms_doc = doc.get("terms")
    if not isinstance(terms_doc, list) or (isinstance(m, int) and len(terms_doc) != m):
        issues.append("'terms' must be a list of length m")
    if "Q" not in doc:
        issues.append("'Q' is required")
    if issues:
        raise ValidationError(issues)

    Q = _matrix_from_json(doc["Q"], n, "Q")
    terms = []
    for k, td in enumerate(terms_doc):
        if not isinstance(td, dict) or "p" not in td or "A" not in td:
            raise ValidationError([f"terms[{k}]: expected fields 'p' and 'A'"])
        p = td["p"]
        if not isinstance(p, (int, float)) or not np.isfinite(p):
            raise ValidationError([f"terms[{k}]: 'p' must be a finite number"])
        A = _matrix_from_json(td["A"], n, f"terms[{k}].A")
        terms.append((A, float(p)))
    return ProblemInstance(terms, Q, symmetrize_q=symmetrize_q)


def load_problem(path, symmetrize_q=False):
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ValidationError([f"cannot read {path}: {exc}"]) from exc
    except json.JSONDecodeError as exc:
        raise ValidationError([f"malformed JSON in {path}: {exc}"]) from exc
    return parse_problem(doc, symmetrize_q=symmetrize_q)


def problem_to_json(inst):
    return {
        "n": inst.n,
        "m": inst.m,
        "Q": matrix_to_json(inst.Q),
        "terms": [{"p": p, "A": matrix_to_json(A)} for A, p in inst.terms],
    }


def solve_report_to_json(report):
    return {
        "X": matrix_to_json(report.X),
        "iterations": report.iterations,
        "residual_history": list(map(float, report.residual_history)),
        "beta": report.beta,
        "converged": report.converged,
        "tol": report.tol,
    }


def load_solution(path):
    """Read a Hermitian matrix from a solve report or a bare matrix object."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ValidationError([f"cannot read {path}: {exc}"]) from exc
    except json.JSONDecodeError as exc:
        raise ValidationError([f"malformed JSON in {path}: {exc}"]) from exc
    obj = doc.get("X", doc) if isinstance(doc, dict) else None
    if not isinstance(obj, dict) or "re" not in obj:
        raise ValidationError([f"{path}: expected a solve report or matrix object"])
    re = np.asarray(obj["re"], dtype=float)
    n = re.shape[0]
    return _matrix_from_json(obj, n, "X")


def load_perturbation(path, inst):
    """Read {"dQ": {...}, "dA": [{...}, ...]} matching the instance."""
    try:
        with open(path) as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise ValidationError([f"cannot read {path}: {exc}"]) from exc
    except json.JSONDecodeError as exc:
        raise ValidationError([f"malformed JSON in {path}: {exc}"]) from exc
    n = inst.n
    dQ = (_matrix_from_json(doc["dQ"], n, "dQ") if "dQ" in doc
          else np.zeros((n, n), dtype=complex))
    dA_doc = doc.get("dA", [])
    if len(dA_doc) != inst.m:
        raise ValidationError([f"'dA' must list {inst.m} matrices"])
    dA = [_matrix_from_json(d, n, f"dA[{k}]") for k, d in enumerate(dA_doc)]
    return Perturbation(dA=dA, dQ=dQ)
