"""Command-line front end.

    fracmateq solve <file> [--tol 1e-10] [--max-iter 10000] [--out x.json]
    fracmateq analyze <file> --what {bound41,bound42,first-order,backward-error,cond} ...
    fracmateq reproduce {example1,example2,example3} [--seed N] [--runs 10] [--range ...]
    fracmateq selftest

Exit codes: 0 success (including inapplicable-but-reported bounds),
1 input error, 2 non-convergence.
"""
import argparse
import json
import sys

from . import bounds, condition, experiments, operators, probfile, solver
from .errors import FracmateqError, ValidationError
from .model import validate_instance
from .selftest import run_selftest

EXIT_OK = 0
EXIT_INPUT = 1
EXIT_NO_CONVERGENCE = 2


def _parse_range(text):
    try:
        return tuple(int(tok) for tok in text.split(",") if tok.strip())
    except ValueError as exc:
        raise ValidationError([f"bad --range value {text!r}: {exc}"]) from exc


def _parse_da_norms(text, m):
    try:
        vals = [float(tok) for tok in text.split(",") if tok.strip()]
    except ValueError as exc:
        raise ValidationError([f"bad --da-norms value {text!r}: {exc}"]) from exc
    if len(vals) != m:
        raise ValidationError([f"--da-norms must list {m} values, got {len(vals)}"])
    return vals


def _flatten_report(obj):
    """Scalars-only view of a report for csv/md output."""
    flat = {}

    def put(key, val):
        if isinstance(val, (bool, int, float, str)):
            flat[key] = val
        elif isinstance(val, operators.NormEstimate):
            flat[f"{key}_lower"] = val.lower
            flat[f"{key}_estimate"] = val.estimate
            flat[f"{key}_upper"] = val.upper
        elif isinstance(val, (list, tuple)) and all(
                isinstance(v, (bool, int, float)) for v in val):
            for i, v in enumerate(val, start=1):
                flat[f"{key}_{i}"] = v

    for key, val in obj.items():
        if isinstance(val, dict):
            for k2, v2 in val.items():
                put(k2, v2)
        else:
            put(key, val)
    return flat


def _emit(flat, fmt, out_path=None):
    if fmt == "json":
        text = json.dumps(flat, indent=2, default=float) + "\n"
    elif fmt == "csv":
        keys = list(flat.keys())
        text = (",".join(keys) + "\r\n"
                + ",".join(experiments._format_cell(flat[k]) for k in keys) + "\r\n")
    else:
        keys = list(flat.keys())
        text = ("| key | value |\n|---|---|\n"
                + "\n".join(f"| {k} | {experiments._format_cell(flat[k], 6)} |"
                            for k in keys) + "\n")
    if out_path:
        with open(out_path, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _solve_for(inst, args):
    rep = solver.solve_fixed_point(inst, tol=args.tol, max_iter=args.max_iter)
    if not rep.converged:
        print(f"solver did not converge within {args.max_iter} iterations "
              f"(last residual {rep.final_residual:.3e})", file=sys.stderr)
        sys.exit(EXIT_NO_CONVERGENCE)
    return rep.X


def cmd_solve(args):
    inst = probfile.load_problem(args.file, symmetrize_q=args.symmetrize_q)
    report = validate_instance(inst)
    if not report.valid:
        for issue in report.issues:
            print(f"invalid problem: {issue}", file=sys.stderr)
        return EXIT_INPUT
    srep = solver.solve_fixed_point(inst, tol=args.tol, max_iter=args.max_iter)
    doc = probfile.solve_report_to_json(srep)
    text = json.dumps(doc, indent=2) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if srep.converged else EXIT_NO_CONVERGENCE


def cmd_analyze(args):
    inst = probfile.load_problem(args.file, symmetrize_q=args.symmetrize_q)
    vrep = validate_instance(inst)
    if not vrep.valid:
        for issue in vrep.issues:
            print(f"invalid problem: {issue}", file=sys.stderr)
        return EXIT_INPUT

    what = args.what
    if what == "bound41":
        da = _parse_da_norms(args.da_norms, inst.m) if args.da_norms else [0.0] * inst.m
        rep = bounds.solution_free_bound(inst, da, args.dq_norm)
        flat = _flatten_report({"what": "bound41", "xi1": rep.value,
                                "applicable": rep.applicable,
                                "conditions": rep.conditions,
                                "intermediates": rep.intermediates})
        _emit(flat, args.format, args.out)
        return EXIT_OK

    X = (probfile.load_solution(args.solution) if args.solution
         else _solve_for(inst, args))

    if what == "backward-error":
        be = bounds.backward_error_bound(inst, X)
        flat = _flatten_report({
            "what": "backward-error", "bound": be.bound, "mu": be.mu,
            "residual_norm": be.residual_norm, "Sigma": be.Sigma,
            "theta1": be.theta1, "applicable": be.applicable})
        _emit(flat, args.format, args.out)
        return EXIT_OK

    op = operators.build_operator(inst, X)
    if what == "bound42":
        da = _parse_da_norms(args.da_norms, inst.m) if args.da_norms else [0.0] * inst.m
        rep = bounds.operator_bound(inst, X, op, da, args.dq_norm,
                                    norm_mode=args.norm_mode, seed=args.seed)
        flat = _flatten_report({"what": "bound42", "nu": rep.value,
                                "applicable": rep.applicable,
                                "conditions": rep.conditions,
                                "intermediates": rep.intermediates})
        _emit(flat, args.format, args.out)
        return EXIT_OK
    if what == "first-order":
        if not args.pert:
            raise ValidationError(["--pert FILE is required for first-order"])
        pert = probfile.load_perturbation(args.pert, inst)
        fo = bounds.first_order_estimate(inst, X, op, pert,
                                         norm_mode=args.norm_mode, seed=args.seed)
        doc = {"what": "first-order", "bound": fo.bound, "l": fo.l,
               "n_i": list(map(float, fo.n_is)),
               "dX": probfile.matrix_to_json(fo.dX)}
        if args.format == "json":
            text = json.dumps(doc, indent=2) + "\n"
            if args.out:
                with open(args.out, "w") as fh:
                    fh.write(text)
            else:
                sys.stdout.write(text)
        else:
            _emit(_flatten_report({"what": "first-order", "bound": fo.bound,
                                   "l": fo.l, "n_i": list(map(float, fo.n_is))}),
                  args.format, args.out)
        return EXIT_OK
    if what == "cond":
        mode = "relative" if args.mode == "rel" else "absolute"
        kind = args.field
        fn = condition.cond_real if kind == "real" else condition.cond_complex
        crep = fn(inst, X, op, mode=mode)
        flat = _flatten_report({"what": "cond", "value": crep.value,
                                "mode": crep.mode, "field": crep.field_kind,
                                "scalars": crep.scalars})
        _emit(flat, args.format, args.out)
        return EXIT_OK
    raise ValidationError([f"unknown --what {what!r}"])


def cmd_reproduce(args):
    spec = experiments.ExperimentSpec(
        example=args.example, seed=args.seed, runs=args.runs,
        sweep=_parse_range(args.range) if args.range else None,
        norm_mode=args.norm_mode, dq_mode=args.dq_mode)
    table = experiments.run_experiment(spec)
    md = experiments.to_markdown(table)
    csv_text = experiments.to_csv(table)
    if args.csv:
        with open(args.csv, "w", newline="") as fh:
            fh.write(csv_text)
    if args.md:
        with open(args.md, "w") as fh:
            fh.write(md)
    if not args.md:
        sys.stdout.write(md)
    return EXIT_OK


def cmd_selftest(_args):
    return EXIT_OK if run_selftest() else EXIT_INPUT


def build_parser():
    ap = argparse.ArgumentParser(prog="fracmateq",
                                 description=__doc__,
                                 formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("solve", help="solve an equation instance")
    sp.add_argument("file")
    sp.add_argument("--tol", type=float, default=1e-10)
    sp.add_argument("--max-iter", type=int, default=10000)
    sp.add_argument("--out")
    sp.add_argument("--symmetrize-q", action="store_true")
    sp.set_defaults(fn=cmd_solve)

    ap_an = sub.add_parser("analyze", help="perturbation / condition analysis")
    ap_an.add_argument("file")
    ap_an.add_argument("--what", required=True,
                       choices=["bound41", "bound42", "first-order",
                                "backward-error", "cond"])
    ap_an.add_argument("--mode", choices=["abs", "rel"], default="rel")
    ap_an.add_argument("--field", choices=["real", "complex"], default="complex")
    ap_an.add_argument("--norm-mode", choices=["rigorous", "estimate"],
                       default="rigorous")
    ap_an.add_argument("--format", choices=["json", "csv", "md"], default="json")
    ap_an.add_argument("--da-norms", help="comma-separated ||dA_i|| values")
    ap_an.add_argument("--dq-norm", type=float, default=0.0)
    ap_an.add_argument("--solution", help="JSON file with a solved X")
    ap_an.add_argument("--pert", help="JSON perturbation file (first-order)")
    ap_an.add_argument("--tol", type=float, default=1e-10)
    ap_an.add_argument("--max-iter", type=int, default=10000)
    ap_an.add_argument("--seed", type=int, default=0)
    ap_an.add_argument("--symmetrize-q", action="store_true")
    ap_an.add_argument("--out")
    ap_an.set_defaults(fn=cmd_analyze)

    rp = sub.add_parser("reproduce", help="run a reference experiment sweep")
    rp.add_argument("example", choices=["example1", "example2", "example3"])
    rp.add_argument("--seed", type=int, default=0)
    rp.add_argument("--runs", type=int, default=10)
    rp.add_argument("--range", help="comma-separated sweep values")
    rp.add_argument("--norm-mode", choices=["rigorous", "estimate"],
                    default="estimate")
    rp.add_argument("--dq-mode", choices=["none", "matched"], default="none")
    rp.add_argument("--csv", help="write the CSV artifact here")
    rp.add_argument("--md", help="write the Markdown artifact here")
    rp.set_defaults(fn=cmd_reproduce)

    st = sub.add_parser("selftest", help="run the property battery")
    st.set_defaults(fn=cmd_selftest)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        code = args.fn(args)
    except ValidationError as exc:
        for issue in exc.issues:
            print(f"error: {issue}", file=sys.stderr)
        code = EXIT_INPUT
    except FracmateqError as exc:
        print(f"error: {exc}", file=sys.stderr)
        code = EXIT_INPUT
    sys.exit(code)


if __name__ == "__main__":
    main()
