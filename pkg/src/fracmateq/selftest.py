"""Self-contained property battery behind `fracmateq selftest`.

Each check prints one PASS/FAIL line; the battery is seeded and fast. The
same instance sampler is reused by the test suite.
"""
import numpy as np

from . import bounds, condition, experiments, factorization, linalg, model, operators, solver


def random_hermitian(rng, n, complex_entries=True):
    M = rng.standard_normal((n, n))
    if complex_entries:
        M = M + 1j * rng.standard_normal((n, n))
    return linalg.hermitian_part(M)


def random_pd(rng, n, shift=0.2, complex_entries=True):
    M = rng.standard_normal((n, n))
    if complex_entries:
        M = M + 1j * rng.standard_normal((n, n))
    return linalg.hermitian_part(M @ M.conj().T) + shift * np.eye(n)


def random_instance(rng, n=3, m=2, margin=0.5, complex_entries=True):
    """Instance with invertibility margin approximately `margin` in (0, 1).

    Coefficients are scaled so that sum ||A_i||^2 / beta^{1-p_i} = 1 - margin,
    keeping the full analysis suite applicable.
    """
    Q = random_pd(rng, n, shift=0.3, complex_entries=complex_entries)
    ps = rng.uniform(0.15, 0.85, m)
    raw = []
    for _ in range(m):
        A = rng.standard_normal((n, n))
        if complex_entries:
            A = A + 1j * rng.standard_normal((n, n))
        raw.append(A)
    beta0 = linalg.lambda_min(Q)
    load = sum(linalg.spectral_norm(A) ** 2 / beta0 ** (1.0 - p)
               for A, p in zip(raw, ps))
    scale = np.sqrt((1.0 - margin) / load)
    return model.ProblemInstance([(scale * A, p) for A, p in zip(raw, ps)], Q)


def _checks():
    rng = np.random.default_rng(20240611)

    def chk_vec_identity():
        A, W, B = (rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
                   for _ in range(3))
        lhs = linalg.vec(A @ W @ B)
        rhs = linalg.kron(B.T, A) @ linalg.vec(W)
        return np.linalg.norm(lhs - rhs) <= 1e-12

    def chk_vec_perm():
        P = linalg.vec_perm(4)
        A = rng.standard_normal((4, 4))
        return (np.array_equal(P @ P, np.eye(16))
                and np.array_equal(P @ linalg.vec(A), linalg.vec(A.T)))

    def chk_eig_reconstruct():
        H = random_hermitian(rng, 5)
        dec = linalg.herm_eig(H)
        return np.linalg.norm(dec.reconstruct() - H) <= 1e-10 * max(1, np.linalg.norm(H))

    def chk_power_vs_quadrature():
        M = random_pd(rng, 4)
        Pq, _ = linalg.frac_power_quadrature(M, 1.0 / 3.0, form="i", nodes=64)
        return np.linalg.norm(Pq - linalg.frac_power(M, 1.0 / 3.0)) <= 1e-8

    def chk_quadrature_forms():
        M = random_pd(rng, 3)
        P1, _ = linalg.frac_power_quadrature(M, 0.25, form="i", nodes=64)
        P2, _ = linalg.frac_power_quadrature(M, 0.25, form="ii", nodes=64)
        return np.max(np.abs(P1 - P2)) <= 1e-8

    def chk_monotone_powers():
        for _ in range(50):
            B = random_pd(rng, 3)
            A = B + 0.5 * random_pd(rng, 3, shift=0.0)
            for g in (0.25, 0.5, 0.75):
                d = linalg.lambda_min(linalg.frac_power(A, g) - linalg.frac_power(B, g))
                if d < -1e-10:
                    return False
        return True

    def chk_kernel_quadrature():
        for a, b, p in [(1.0, 4.0, 0.5), (2.0, 5.0, 0.25), (0.3, 0.31, 0.7)]:
            if abs(operators.power_kernel(a, b, p)
                   - operators.power_kernel_quadrature(a, b, p)) > 1e-9:
                return False
        return True

    def chk_operator_quadrature():
        inst = random_instance(rng, n=3, m=2)
        X = solver.reference_solution(inst, tol=1e-13)
        rep = operators.build_operator(inst, X)
        Lq = operators.build_operator_quadrature(inst, X, nodes=96)
        return np.linalg.norm(rep.L - Lq) <= 1e-8

    def chk_hermitian_preserved():
        inst = random_instance(rng, n=3, m=2)
        X = solver.reference_solution(inst, tol=1e-13)
        rep = operators.build_operator(inst, X)
        W = random_hermitian(rng, 3)
        Y = rep.apply(W)
        return linalg.hermitian_deviation(Y) <= 1e-10 * max(1, np.linalg.norm(Y))

    def chk_pair_map():
        inst = random_instance(rng, n=2, m=1)
        X = solver.reference_solution(inst, tol=1e-13)
        rep = operators.build_operator(inst, X)
        R = operators.p_map_rep(rep, 0)
        Z = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
        return np.linalg.norm(operators.apply_real_rep(R, Z)
                              - operators.apply_p_map(rep, 0, Z)) <= 1e-10

    def chk_solver_uniqueness():
        inst = random_instance(rng, n=3, m=2)
        tol = 1e-11
        sols = []
        for init in (None,
                     [5.0 * np.eye(3)] * inst.m,
                     [random_pd(rng, 3) for _ in range(inst.m)]):
            sols.append(solver.solve_fixed_point(inst, initials=init, tol=tol).X)
        return all(linalg.spectral_norm(sols[0] - S) <= 10 * tol for S in sols[1:])

    def chk_factorization_roundtrip():
        inst = experiments.example1_instance()
        X = solver.reference_solution(inst)
        rep = factorization.verify_factorization(inst, factorization.factor_gram(inst, X))
        return rep.equation_defect <= 1e-9 and rep.orthonormality_defect <= 1e-9

    def chk_backward_error():
        inst = experiments.example2_instance()
        X = solver.reference_solution(inst)
        srep = solver.solve_fixed_point(
            inst, initials=[experiments.example2_seed_matrix()] * 2,
            tol=1e-15, max_iter=9, keep_iterates=True)
        Xk = srep.iterates[-1]
        be = bounds.backward_error_bound(inst, Xk)
        return be.applicable and linalg.spectral_norm(Xk - X) <= be.bound

    def chk_condition_consistency():
        inst = random_instance(rng, n=2, m=1, complex_entries=False)
        X = solver.reference_solution(inst)
        rep = operators.build_operator(inst, X)
        c = condition.cond_complex(inst, X, rep)
        o = condition.cond_sup_oracle(inst, X, rep, samples=100, seed=3)
        cr = condition.cond_real(inst, X, rep)
        return o <= c.value + 1e-9 and cr.value <= c.value + 1e-9

    return [
        ("vec/kron column-stacking identity", chk_vec_identity),
        ("vec-permutation involution and transpose identity", chk_vec_perm),
        ("hermitian eigendecomposition reconstruction", chk_eig_reconstruct),
        ("fractional power vs quadrature oracle", chk_power_vs_quadrature),
        ("quadrature forms i and ii agree", chk_quadrature_forms),
        ("operator monotonicity of fractional powers", chk_monotone_powers),
        ("power kernel closed form vs quadrature", chk_kernel_quadrature),
        ("bound operator closed form vs quadrature", chk_operator_quadrature),
        ("bound operator preserves hermitian structure", chk_hermitian_preserved),
        ("pair-map representation apply check", chk_pair_map),
        ("solver uniqueness across initial windows", chk_solver_uniqueness),
        ("factorization round trip", chk_factorization_roundtrip),
        ("backward-error bound validity", chk_backward_error),
        ("condition number internal consistency", chk_condition_consistency),
    ]


def run_selftest(stream=None):
    import sys
    out = stream if stream is not None else sys.stdout
    ok = True
    for name, fn in _checks():
        try:
            passed = bool(fn())
        except Exception as exc:        # a crashing check is a failing check
            passed = False
            name = f"{name} ({type(exc).__name__}: {exc})"
        ok = ok and passed
        print(f"{'PASS' if passed else 'FAIL'}  {name}", file=out)
    return ok
