"""Seeded self-check battery behind the ``check`` CLI command.

Each check replays one of the library's cross-route equivalences or proved
inequalities on deterministic random data and reports pass/fail with a
measured figure.  The full battery is the slower, wider version of what the
test suite pins down.
"""

from dataclasses import dataclass

import numpy as np

from .krylov import KrylovConfig, gmres
from .linalg import (
    commutation_matrix, expm, frobenius, kron, lu_solve, spectral_norm, unvec, vec,
)
from .operators import OperatorContext, TdsProblem, apply_operator, assemble_operator
from .precond import apply_preconditioner, build_preconditioner
from .propagation import OdeConfig, coupled_generator, exact_propagate, rk4_propagate
from .solver import solve_delay_lyapunov
from .tsylv import tsylv_solvable, tsylv_solve, tsylv_solve_kron


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def random_stable_problem(n, rng, coupling=0.3, tau=1.0):
    """Random delay-stable problem: log-norm of A0 pushed below -(coupling + margin).

    mu_2(A0) + ||A1||_2 < 0 guarantees exponential stability for every delay,
    which also rules out Hamiltonian eigenpairings of A0.
    """
    A0 = rng.standard_normal((n, n))
    mu2 = float(np.linalg.eigvalsh(0.5 * (A0 + A0.T)).max())
    A0 = A0 - (mu2 + 0.5 + coupling) * np.eye(n)
    A1 = rng.standard_normal((n, n))
    norm1 = spectral_norm(A1)
    if norm1 > 0:
        A1 *= coupling / norm1
    B = rng.standard_normal((n, n))
    W = 0.5 * (B + B.T)
    return TdsProblem(A0=A0, A1=A1, tau=tau, W=W)


def _check(name, passed, detail):
    return CheckResult(name=name, passed=bool(passed), detail=detail)


def check_expm_group(rng, count):
    # Near-normal samples with ||A||_2 up to 50: the identity is only
    # well-posed in float64 when the eigenvalue real-part spread stays small.
    worst = 0.0
    for _ in range(count):
        n = int(rng.integers(2, 7))
        S = rng.standard_normal((n, n))
        S = 0.5 * (S - S.T)
        S *= rng.uniform(1.0, 45.0) / max(spectral_norm(S), 1e-300)
        B = rng.standard_normal((n, n))
        A = S + 0.5 * (B + B.T) * (2.0 / n)
        dev = frobenius(expm(A) @ expm(-A) - np.eye(n))
        worst = max(worst, dev)
    return _check("expm-group-property", worst <= 1e-10, f"max ||e^A e^-A - I|| = {worst:.2e}")


def check_vec_kron(rng, count):
    worst = 0.0
    for _ in range(count):
        A, B, X = (rng.standard_normal((3, 3)) for _ in range(3))
        lhs = unvec(kron(B.T, A) @ vec(X), 3)
        worst = max(worst, frobenius(lhs - A @ X @ B))
        P = commutation_matrix(4)
        Y = rng.standard_normal((4, 4))
        worst = max(worst, frobenius(unvec(P @ vec(Y), 4) - Y.T))
    return _check("vec-kron-commutation", worst <= 1e-12, f"max defect = {worst:.2e}")


def check_tsylv_routes(rng, count):
    worst = 0.0
    solved = 0
    for _ in range(count):
        n = int(rng.integers(2, 11))
        M = rng.standard_normal((n, n))
        N = rng.standard_normal((n, n))
        if not tsylv_solvable(M, N):
            continue
        C = rng.standard_normal((n, n))
        X1 = tsylv_solve(M, N, C)
        X2 = tsylv_solve_kron(M, N, C)
        worst = max(worst, frobenius(X1 - X2) / max(frobenius(X2), 1e-300))
        solved += 1
    return _check("tsylv-schur-vs-kron", worst <= 1e-8 and solved > 0,
                  f"{solved} instances, max rel diff = {worst:.2e}")


def check_tsylv_shift_independence(rng, count):
    agree = True
    for _ in range(count):
        n = int(rng.integers(2, 7))
        A0 = random_stable_problem(n, rng).A0
        values = {c: tsylv_solvable(A0.T + c * np.eye(n), A0 - c * np.eye(n))
                  for c in (0.5, 1.0, 2.0)}
        agree = agree and len(set(values.values())) == 1
    return _check("tsylv-shift-independent-solvability", agree,
                  "predicate equal for shifts 0.5/1/2" if agree else "predicate differs across shifts")


def check_propagation_order(rng, count):
    worst_ratio = np.inf
    for _ in range(count):
        p = random_stable_problem(4, rng, tau=2.0)
        X = rng.standard_normal((4, 4))
        exact = exact_propagate(p.A0, p.A1, X, p.tau)
        errs = []
        for steps in (16, 32, 64):
            res = rk4_propagate(p.A0, p.A1, X, p.tau, OdeConfig(steps=steps))
            errs.append(frobenius(res.Z1_end - exact.Z1_end)
                        + frobenius(res.Z2_end - exact.Z2_end))
        for a, b in zip(errs, errs[1:]):
            worst_ratio = min(worst_ratio, a / max(b, 1e-300))
    return _check("rk4-fourth-order-decay", worst_ratio >= 2 ** 3 * 0.9,
                  f"min error ratio per doubling = {worst_ratio:.1f}")


def check_propagation_bound(rng, count):
    ok = True
    worst = 0.0
    for _ in range(count):
        n = int(rng.integers(2, 6))
        A0 = rng.standard_normal((n, n))
        A1 = rng.standard_normal((n, n))
        X = rng.standard_normal((n, n))
        tau = float(rng.uniform(0.2, 2.0))
        res = exact_propagate(A0, A1, X, tau)
        bound = 2.0 * np.exp(tau * (spectral_norm(A0) + spectral_norm(A1))) * frobenius(X)
        ratio = max(frobenius(res.Z1_end), frobenius(res.Z2_end)) / bound
        worst = max(worst, ratio)
        ok = ok and ratio <= 1.0
    return _check("propagated-norm-bound", ok, f"max ratio to bound = {worst:.3f}")


def check_generator_norm(rng, count):
    ok = True
    for _ in range(count):
        n = int(rng.integers(2, 6))
        A0 = rng.standard_normal((n, n))
        A1 = rng.standard_normal((n, n))
        lhs = spectral_norm(coupled_generator(A0, A1))
        rhs = 2.0 * (spectral_norm(A0) + spectral_norm(A1))
        ok = ok and lhs <= rhs * (1.0 + 1e-8)
    return _check("generator-norm-bound", ok, "||generator|| <= 2(||A0|| + ||A1||)")


def check_operator_symmetry_split(rng, count):
    worst = 0.0
    for _ in range(count):
        p = random_stable_problem(int(rng.integers(2, 6)), rng)
        X = rng.standard_normal((p.n, p.n))
        c = 1.0
        ode = OdeConfig(steps=60)
        Lc = apply_operator(OperatorContext(problem=p, shift=c, ode=ode), X)
        L0 = _apply_shiftless(p, X, ode)
        K = (Lc - L0) / c
        scale = max(frobenius(Lc), 1.0)
        worst = max(worst, frobenius(L0 - L0.T) / scale, frobenius(K + K.T) / scale)
    return _check("operator-symmetric-antisymmetric-split", worst <= 1e-12,
                  f"max split defect = {worst:.2e}")


def _apply_shiftless(problem, X, ode):
    res = rk4_propagate(problem.A0, problem.A1, X, problem.tau, ode)
    Z1, Z2 = res.Z1_end, res.Z2_end
    A0, A1 = problem.A0, problem.A1
    return Z2.T @ A0 + A0.T @ Z2 + Z1.T @ A1 + A1.T @ Z1


def check_precond_roundtrip(rng, count):
    worst = 0.0
    for _ in range(count):
        p = random_stable_problem(int(rng.integers(2, 7)), rng)
        factors = build_preconditioner(p.A0, shift=1.0, tau=p.tau)
        Z = rng.standard_normal((p.n, p.n))
        X = apply_preconditioner(factors, Z)
        back = _tilde_apply(p.A0, 1.0, p.tau, X)
        worst = max(worst, frobenius(back - Z) / max(frobenius(Z), 1e-300))
    return _check("precond-inverts-decoupled-operator", worst <= 1e-8,
                  f"max round-trip defect = {worst:.2e}")


def _tilde_apply(A0, c, tau, X):
    n = A0.shape[0]
    Z2 = X @ expm(-0.5 * tau * A0)
    I = np.eye(n)
    return Z2.T @ (A0 - c * I) + (A0.T + c * I) @ Z2


def check_precond_norm_bound(rng, count):
    ok = True
    worst = 0.0
    for _ in range(count):
        p = random_stable_problem(int(rng.integers(2, 6)), rng)
        factors = build_preconditioner(p.A0, shift=1.0, tau=p.tau)
        K = _tsylv_inverse_norm(p.A0, 1.0)
        bound = K * np.exp(0.5 * p.tau * spectral_norm(p.A0))
        Z = rng.standard_normal((p.n, p.n))
        ratio = frobenius(apply_preconditioner(factors, Z)) / (bound * frobenius(Z))
        worst = max(worst, ratio)
        ok = ok and ratio <= 1.0 + 1e-8
    return _check("precond-apply-norm-bound", ok, f"max ratio to bound = {worst:.3f}")


def _tsylv_inverse_norm(A0, c):
    n = A0.shape[0]
    I = np.eye(n)
    P = commutation_matrix(n)
    T = kron(I, A0.T + c * I) + kron((A0 - c * I).T, I) @ P
    return spectral_norm(np.linalg.inv(T))


def check_gmres_dense_agreement(rng, count):
    worst = 0.0
    for _ in range(count):
        p = random_stable_problem(int(rng.integers(2, 6)), rng)
        ode = OdeConfig(steps=80)
        ctx = OperatorContext(problem=p, shift=1.0, ode=ode)
        factors = build_preconditioner(p.A0, shift=1.0, tau=p.tau)
        report = gmres(lambda X: apply_operator(ctx, X), -p.W,
                       precond=lambda Z: apply_preconditioner(factors, Z),
                       cfg=KrylovConfig(tol=1e-12, maxit=p.n * p.n))
        dense = assemble_operator(ctx)
        X_direct = unvec(lu_solve(dense, -vec(p.W)), p.n)
        worst = max(worst, frobenius(report.X - X_direct) / max(frobenius(X_direct), 1e-300))
    return _check("gmres-vs-dense-solve", worst <= 1e-8, f"max rel diff = {worst:.2e}")


def check_tau_zero_reduction(rng, count):
    worst = 0.0
    for _ in range(count):
        p0 = random_stable_problem(int(rng.integers(2, 6)), rng)
        p = TdsProblem(A0=p0.A0, A1=p0.A1, tau=0.0, W=p0.W)
        report = solve_delay_lyapunov(p, ode=OdeConfig(steps=1),
                                      krylov=KrylovConfig(tol=1e-13, maxit=p.n * p.n))
        S = p.A0 + p.A1
        n = p.n
        K = kron(np.eye(n), S.T) + kron(S.T, np.eye(n))
        U = unvec(lu_solve(K, -vec(p.W)), n)
        worst = max(worst, frobenius(report.X - U) / max(frobenius(U), 1e-300))
    return _check("tau-zero-lyapunov-reduction", worst <= 1e-8, f"max rel diff = {worst:.2e}")


def run_checks(quick=False, seed=0):
    """Run the battery; returns a list of CheckResult."""
    rng = np.random.default_rng(seed)
    k = 4 if quick else 20
    battery = [
        check_expm_group(rng, k),
        check_vec_kron(rng, k),
        check_tsylv_routes(rng, 2 * k),
        check_tsylv_shift_independence(rng, k),
        check_propagation_order(rng, max(2, k // 4)),
        check_propagation_bound(rng, k),
        check_generator_norm(rng, max(2, k // 2)),
        check_operator_symmetry_split(rng, k),
        check_precond_roundtrip(rng, k),
        check_precond_norm_bound(rng, max(2, k // 2)),
        check_gmres_dense_agreement(rng, max(2, k // 4)),
        check_tau_zero_reduction(rng, max(2, k // 4)),
    ]
    return battery
