"""The shifted linear operator whose solution is the delay Lyapunov matrix
at the half-delay, together with dense assembly, reconstruction of the full
solution curve, and the boundary-value residuals of the original equation.
"""

from dataclasses import dataclass, field

import numpy as np

from .linalg import frobenius, unvec, vec
from .propagation import OdeConfig, _rk4_course, rk4_propagate

ASSEMBLE_MAX_N = 20


@dataclass(frozen=True)
class TdsProblem:
    """Single-delay time-delay system data (A0, A1, tau, W), optionally B0, C0.

    W is the symmetric cost matrix of the associated delay Lyapunov equation.
    tau = 0 is accepted and means zero-length propagation, which reduces the
    equation to the standard Lyapunov equation for A0 + A1.
    """

    A0: np.ndarray
    A1: np.ndarray
    tau: float
    W: np.ndarray
    B0: np.ndarray = None
    C0: np.ndarray = None

    def __post_init__(self):
        A0 = np.asarray(self.A0, dtype=float)
        A1 = np.asarray(self.A1, dtype=float)
        W = np.asarray(self.W, dtype=float)
        n = A0.shape[0]
        for name, M in (("A0", A0), ("A1", A1), ("W", W)):
            if M.ndim != 2 or M.shape != (n, n):
                raise ValueError(f"{name} must be {n}x{n}, got {M.shape}")
            if not np.all(np.isfinite(M)):
                raise ValueError(f"{name} has non-finite entries")
        if self.tau < 0:
            raise ValueError("tau must be >= 0")
        defect = frobenius(W - W.T)
        if defect > 1e-12 * max(frobenius(W), 1e-300):
            raise ValueError(f"W must be symmetric; defect {defect:.3g}")
        if self.B0 is not None and np.asarray(self.B0).shape[0] != n:
            raise ValueError("B0 must have n rows")
        if self.C0 is not None and np.asarray(self.C0).shape[1] != n:
            raise ValueError("C0 must have n columns")
        object.__setattr__(self, "A0", A0)
        object.__setattr__(self, "A1", A1)
        object.__setattr__(self, "W", W)

    @property
    def n(self):
        return self.A0.shape[0]


@dataclass(frozen=True)
class OperatorContext:
    """Problem plus the nonzero shift and integrator settings that fix the
    realized (discretized) linear operator."""

    problem: TdsProblem
    shift: float = 1.0
    ode: OdeConfig = field(default_factory=OdeConfig)

    def __post_init__(self):
        if self.shift == 0.0:
            raise ValueError("shift must be nonzero")


def apply_operator(ctx, X):
    """Apply the shifted delay Lyapunov operator to X.

    Propagates the coupled pair from X and evaluates

        Z2^T (A0 - cI) + (A0^T + cI) Z2 + Z1^T A1 + A1^T Z1

    at t = tau/2.  With fixed-step propagation the realized operator is
    linear in X.
    """
    p = ctx.problem
    X = np.asarray(X, dtype=float)
    if X.shape != (p.n, p.n):
        raise ValueError(f"X must be {p.n}x{p.n}, got {X.shape}")
    res = rk4_propagate(p.A0, p.A1, X, p.tau, ctx.ode)
    return _combine(p.A0, p.A1, ctx.shift, res.Z1_end, res.Z2_end)


def _combine(A0, A1, c, Z1, Z2):
    n = A0.shape[0]
    I = np.eye(n)
    return Z2.T @ (A0 - c * I) + (A0.T + c * I) @ Z2 + Z1.T @ A1 + A1.T @ Z1


def assemble_operator(ctx, max_n=ASSEMBLE_MAX_N):
    """Dense n^2 x n^2 matrix of the operator in the vec basis.

    Column j is vec(apply(E_j)) for the j-th unit matrix, so the assembled
    matrix A satisfies A vec(X) = vec(apply(X)) for every X.
    """
    n = ctx.problem.n
    if n > max_n:
        raise ValueError(f"n={n} exceeds the dense-assembly cap {max_n}")
    cols = np.empty((n * n, n * n))
    for j in range(n * n):
        e = np.zeros(n * n)
        e[j] = 1.0
        cols[:, j] = vec(apply_operator(ctx, unvec(e, n)))
    return cols


def reconstruct_solution(ctx, X, samples):
    """Sample the delay Lyapunov matrix on a uniform grid of [-tau, tau].

    X must be the converged midpoint value; the curve is read off the stored
    propagation states (sample times are forced onto the RK4 grid) as

        U(t) = Z2(tau/2 - t)   for 0 <= t < tau/2,
        U(t) = Z1(t - tau/2)   for tau/2 <= t <= tau,
        U(t) = U(-t)^T         for t < 0.

    Returns a list of (t, U(t)) pairs in increasing t order.
    """
    if samples < 3:
        raise ValueError("samples must be >= 3")
    p = ctx.problem
    X = np.asarray(X, dtype=float)
    ts = np.linspace(-p.tau, p.tau, samples)
    if p.tau == 0.0:
        return [(0.0, X.copy()) for _ in ts]

    steps = ctx.ode.steps
    h = (0.5 * p.tau) / steps

    def step_index(t):
        s = (0.5 * p.tau - t) if t < 0.5 * p.tau else (t - 0.5 * p.tau)
        return min(steps, max(0, int(round(s / h))))

    needed = {step_index(abs(t)) for t in ts}
    _, _, snaps = _rk4_course(p.A0, p.A1, X, p.tau, steps, keep=needed)

    out = []
    for t in ts:
        ta = abs(t)
        j = step_index(ta)
        Z1, Z2 = snaps[j]
        U = Z2 if ta < 0.5 * p.tau else Z1
        out.append((float(t), U.T.copy() if t < 0 else U.copy()))
    return out


def boundary_residuals(problem, U0, Utau):
    """Relative algebraic residual and symmetry defect of the boundary values.

    r_alg = ||W + U0 A0 + A0^T U0 + Utau^T A1 + A1^T Utau||_F / ||W||_F
    r_sym = ||U0 - U0^T||_F / max(1, ||U0||_F)
    """
    A0, A1, W = problem.A0, problem.A1, problem.W
    R = W + U0 @ A0 + A0.T @ U0 + Utau.T @ A1 + A1.T @ Utau
    r_alg = frobenius(R) / max(frobenius(W), 1e-300)
    r_sym = frobenius(U0 - U0.T) / max(1.0, frobenius(U0))
    return r_alg, r_sym
