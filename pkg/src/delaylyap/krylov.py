"""Matrix-free iterative solvers on the space of n x n matrices.

Both solvers work with the trace (Frobenius) inner product, take the operator
and optional left preconditioner as callables on matrices, start from the
zero initial guess, and report the relative preconditioned residual history.
GMRES is full (non-restarted) with modified Gram-Schmidt orthogonalization
and Givens-rotation least-squares updates.
"""

import time
from dataclasses import dataclass, field

import numpy as np
import scipy.linalg

from .errors import SolverError

_TINY = 1e-300


@dataclass(frozen=True)
class KrylovConfig:
    """Iterative-solver settings.

    ``maxit=None`` lets the caller default to n^2, the dimension bound of
    the matrix space.
    """

    method: str = "gmres"
    tol: float = 1e-12
    maxit: int = None
    left_precond: bool = True

    def __post_init__(self):
        if not 0.0 < self.tol < 1.0:
            raise ValueError("tol must lie in (0, 1)")
        if self.maxit is not None and self.maxit < 1:
            raise ValueError("maxit must be >= 1")
        if self.method not in ("gmres", "bicgstab"):
            raise ValueError(f"unknown method {self.method!r}")


@dataclass
class SolveTimings:
    setup_seconds: float = 0.0
    apply_seconds: float = 0.0
    precond_seconds: float = 0.0
    total_seconds: float = 0.0


@dataclass
class SolveReport:
    """Outcome of one iterative solve.

    ``residual_history`` has one entry per iteration plus the initial 1.0;
    for GMRES it is non-increasing.  The boundary-value residuals are filled
    in by the solver driver, not by the Krylov kernels.
    """

    X: np.ndarray
    residual_history: list
    iterations: int
    converged: bool
    method: str
    timings: SolveTimings = field(default_factory=SolveTimings)
    r_alg: float = None
    r_sym: float = None
    refinement_passes: int = 0
    refinement_iterations: int = 0
    basis: list = None


def _wrap(op, precond, shape, timings):
    """Flatten matrix callables to vector callables, accumulating wall time."""

    def operator(v):
        t0 = time.perf_counter()
        out = op(v.reshape(shape))
        timings.apply_seconds += time.perf_counter() - t0
        return np.asarray(out).ravel()

    if precond is None:
        return operator, lambda v: v

    def preconditioner(v):
        t0 = time.perf_counter()
        out = precond(v.reshape(shape))
        timings.precond_seconds += time.perf_counter() - t0
        return np.asarray(out).ravel()

    return operator, preconditioner


def gmres(op, b, precond=None, cfg=None, collect_basis=False):
    """Full GMRES for op(X) = b over n x n matrices.

    Parameters
    ----------
    op : callable
        Linear map on n x n matrices.
    b : (n, n) array
        Nonzero right-hand side.
    precond : callable, optional
        Left preconditioner applied to the operator output and to b;
        convergence is measured in the preconditioned residual norm.
    cfg : KrylovConfig
    collect_basis : bool
        Keep the Arnoldi basis on the report (diagnostics only).

    Raises
    ------
    SolverError
        ``"krylov-breakdown"`` when an Arnoldi vector vanishes while the
        residual is still above tolerance (a vanishing vector at tolerance is
        the happy breakdown and returns the exact solution).
    """
    cfg = cfg or KrylovConfig()
    b = np.asarray(b, dtype=float)
    shape = b.shape
    maxit = cfg.maxit or b.size
    timings = SolveTimings()
    t_start = time.perf_counter()
    operator, preconditioner = _wrap(op, precond, shape, timings)

    r0 = preconditioner(b.ravel().copy())
    beta = np.linalg.norm(r0)
    if beta == 0.0:
        raise ValueError("right-hand side is zero")

    V = [r0 / beta]
    H = np.zeros((maxit + 1, maxit))
    cs = np.zeros(maxit)
    sn = np.zeros(maxit)
    g = np.zeros(maxit + 1)
    g[0] = beta
    history = [1.0]
    iterations = maxit
    converged = False

    for j in range(maxit):
        w = preconditioner(operator(V[j]))
        for i in range(j + 1):
            H[i, j] = V[i] @ w
            w -= H[i, j] * V[i]
        h_new = np.linalg.norm(w)
        H[j + 1, j] = h_new
        for i in range(j):
            t = cs[i] * H[i, j] + sn[i] * H[i + 1, j]
            H[i + 1, j] = -sn[i] * H[i, j] + cs[i] * H[i + 1, j]
            H[i, j] = t
        d = np.hypot(H[j, j], H[j + 1, j])
        cs[j] = H[j, j] / d
        sn[j] = H[j + 1, j] / d
        H[j, j] = d
        H[j + 1, j] = 0.0
        g[j + 1] = -sn[j] * g[j]
        g[j] = cs[j] * g[j]
        relres = abs(g[j + 1]) / beta
        history.append(relres)
        if relres <= cfg.tol:
            iterations = j + 1
            converged = True
            break
        if h_new <= _TINY:
            raise SolverError(
                "krylov-breakdown",
                f"Arnoldi vector vanished at iteration {j + 1} "
                f"with residual {relres:.3g} above tolerance",
            )
        V.append(w / h_new)
    else:
        iterations = maxit

    m = iterations
    y = scipy.linalg.solve_triangular(H[:m, :m], g[:m], lower=False)
    x = V[0] * y[0]
    for i in range(1, m):
        x += y[i] * V[i]
    timings.total_seconds = time.perf_counter() - t_start
    return SolveReport(
        X=x.reshape(shape),
        residual_history=history,
        iterations=iterations,
        converged=converged,
        method="gmres",
        timings=timings,
        basis=[v.reshape(shape) for v in V] if collect_basis else None,
    )


def bicgstab(op, b, precond=None, cfg=None):
    """BiCGStab for op(X) = b over n x n matrices.

    Same calling convention as :func:`gmres`.  The stabilization parameters
    breaking down (rho or omega vanishing) raises ``"bicgstab-breakdown"``.
    """
    cfg = cfg or KrylovConfig(method="bicgstab")
    b = np.asarray(b, dtype=float)
    shape = b.shape
    maxit = cfg.maxit or b.size
    timings = SolveTimings()
    t_start = time.perf_counter()
    operator, preconditioner = _wrap(op, precond, shape, timings)

    def K(v):
        return preconditioner(operator(v))

    r = preconditioner(b.ravel().copy())
    nb = np.linalg.norm(r)
    if nb == 0.0:
        raise ValueError("right-hand side is zero")
    x = np.zeros_like(r)
    r_shadow = r.copy()
    rho = 1.0
    alpha = 1.0
    omega = 1.0
    v = np.zeros_like(r)
    p = np.zeros_like(r)
    history = [1.0]
    converged = False
    iterations = 0

    for j in range(1, maxit + 1):
        rho_new = r_shadow @ r
        if abs(rho_new) <= _TINY or abs(omega) <= _TINY:
            raise SolverError(
                "bicgstab-breakdown",
                f"rho={rho_new:.3g}, omega={omega:.3g} at iteration {j}",
            )
        if j == 1:
            p = r.copy()
        else:
            beta = (rho_new / rho) * (alpha / omega)
            p = r + beta * (p - omega * v)
        rho = rho_new
        v = K(p)
        denom = r_shadow @ v
        if abs(denom) <= _TINY:
            raise SolverError("bicgstab-breakdown", f"<r0, v> = {denom:.3g} at iteration {j}")
        alpha = rho / denom
        s = r - alpha * v
        iterations = j
        if np.linalg.norm(s) / nb <= cfg.tol:
            x += alpha * p
            history.append(np.linalg.norm(s) / nb)
            converged = True
            break
        t = K(s)
        tt = t @ t
        if tt <= _TINY:
            raise SolverError("bicgstab-breakdown", f"||t|| = 0 at iteration {j}")
        omega = (t @ s) / tt
        x += alpha * p + omega * s
        r = s - omega * t
        relres = np.linalg.norm(r) / nb
        history.append(relres)
        if relres <= cfg.tol:
            converged = True
            break

    timings.total_seconds = time.perf_counter() - t_start
    return SolveReport(
        X=x.reshape(shape),
        residual_history=history,
        iterations=iterations,
        converged=converged,
        method="bicgstab",
        timings=timings,
    )
