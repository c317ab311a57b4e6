"""Direct solution of the real T-Sylvester equation M X + X^T N = C.

Two routes are provided: a Kronecker-vectorized dense solve (the reference
oracle, O(n^6)) and a Schur-reduction solver (O(n^3)) that triangularizes the
pencil M - lambda N^T once and back-substitutes unknowns in (i, j)/(j, i)
pairs.  The pairwise substitution is cross-validated against the oracle in
the test suite rather than assumed correct.
"""

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .errors import SolverError
from .linalg import (
    commutation_matrix,
    eigenvalues,
    frobenius,
    generalized_schur_pencil,
    kron,
    lu_solve,
    require_real,
    unvec,
    vec,
)

KRON_MAX_N = 60
PAIR_DET_RTOL = 1e-12


@dataclass(frozen=True)
class TsylvPencil:
    """Triangularized pencil M - lambda N^T with its eigenvalues.

    Q, Z are unitary with Q* M Z = TM and Q* N^T Z = TN upper triangular;
    mu[i] = TM[i,i]/TN[i,i].  The factors are immutable and safe to reuse
    across many right-hand sides.
    """

    M: np.ndarray
    N: np.ndarray
    Q: np.ndarray
    Z: np.ndarray
    TM: np.ndarray
    TN: np.ndarray
    mu: np.ndarray


def factor_pencil(M, N):
    """Factor the pencil M - lambda N^T for repeated T-Sylvester solves."""
    M = np.asarray(M, dtype=float)
    N = np.asarray(N, dtype=float)
    Q, Z, TM, TN = generalized_schur_pencil(M, N.T)
    mu = np.diag(TM) / np.diag(TN)
    return TsylvPencil(M=M, N=N, Q=Q, Z=Z, TM=TM, TN=TN, mu=mu)


def _check_pair_determinants(TM, TN):
    """Guard the 2x2 pair systems [[TM_ii, TN_jj], [TN_ii, TM_jj]].

    Off-diagonal pairs are singular when TM_ii TM_jj = TN_ii TN_jj; the
    diagonal (i = j) unknown is solved by the scalar pivot TM_ii + TN_ii.
    """
    dM = np.diag(TM)
    dN = np.diag(TN)
    det = np.abs(np.outer(dM, dM) - np.outer(dN, dN))
    scale = np.maximum(np.abs(np.outer(dM, dM)), np.abs(np.outer(dN, dN)))
    off = ~np.eye(len(dM), dtype=bool)
    bad = det[off] < PAIR_DET_RTOL * np.maximum(scale[off], 1e-300)
    if np.any(bad):
        raise SolverError(
            "tsylv-near-singular",
            f"{int(bad.sum())} eigenvalue pair(s) with mu_i*mu_j ~ 1",
        )
    piv = np.abs(dM + dN)
    bad_diag = piv < PAIR_DET_RTOL * np.maximum(np.maximum(np.abs(dM), np.abs(dN)), 1e-300)
    if np.any(bad_diag):
        raise SolverError(
            "tsylv-near-singular",
            f"{int(bad_diag.sum())} diagonal pivot(s) TM_ii + TN_ii ~ 0",
        )


def _solve_reduced(TM, TN, C):
    """Solve TM Y + Y^T TN^T = C with TM, TN upper triangular.

    Sweeps index groups m = n-1 .. 0.  Within a group the diagonal unknown
    comes from the scalar equation, and the pair unknowns (Y[i,m], Y[m,i])
    come from the 2x2 systems [[TM_ii, TN_mm], [TN_ii, TM_mm]]; all pairs of
    a group are solved at once by eliminating one unknown with the larger of
    the two pivots and solving the remaining triangular system.
    """
    n = TM.shape[0]
    Y = np.zeros((n, n), dtype=complex)
    for m in range(n - 1, -1, -1):
        Y[m, m] = (C[m, m] - (TM[m, m + 1:] + TN[m, m + 1:]) @ Y[m + 1:, m]) \
            / (TM[m, m] + TN[m, m])
        if m == 0:
            break
        r1 = C[0:m, m] - TM[0:m, m:] @ Y[m:, m] - TN[m, m + 1:] @ Y[m + 1:, 0:m]
        r2 = C[m, 0:m] - TN[0:m, m:] @ Y[m:, m] - TM[m, m + 1:] @ Y[m + 1:, 0:m]
        TMs = TM[0:m, 0:m]
        TNs = TN[0:m, 0:m]
        tm = TM[m, m]
        tn = TN[m, m]
        if abs(tn) >= abs(tm):
            g = tm / tn
            u = scipy.linalg.solve_triangular(TNs - g * TMs, r2 - g * r1, lower=False)
            v = (r1 - TMs @ u) / tn
        else:
            g = tn / tm
            u = scipy.linalg.solve_triangular(TMs - g * TNs, r1 - g * r2, lower=False)
            v = (r2 - TNs @ u) / tm
        Y[0:m, m] = u
        Y[m, 0:m] = v
    return Y


def solve_with_factors(pencil, C):
    """Solve M X + X^T N = C reusing a factored pencil; returns complex X."""
    _check_pair_determinants(pencil.TM, pencil.TN)
    Ct = pencil.Q.conj().T @ C @ pencil.Q.conj()
    Y = _solve_reduced(pencil.TM, pencil.TN, Ct)
    return pencil.Z @ Y @ pencil.Q.T


def tsylv_solve(M, N, C):
    """Solve the real T-Sylvester equation by the Schur-reduction route.

    Parameters
    ----------
    M, N, C : (n, n) real arrays.

    Returns
    -------
    X : (n, n) float array with ``M X + X^T N = C`` to a relative residual
        of 1e-8.

    Raises
    ------
    SolverError
        ``"tsylv-near-singular"`` when an eigenvalue pair makes a 2x2 block
        numerically singular, ``"tsylv-residual-fail"`` when the computed
        solution fails the defining-equation check.
    """
    M = np.asarray(M, dtype=float)
    N = np.asarray(N, dtype=float)
    C = np.asarray(C, dtype=float)
    pencil = factor_pencil(M, N)
    X = require_real(solve_with_factors(pencil, C))
    res = frobenius(M @ X + X.T @ N - C)
    if res > 1e-8 * max(frobenius(C), 1e-300):
        raise SolverError(
            "tsylv-residual-fail",
            f"relative residual {res / max(frobenius(C), 1e-300):.3g}",
        )
    return X


def tsylv_solve_kron(M, N, C, max_n=KRON_MAX_N):
    """Reference solve through the n^2 x n^2 Kronecker system.

    Vectorizes the equation as (I (x) M + (N^T (x) I) P) vec X = vec C with
    P the commutation matrix.
    """
    M = np.asarray(M, dtype=float)
    N = np.asarray(N, dtype=float)
    C = np.asarray(C, dtype=float)
    n = M.shape[0]
    if n > max_n:
        raise ValueError(f"n={n} exceeds the dense oracle cap {max_n}")
    P = commutation_matrix(n)
    K = kron(np.eye(n), M) + kron(N.T, np.eye(n)) @ P
    try:
        x = lu_solve(K, vec(C))
    except SolverError as exc:
        raise SolverError("tsylv-singular", str(exc)) from exc
    return unvec(x, n)


def _pencil_mu(M, N):
    """Pencil eigenvalues of M - lambda N^T, with inf for the degree drop.

    Falls back to the reversed pencil when N^T is singular; a pencil with
    both matrices singular is reported as unresolvable.
    """
    try:
        pencil = factor_pencil(M, N)
        return pencil.mu
    except SolverError:
        pass
    Q, Z, TS, TMr = generalized_schur_pencil(N.T, M)  # sigma = 1/mu
    sigma = np.diag(TS) / np.diag(TMr)
    mu = np.full(len(sigma), np.inf + 0j, dtype=complex)
    nz = np.abs(sigma) > 0
    mu[nz] = 1.0 / sigma[nz]
    return mu


def tsylv_solvable(M, N, tol=None):
    """Unique-solvability predicate for M X + X^T N = C.

    True iff every eigenvalue pair of the pencil M - lambda N^T keeps
    |mu_i conj(mu_j) - 1| > tol; an infinite eigenvalue violates the
    condition only when paired with a zero one.
    """
    mu = _pencil_mu(np.asarray(M, dtype=float), np.asarray(N, dtype=float))
    finite = np.isfinite(mu)
    if tol is None:
        biggest = np.abs(mu[finite]).max() if finite.any() else 0.0
        tol = 1e-10 * (1.0 + biggest ** 2)
    mf = mu[finite]
    if mf.size:
        prod = np.abs(np.outer(mf, mf.conj()) - 1.0)
        if prod.min() <= tol:
            return False
    if (~finite).any() and mf.size and np.any(np.abs(mf) <= tol):
        return False
    return True


def has_no_hamiltonian_pairing(A0, tol=None):
    """True iff no eigenvalue pair of A0 satisfies lambda_i + conj(lambda_j) = 0.

    This is exactly the (shift-independent) solvability condition of the
    T-Sylvester equation with M = A0^T + cI, N = A0 - cI; it holds in
    particular whenever every eigenvalue of A0 has negative real part.
    """
    A0 = np.asarray(A0, dtype=float)
    lam = eigenvalues(A0)
    if tol is None:
        tol = 1e-10 * (1.0 + float(np.abs(lam).max(initial=0.0)))
    s = np.abs(lam[:, None] + lam[None, :].conj())
    return bool(s.min() > tol)
