"""Preconditioner that inverts the zero-coupling part of the operator.

Dropping A1 from the operator leaves a map that factors exactly into a
T-Sylvester solve followed by a matrix exponential:

    Ltilde(X) = T(X exp(-tau A0 / 2)),   T(Y) = (A0^T + cI) Y + Y^T (A0 - cI),

so its inverse is one cached triangular T-Sylvester solve and one
multiplication by exp(tau A0 / 2) per application.  The factorization is
computed once (O(n^3)) and amortized across all Krylov iterations.
"""

from dataclasses import dataclass

import numpy as np

from .errors import SolverError
from .linalg import eigenvalues, expm, frobenius, require_real, unvec, vec
from .operators import apply_operator, assemble_operator
from .tsylv import TsylvPencil, factor_pencil, has_no_hamiltonian_pairing, solve_with_factors


@dataclass(frozen=True)
class PrecondFactors:
    """Cached factorization enabling cheap repeated preconditioner solves."""

    pencil: TsylvPencil
    exp_forward: np.ndarray  # expm(tau * A0 / 2)
    shift: float
    tau: float


def build_preconditioner(A0, shift=1.0, tau=1.0):
    """Factor the preconditioner for the given system matrix, shift and delay.

    Raises
    ------
    SolverError
        ``"precond-unsolvable"`` when A0 has a Hamiltonian eigenpairing (the
        T-Sylvester step would be singular for every shift);
        ``"precond-shift-degenerate"`` when the shift collides with an
        eigenvalue of A0, which breaks the pencil reduction (the caller may
        perturb the shift and retry).
    """
    A0 = np.asarray(A0, dtype=float)
    if shift == 0.0:
        raise ValueError("shift must be nonzero")
    n = A0.shape[0]
    lam = eigenvalues(A0)
    if not has_no_hamiltonian_pairing(A0):
        raise SolverError(
            "precond-unsolvable",
            "A0 has a Hamiltonian eigenpairing: lambda_i + conj(lambda_j) = 0",
        )
    scale = max(1.0, float(np.abs(lam).max(initial=0.0)))
    if np.abs(lam - shift).min() <= 1e-10 * scale:
        raise SolverError(
            "precond-shift-degenerate",
            f"shift {shift} collides with an eigenvalue of A0",
        )
    I = np.eye(n)
    try:
        pencil = factor_pencil(A0.T + shift * I, A0 - shift * I)
    except SolverError as exc:
        raise SolverError("precond-shift-degenerate", str(exc)) from exc
    return PrecondFactors(
        pencil=pencil,
        exp_forward=expm((0.5 * tau) * A0),
        shift=float(shift),
        tau=float(tau),
    )


def apply_preconditioner(factors, Z):
    """Apply the inverse of the zero-coupling operator to Z.

    One pairwise triangular substitution with the cached factors, then the
    multiplication by exp(tau A0 / 2); no refactorization takes place.
    """
    Y = require_real(solve_with_factors(factors.pencil, np.asarray(Z, dtype=float)))
    return Y @ factors.exp_forward


def preconditioner_quality(ctx, factors, trials=20, seed=0):
    """Largest observed deviation of the preconditioned operator from identity.

    Returns max over random unit-Frobenius X of
    ||apply_preconditioner(apply_operator(X)) - X||_F, a lower bound on the
    operator-norm deviation of the preconditioned system from the identity.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    rng = np.random.default_rng(seed)
    n = ctx.problem.n
    worst = 0.0
    for _ in range(trials):
        X = rng.standard_normal((n, n))
        X /= frobenius(X)
        dev = apply_preconditioner(factors, apply_operator(ctx, X)) - X
        worst = max(worst, frobenius(dev))
    return worst


def preconditioned_spectrum(ctx, factors, max_n=None):
    """Eigenvalues of the preconditioned operator, assembled densely.

    Builds the n^2 x n^2 matrix of X -> apply_preconditioner(apply_operator(X))
    column by column and returns its eigenvalue multiset (sorted by real part,
    then imaginary, for reproducible output).
    """
    kwargs = {} if max_n is None else {"max_n": max_n}
    n = ctx.problem.n
    A = assemble_operator(ctx, **kwargs)
    PA = np.empty_like(A)
    for j in range(n * n):
        PA[:, j] = vec(apply_preconditioner(factors, unvec(A[:, j], n)))
    ev = np.linalg.eigvals(PA)
    order = np.lexsort((ev.imag, ev.real))
    return ev[order]
