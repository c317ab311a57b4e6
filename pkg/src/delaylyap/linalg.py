"""Dense linear-algebra kernels shared by every other module.

Real matrices are float64 ndarrays, complex ones complex128; the
column-stacking convention vec(AXB) = (B^T (x) A) vec(X) is used throughout.
"""

import numpy as np
import scipy.linalg

from .errors import SolverError

KRON_MAX_DIM = 16384

_PADE13 = (
    64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
    1187353796428800.0, 129060195264000.0, 10559470521600.0,
    670442572800.0, 33522128640.0, 1323241920.0,
    40840800.0, 960960.0, 16380.0, 182.0, 1.0,
)


def _require_square(A, name="matrix"):
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"{name} must be square, got shape {A.shape}")
    return A


def vec(X):
    """Column-stacking vectorization of a matrix."""
    return np.asarray(X).flatten(order="F")


def unvec(x, rows=None):
    """Inverse of :func:`vec`; square by default."""
    x = np.asarray(x)
    if rows is None:
        rows = int(round(np.sqrt(x.size)))
        if rows * rows != x.size:
            raise ValueError(f"cannot unvec length {x.size} into a square matrix")
    return x.reshape((rows, x.size // rows), order="F")


def kron(A, B, max_dim=KRON_MAX_DIM):
    """Kronecker product with a size guard.

    Follows vec(AXB) = (B^T (x) A) vec(X).
    """
    A = np.asarray(A)
    B = np.asarray(B)
    if A.shape[0] * B.shape[0] > max_dim or A.shape[1] * B.shape[1] > max_dim:
        raise SolverError(
            "kron-too-large",
            f"result of shape {A.shape[0]*B.shape[0]}x{A.shape[1]*B.shape[1]} "
            f"exceeds the cap {max_dim}",
        )
    return np.kron(A, B)


def commutation_matrix(n):
    """Permutation P of size n^2 x n^2 with P vec(X) = vec(X^T)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    P = np.zeros((n * n, n * n))
    for i in range(n):
        for j in range(n):
            P[j + i * n, i + j * n] = 1.0
    return P


def expm(A):
    """Matrix exponential by scaling-and-squaring.

    Uses the degree-13 diagonal Pade approximant with squaring count
    ceil(log2(||A||_1 / 5.4)) floored at zero.

    Raises
    ------
    SolverError
        ``"exp-overflow"`` when the result is not finite.
    """
    A = _require_square(A, "expm input")
    n = A.shape[0]
    dtype = complex if np.iscomplexobj(A) else float
    A = A.astype(dtype, copy=True)
    I = np.eye(n, dtype=dtype)
    norm1 = np.abs(A).sum(axis=0).max() if n else 0.0
    if not np.isfinite(norm1):
        raise SolverError("exp-overflow", "input matrix has non-finite 1-norm")

    s = 0
    if norm1 > 5.4:
        s = int(np.ceil(np.log2(norm1 / 5.4)))
    A /= 2.0 ** s

    b = _PADE13
    A2 = A @ A
    A4 = A2 @ A2
    A6 = A2 @ A4
    U = A @ (A6 @ (b[13] * A6 + b[11] * A4 + b[9] * A2)
             + b[7] * A6 + b[5] * A4 + b[3] * A2 + b[1] * I)
    V = (A6 @ (b[12] * A6 + b[10] * A4 + b[8] * A2)
         + b[6] * A6 + b[4] * A4 + b[2] * A2 + b[0] * I)
    E = scipy.linalg.solve(V - U, V + U)
    for _ in range(s):
        E = E @ E
    if not np.all(np.isfinite(E)):
        raise SolverError("exp-overflow", f"exp overflowed for ||A||_1 = {norm1:.3g}")
    return E


def lu_solve(A, B):
    """Solve A X = B by partially pivoted LU.

    Raises
    ------
    SolverError
        ``"singular-matrix"`` when A is singular to working precision.
    """
    A = _require_square(A, "lu_solve matrix")
    B = np.asarray(B)
    try:
        lu, piv = scipy.linalg.lu_factor(A)
    except (scipy.linalg.LinAlgError, ValueError) as exc:
        raise SolverError("singular-matrix", str(exc)) from exc
    d = np.abs(np.diag(lu))
    if d.size and d.min() <= A.shape[0] * np.finfo(float).eps * max(d.max(), 1e-300):
        raise SolverError(
            "singular-matrix",
            f"pivot ratio {d.min():.3g}/{d.max():.3g} below working precision",
        )
    return scipy.linalg.lu_solve((lu, piv), B)


def complex_schur(A):
    """Complex Schur decomposition A = Q R Q* with R upper triangular.

    Backed by LAPACK (Hessenberg reduction followed by shifted QR with
    deflation).  Returns complex arrays for real input.
    """
    A = _require_square(A, "schur input")
    try:
        R, Q = scipy.linalg.schur(A.astype(complex), output="complex")
    except scipy.linalg.LinAlgError as exc:
        raise SolverError("schur-no-convergence", str(exc)) from exc
    return Q, R


def eigenvalues(A):
    """Eigenvalues of A as the diagonal of its complex Schur form."""
    _, R = complex_schur(A)
    return np.diag(R).copy()


def generalized_schur_pencil(M, NT):
    """Unitary reduction of the pencil M - lambda*NT to triangular form.

    Returns (Q, Z, TM, TN) with Q* M Z = TM and Q* NT Z = TN, both upper
    triangular; pencil eigenvalues are TM[i,i]/TN[i,i].  Implemented by the
    reduction route: Schur of NT^{-1} M supplies Z, a QR factorization of
    NT Z supplies Q and TN.  Requires NT invertible.

    Raises
    ------
    SolverError
        ``"pencil-reduction-failed"`` when NT is numerically singular or the
        reduction loses triangularity.
    """
    M = _require_square(M, "pencil M")
    NT = _require_square(NT, "pencil NT")
    if M.shape != NT.shape:
        raise ValueError("pencil matrices must have matching shapes")
    try:
        S = lu_solve(NT, M)
    except SolverError as exc:
        raise SolverError("pencil-reduction-failed", f"NT is singular ({exc})") from exc
    Z, _ = complex_schur(S)
    Q, TN = scipy.linalg.qr(NT.astype(complex) @ Z)
    TM = Q.conj().T @ M @ Z
    scale = np.abs(TM).max()
    lower = np.abs(np.tril(TM, -1)).max() if TM.shape[0] > 1 else 0.0
    if scale > 0 and lower > 1e-10 * scale:
        raise SolverError(
            "pencil-reduction-failed",
            f"reduced pencil not triangular (defect {lower/scale:.3g})",
        )
    TM = np.triu(TM)
    TN = np.triu(TN)
    return Q, Z, TM, TN


def pencil_eigenvalues(M, NT):
    """Eigenvalues of the pencil M - lambda*NT (NT invertible)."""
    _, _, TM, TN = generalized_schur_pencil(M, NT)
    return np.diag(TM) / np.diag(TN)


def spectral_norm(A, tol=1e-8, maxit=10000):
    """2-norm via power iteration on A*A with a deterministic start."""
    A = np.asarray(A)
    if A.size == 0:
        return 0.0
    n = A.shape[1]
    v = np.ones(n) / np.sqrt(n)
    if np.iscomplexobj(A):
        v = v.astype(complex)
    est = 0.0
    for _ in range(maxit):
        w = A.conj().T @ (A @ v)
        nw = np.linalg.norm(w)
        if nw == 0.0:
            return 0.0
        new = np.sqrt(nw)
        v = w / nw
        if abs(new - est) <= tol * max(new, 1.0):
            return new
        est = new
    return est


def frobenius(A):
    return float(np.linalg.norm(np.asarray(A), "fro"))


def require_real(A, rel_tol=1e-9, code="tsylv-residual-fail"):
    """Truncate a numerically real complex matrix to float64.

    Raises ``SolverError(code)`` when the imaginary part exceeds
    ``rel_tol`` relative to the real part.
    """
    A = np.asarray(A)
    if not np.iscomplexobj(A):
        return A.astype(float)
    re = np.linalg.norm(A.real, "fro")
    im = np.linalg.norm(A.imag, "fro")
    if im > rel_tol * max(re, 1e-300):
        raise SolverError(code, f"imaginary part {im:.3g} vs real norm {re:.3g}")
    return np.ascontiguousarray(A.real)
