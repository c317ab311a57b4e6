"""Matrix Market exchange in the dense "array" format.

All matrices cross the process boundary as ``array real general`` or
``array complex general`` files; values are written with enough digits to
round-trip float64 exactly.
"""

import numpy as np
import scipy.io

from .errors import SolverError


def write_matrix(path, A, comment=""):
    """Write a dense matrix as a Matrix Market array file."""
    A = np.asarray(A)
    if A.ndim == 1:
        A = A.reshape(-1, 1)
    if A.ndim != 2:
        raise ValueError(f"expected a matrix, got array of ndim {A.ndim}")
    if not np.all(np.isfinite(A)):
        raise SolverError("matrix-not-finite", f"refusing to write non-finite entries to {path}")
    field = "complex" if np.iscomplexobj(A) else "real"
    scipy.io.mmwrite(str(path), A, comment=comment, field=field,
                     precision=17, symmetry="general")


def read_matrix(path):
    """Read a Matrix Market file into a dense ndarray.

    Raises
    ------
    SolverError
        ``"matrix-not-finite"`` when the file carries NaN or Inf entries.
    """
    A = scipy.io.mmread(str(path))
    if hasattr(A, "todense"):
        A = np.asarray(A.todense())
    A = np.asarray(A)
    if not np.all(np.isfinite(A)):
        raise SolverError("matrix-not-finite", f"{path} contains NaN/Inf entries")
    if np.iscomplexobj(A) and np.allclose(A.imag, 0.0, atol=0.0):
        A = A.real
    return A
