"""Propagation of the coupled matrix initial-value problem.

Starting from Z1(0) = Z2(0) = X, the pair evolves on [0, tau/2] under

    Z1' =  Z1 A0 + Z2^T A1,
    Z2' = -Z1^T A1 - Z2 A0,

and only the terminal values are needed by the linear operator.  A fixed-step
RK4 scheme is the scalable path (each step is the same linear map of the
state, so the discretized operator stays linear); the dense exponential of
the vectorized generator serves as a small-size oracle.
"""

from dataclasses import dataclass

import numpy as np

from .errors import SolverError
from .linalg import expm, kron, unvec, vec

EXACT_MAX_N = 12


@dataclass(frozen=True)
class OdeConfig:
    """Fixed-step integrator configuration: ``steps`` uniform RK4 steps on [0, tau/2]."""

    steps: int = 500
    scheme: str = "rk4"

    def __post_init__(self):
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.scheme != "rk4":
            raise ValueError(f"unknown scheme {self.scheme!r}")


@dataclass(frozen=True)
class PropagationResult:
    """Terminal values of the coupled pair at t = tau/2."""

    Z1_end: np.ndarray
    Z2_end: np.ndarray


def coupled_rhs(Z1, Z2, A0, A1):
    """Right-hand side (Z1 A0 + Z2^T A1, -Z1^T A1 - Z2 A0)."""
    if Z1.shape != Z2.shape or Z1.shape != A0.shape or A0.shape != A1.shape:
        raise ValueError("all matrices must share one square shape")
    return Z1 @ A0 + Z2.T @ A1, -(Z1.T @ A1) - Z2 @ A0


def rk4_propagate(A0, A1, X, tau, cfg=None):
    """Propagate Z1, Z2 from the common initial value X to t = tau/2.

    Classic four-stage Runge-Kutta with step h = (tau/2)/steps.  The map
    X -> (Z1_end, Z2_end) is linear, since every stage applies the same
    fixed linear map.  tau = 0 is accepted and returns (X, X).
    """
    cfg = cfg or OdeConfig()
    X = np.asarray(X, dtype=float)
    if tau < 0:
        raise ValueError("tau must be >= 0")
    if tau == 0.0:
        return PropagationResult(X.copy(), X.copy())
    Z1, Z2 = _rk4_course(A0, A1, X, tau, cfg.steps)
    return PropagationResult(Z1, Z2)


def _rk4_course(A0, A1, X, tau, steps, keep=None):
    """Run the RK4 sweep; optionally record the states at given step indices.

    ``keep`` is a collection of step indices in [0, steps]; when present the
    recorded states are returned as {index: (Z1, Z2)} alongside the terminal
    pair.
    """
    h = (0.5 * tau) / steps
    Z1 = np.array(X, dtype=float, copy=True)
    Z2 = Z1.copy()
    snapshots = {} if keep is not None else None
    if keep is not None and 0 in keep:
        snapshots[0] = (Z1.copy(), Z2.copy())
    for k in range(steps):
        k1a, k1b = coupled_rhs(Z1, Z2, A0, A1)
        k2a, k2b = coupled_rhs(Z1 + (0.5 * h) * k1a, Z2 + (0.5 * h) * k1b, A0, A1)
        k3a, k3b = coupled_rhs(Z1 + (0.5 * h) * k2a, Z2 + (0.5 * h) * k2b, A0, A1)
        k4a, k4b = coupled_rhs(Z1 + h * k3a, Z2 + h * k3b, A0, A1)
        Z1 += (h / 6.0) * (k1a + 2.0 * (k2a + k3a) + k4a)
        Z2 += (h / 6.0) * (k1b + 2.0 * (k2b + k3b) + k4b)
        if keep is not None and (k + 1) in keep:
            snapshots[k + 1] = (Z1.copy(), Z2.copy())
    if keep is not None:
        return Z1, Z2, snapshots
    return Z1, Z2


def coupled_generator(A0, A1):
    """The 2n^2 x 2n^2 generator of the vectorized coupled system.

    Acts on [vec Z1; vec Z2^T] with blocks
    [[A0^T (x) I, A1^T (x) I], [-I (x) A1^T, -I (x) A0^T]].
    """
    n = A0.shape[0]
    I = np.eye(n)
    top = np.hstack([kron(A0.T, I), kron(A1.T, I)])
    bot = np.hstack([-kron(I, A1.T), -kron(I, A0.T)])
    return np.vstack([top, bot])


def exact_propagate(A0, A1, X, tau, max_n=EXACT_MAX_N):
    """Terminal pair via the dense exponential of the vectorized generator.

    Exact up to the matrix exponential; intended as an oracle for small n
    since the generator is 2n^2 x 2n^2.

    Raises
    ------
    SolverError
        ``"oracle-too-large"`` when n exceeds ``max_n``.
    """
    A0 = np.asarray(A0, dtype=float)
    X = np.asarray(X, dtype=float)
    n = A0.shape[0]
    if n > max_n:
        raise SolverError("oracle-too-large", f"n={n} exceeds the dense cap {max_n}")
    if tau < 0:
        raise ValueError("tau must be >= 0")
    G = coupled_generator(A0, A1)
    state = np.concatenate([vec(X), vec(X.T)])
    out = expm((0.5 * tau) * G) @ state
    Z1 = unvec(out[: n * n], n)
    Z2 = unvec(out[n * n:], n).T
    return PropagationResult(Z1, Z2)
