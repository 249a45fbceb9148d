"""Proximal maps and the conjugate gradient solvers shared by all drivers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import SolverError

__all__ = [
    "CgSettings",
    "CgResult",
    "prox_l1",
    "shrink",
    "prox_quadratic",
    "conjugate_gradient",
    "cg_least_squares",
]


@dataclass(frozen=True)
class CgSettings:
    rel_tol: float = 1e-10
    max_iters: int = 5000

    def __post_init__(self):
        if not self.rel_tol > 0:
            raise ValueError("rel_tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


@dataclass(frozen=True, eq=False)
class CgResult:
    x: np.ndarray
    iterations: int
    residual: float  # relative residual ||b - M x|| / ||b||


def prox_l1(v: np.ndarray, lam: float) -> np.ndarray:
    """Soft thresholding, the prox of ``lam * ||.||_1``."""
    if lam < 0:
        raise ValueError("lambda must be nonnegative")
    v = np.asarray(v, dtype=float)
    return np.sign(v) * np.maximum(np.abs(v) - lam, 0.0)


def shrink(x, alpha):
    """Scalar or elementwise soft shrinkage; same law as :func:`prox_l1`."""
    out = np.sign(x) * np.maximum(np.abs(x) - alpha, 0.0)
    return float(out) if np.ndim(out) == 0 else out


def conjugate_gradient(
    apply: Callable[[np.ndarray], np.ndarray],
    rhs: np.ndarray,
    x0: np.ndarray | None = None,
    settings: CgSettings = CgSettings(),
    callback: Callable[[np.ndarray], None] | None = None,
) -> CgResult:
    """Solve ``M x = rhs`` for a symmetric positive (semi)definite ``M``.

    Stops when ``||rhs - M x|| <= rel_tol * ||rhs||``. Raises
    :class:`SolverError` if that is not reached within ``max_iters``.
    """
    rhs = np.asarray(rhs, dtype=float)
    bnorm = np.linalg.norm(rhs)
    if bnorm == 0:
        return CgResult(np.zeros_like(rhs), 0, 0.0)
    x = np.zeros_like(rhs) if x0 is None else np.array(x0, dtype=float)
    r = rhs - apply(x) if x0 is not None else rhs.copy()
    rr = float(r.ravel() @ r.ravel())
    tol = settings.rel_tol * bnorm
    if np.sqrt(rr) <= tol:
        return CgResult(x, 0, np.sqrt(rr) / bnorm)
    p = r.copy()
    for it in range(1, settings.max_iters + 1):
        q = apply(p)
        pq = float(p.ravel() @ q.ravel())
        if not pq > 0:
            if not np.isfinite(pq):
                raise SolverError("non-finite curvature in CG", np.sqrt(rr) / bnorm, it)
            # direction in the null space of a semidefinite M: current x is a solution
            break
        step = rr / pq
        x += step * p
        r -= step * q
        rr_new = float(r.ravel() @ r.ravel())
        if callback is not None:
            callback(x)
        if np.sqrt(rr_new) <= tol:
            return CgResult(x, it, np.sqrt(rr_new) / bnorm)
        p = r + (rr_new / rr) * p
        rr = rr_new
    res = np.sqrt(rr) / bnorm
    if res <= settings.rel_tol:
        return CgResult(x, it, res)
    raise SolverError(
        f"CG did not reach rel_tol={settings.rel_tol:g} in {settings.max_iters} iterations "
        f"(residual {res:.3e})",
        res,
        settings.max_iters,
    )


def prox_quadratic(v: np.ndarray, A: np.ndarray, lam: float, settings: CgSettings = CgSettings()) -> np.ndarray:
    """Prox of ``c^T A c`` as in the trust-region form: solve ``(A + I/lam) x = v/lam``."""
    if not lam > 0:
        raise ValueError("lambda must be positive")
    v = np.asarray(v, dtype=float)
    A = np.asarray(A, dtype=float)
    return conjugate_gradient(lambda x: A @ x + x / lam, v / lam, settings=settings).x


class _DenseOperator:
    def __init__(self, matrix):
        self.matrix = np.asarray(matrix)
        self.shape = self.matrix.shape

    def matvec(self, c):
        return self.matrix @ c

    def real_rmatvec(self, y):
        return (self.matrix.conj().T @ y).real

    def normal_matvec(self, c):
        return (self.matrix.conj().T @ (self.matrix @ c)).real


def _as_operator(A):
    return A if hasattr(A, "normal_matvec") else _DenseOperator(A)


def cg_least_squares(A, b: np.ndarray, settings: CgSettings = CgSettings(), callback=None) -> np.ndarray:
    """Real minimiser of ``||A c - b||_2`` via CG on ``Re(A^H A) c = Re(A^H b)``.

    ``A`` is a dense (complex) matrix or any object with ``normal_matvec``
    and ``real_rmatvec`` (e.g. :class:`pcmrecon.haar.ForwardOperator`).
    """
    op = _as_operator(A)
    rhs = op.real_rmatvec(np.asarray(b))
    return conjugate_gradient(op.normal_matvec, rhs, settings=settings, callback=callback).x
