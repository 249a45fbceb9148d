"""Riemann-Liouville fractional difference matrices and their 2D lifts.

The 1D operators are ``n x n`` triangular strip (Toeplitz) matrices scaled by
``n``: ``L`` carries ``w_0, w_1, ...`` on and above the diagonal, ``R`` is its
transpose, and the central operator is ``(L + (-1)**p R) / 2`` with
``p = ceil(alpha)``. Homogeneous Dirichlet boundaries are implied; inputs are
not padded.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp

from .errors import ShapeError

__all__ = [
    "FracCoefficients",
    "FracDiffOperator",
    "frac_coeffs",
    "build_operator",
    "lift_2d",
    "DEFAULT_TRUNCATION",
]

DEFAULT_TRUNCATION = 1e-8
_KEEP_ALWAYS = 5  # w_0..w_4 are never truncated


@dataclass(frozen=True, eq=False)
class FracCoefficients:
    alpha: float
    w: np.ndarray
    truncation_tol: float
    n_requested: int

    @property
    def stored_length(self) -> int:
        return self.w.size


def frac_coeffs(alpha: float, n: int, tol: float = DEFAULT_TRUNCATION) -> FracCoefficients:
    """Coefficients ``w_j = (-1)^j binom(alpha, j)`` for ``j = 0..n`` by recurrence.

    The tail is cut at the first ``j >= 5`` with ``|w_j| < tol`` (``tol = 0``
    keeps everything).
    """
    if not alpha > 0:
        raise ValueError(f"alpha must be positive, got {alpha}")
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    if tol < 0:
        raise ValueError("tol must be >= 0")
    w = np.empty(n + 1)
    w[0] = 1.0
    for j in range(1, n + 1):
        w[j] = (1.0 - (1.0 + alpha) / j) * w[j - 1]
    if tol > 0:
        small = np.flatnonzero(np.abs(w[_KEEP_ALWAYS:]) < tol)
        if small.size:
            w = w[: _KEEP_ALWAYS + small[0]]
    w.setflags(write=False)
    return FracCoefficients(float(alpha), w, float(tol), int(n))


def central_sign(alpha: float) -> int:
    """``(-1)**p`` with ``alpha in (p-1, p]``."""
    return -1 if math.ceil(alpha) % 2 else 1


@dataclass(frozen=True, eq=False)
class FracDiffOperator:
    """A (possibly lifted) fractional difference operator.

    ``matrix`` is the full sparse matrix acting on flat vectors. For lifted
    operators ``base`` holds the 1D matrix and :meth:`apply` works on the
    ``(n, n)`` image directly, which avoids the Kronecker product's ``n^3``
    nonzeros in the hot loop.
    """

    kind: str
    alpha: float
    n: int
    direction: str
    base: sp.csr_matrix

    @property
    def matrix(self) -> sp.csr_matrix:
        if self.direction == "1d":
            return self.base
        eye = sp.identity(self.n, format="csr")
        if self.direction == "x":
            return sp.kron(eye, self.base, format="csr")
        return sp.kron(self.base, eye, format="csr")

    @property
    def shape(self) -> tuple[int, int]:
        size = self.n if self.direction == "1d" else self.n * self.n
        return (size, size)

    def apply(self, u: np.ndarray) -> np.ndarray:
        """Apply to a field of shape ``(n,)`` (1D) or ``(n, n)`` (lifted)."""
        if self.direction == "1d":
            return self.base @ u
        if self.direction == "x":
            return self.base @ u
        return (self.base @ u.T).T

    def apply_adjoint(self, v: np.ndarray) -> np.ndarray:
        bt = self.base.T
        if self.direction in ("1d", "x"):
            return bt @ v
        return (bt @ v.T).T

    def dense_base(self) -> np.ndarray:
        return self.base.toarray()


def _strip_matrices(alpha: float, n: int, tol: float) -> tuple[sp.csr_matrix, sp.csr_matrix]:
    w = frac_coeffs(alpha, n, tol).w[:n]
    # L: upper strip, L[i, i + j] = n w_j
    offsets = list(range(w.size))
    diags = [np.full(n - j, n * w[j]) for j in offsets]
    upper = sp.diags(diags, offsets, shape=(n, n), format="csr")
    lower = sp.diags(diags, [-j for j in offsets], shape=(n, n), format="csr")
    upper.eliminate_zeros()
    lower.eliminate_zeros()
    return upper, lower


def build_operator(kind: str, alpha: float, n: int, tol: float = DEFAULT_TRUNCATION) -> FracDiffOperator:
    """``kind`` is ``"left"``, ``"right"`` or ``"central"``."""
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    left, right = _strip_matrices(alpha, n, tol)
    if kind == "left":
        mat = left
    elif kind == "right":
        mat = right
    elif kind == "central":
        mat = ((left + central_sign(alpha) * right) * 0.5).tocsr()
    else:
        raise ValueError(f"unknown operator kind {kind!r}")
    return FracDiffOperator(kind, float(alpha), int(n), "1d", mat)


def lift_2d(op: FracDiffOperator, direction: str, side: int | None = None) -> FracDiffOperator:
    """Lift a 1D operator to ``n x n`` images: x gives ``I kron op``, y gives ``op kron I``."""
    if op.direction != "1d":
        raise ValueError("operator is already lifted")
    if direction not in ("x", "y"):
        raise ValueError(f"direction must be 'x' or 'y', got {direction!r}")
    if side is not None and side != op.n:
        raise ShapeError(f"operator size {op.n} does not match image side {side}")
    return FracDiffOperator(op.kind, op.alpha, op.n, direction, op.base)
