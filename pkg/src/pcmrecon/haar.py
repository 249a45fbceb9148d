"""Finite Haar systems on [0, 1) and [0, 1)^2 and the analytic forward operator.

Basis ordering (1D, ``n = 2**levels``): index 0 is the scaling function
``1_[0,1)``; index ``2**j + k`` is ``psi_{j,k}(x) = 2**(j/2) psi(2**j x - k)``
for ``0 <= j < levels`` and ``0 <= k < 2**j``.

The 2D system is the tensor product. Its coefficients are stored as an
``(n, n)`` array ``C[p, q]`` multiplying ``phi_p(x) phi_q(y)``; the flat
coefficient vector is ``vec(C)`` (column-major, see :mod:`pcmrecon.grid`).

Fourier transforms use ``F f(w) = int f(x) exp(-2 pi i w x) dx`` and are
evaluated in closed form, so the forward operator carries no quadrature or
FFT discretisation error.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import ResolutionError, ShapeError
from .grid import Grid1D, Grid2D, unvec, vec

__all__ = [
    "HaarBasis",
    "ForwardOperator",
    "indicator_fourier",
    "fourier_of_basis",
    "synthesis_matrix",
    "synthesize",
    "analyze",
    "assemble_forward",
    "SynthesisOperator",
]


@dataclass(frozen=True)
class HaarBasis:
    """Haar system with ``levels`` refinement levels in ``ndim`` dimensions."""

    levels: int
    ndim: int = 1

    def __post_init__(self):
        if self.levels < 0:
            raise ValueError("levels must be >= 0")
        if self.ndim not in (1, 2):
            raise ValueError("only 1D and 2D Haar systems are supported")

    @classmethod
    def of_size(cls, n: int, ndim: int = 1) -> "HaarBasis":
        """Basis with ``n`` functions per axis (``n`` a power of two)."""
        levels = int(round(np.log2(n)))
        if 2**levels != n:
            raise ValueError(f"basis size must be a power of two, got {n}")
        return cls(levels, ndim)

    @property
    def n(self) -> int:
        """Number of basis functions per axis."""
        return 2**self.levels

    @property
    def dim(self) -> int:
        return self.n**self.ndim

    @property
    def kind(self) -> str:
        return f"haar{self.ndim}d"

    @property
    def finest_scale(self) -> float:
        return 1.0 / self.n

    def coefficient_shape(self) -> tuple[int, ...]:
        return (self.n,) * self.ndim

    def supports(self):
        """Yield ``(index, pieces)`` for each 1D function, pieces ``(a, b, height)``."""
        yield 0, ((0.0, 1.0, 1.0),)
        for j in range(self.levels):
            h = 2.0 ** (j / 2)
            width = 2.0**-j
            for k in range(2**j):
                a = k * width
                mid = a + width / 2
                yield 2**j + k, ((a, mid, h), (mid, a + width, -h))


def indicator_fourier(a, b, w) -> np.ndarray:
    """Closed-form Fourier transform of ``1_[a,b)`` at frequencies ``w``.

    Written as ``exp(-i pi w (a+b)) (b-a) sinc(w (b-a))``, which is the
    textbook ``(e^{-2 pi i w a} - e^{-2 pi i w b}) / (2 pi i w)`` without the
    cancellation near ``w = 0`` (where it equals ``b - a``).
    """
    w = np.asarray(w, dtype=float)
    length = b - a
    return np.exp(-1j * np.pi * w * (a + b)) * (length * np.sinc(w * length))


def _fourier_matrix_1d(basis: HaarBasis, w: np.ndarray) -> np.ndarray:
    w = np.atleast_1d(np.asarray(w, dtype=float))
    out = np.zeros((w.size, basis.n), dtype=complex)
    for idx, pieces in basis.supports():
        for a, b, h in pieces:
            out[:, idx] += h * indicator_fourier(a, b, w)
    return out


def fourier_of_basis(basis: HaarBasis, w) -> np.ndarray:
    """Fourier transforms of every basis function at one frequency.

    ``w`` is a scalar in 1D and a pair ``(wx, wy)`` in 2D. The 2D result is
    ordered like ``vec(C)``.
    """
    if basis.ndim == 1:
        return _fourier_matrix_1d(basis, [float(w)])[0]
    wx, wy = w
    fx = _fourier_matrix_1d(basis, [float(wx)])[0]
    fy = _fourier_matrix_1d(basis, [float(wy)])[0]
    return np.kron(fy, fx)


def synthesis_matrix(basis: HaarBasis, grid: Grid1D) -> np.ndarray:
    """Matrix ``Phi`` with ``Phi[i, j] = phi_j(x_i)`` on a 1D grid."""
    if grid.spacing > basis.finest_scale * (1 + 1e-12):
        raise ResolutionError(
            f"grid spacing {grid.spacing} is coarser than the finest Haar scale {basis.finest_scale}"
        )
    x = grid.nodes
    out = np.zeros((x.size, basis.n))
    for idx, pieces in basis.supports():
        for a, b, h in pieces:
            out[(x >= a) & (x < b), idx] += h
    return out


def _grid_axis(grid) -> Grid1D:
    return grid.axis if isinstance(grid, Grid2D) else grid


def synthesize(basis: HaarBasis, c: np.ndarray, grid) -> np.ndarray:
    """Evaluate ``sum_j c_j phi_j`` at the grid nodes."""
    c = np.asarray(c, dtype=float)
    if c.size != basis.dim:
        raise ShapeError(f"expected {basis.dim} coefficients, got {c.size}")
    if basis.ndim != grid.ndim:
        raise ShapeError("basis and grid dimensions differ")
    phi = synthesis_matrix(basis, _grid_axis(grid))
    if basis.ndim == 1:
        return phi @ c.ravel()
    coeffs = c.reshape(basis.coefficient_shape()) if c.ndim == 2 else unvec(c, basis.n)
    return phi @ coeffs @ phi.T


def analyze(basis: HaarBasis, values: np.ndarray, grid) -> np.ndarray:
    """L2 inner products with the basis, treating ``values`` as cell averages.

    Each node value is taken constant on ``[x_i, x_i + h)``; for grids whose
    cells nest inside the finest Haar cells this is exact, and
    ``synthesize(analyze(f))`` reproduces any ``f`` lying in the span.
    Returns a flat coefficient vector (``vec`` ordering in 2D).
    """
    values = np.asarray(values, dtype=float)
    axis = _grid_axis(grid)
    phi = synthesis_matrix(basis, axis)
    h = axis.spacing
    if basis.ndim == 1:
        return h * (phi.T @ values)
    return vec(h * h * (phi.T @ values @ phi))


class SynthesisOperator:
    """Linear map from flat coefficients to grid values, with its adjoint."""

    def __init__(self, basis: HaarBasis, grid):
        if basis.ndim != grid.ndim:
            raise ShapeError("basis and grid dimensions differ")
        self.basis = basis
        self.grid = grid
        self.phi = synthesis_matrix(basis, _grid_axis(grid))

    @property
    def field_shape(self) -> tuple[int, ...]:
        return self.grid.shape

    def __call__(self, c: np.ndarray) -> np.ndarray:
        if self.basis.ndim == 1:
            return self.phi @ c
        return self.phi @ unvec(c, self.basis.n) @ self.phi.T

    def adjoint(self, values: np.ndarray) -> np.ndarray:
        if self.basis.ndim == 1:
            return self.phi.T @ values
        return vec(self.phi.T @ values @ self.phi)


class ForwardOperator:
    """Composite sampling-Fourier-synthesis map ``A = S F Phi``.

    In 1D ``A`` is stored densely (``m x n``). In 2D the frequencies form a
    tensor grid ``wx x wy`` and ``A = A_y kron A_x`` is kept as its two 1D
    factors; :meth:`to_dense` materialises it for small problems.
    Measurement vectors in 2D are ordered column-major over ``(kx, ky)``.
    """

    def __init__(self, basis: HaarBasis, frequencies):
        self.basis = basis
        if basis.ndim == 1:
            w = np.asarray(frequencies, dtype=float).ravel()
            if w.size == 0:
                raise ValueError("need at least one frequency")
            self.frequencies = (w,)
        else:
            wx, wy = (np.asarray(f, dtype=float).ravel() for f in frequencies)
            if wx.size == 0 or wy.size == 0:
                raise ValueError("need at least one frequency per axis")
            self.frequencies = (wx, wy)
        self.factors = tuple(_fourier_matrix_1d(basis, w) for w in self.frequencies)
        for f in self.factors:
            f.setflags(write=False)

    @property
    def shape(self) -> tuple[int, int]:
        m = int(np.prod([w.size for w in self.frequencies]))
        return (m, self.basis.dim)

    @property
    def ndim(self) -> int:
        return self.basis.ndim

    @cached_property
    def _grams(self):
        # per-axis A_i^H A_i; the 2D normal matrix is Re(G_y kron G_x)
        return tuple(f.conj().T @ f for f in self.factors)

    def matvec(self, c: np.ndarray) -> np.ndarray:
        c = np.asarray(c)
        if c.size != self.shape[1]:
            raise ShapeError(f"expected {self.shape[1]} coefficients, got {c.size}")
        if self.ndim == 1:
            return self.factors[0] @ c.ravel()
        ax, ay = self.factors
        return vec(ax @ unvec(c, self.basis.n) @ ay.T)

    def rmatvec(self, y: np.ndarray) -> np.ndarray:
        """Adjoint ``A^H y`` (complex)."""
        y = np.asarray(y)
        if y.size != self.shape[0]:
            raise ShapeError(f"expected {self.shape[0]} samples, got {y.size}")
        if self.ndim == 1:
            return self.factors[0].conj().T @ y.ravel()
        ax, ay = self.factors
        Y = y.reshape((ax.shape[0], ay.shape[0]), order="F")
        return vec(ax.conj().T @ Y @ ay.conj())

    def real_rmatvec(self, y: np.ndarray) -> np.ndarray:
        """``Re(A^H y)``, the gradient direction for real coefficients."""
        return self.rmatvec(y).real

    def normal_matvec(self, c: np.ndarray) -> np.ndarray:
        """``Re(A^H A) c`` for real ``c`` without forming ``A^H A`` in 2D."""
        c = np.asarray(c, dtype=float)
        if self.ndim == 1:
            return (self._grams[0] @ c.ravel()).real
        gx, gy = self._grams
        C = unvec(c, self.basis.n)
        return vec((gx @ C @ gy.T).real)

    def normal_matrix(self) -> np.ndarray:
        """Dense ``Re(A^H A)``; only sensible for moderate basis sizes."""
        if self.ndim == 1:
            return self._grams[0].real.copy()
        gx, gy = self._grams
        return np.kron(gy, gx).real

    def to_dense(self) -> np.ndarray:
        if self.ndim == 1:
            return np.array(self.factors[0])
        ax, ay = self.factors
        return np.kron(ay, ax)

    def opnorm_sq(self) -> float:
        """Squared spectral norm ``||A||^2`` (exact via the per-axis Gram matrices)."""
        norms = [np.linalg.eigvalsh(g).max() for g in self._grams]
        return float(np.prod(norms))


def assemble_forward(basis: HaarBasis, frequencies) -> ForwardOperator:
    """Build ``S F Phi`` for the given frequencies (an array in 1D, ``(wx, wy)`` in 2D)."""
    return ForwardOperator(basis, frequencies)
