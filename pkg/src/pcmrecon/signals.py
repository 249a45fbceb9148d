"""Test signals with closed-form Fourier transforms.

Every signal lives on the processing domain ``[0, 1)`` (``[0, 1)^2`` in 2D);
parts of a formula outside that domain are cut off, so the clean Fourier
data are the exact transforms of what the Haar system can see.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .grid import Grid1D, Grid2D, vec
from .haar import indicator_fourier

__all__ = [
    "PiecewiseLinear",
    "pwconst1d",
    "pwlinear1d",
    "TwoSquares",
    "twosquares2d",
    "gen_pwconst1d",
    "gen_pwlinear1d",
    "gen_twosquares2d",
    "gen_phantom2d",
    "segment_fourier",
]


def _odd_kernel(theta: np.ndarray) -> np.ndarray:
    """``(cos t - sin t / t) / t``, with its Taylor series near 0."""
    theta = np.asarray(theta, dtype=float)
    out = np.empty_like(theta)
    small = np.abs(theta) < 1e-3
    t = theta[small]
    out[small] = -t / 3 + t**3 / 30
    t = theta[~small]
    out[~small] = (np.cos(t) - np.sin(t) / t) / t
    return out


def segment_fourier(a: float, b: float, slope: float, intercept: float, w) -> np.ndarray:
    """Fourier transform of ``(slope x + intercept) 1_[a,b)(x)``."""
    w = np.asarray(w, dtype=float)
    mid = 0.5 * (a + b)
    half = 0.5 * (b - a)
    const = (slope * mid + intercept) * indicator_fourier(a, b, w)
    theta = 2 * np.pi * w * half
    lin = slope * np.exp(-2j * np.pi * w * mid) * (2j * half * half) * _odd_kernel(theta)
    return const + lin


@dataclass(frozen=True)
class PiecewiseLinear:
    """Sum of linear pieces ``(a, b, slope, intercept)`` on half-open intervals."""

    name: str
    pieces: tuple[tuple[float, float, float, float], ...]

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for a, b, s, q in self.pieces:
            sel = (x >= a) & (x < b)
            out[sel] = s * x[sel] + q
        return out

    def fourier(self, w) -> np.ndarray:
        w = np.asarray(w, dtype=float)
        out = np.zeros(w.shape, dtype=complex)
        for a, b, s, q in self.pieces:
            out += segment_fourier(a, b, s, q, w)
        return out

    def on_grid(self, grid: Grid1D) -> np.ndarray:
        return self(grid.nodes)


def _clip_to_unit(pieces):
    out = []
    for a, b, s, q in pieces:
        a, b = max(a, 0.0), min(b, 1.0)
        if a < b:
            out.append((a, b, s, q))
    return tuple(out)


pwconst1d = PiecewiseLinear(
    "pwconst1d",
    _clip_to_unit([
        (-1 / 8, 1 / 4, 0.0, -0.5),
        (1 / 4, 1 / 2, 0.0, 1.0),
        (1 / 2, 5 / 8, 0.0, -1.0),
        (5 / 8, 3 / 4, 0.0, 0.5),
    ]),
)

pwlinear1d = PiecewiseLinear(
    "pwlinear1d",
    _clip_to_unit([
        (1 / 16, 1 / 8, 0.0, 1.0),
        (1 / 8, 1 / 4, 0.0, -0.5),
        (1 / 4, 1 / 2, 0.0, 1.0),
        (1 / 2, 7 / 8, -8 / 3, 7 / 3),
    ]),
)


@dataclass(frozen=True)
class TwoSquares:
    """Indicator of a union of disjoint squares, half-open ``[lo, hi)^2`` on the grid."""

    squares: tuple[tuple[float, float], ...] = ((0.25, 0.5), (0.61, 0.83))
    name: str = "twosquares2d"

    def __call__(self, x, y) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        y = np.asarray(y, dtype=float)
        out = np.zeros(np.broadcast(x, y).shape)
        for lo, hi in self.squares:
            out[(x >= lo) & (x < hi) & (y >= lo) & (y < hi)] = 1.0
        return out

    def fourier(self, wx, wy) -> np.ndarray:
        wx = np.asarray(wx, dtype=float)
        wy = np.asarray(wy, dtype=float)
        return sum(indicator_fourier(lo, hi, wx) * indicator_fourier(lo, hi, wy) for lo, hi in self.squares)

    def fourier_tensor(self, wx, wy) -> np.ndarray:
        """Samples on the tensor grid ``wx x wy`` in measurement (``vec``) order."""
        wx = np.asarray(wx, dtype=float)
        wy = np.asarray(wy, dtype=float)
        mat = sum(np.outer(indicator_fourier(lo, hi, wx), indicator_fourier(lo, hi, wy))
                  for lo, hi in self.squares)
        return vec(mat)

    def on_grid(self, grid: Grid2D) -> np.ndarray:
        X, Y = grid.nodes
        return self(X, Y)


twosquares2d = TwoSquares()


def gen_pwconst1d(grid: Grid1D) -> np.ndarray:
    return pwconst1d.on_grid(grid)


def gen_pwlinear1d(grid: Grid1D) -> np.ndarray:
    return pwlinear1d.on_grid(grid)


def gen_twosquares2d(grid: Grid2D) -> np.ndarray:
    return twosquares2d.on_grid(grid)


def gen_phantom2d(grid: Grid2D) -> np.ndarray:
    """Brain-like phantom: a smooth textured body with a few sharp inclusions.

    The body is a flat-topped bump that tapers to zero well inside the
    border, modulated by a gentle sinusoidal texture; a bright ellipse and a
    dark disc add sharp edges. Values lie in ``[0, 1]``.
    """
    X, Y = grid.nodes
    body = np.exp(-((((X - 0.5) / 0.28) ** 2 + ((Y - 0.5) / 0.32) ** 2) ** 2))
    img = 0.6 * body + 0.25 * body * np.sin(6 * X) * np.cos(5 * Y)
    img = np.where(((X - 0.6) / 0.09) ** 2 + ((Y - 0.42) / 0.12) ** 2 < 1, img + 0.3, img)
    img = np.where((X - 0.36) ** 2 + (Y - 0.36) ** 2 < 0.06**2, img - 0.3, img)
    return img
