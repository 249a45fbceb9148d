"""Discrete grids, masks and the masking primitives used by every solver.

Fields are plain numpy arrays. A 1D field is a vector of length ``n``; a 2D
field is an ``(n, n)`` array indexed ``[ix, iy]`` (axis 0 is the x direction).
When a 2D field has to be flattened, :func:`vec` stacks it column-major, so
that the x direction varies fastest. With this ordering the Kronecker
identities

    (I_n kron C) vec(U) = vec(C @ U)        (x direction)
    (C kron I_n) vec(U) = vec(U @ C.T)      (y direction)

hold literally. Masks are full-size 0/1 arrays aligned with the field.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ShapeError

__all__ = [
    "Grid1D",
    "Grid2D",
    "vec",
    "unvec",
    "restrict",
    "complement",
    "as_mask",
]


@dataclass(frozen=True)
class Grid1D:
    """Equispaced nodes ``x_i = a + (i - 1)(b - a)/n`` for ``i = 1..n``."""

    n_points: int
    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"need a < b, got a={self.a}, b={self.b}")
        if int(self.n_points) != self.n_points or self.n_points < 2:
            raise ValueError(f"n_points must be an integer >= 2, got {self.n_points}")

    @property
    def spacing(self) -> float:
        return (self.b - self.a) / self.n_points

    @property
    def nodes(self) -> np.ndarray:
        return self.a + np.arange(self.n_points) * (self.b - self.a) / self.n_points

    @property
    def shape(self) -> tuple[int]:
        return (self.n_points,)

    @property
    def size(self) -> int:
        return self.n_points

    @property
    def ndim(self) -> int:
        return 1


@dataclass(frozen=True)
class Grid2D:
    """Square ``side x side`` pixel grid on ``[a, b]^2`` (unit square by default)."""

    side: int
    a: float = 0.0
    b: float = 1.0

    def __post_init__(self):
        if not self.a < self.b:
            raise ValueError(f"need a < b, got a={self.a}, b={self.b}")
        if int(self.side) != self.side or self.side < 2:
            raise ValueError(f"side must be an integer >= 2, got {self.side}")

    @property
    def axis(self) -> Grid1D:
        return Grid1D(self.side, self.a, self.b)

    @property
    def spacing(self) -> float:
        return (self.b - self.a) / self.side

    @property
    def nodes(self) -> tuple[np.ndarray, np.ndarray]:
        """Coordinate arrays ``(X, Y)`` of shape ``(side, side)``, indexed ``[ix, iy]``."""
        x = self.axis.nodes
        return np.meshgrid(x, x, indexing="ij")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.side, self.side)

    @property
    def size(self) -> int:
        return self.side * self.side

    @property
    def ndim(self) -> int:
        return 2


def vec(image: np.ndarray) -> np.ndarray:
    """Column-major (x fastest) flattening of a 2D field."""
    return np.asarray(image).ravel(order="F")


def unvec(values: np.ndarray, side: int) -> np.ndarray:
    values = np.asarray(values)
    if values.size != side * side:
        raise ShapeError(f"cannot reshape {values.size} values into {side}x{side}")
    return values.reshape((side, side), order="F")


def as_mask(values) -> np.ndarray:
    """Validate a 0/1 array and return it as a boolean mask."""
    arr = np.asarray(values)
    if arr.dtype == bool:
        return arr
    if not np.all((arr == 0) | (arr == 1)):
        raise ValueError("mask entries must be 0 or 1")
    return arr.astype(bool)


def restrict(field: np.ndarray, mask: np.ndarray) -> np.ndarray:
    """Zero the entries of ``field`` where ``mask`` is 0; the shape is kept."""
    field = np.asarray(field)
    mask = as_mask(mask)
    if field.shape != mask.shape:
        raise ShapeError(f"field shape {field.shape} does not match mask shape {mask.shape}")
    return np.where(mask, field, 0.0)


def complement(mask: np.ndarray) -> np.ndarray:
    return ~as_mask(mask)
