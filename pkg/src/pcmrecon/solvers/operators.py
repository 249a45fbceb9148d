"""Discrete gradient and fractional-gradient operators on 1D/2D fields.

Both act on fields of shape ``(n,)`` or ``(n, n)`` and return stacked
components of shape ``(ndim, *field.shape)`` (x first, then y).
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..fracdiff import DEFAULT_TRUNCATION, FracDiffOperator, build_operator, lift_2d


def forward_diff(f: np.ndarray, axis: int) -> np.ndarray:
    """Forward difference with Neumann closure (last difference is 0)."""
    out = np.zeros_like(f, dtype=float)
    src = np.moveaxis(f, axis, 0)
    dst = np.moveaxis(out, axis, 0)
    dst[:-1] = src[1:] - src[:-1]
    return out


def forward_diff_adjoint(g: np.ndarray, axis: int) -> np.ndarray:
    out = np.zeros_like(g, dtype=float)
    src = np.moveaxis(g, axis, 0)
    dst = np.moveaxis(out, axis, 0)
    dst[:-1] -= src[:-1]
    dst[1:] += src[:-1]
    return out


@dataclass(frozen=True, eq=False)
class DiffOperators:
    """Anisotropic TV gradient and the central fractional gradient of order ``alpha``."""

    shape: tuple[int, ...]
    alpha: float = 1.3
    truncation: float = DEFAULT_TRUNCATION

    def __post_init__(self):
        if len(self.shape) not in (1, 2) or (len(self.shape) == 2 and self.shape[0] != self.shape[1]):
            raise ValueError(f"fields must be 1D or square 2D, got shape {self.shape}")
        base = build_operator("central", self.alpha, self.shape[0], self.truncation)
        if len(self.shape) == 1:
            fracs = (base,)
        else:
            fracs = (lift_2d(base, "x"), lift_2d(base, "y"))
        object.__setattr__(self, "_fracs", fracs)

    @property
    def ndim(self) -> int:
        return len(self.shape)

    @property
    def frac_ops(self) -> tuple[FracDiffOperator, ...]:
        return self._fracs

    def grad(self, f: np.ndarray) -> np.ndarray:
        return np.stack([forward_diff(f, ax) for ax in range(self.ndim)])

    def grad_adjoint(self, g: np.ndarray) -> np.ndarray:
        out = forward_diff_adjoint(g[0], 0)
        for ax in range(1, self.ndim):
            out = out + forward_diff_adjoint(g[ax], ax)
        return out

    def frac(self, f: np.ndarray) -> np.ndarray:
        return np.stack([op.apply(f) for op in self._fracs])

    def frac_adjoint(self, g: np.ndarray) -> np.ndarray:
        out = self._fracs[0].apply_adjoint(g[0])
        for ax in range(1, self.ndim):
            out = out + self._fracs[ax].apply_adjoint(g[ax])
        return out
