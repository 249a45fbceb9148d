"""Jittered frequency plans, the measurement model and calibrated noise."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ShapeError

__all__ = [
    "SamplePlan",
    "NoiseSpec",
    "make_plan",
    "make_tensor_plan",
    "add_noise",
    "measure",
    "save_plan",
    "load_plan",
]


@dataclass(frozen=True, eq=False)
class SamplePlan:
    """Frequencies ``w_k = k + eta_k``, ``k = -m/2 .. m/2 - 1``, ``eta_k ~ U[-theta, theta]``."""

    m: int
    theta: float
    seed: int | None
    frequencies: np.ndarray

    @property
    def lattice(self) -> np.ndarray:
        return np.arange(-self.m // 2, self.m // 2, dtype=float)


def make_plan(m: int, theta: float, seed: int | None = 0) -> SamplePlan:
    if int(m) != m or m < 2 or m % 2:
        raise ValueError(f"m must be an even integer >= 2, got {m}")
    if theta < 0:
        raise ValueError(f"theta must be >= 0, got {theta}")
    k = np.arange(-m // 2, m // 2, dtype=float)
    if theta == 0:
        w = k
    else:
        w = k + np.random.default_rng(seed).uniform(-theta, theta, size=m)
    w.setflags(write=False)
    return SamplePlan(int(m), float(theta), seed, w)


def make_tensor_plan(m_side: int, theta: float, seed: int | None = 0) -> tuple[SamplePlan, SamplePlan]:
    """Two independently jittered 1D plans forming the 2D grid ``wx x wy``."""
    sx, sy = np.random.SeedSequence(seed).spawn(2)
    return (
        make_plan(m_side, theta, int(sx.generate_state(1)[0])),
        make_plan(m_side, theta, int(sy.generate_state(1)[0])),
    )


@dataclass(frozen=True)
class NoiseSpec:
    """Complex Gaussian noise rescaled to ``||eps||_2 = sigma * max|fhat_clean|``."""

    sigma: float
    seed: int | None = 0

    def __post_init__(self):
        if self.sigma < 0:
            raise ValueError("sigma must be >= 0")


def add_noise(clean: np.ndarray, noise: NoiseSpec) -> np.ndarray:
    clean = np.asarray(clean, dtype=complex)
    if noise.sigma == 0:
        return clean.copy()
    rng = np.random.default_rng(noise.seed)
    eps = rng.standard_normal(clean.shape) + 1j * rng.standard_normal(clean.shape)
    target = noise.sigma * np.abs(clean).max()
    return clean + eps * (target / np.linalg.norm(eps))


def measure(A, c_true: np.ndarray, noise: NoiseSpec) -> np.ndarray:
    """``A c_true + eps`` with ``eps`` scaled to the requested relative level."""
    c_true = np.asarray(c_true, dtype=float)
    if c_true.size != A.shape[1]:
        raise ShapeError(f"operator expects {A.shape[1]} coefficients, got {c_true.size}")
    return add_noise(A.matvec(c_true), noise)


def save_plan(plan: SamplePlan, path) -> None:
    """One frequency per line, 17 significant digits (round-trips exactly)."""
    text = "".join(f"{w:.17g}\n" for w in plan.frequencies)
    Path(path).write_text(text)


def load_plan(path, theta: float = float("nan"), seed: int | None = None) -> SamplePlan:
    w = np.array([float(line) for line in Path(path).read_text().split()])
    w.setflags(write=False)
    return SamplePlan(w.size, theta, seed, w)
