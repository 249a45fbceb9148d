"""Image (and signal) denoising with TV, TFV and edge-guided TV-TFV."""

from __future__ import annotations

import numpy as np

from .config import SolverConfig
from .splitbregman import (
    Problem,
    SplitBregmanResult,
    edge_guided_split_bregman,
    single_term_split_bregman,
)

__all__ = ["tv_denoise", "tfv_denoise", "tvtfv_denoise"]


def tv_denoise(noisy: np.ndarray, config: SolverConfig, callback=None) -> SplitBregmanResult:
    """``min 1/2 ||f - noisy||^2 + mu_t ||grad f||_1`` (anisotropic)."""
    noisy = np.asarray(noisy, dtype=float)
    return single_term_split_bregman(Problem.denoising(noisy), noisy.shape, "tv", config, callback=callback)


def tfv_denoise(noisy: np.ndarray, config: SolverConfig, callback=None) -> SplitBregmanResult:
    """``min 1/2 ||f - noisy||^2 + mu_f ||grad^alpha f||_1``."""
    noisy = np.asarray(noisy, dtype=float)
    return single_term_split_bregman(Problem.denoising(noisy), noisy.shape, "tfv", config, callback=callback)


def tvtfv_denoise(noisy: np.ndarray, config: SolverConfig, gamma: np.ndarray | None = None,
                  callback=None) -> SplitBregmanResult:
    """Edge-guided TV-TFV denoising.

    TV acts on the (dilated) edge region, TFV on the rest. Pass ``gamma`` to
    fix the region instead of estimating it from the data.
    """
    noisy = np.asarray(noisy, dtype=float)
    return edge_guided_split_bregman(Problem.denoising(noisy), noisy.shape, config, gamma=gamma,
                                     callback=callback)
