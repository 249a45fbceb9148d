"""Edge-region masks: filter edge detection, dilation and history fusion."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy import ndimage

from .errors import ShapeError
from .grid import as_mask

__all__ = [
    "DilationSpec",
    "GammaHistory",
    "gradient_magnitude",
    "detect_edges",
    "dilate",
    "fuse_history",
    "warm_start_gamma",
    "write_pbm",
    "read_pbm",
]


@dataclass(frozen=True)
class DilationSpec:
    radius: int = 2
    shape: str = "square"

    def __post_init__(self):
        if self.radius < 1:
            raise ValueError("dilation radius must be >= 1")
        if self.shape != "square":
            raise ValueError("only square structuring elements are supported")


def gradient_magnitude(image: np.ndarray, method: str = "sobel") -> np.ndarray:
    """``sqrt(gx^2 + gy^2)`` from 3x3 Sobel/Prewitt kernels, replicate padding.

    For 1D signals this is the absolute forward difference (last entry 0).
    """
    image = np.asarray(image, dtype=float)
    if image.ndim == 1:
        out = np.zeros_like(image)
        out[:-1] = np.abs(np.diff(image))
        return out
    if image.ndim != 2:
        raise ShapeError("edge detection expects a 1D or 2D field")
    filt = {"sobel": ndimage.sobel, "prewitt": ndimage.prewitt}.get(method)
    if filt is None:
        raise ValueError(f"unknown edge detector {method!r}")
    gx = filt(image, axis=0, mode="nearest")
    gy = filt(image, axis=1, mode="nearest")
    return np.hypot(gx, gy)


def detect_edges(image: np.ndarray, method: str = "sobel", threshold: float = 0.0) -> np.ndarray:
    """Mask where the gradient magnitude exceeds ``threshold``.

    ``threshold = 0`` picks ``mean + 2 std`` of the magnitude. A constant
    image yields an empty mask either way.
    """
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    mag = gradient_magnitude(image, method)
    if threshold == 0:
        threshold = mag.mean() + 2 * mag.std()
    return mag > threshold


def dilate(mask: np.ndarray, spec: DilationSpec = DilationSpec()) -> np.ndarray:
    """Binary dilation by a ``(2r+1)``-wide square (an interval in 1D)."""
    mask = as_mask(mask)
    structure = np.ones((2 * spec.radius + 1,) * mask.ndim, dtype=bool)
    return ndimage.binary_dilation(mask, structure=structure)


class GammaHistory:
    """Sliding window of past edge masks with fusion weights.

    ``weights`` (if given) must be nonnegative, nondecreasing and sum to 1,
    and apply to the most recent ``len(weights)`` masks, oldest first.
    """

    def __init__(self, n_keep: int = 3, confidence: float | None = None, weights=None):
        if n_keep < 1:
            raise ValueError("n_keep must be >= 1")
        if confidence is not None and not 0 <= confidence < 1:
            raise ValueError("confidence must lie in [0, 1)")
        if weights is not None:
            weights = np.asarray(weights, dtype=float)
            if weights.size != n_keep:
                raise ValueError("need one weight per stored mask")
            if np.any(weights < 0) or np.any(np.diff(weights) < 0):
                raise ValueError("weights must be nonnegative and nondecreasing")
            if not np.isclose(weights.sum(), 1.0, rtol=0, atol=1e-12):
                raise ValueError("weights must sum to 1")
        self.n_keep = n_keep
        self.confidence = confidence
        self.weights = weights
        self.masks: deque[np.ndarray] = deque(maxlen=n_keep)

    def push(self, mask: np.ndarray) -> None:
        mask = as_mask(mask)
        if self.masks and self.masks[0].shape != mask.shape:
            raise ShapeError("all masks in a history must share a grid")
        self.masks.append(mask.copy())

    def __len__(self) -> int:
        return len(self.masks)


def fuse_history(history: GammaHistory) -> np.ndarray:
    """Combine the stored masks into one.

    Without a confidence level the pixelwise average is rounded, with ties at
    0.5 going to 1. With confidence ``t`` the mask is ``sum_i w_i mask_i > t``.
    """
    if not len(history):
        raise ValueError("cannot fuse an empty edge history")
    stack = np.stack([m.astype(float) for m in history.masks])
    k = stack.shape[0]
    if history.weights is None:
        weights = np.full(k, 1.0 / k)
    else:
        weights = history.weights[-k:] / history.weights[-k:].sum()
    score = np.tensordot(weights, stack, axes=1)
    if history.confidence is None:
        return score >= 0.5 - 1e-12
    return score > history.confidence


def warm_start_gamma(
    noisy: np.ndarray,
    tv_iters: int = 4,
    spec: DilationSpec = DilationSpec(),
    mu: float = 0.1,
    method: str = "sobel",
    threshold: float = 0.0,
) -> np.ndarray:
    """Initial edge region: a few TV iterations, edge detection, dilation."""
    from .solvers.splitbregman import tv_warmup

    if not 1 <= tv_iters <= 10:
        raise ValueError("tv_iters must lie in [1, 10]")
    smoothed = tv_warmup(np.asarray(noisy, dtype=float), mu, tv_iters)
    return dilate(detect_edges(smoothed, method, threshold), spec)


def write_pbm(mask: np.ndarray, path) -> None:
    """Plain PBM (P1); rows are ``y``, columns ``x``; 1 is an edge pixel."""
    mask = as_mask(mask)
    if mask.ndim == 1:
        mask = mask[:, None]
    rows = mask.T
    lines = ["P1", f"{rows.shape[1]} {rows.shape[0]}"]
    lines += [" ".join("1" if v else "0" for v in row) for row in rows]
    Path(path).write_text("\n".join(lines) + "\n")


def read_pbm(path) -> np.ndarray:
    tokens = [t for line in Path(path).read_text().splitlines() for t in line.split("#")[0].split()]
    if not tokens or tokens[0] != "P1":
        raise ValueError("not a plain PBM file")
    width, height = int(tokens[1]), int(tokens[2])
    body = "".join(tokens[3:])
    bits = np.array([c == "1" for c in body], dtype=bool)
    if bits.size != width * height:
        raise ValueError("PBM pixel count does not match header")
    return bits.reshape(height, width).T
