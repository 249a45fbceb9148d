"""Reconstruction quality metrics: psnr, snr, relative error and ssim.

psnr and snr are in dB and return ``inf`` when the reconstruction is exact
(psnr gives ``-inf`` for an all-zero truth).
The ``snr`` numerator uses the mean of the *reconstruction*; ``snr(..., use_truth_mean=True)`` gives the usual
signal-variance form instead.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass

import numpy as np
from scipy import ndimage

from .errors import ShapeError

__all__ = ["MetricReport", "psnr", "snr", "rela_err", "ssim", "evaluate"]


def _pair(u, uhat):
    u = np.asarray(u, dtype=float)
    uhat = np.asarray(uhat, dtype=float)
    if u.shape != uhat.shape:
        raise ShapeError(f"truth shape {u.shape} differs from reconstruction shape {uhat.shape}")
    return u, uhat


def psnr(u, uhat) -> float:
    u, uhat = _pair(u, uhat)
    err = float(np.sum((u - uhat) ** 2))
    if err == 0:
        return math.inf
    peak = float(u.max()) ** 2
    if peak == 0:
        return -math.inf
    return 10 * math.log10(u.size * peak / err)


def snr(u, uhat, use_truth_mean: bool = False) -> float:
    u, uhat = _pair(u, uhat)
    err = float(np.sum((uhat - u) ** 2))
    if err == 0:
        return math.inf
    ref = u.mean() if use_truth_mean else uhat.mean()
    return 10 * math.log10(float(np.sum((ref - u) ** 2)) / err)


def rela_err(u, uhat) -> float:
    u, uhat = _pair(u, uhat)
    return float(np.linalg.norm(u - uhat) / np.linalg.norm(u))


def ssim(u, uhat, window: int = 8, k1: float = 0.01, k2: float = 0.03, dynamic_range: float | None = None) -> float:
    """Mean ssim over all ``window``-wide sliding windows (every axis).

    Local statistics are uniform-window means with the unbiased (``N - 1``)
    variance and covariance. The dynamic range defaults to
    ``max(u) - min(u)``.
    """
    u, uhat = _pair(u, uhat)
    if any(s < window for s in u.shape):
        raise ShapeError(f"image of shape {u.shape} is smaller than the {window}-wide window")
    L = float(u.max() - u.min()) if dynamic_range is None else dynamic_range
    c1 = (k1 * L) ** 2
    c2 = (k2 * L) ** 2
    npix = window**u.ndim

    def local_mean(a):
        full = ndimage.uniform_filter(a, size=window, mode="constant")
        # uniform_filter centres even windows at offset window // 2; keep the valid part
        lo = window // 2
        hi = window - lo - 1
        sl = tuple(slice(lo, s - hi) for s in a.shape)
        return full[sl]

    mx, my = local_mean(u), local_mean(uhat)
    corr = npix / (npix - 1)
    vx = (local_mean(u * u) - mx * mx) * corr
    vy = (local_mean(uhat * uhat) - my * my) * corr
    cxy = (local_mean(u * uhat) - mx * my) * corr
    num = (2 * mx * my + c1) * (2 * cxy + c2)
    den = (mx * mx + my * my + c1) * (vx + vy + c2)
    return float(np.mean(num / den))


@dataclass(frozen=True)
class MetricReport:
    ssim: float
    psnr: float
    snr: float
    rela_err: float

    def as_dict(self) -> dict:
        return asdict(self)


def evaluate(u, uhat, window: int = 8) -> MetricReport:
    u, uhat = _pair(u, uhat)
    s = ssim(u, uhat, window) if min(u.shape) >= window else math.nan
    return MetricReport(s, psnr(u, uhat), snr(u, uhat), rela_err(u, uhat))
