"""Two-stage projection-correction drivers."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..errors import ShapeError, SolverError
from ..haar import ForwardOperator, HaarBasis, SynthesisOperator
from ..proxops import CgSettings, cg_least_squares
from .config import SolverConfig
from .splitbregman import Problem, SplitBregmanResult, edge_guided_split_bregman

__all__ = [
    "ProximalResult",
    "PCMResult",
    "pcm_p_stage",
    "accelerated_proximal_pcm",
    "pcm_tvtfv",
    "coefficient_problem",
]


def pcm_p_stage(A: ForwardOperator, fhat: np.ndarray, settings: CgSettings = CgSettings()) -> np.ndarray:
    """Least-squares projection ``c_f = argmin_c ||A c - fhat||_2`` over real ``c``."""
    fhat = np.asarray(fhat)
    if fhat.size != A.shape[0]:
        raise ShapeError(f"operator has {A.shape[0]} rows, data has {fhat.size} samples")
    return cg_least_squares(A, fhat, settings)


@dataclass
class ProximalResult:
    coefficients: np.ndarray
    iterations: int
    converged: bool


def accelerated_proximal_pcm(
    c_f: np.ndarray,
    prox: Callable[[np.ndarray, float], np.ndarray],
    max_iters: int = 300,
    stop_tol: float = 1e-5,
    c0: np.ndarray | None = None,
) -> ProximalResult:
    """Correction stage ``min 1/2 ||c - c_f||^2 + R(c)`` by accelerated prox steps.

    ``prox(v, lam)`` must return ``prox_{lam R}(v)``. The step and the
    extrapolation weight follow ``lam_k = k / (k + 3)``.
    """
    c_f = np.asarray(c_f, dtype=float)
    prev = c_f.copy() if c0 is None else np.array(c0, dtype=float)
    d = prev.copy()
    start = max(np.linalg.norm(prev), np.linalg.norm(c_f), 1.0)
    for k in range(1, max_iters + 1):
        lam = k / (k + 3)
        cur = prox(d - lam * (d - c_f), lam)
        if not np.all(np.isfinite(cur)) or np.linalg.norm(cur) > 1e6 * start:
            raise SolverError("accelerated proximal iteration diverged", iterations=k)
        d = cur + lam * (cur - prev)
        change = np.linalg.norm(cur - prev) / max(np.linalg.norm(prev), 1.0)
        prev = cur
        if change <= stop_tol:
            return ProximalResult(cur, k, True)
    return ProximalResult(prev, max_iters, False)


def coefficient_problem(c_f: np.ndarray, synth: SynthesisOperator) -> Problem:
    """Correction-stage fidelity ``1/2 ||c - c_f||^2`` with grid synthesis."""
    c_f = np.asarray(c_f, dtype=float)
    return Problem(
        hess=lambda v: v,
        rhs=c_f,
        synth=synth,
        synth_adjoint=synth.adjoint,
        fidelity=lambda v: 0.5 * float(np.sum((v - c_f) ** 2)),
    )


@dataclass
class PCMResult:
    image: np.ndarray
    coefficients: np.ndarray
    projection: np.ndarray
    solver: SplitBregmanResult


def pcm_tvtfv(
    fhat: np.ndarray,
    A: ForwardOperator,
    basis: HaarBasis,
    grid,
    config: SolverConfig,
    gamma: np.ndarray | None = None,
    p_settings: CgSettings = CgSettings(),
    callback=None,
) -> PCMResult:
    """P-stage followed by the edge-guided TV-TFV correction in coefficient space.

    ``mu_f = 0`` with ``gamma`` covering the whole grid gives PCM-TV.
    """
    if A.basis != basis:
        raise ShapeError("forward operator was assembled for a different basis")
    c_f = pcm_p_stage(A, fhat, p_settings)
    synth = SynthesisOperator(basis, grid)
    res = edge_guided_split_bregman(coefficient_problem(c_f, synth), grid.shape, config, gamma=gamma,
                                    callback=callback)
    return PCMResult(synth(res.x), res.x, c_f, res)
