"""One-stage reconstructions fitting the Fourier data and the penalty jointly."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..haar import ForwardOperator, HaarBasis, SynthesisOperator
from ..proxops import CgSettings, conjugate_gradient, prox_l1
from .config import SolverConfig
from .splitbregman import Problem, SplitBregmanResult, edge_guided_split_bregman

__all__ = ["power_iteration", "baseline_l1", "baseline_tikhonov", "baseline_ss_tv", "L1Result", "SSTVResult"]


def power_iteration(apply, n: int, iters: int = 100, seed: int = 0, tol: float = 1e-10) -> float:
    """Largest eigenvalue of a symmetric PSD operator."""
    v = np.random.default_rng(seed).standard_normal(n)
    v /= np.linalg.norm(v)
    est = 0.0
    for _ in range(iters):
        w = apply(v)
        new = float(v @ w)
        norm = np.linalg.norm(w)
        if norm == 0:
            return 0.0
        v = w / norm
        if abs(new - est) <= tol * max(abs(new), 1.0):
            return new
        est = new
    return est


@dataclass
class L1Result:
    coefficients: np.ndarray
    iterations: int
    converged: bool


def baseline_l1(A: ForwardOperator, fhat: np.ndarray, lam: float, max_iters: int = 5000,
                stop_tol: float = 1e-8) -> L1Result:
    """``min 1/2 ||A c - fhat||^2 + lam ||c||_1`` by FISTA with step ``1/L``."""
    b = A.real_rmatvec(np.asarray(fhat))
    n = A.shape[1]
    # 1% headroom over the power-iteration estimate keeps the step safely below 1/L
    lip = 1.01 * power_iteration(A.normal_matvec, n, iters=500)
    if lip == 0:
        return L1Result(np.zeros(n), 0, True)
    step = 1.0 / lip
    x = np.zeros(n)
    y = x.copy()
    t = 1.0
    for k in range(1, max_iters + 1):
        grad = A.normal_matvec(y) - b
        x_new = prox_l1(y - step * grad, lam * step)
        t_new = 0.5 * (1 + np.sqrt(1 + 4 * t * t))
        y = x_new + ((t - 1) / t_new) * (x_new - x)
        change = np.linalg.norm(x_new - x) / max(np.linalg.norm(x), 1.0)
        x, t = x_new, t_new
        if change <= stop_tol:
            return L1Result(x, k, True)
    return L1Result(x, max_iters, False)


def baseline_tikhonov(A: ForwardOperator, fhat: np.ndarray, lam: float,
                      settings: CgSettings = CgSettings()) -> np.ndarray:
    """``min 1/2 ||A c - fhat||^2 + lam ||c||_2^2``, i.e. ``(Re A^H A + 2 lam I) c = Re A^H fhat``."""
    b = A.real_rmatvec(np.asarray(fhat))
    return conjugate_gradient(lambda v: A.normal_matvec(v) + 2 * lam * v, b, settings=settings).x


@dataclass
class SSTVResult:
    image: np.ndarray
    coefficients: np.ndarray
    solver: SplitBregmanResult


def baseline_ss_tv(A: ForwardOperator, fhat: np.ndarray, basis: HaarBasis, grid, lam: float,
                   config: SolverConfig | None = None) -> SSTVResult:
    """``min 1/2 ||A c - fhat||^2 + lam ||grad Phi c||_1`` by split Bregman.

    The data term stays inside the CG subproblem. ``config`` supplies
    iteration controls; its weights are replaced by ``mu_t = lam, mu_f = 0``.
    """
    fhat = np.asarray(fhat)
    config = (config or SolverConfig()).with_(mu_t=lam, mu_f=0.0)
    synth = SynthesisOperator(basis, grid)
    b = A.real_rmatvec(fhat)

    def fidelity(c):
        return 0.5 * float(np.sum(np.abs(A.matvec(c) - fhat) ** 2))

    problem = Problem(hess=A.normal_matvec, rhs=b, synth=synth, synth_adjoint=synth.adjoint, fidelity=fidelity)
    # start from the least-squares projection
    x0 = conjugate_gradient(A.normal_matvec, b, settings=config.cg).x
    full = np.ones(grid.shape, dtype=bool)
    res = edge_guided_split_bregman(problem, grid.shape, config, gamma=full, x0=x0)
    return SSTVResult(synth(res.x), res.x, res)
