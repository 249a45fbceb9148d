"""Split Bregman machinery for edge-guided TV / TFV problems.

The general problem is

    min_x  Q(x) + mu_t ||G S x|_Gamma||_1 + mu_f ||F S x|_{Gamma^c}||_1

where ``Q(x) = 1/2 x^T H x - b^T x`` is the (quadratic) fidelity, ``S`` maps
the unknown to grid values (identity for denoising, Haar synthesis for the
PCM correction stage), ``G`` is the forward-difference gradient and ``F`` the
central fractional gradient. Each iteration solves the SPD system

    (H + lam_t S^T G^T M G S + lam_f S^T F^T M' F S) x
        = b + lam_t S^T G^T M (d - dd) + lam_f S^T F^T M' (e - ee)

by CG, then shrinks and takes Bregman steps; ``M`` and ``M'`` mask to the edge
region and its complement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..edges import DilationSpec, GammaHistory, detect_edges, dilate, fuse_history
from ..errors import SolverError
from ..proxops import CgSettings, conjugate_gradient, shrink
from .config import SolverConfig
from .operators import DiffOperators


@dataclass
class IterationRecord:
    iteration: int
    objective: float
    tv_violation: float
    tfv_violation: float
    gamma_size: int
    rel_change: float
    cg_iters: int


@dataclass
class SplitBregmanResult:
    x: np.ndarray
    iterations: int
    converged: bool
    gamma: np.ndarray
    trace: list[IterationRecord] = field(default_factory=list)

    @property
    def final_violations(self) -> tuple[float, float]:
        if not self.trace:
            return (0.0, 0.0)
        last = self.trace[-1]
        return (last.tv_violation, last.tfv_violation)


@dataclass
class Problem:
    """Quadratic fidelity plus the synthesis map to grid values."""

    hess: Callable[[np.ndarray], np.ndarray]
    rhs: np.ndarray
    synth: Callable[[np.ndarray], np.ndarray]
    synth_adjoint: Callable[[np.ndarray], np.ndarray]
    fidelity: Callable[[np.ndarray], float]

    @classmethod
    def denoising(cls, noisy: np.ndarray) -> "Problem":
        noisy = np.asarray(noisy, dtype=float)
        ident = lambda v: v  # noqa: E731
        return cls(
            hess=ident,
            rhs=noisy,
            synth=ident,
            synth_adjoint=ident,
            fidelity=lambda v: 0.5 * float(np.sum((v - noisy) ** 2)),
        )


def _rel_change(new: np.ndarray, old: np.ndarray) -> float:
    return float(np.linalg.norm(new - old) / max(np.linalg.norm(old), 1.0))


def _shrink_threshold(mu: float, lam: float) -> float:
    return mu / lam


def _check_finite(x: np.ndarray, it: int) -> None:
    if not np.all(np.isfinite(x)):
        raise SolverError("non-finite iterate in split Bregman", iterations=it)


class EdgeRegion:
    """Adaptive edge region: detection on the current image, fusion, dilation."""

    def __init__(self, config: SolverConfig):
        self.config = config
        self.spec = DilationSpec(config.dilation_radius)
        self.history = GammaHistory(config.history_window, config.confidence)
        self.updates = 0

    def observe(self, image: np.ndarray) -> None:
        self.history.push(detect_edges(image, self.config.edge_method, self.config.edge_threshold))
        self.updates += 1

    def current(self) -> np.ndarray:
        if self.updates > self.config.history_window:
            raw = fuse_history(self.history)
        else:
            raw = self.history.masks[-1]
        return dilate(raw, self.spec)


def tv_warmup(noisy: np.ndarray, mu: float, iters: int) -> np.ndarray:
    """A fixed number of plain TV split Bregman iterations (no stopping test)."""
    if mu <= 0:
        return np.asarray(noisy, dtype=float).copy()
    cfg = SolverConfig(mu_t=mu, mu_f=0.0, max_iters=iters, stop_tol=1e-300)
    return single_term_split_bregman(Problem.denoising(noisy), np.shape(noisy), "tv", cfg).x


def single_term_split_bregman(problem: Problem, shape, term: str, config: SolverConfig, x0=None,
                              callback=None) -> SplitBregmanResult:
    """Plain split Bregman with one regulariser on the whole domain.

    ``term`` is ``"tv"`` (weight ``mu_t``, Bregman step ``gamma1``) or
    ``"tfv"`` (weight ``mu_f``, step ``gamma2``).
    """
    ops = DiffOperators(tuple(shape), config.alpha, config.frac_truncation)
    if term == "tv":
        mu, lam, step, fwd, adj = config.mu_t, config.penalty_t, config.gamma1, ops.grad, ops.grad_adjoint
    elif term == "tfv":
        mu, lam, step, fwd, adj = config.mu_f, config.penalty_f, config.gamma2, ops.frac, ops.frac_adjoint
    else:
        raise ValueError(f"unknown term {term!r}")

    x = np.array(problem.rhs if x0 is None else x0, dtype=float)
    if mu == 0:
        x = conjugate_gradient(problem.hess, problem.rhs, x, config.cg).x
        return SplitBregmanResult(x, 0, True, np.ones(shape, dtype=bool))

    S, St = problem.synth, problem.synth_adjoint
    zero = np.zeros((len(shape), *shape))
    d, dd = zero.copy(), zero.copy()

    def system(v):
        return problem.hess(v) + lam * St(adj(fwd(S(v))))

    trace = []
    converged = False
    it = 0
    for it in range(1, config.max_iters + 1):
        rhs = problem.rhs + lam * St(adj(d - dd))
        sol = conjugate_gradient(system, rhs, x, config.cg)
        x_new = sol.x
        _check_finite(x_new, it)
        g = fwd(S(x_new))
        d = shrink(g + dd, _shrink_threshold(mu, lam))
        dd = dd + step * (g - d)
        change = _rel_change(x_new, x)
        x = x_new
        viol = float(np.linalg.norm(g - d))
        obj = problem.fidelity(x) + mu * float(np.abs(g).sum())
        trace.append(IterationRecord(it, obj, viol, 0.0, 0, change, sol.iterations))
        if callback is not None:
            callback(it, x)
        if change <= config.stop_tol:
            converged = True
            break
    return SplitBregmanResult(x, it, converged, np.ones(shape, dtype=bool), trace)


def edge_guided_split_bregman(
    problem: Problem,
    shape,
    config: SolverConfig,
    gamma: np.ndarray | None = None,
    x0=None,
    callback=None,
) -> SplitBregmanResult:
    """TV on the edge region, TFV on its complement.

    With ``gamma=None`` the region is estimated: warm start from a few TV
    iterations on ``S x0``, then re-detected on every iterate for the first
    ``gamma_update_iters`` iterations and fused over the history window.
    A given ``gamma`` is used as is for all iterations.
    """
    shape = tuple(shape)
    ops = DiffOperators(shape, config.alpha, config.frac_truncation)
    S, St = problem.synth, problem.synth_adjoint
    mu_t, mu_f = config.mu_t, config.mu_f
    lam_t = config.penalty_t if mu_t > 0 else 0.0
    lam_f = config.penalty_f if mu_f > 0 else 0.0

    x = np.array(problem.rhs if x0 is None else x0, dtype=float)
    if mu_t == 0 and mu_f == 0:
        x = conjugate_gradient(problem.hess, problem.rhs, x, config.cg).x
        full = np.ones(shape, dtype=bool) if gamma is None else np.asarray(gamma, dtype=bool)
        return SplitBregmanResult(x, 0, True, full)

    region = None
    if gamma is None:
        region = EdgeRegion(config)
        warm_mu = mu_t if mu_t > 0 else mu_f
        region.observe(tv_warmup(S(x), warm_mu, config.warm_iters))
        mask = region.current()
    else:
        mask = np.asarray(gamma, dtype=bool)
        if mask.shape != shape:
            raise ValueError(f"gamma shape {mask.shape} does not match field shape {shape}")

    zero = np.zeros((len(shape), *shape))
    d, dd, e, ee = zero.copy(), zero.copy(), zero.copy(), zero.copy()

    trace = []
    converged = False
    it = 0
    for it in range(1, config.max_iters + 1):
        inside = mask
        outside = ~mask
        # splitting variables only live on their own region
        d = np.where(inside, d, 0.0)
        dd = np.where(inside, dd, 0.0)
        e = np.where(outside, e, 0.0)
        ee = np.where(outside, ee, 0.0)

        def system(v):
            u = S(v)
            out = problem.hess(v)
            if lam_t:
                out = out + lam_t * St(ops.grad_adjoint(np.where(inside, ops.grad(u), 0.0)))
            if lam_f:
                out = out + lam_f * St(ops.frac_adjoint(np.where(outside, ops.frac(u), 0.0)))
            return out

        rhs = problem.rhs
        if lam_t:
            rhs = rhs + lam_t * St(ops.grad_adjoint(np.where(inside, d - dd, 0.0)))
        if lam_f:
            rhs = rhs + lam_f * St(ops.frac_adjoint(np.where(outside, e - ee, 0.0)))
        sol = conjugate_gradient(system, rhs, x, config.cg)
        x_new = sol.x
        _check_finite(x_new, it)
        u = S(x_new)

        tv_viol = tfv_viol = 0.0
        reg = 0.0
        if lam_t:
            g = np.where(inside, ops.grad(u), 0.0)
            d = shrink(g + dd, _shrink_threshold(mu_t, lam_t))
            dd = dd + config.gamma1 * (g - d)
            tv_viol = float(np.linalg.norm(g - d))
            reg += mu_t * float(np.abs(g).sum())
        if lam_f:
            h = np.where(outside, ops.frac(u), 0.0)
            e = shrink(h + ee, _shrink_threshold(mu_f, lam_f))
            ee = ee + config.gamma2 * (h - e)
            tfv_viol = float(np.linalg.norm(h - e))
            reg += mu_f * float(np.abs(h).sum())

        change = _rel_change(x_new, x)
        x = x_new
        trace.append(
            IterationRecord(it, problem.fidelity(x) + reg, tv_viol, tfv_viol, int(mask.sum()), change,
                            sol.iterations)
        )
        if callback is not None:
            callback(it, x)
        if change <= config.stop_tol:
            converged = True
            break
        if region is not None and it < config.gamma_update_iters:
            region.observe(u)
            mask = region.current()
    return SplitBregmanResult(x, it, converged, mask, trace)
