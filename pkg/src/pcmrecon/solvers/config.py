from __future__ import annotations

from dataclasses import dataclass, field, replace

from ..proxops import CgSettings


@dataclass(frozen=True)
class SolverConfig:
    """Weights and controls for the split Bregman / ADMM drivers.

    ``lambda_t`` and ``lambda_f`` are the splitting penalties; ``None`` means
    ``penalty_ratio * mu``. The default ratio 2 makes the quadratic subproblem
    carry ``2 mu`` and the shrinkage threshold ``mu / lambda = 1/2``. Fixed
    points minimise the model with weights ``mu_t`` and ``mu_f`` for any ratio;
    a larger ratio enforces the splitting constraints faster when ``mu`` is
    small next to the fidelity curvature.
    ``confidence=None`` selects the rounding rule for edge-history fusion.
    ``gamma_update_iters`` freezes the edge region after that many iterations.
    """

    mu_t: float = 0.1
    mu_f: float = 0.1
    lambda_t: float | None = None
    lambda_f: float | None = None
    penalty_ratio: float = 2.0
    gamma1: float = 1.0
    gamma2: float = 1.0
    alpha: float = 1.3
    max_iters: int = 300
    stop_tol: float = 1e-5
    dilation_radius: int = 2
    history_window: int = 3
    confidence: float | None = 0.5
    warm_iters: int = 4
    edge_method: str = "sobel"
    edge_threshold: float = 0.0
    gamma_update_iters: int = 20
    frac_truncation: float = 1e-8
    cg: CgSettings = field(default_factory=lambda: CgSettings(rel_tol=1e-10, max_iters=5000))

    def __post_init__(self):
        if self.mu_t < 0 or self.mu_f < 0:
            raise ValueError("regularisation weights must be nonnegative")
        for name in ("lambda_t", "lambda_f"):
            val = getattr(self, name)
            if val is not None and not val > 0:
                raise ValueError(f"{name} must be positive")
        if not self.penalty_ratio > 0:
            raise ValueError("penalty_ratio must be positive")
        for name in ("gamma1", "gamma2"):
            if not 0 < getattr(self, name) <= 2:
                raise ValueError(f"{name} must lie in (0, 2]")
        if not self.stop_tol > 0:
            raise ValueError("stop_tol must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")
        if not 0 < self.alpha <= 2:
            raise ValueError("alpha must lie in (0, 2]")
        if self.confidence is not None and not 0 <= self.confidence < 1:
            raise ValueError("confidence must lie in [0, 1)")
        if not 1 <= self.warm_iters <= 10:
            raise ValueError("warm_iters must lie in [1, 10]")

    @property
    def penalty_t(self) -> float:
        return self.penalty_ratio * self.mu_t if self.lambda_t is None else self.lambda_t

    @property
    def penalty_f(self) -> float:
        return self.penalty_ratio * self.mu_f if self.lambda_f is None else self.lambda_f

    def with_(self, **changes) -> "SolverConfig":
        return replace(self, **changes)
