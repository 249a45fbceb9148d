"""Optimisation drivers: projection-correction, TV-TFV denoising and one-stage baselines."""

from .baselines import baseline_l1, baseline_ss_tv, baseline_tikhonov, power_iteration
from .config import SolverConfig
from .denoise import tfv_denoise, tv_denoise, tvtfv_denoise
from .operators import DiffOperators
from .pcm import accelerated_proximal_pcm, pcm_p_stage, pcm_tvtfv
from .report import format_table, metrics_gap_report, trace_csv
from .splitbregman import SplitBregmanResult

__all__ = [
    "SolverConfig",
    "DiffOperators",
    "SplitBregmanResult",
    "pcm_p_stage",
    "accelerated_proximal_pcm",
    "pcm_tvtfv",
    "tv_denoise",
    "tfv_denoise",
    "tvtfv_denoise",
    "baseline_l1",
    "baseline_tikhonov",
    "baseline_ss_tv",
    "power_iteration",
    "metrics_gap_report",
    "format_table",
    "trace_csv",
]
