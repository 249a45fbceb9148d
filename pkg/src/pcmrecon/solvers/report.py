"""Tabular summaries: metric gaps between models and per-iteration traces."""

from __future__ import annotations

import csv
import io
import math

from ..metrics import evaluate

TRACE_COLUMNS = ("iteration", "objective", "tv_violation", "tfv_violation", "gamma_size", "rel_change", "cg_iters")


def metrics_gap_report(reconstructions: dict, truth, reference: str | None = None) -> list[dict]:
    """One row per model with its metrics and the psnr/rela_err gap to ``reference``.

    ``reference`` defaults to the first model. Gaps are ``model - reference``.
    """
    if not reconstructions:
        return []
    names = list(reconstructions)
    reference = names[0] if reference is None else reference
    reports = {name: evaluate(truth, rec) for name, rec in reconstructions.items()}
    ref = reports[reference]
    rows = []
    for name in names:
        rep = reports[name]
        rows.append({
            "model": name,
            **rep.as_dict(),
            "psnr_gap": _gap(rep.psnr, ref.psnr),
            "rela_err_gap": rep.rela_err - ref.rela_err,
        })
    return rows


def _gap(a: float, b: float) -> float:
    if math.isinf(a) and math.isinf(b) and a == b:
        return 0.0
    return a - b


def format_table(rows: list[dict], columns=None) -> str:
    if not rows:
        return ""
    columns = columns or list(rows[0])
    widths = {c: max(len(c), *(len(_fmt(r[c])) for r in rows)) for c in columns}
    lines = ["  ".join(c.ljust(widths[c]) for c in columns)]
    for r in rows:
        lines.append("  ".join(_fmt(r[c]).ljust(widths[c]) for c in columns))
    return "\n".join(lines)


def _fmt(v) -> str:
    return f"{v:.4f}" if isinstance(v, float) else str(v)


def trace_csv(trace) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(TRACE_COLUMNS)
    for rec in trace:
        writer.writerow([_cell(getattr(rec, c)) for c in TRACE_COLUMNS])
    return buf.getvalue()


def _cell(v) -> str:
    return repr(float(v)) if isinstance(v, float) else str(v)
