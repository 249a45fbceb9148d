"""Plain PGM images and small text helpers for 1D signals.

Images are stored as ASCII PGM (``P2``, maxval 255). Arrays are indexed
``[ix, iy]`` with ``x`` along axis 0; files are written row by row with
``y`` as the row index, so a file row is ``image[:, iy]``.
"""

from __future__ import annotations

from pathlib import Path

import numpy as np

from .errors import ShapeError

__all__ = ["to_gray", "write_pgm", "read_pgm", "write_signal_csv"]


def to_gray(image: np.ndarray, lo: float | None = None, hi: float | None = None) -> np.ndarray:
    """Linear rescale of ``[lo, hi]`` (default ``[min, max]``) onto integers ``0..255``."""
    image = np.asarray(image, dtype=float)
    lo = float(image.min()) if lo is None else lo
    hi = float(image.max()) if hi is None else hi
    if hi <= lo:
        return np.zeros(image.shape, dtype=np.uint8)
    scaled = np.clip((image - lo) / (hi - lo), 0.0, 1.0)
    return np.rint(255 * scaled).astype(np.uint8)


def write_pgm(image: np.ndarray, path, lo: float | None = None, hi: float | None = None) -> None:
    image = np.asarray(image)
    if image.ndim != 2:
        raise ShapeError(f"PGM output needs a 2D image, got shape {image.shape}")
    gray = to_gray(image, lo, hi).T  # rows are y
    lines = [f"P2\n{gray.shape[1]} {gray.shape[0]}\n255\n"]
    lines.extend(" ".join(str(v) for v in row) + "\n" for row in gray)
    Path(path).write_text("".join(lines))


def _tokens(data: bytes):
    # header tokens, skipping '#' comments; returns tokens and the offset after the last one
    out, pos = [], 0
    while len(out) < 4:
        while pos < len(data) and data[pos:pos + 1].isspace():
            pos += 1
        if data[pos:pos + 1] == b"#":
            while pos < len(data) and data[pos:pos + 1] not in (b"\n", b"\r"):
                pos += 1
            continue
        start = pos
        while pos < len(data) and not data[pos:pos + 1].isspace():
            pos += 1
        if start == pos:
            raise ValueError("truncated PGM header")
        out.append(data[start:pos].decode("ascii"))
    return out, pos + 1


def read_pgm(path, scale: bool = True) -> np.ndarray:
    """Read a ``P2`` or ``P5`` PGM; returns ``[ix, iy]`` floats, in ``[0, 1]`` if ``scale``."""
    data = Path(path).read_bytes()
    (magic, w, h, maxval), offset = _tokens(data)
    w, h, maxval = int(w), int(h), int(maxval)
    if magic == "P2":
        body = np.array(data[offset:].split(), dtype=float)
    elif magic == "P5":
        dtype = np.uint8 if maxval < 256 else np.dtype(">u2")
        body = np.frombuffer(data[offset:], dtype=dtype).astype(float)
    else:
        raise ValueError(f"not a PGM file (magic {magic!r})")
    if body.size < w * h:
        raise ValueError(f"PGM body has {body.size} values, expected {w * h}")
    img = body[: w * h].reshape(h, w).T
    return img / maxval if scale else img


def write_signal_csv(path, x: np.ndarray, columns: dict[str, np.ndarray]) -> None:
    """1D signals as CSV: ``x`` followed by the named columns, full precision."""
    names = ["x", *columns]
    cols = [np.asarray(x, dtype=float), *(np.asarray(v, dtype=float) for v in columns.values())]
    rows = [",".join(names)]
    for i in range(cols[0].size):
        rows.append(",".join(repr(float(c[i])) for c in cols))
    Path(path).write_text("\n".join(rows) + "\n")
