"""Bit-exact artifact formats: NLSF field snapshots and 17-digit CSV tables.

NLSF layout (all little-endian): magic ``NLSF``, u32 version, u32 dim,
dim x u32 points-per-axis, dim x f64 half-widths, f64 coupling, f64 omega
(NaN when absent), f64 time, then N^dim complex samples as interleaved
(re, im) f64 pairs in row-major order.
"""

from __future__ import annotations

import math
import struct
from pathlib import Path

import numpy as np

from .errors import ConfigError
from .grid import ComplexField, Grid
from .model import Family, ModelParams

NLSF_MAGIC = b"NLSF"
NLSF_VERSION = 1


def write_snapshot(
    path, field: ComplexField, model: ModelParams, t: float = 0.0
) -> None:
    g = field.grid
    omega = model.omega if model.omega is not None else math.nan
    with open(path, "wb") as fh:
        fh.write(NLSF_MAGIC)
        fh.write(struct.pack("<II", NLSF_VERSION, g.dim))
        fh.write(struct.pack("<" + "I" * g.dim, *([g.n] * g.dim)))
        fh.write(struct.pack("<" + "d" * g.dim, *([g.half_width] * g.dim)))
        fh.write(struct.pack("<ddd", model.lam, omega, t))
        interleaved = np.empty(field.values.size * 2, dtype="<f8")
        interleaved[0::2] = field.values.real.ravel()
        interleaved[1::2] = field.values.imag.ravel()
        fh.write(interleaved.tobytes())


def read_snapshot(path) -> tuple[ComplexField, dict]:
    raw = Path(path).read_bytes()
    if raw[:4] != NLSF_MAGIC:
        raise ConfigError(f"{path}: not an NLSF snapshot")
    version, dim = struct.unpack_from("<II", raw, 4)
    if version != NLSF_VERSION:
        raise ConfigError(f"{path}: unsupported NLSF version {version}")
    off = 12
    ns = struct.unpack_from("<" + "I" * dim, raw, off)
    off += 4 * dim
    widths = struct.unpack_from("<" + "d" * dim, raw, off)
    off += 8 * dim
    lam, omega, t = struct.unpack_from("<ddd", raw, off)
    off += 24
    if len(set(ns)) != 1 or len(set(widths)) != 1:
        raise ConfigError(f"{path}: anisotropic snapshots are not supported")
    n = ns[0]
    count = n ** dim
    flat = np.frombuffer(raw, dtype="<f8", count=2 * count, offset=off)
    values = (flat[0::2] + 1j * flat[1::2]).reshape((n,) * dim)
    grid = Grid(dim, n, widths[0])
    meta = {"lam": lam, "omega": None if math.isnan(omega) else omega, "t": t}
    return ComplexField(grid, values.copy()), meta


def format_float(x) -> str:
    """17 significant digits: round-trip exact for IEEE doubles."""
    if x is None:
        return ""
    return "%.17g" % float(x)


def write_csv(path, comments: list[str], header: list[str], rows) -> None:
    lines = []
    for c in comments:
        lines.append(f"# {c}")
    lines.append(",".join(header))
    for row in rows:
        lines.append(",".join(v if isinstance(v, str) else format_float(v) for v in row))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def read_csv(path) -> tuple[list[str], dict[str, np.ndarray]]:
    """(comments, columns) parser for the tables this package writes."""
    comments = []
    header = None
    data: list[list[str]] = []
    for line in Path(path).read_text(encoding="utf-8").splitlines():
        if not line.strip():
            continue
        if line.startswith("#"):
            comments.append(line[1:].strip())
            continue
        if header is None:
            header = line.split(",")
            continue
        data.append(line.split(","))
    if header is None:
        raise ConfigError(f"{path}: no header row")
    cols = {}
    for j, name in enumerate(header):
        vals = [row[j] for row in data]
        try:
            cols[name] = np.asarray([float(v) if v else math.nan for v in vals])
        except ValueError:
            cols[name] = np.asarray(vals)
    return comments, cols


def model_from_config(section: dict) -> ModelParams:
    family = Family(section["family"])
    return ModelParams(family, float(section["lambda"]), section.get("omega"))
