"""File formats used by the command line: JSON for banks/matrices/steps,
CSV for signals and grid functions, minimal SVG polylines for plots."""

from __future__ import annotations

import csv
import json
from pathlib import Path
from typing import Sequence

import numpy as np

from .cascade import GridFunction
from .operators import Signal


class InputFormatError(ValueError):
    """Malformed input file; message carries the file and line number."""


def load_json(path) -> dict:
    path = Path(path)
    try:
        with path.open() as fh:
            return json.load(fh)
    except json.JSONDecodeError as exc:
        raise InputFormatError(
            f"{path}:{exc.lineno}: {exc.msg}"
        ) from exc
    except OSError as exc:
        raise InputFormatError(f"{path}: {exc.strerror}") from exc


def dump_json(obj, path) -> None:
    Path(path).write_text(json.dumps(obj, indent=2) + "\n")


def write_signal_csv(sig: Signal, path) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "re", "im"])
        for i, v in enumerate(sig.samples):
            writer.writerow([sig.offset + i, repr(v.real), repr(v.imag)])


def read_signal_csv(path) -> Signal:
    path = Path(path)
    entries = {}
    try:
        with path.open(newline="") as fh:
            reader = csv.reader(fh)
            for lineno, row in enumerate(reader, start=1):
                if lineno == 1 and row and row[0].strip().lower() == "index":
                    continue
                if not row or all(not cell.strip() for cell in row):
                    continue
                try:
                    idx = int(row[0])
                    re = float(row[1])
                    im = float(row[2]) if len(row) > 2 else 0.0
                except (ValueError, IndexError) as exc:
                    raise InputFormatError(
                        f"{path}:{lineno}: expected 'index,re,im', got {row!r}"
                    ) from exc
                entries[idx] = complex(re, im)
    except OSError as exc:
        raise InputFormatError(f"{path}: {exc.strerror}") from exc
    if not entries:
        return Signal.zero()
    lo = min(entries)
    hi = max(entries)
    return Signal.from_samples(lo, [entries.get(i, 0.0) for i in range(lo, hi + 1)])


def write_grid_csv(g: GridFunction, path) -> None:
    with Path(path).open("w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["x", "value_re", "value_im"])
        for x, v in zip(g.x(), g.values):
            writer.writerow([repr(float(x)), repr(v.real), repr(v.imag)])


def read_grid_csv(path, j_level: int) -> GridFunction:
    path = Path(path)
    xs = []
    vals = []
    try:
        with path.open(newline="") as fh:
            reader = csv.reader(fh)
            for lineno, row in enumerate(reader, start=1):
                if lineno == 1 and row and row[0].strip().lower() == "x":
                    continue
                if not row or all(not cell.strip() for cell in row):
                    continue
                try:
                    xs.append(float(row[0]))
                    vals.append(complex(float(row[1]), float(row[2]) if len(row) > 2 else 0.0))
                except (ValueError, IndexError) as exc:
                    raise InputFormatError(
                        f"{path}:{lineno}: expected 'x,value_re,value_im', got {row!r}"
                    ) from exc
    except OSError as exc:
        raise InputFormatError(f"{path}: {exc.strerror}") from exc
    if not xs:
        raise InputFormatError(f"{path}: no samples")
    step = 2.0 ** (-j_level)
    lo = round(xs[0] / step)
    return GridFunction.from_values(j_level, lo, vals)


def write_svg_polyline(
    xs: Sequence[float], ys: Sequence[float], path, width: int = 640, height: int = 320
) -> None:
    """Static polyline plot of (x, y) pairs with a light axis box."""
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    if len(xs) == 0:
        raise ValueError("nothing to plot")
    pad = 10.0
    x0, x1 = float(xs.min()), float(xs.max())
    y0, y1 = float(ys.min()), float(ys.max())
    if x1 == x0:
        x1 = x0 + 1.0
    if y1 == y0:
        y1 = y0 + 1.0
    sx = (width - 2 * pad) / (x1 - x0)
    sy = (height - 2 * pad) / (y1 - y0)
    pts = " ".join(
        f"{pad + (x - x0) * sx:.2f},{height - pad - (y - y0) * sy:.2f}"
        for x, y in zip(xs, ys)
    )
    svg = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}">\n'
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="white" '
        f'stroke="#cccccc"/>\n'
        f'<polyline points="{pts}" fill="none" stroke="#1f77b4" stroke-width="1"/>\n'
        "</svg>\n"
    )
    Path(path).write_text(svg)
