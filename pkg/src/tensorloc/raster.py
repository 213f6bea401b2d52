"""Sample region membership on a pixel grid and write SVG, PPM or CSV."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .regions import RegionQuery, Window, as_row_sums, default_window, region_contains
from .tensor import UsageError

__all__ = ["RasterGrid", "pixel_centers", "rasterize", "emit", "read_csv", "DEFAULT_COLORS"]

DEFAULT_COLORS = [
    (190, 190, 190),
    (70, 130, 180),
    (220, 120, 60),
    (90, 170, 90),
    (150, 90, 170),
]
_BACKGROUND = (255, 255, 255)
_MARKER = (0, 0, 0)


def _check_window(window, width, height) -> Window:
    window = Window(*map(float, window))
    if not (window.re_min < window.re_max and window.im_min < window.im_max):
        raise UsageError(f"invalid window {tuple(window)}")
    if width < 2 or height < 2:
        raise UsageError(f"resolution must be at least 2x2, got {width}x{height}")
    return window


@dataclass(frozen=True, eq=False)
class RasterGrid:
    """Boolean membership image; ``bitmap[row, col]`` with row 0 at the top."""

    window: Window
    width: int
    height: int
    bitmap: np.ndarray
    label: str = "region"

    def __post_init__(self):
        object.__setattr__(self, "window", _check_window(self.window, self.width, self.height))
        bitmap = np.asarray(self.bitmap, dtype=bool)
        if bitmap.shape != (self.height, self.width):
            raise UsageError(f"bitmap shape {bitmap.shape} does not match {self.height}x{self.width}")
        bitmap = bitmap.copy()
        bitmap.flags.writeable = False
        object.__setattr__(self, "bitmap", bitmap)

    @property
    def count(self) -> int:
        return int(self.bitmap.sum())

    def same_grid(self, other: "RasterGrid") -> bool:
        return (self.window, self.width, self.height) == (other.window, other.width, other.height)


def pixel_centers(window, width: int, height: int) -> np.ndarray:
    """Complex pixel centers, shape ``(height, width)``."""
    w = _check_window(window, width, height)
    re = w.re_min + (np.arange(width) + 0.5) * (w.re_max - w.re_min) / width
    im = w.im_max - (np.arange(height) + 0.5) * (w.im_max - w.im_min) / height
    return re[None, :] + 1j * im[:, None]


def rasterize(A, q: RegionQuery, width: int = 500, height: int = 500, window=None) -> RasterGrid:
    """Evaluate ``q`` at every pixel center; ``window`` defaults to a 5% padded bounding box."""
    S = as_row_sums(A)
    window = default_window(S) if window is None else window
    Z = pixel_centers(window, width, height)
    return RasterGrid(window, width, height, region_contains(S, q, Z), label=q.name)


def _check_layers(layers):
    if not layers:
        raise UsageError("at least one layer is required")
    first = layers[0][0]
    for grid, _ in layers[1:]:
        if not grid.same_grid(first):
            raise UsageError("all layers must share window and resolution")
    return first


def _to_pixel(grid: RasterGrid, z: complex):
    w = grid.window
    col = (z.real - w.re_min) / (w.re_max - w.re_min) * grid.width
    row = (w.im_max - z.imag) / (w.im_max - w.im_min) * grid.height
    return col, row


def _emit_svg(layers, points) -> bytes:
    first = layers[0][0]
    W, H = first.width, first.height
    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="rgb{_BACKGROUND}"/>',
    ]
    for grid, color in layers:
        out.append(f'<g id="{grid.label}" fill="rgb{tuple(color)}" shape-rendering="crispEdges">')
        for row in range(H):
            line = grid.bitmap[row].astype(np.int8)
            edges = np.flatnonzero(np.diff(np.concatenate(([0], line, [0]))))
            for start, stop in zip(edges[::2], edges[1::2]):
                out.append(f'<rect x="{start}" y="{row}" width="{stop - start}" height="1"/>')
        out.append("</g>")
    size = max(2.0, 0.01 * max(W, H))
    for z in points:
        cx, cy = _to_pixel(first, complex(z))
        d = (
            f"M {cx - size:.3f} {cy - size:.3f} L {cx + size:.3f} {cy + size:.3f} "
            f"M {cx - size:.3f} {cy + size:.3f} L {cx + size:.3f} {cy - size:.3f}"
        )
        out.append(f'<path d="{d}" stroke="rgb{_MARKER}" stroke-width="1.5" fill="none"/>')
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("utf-8")


def _emit_ppm(layers, points) -> bytes:
    first = layers[0][0]
    W, H = first.width, first.height
    img = np.empty((H, W, 3), dtype=np.uint8)
    img[:] = _BACKGROUND
    # later layers paint over earlier ones
    for grid, color in layers:
        img[grid.bitmap] = color
    size = max(1, int(round(0.01 * max(W, H))))
    for z in points:
        cx, cy = _to_pixel(first, complex(z))
        c, r = int(np.floor(cx)), int(np.floor(cy))
        for d in range(-size, size + 1):
            for rr, cc in ((r + d, c + d), (r + d, c - d)):
                if 0 <= rr < H and 0 <= cc < W:
                    img[rr, cc] = _MARKER
    return f"P6\n{W} {H}\n255\n".encode("ascii") + img.tobytes()


def _emit_csv(layers) -> bytes:
    first = layers[0][0]
    Z = pixel_centers(first.window, first.width, first.height)
    buf = io.StringIO(newline="")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["re", "im"] + [grid.label for grid, _ in layers])
    stacked = np.stack([grid.bitmap for grid, _ in layers], axis=-1).astype(int)
    for row in range(first.height):
        for col in range(first.width):
            z = Z[row, col]
            writer.writerow([repr(float(z.real)), repr(float(z.imag))] + stacked[row, col].tolist())
    return buf.getvalue().encode("utf-8")


def emit(layers: Sequence, fmt: str = "svg", overlay_points: Sequence[complex] = ()) -> bytes:
    """Render layers to bytes.

    ``layers`` is a sequence of ``RasterGrid`` objects or ``(RasterGrid,
    color)`` pairs, drawn in order. ``overlay_points`` are drawn as crosses
    (SVG and PPM only).
    """
    pairs = []
    for k, layer in enumerate(layers):
        if isinstance(layer, RasterGrid):
            layer = (layer, DEFAULT_COLORS[k % len(DEFAULT_COLORS)])
        grid, color = layer
        pairs.append((grid, tuple(int(c) for c in color)))
    _check_layers(pairs)
    fmt = fmt.lower()
    if fmt == "svg":
        return _emit_svg(pairs, overlay_points)
    if fmt == "ppm":
        return _emit_ppm(pairs, overlay_points)
    if fmt == "csv":
        return _emit_csv(pairs)
    raise UsageError(f"unknown format {fmt!r}; choose svg, ppm or csv")


def read_csv(data, window, width: int, height: int) -> list[RasterGrid]:
    """Parse CSV produced by :func:`emit` back into one grid per layer column."""
    if isinstance(data, bytes):
        data = data.decode("utf-8")
    reader = csv.reader(io.StringIO(data, newline=""))
    header = next(reader)
    if header[:2] != ["re", "im"]:
        raise UsageError("CSV header must start with re,im")
    labels = header[2:]
    rows = [[int(v) for v in rec[2:]] for rec in reader]
    if len(rows) != width * height:
        raise UsageError(f"expected {width * height} rows, got {len(rows)}")
    arr = np.array(rows, dtype=bool).reshape(height, width, len(labels))
    return [RasterGrid(window, width, height, arr[..., k], label=lab) for k, lab in enumerate(labels)]
