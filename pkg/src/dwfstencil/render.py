"""Heatmaps of phase-space grids as binary PPM or SVG.

Cells are white for zero, red for positive and cyan for negative real parts,
with saturation linear in ``|value| / maxabs``. The first grid index runs
left to right, the second bottom to top (origin in the bottom-left corner).
"""

from __future__ import annotations

import numpy as np

ZERO_TOL = 1e-12
FADE = 0.4

WHITE = (255, 255, 255)


def cell_color(value: float, maxabs: float, fade: float = 1.0) -> tuple[int, int, int]:
    if maxabs <= ZERO_TOL or abs(value) <= ZERO_TOL:
        return WHITE
    s = min(1.0, abs(value) / maxabs) * fade
    low = int(round(255 * (1.0 - s)))
    return (255, low, low) if value > 0 else (low, 255, 255)


def _maxabs(values: np.ndarray) -> float:
    return float(np.abs(values).max()) if values.size else 0.0


def color_grid(values: np.ndarray) -> np.ndarray:
    """``(n1, n2, 3)`` uint8 colours for a real grid, indexed like the grid."""
    values = np.real(np.asarray(values))
    top = _maxabs(values)
    out = np.empty(values.shape + (3,), dtype=np.uint8)
    for idx in np.ndindex(values.shape):
        out[idx] = cell_color(values[idx], top)
    return out


def overlay_grid(raw: np.ndarray, projected: np.ndarray, fade: float = FADE) -> np.ndarray:
    """Raw stencil cells at full saturation, remaining projected cells faded."""
    raw = np.real(np.asarray(raw))
    projected = np.real(np.asarray(projected))
    raw_top = _maxabs(raw)
    proj_top = _maxabs(projected)
    out = np.empty(raw.shape + (3,), dtype=np.uint8)
    for idx in np.ndindex(raw.shape):
        if abs(raw[idx]) > ZERO_TOL:
            out[idx] = cell_color(raw[idx], raw_top)
        else:
            out[idx] = cell_color(projected[idx], proj_top, fade)
    return out


def to_image(colors: np.ndarray, scale: int) -> np.ndarray:
    """Expand cell colours into a ``(rows, cols, 3)`` pixel array in screen orientation."""
    if scale < 1:
        raise ValueError(f"scale must be positive, got {scale}")
    # grid[i, j] -> column i, row counted from the bottom
    screen = np.transpose(colors, (1, 0, 2))[::-1]
    return np.repeat(np.repeat(screen, scale, axis=0), scale, axis=1)


def encode_ppm(pixels: np.ndarray) -> bytes:
    rows, cols, _ = pixels.shape
    return f"P6\n{cols} {rows}\n255\n".encode("ascii") + np.ascontiguousarray(pixels, dtype=np.uint8).tobytes()


def decode_ppm(data: bytes) -> np.ndarray:
    """Parse a binary P6 file produced by :func:`encode_ppm`."""
    parts = data.split(b"\n", 3)
    if len(parts) < 4 or parts[0] != b"P6" or parts[2] != b"255":
        raise ValueError("not an 8-bit binary PPM")
    cols, rows = (int(x) for x in parts[1].split())
    return np.frombuffer(parts[3], dtype=np.uint8).reshape(rows, cols, 3)


def encode_svg(colors: np.ndarray, scale: int) -> bytes:
    n1, n2, _ = colors.shape
    width, height = n1 * scale, n2 * scale
    lines = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" shape-rendering="crispEdges">',
    ]
    for i in range(n1):
        for j in range(n2):
            r, g, b = (int(c) for c in colors[i, j])
            y = (n2 - 1 - j) * scale
            lines.append(f'<rect x="{i * scale}" y="{y}" width="{scale}" height="{scale}" '
                         f'fill="#{r:02x}{g:02x}{b:02x}"/>')
    lines.append("</svg>")
    return ("\n".join(lines) + "\n").encode("ascii")


def render(colors: np.ndarray, fmt: str = "ppm", scale: int = 32) -> bytes:
    if scale < 1:
        raise ValueError(f"scale must be positive, got {scale}")
    if fmt == "ppm":
        return encode_ppm(to_image(colors, scale))
    if fmt == "svg":
        return encode_svg(colors, scale)
    raise ValueError(f"unknown image format {fmt!r}")
