"""Minimal self-contained SVG emitters.

Each figure is a pure function of already-written CSV rows, so regenerating
a figure from its CSV reproduces it byte for byte.  Contours come from a
small marching-squares pass over the sigma_min grid; no plotting library
is involved.
"""

from __future__ import annotations

import numpy as np

WIDTH = 640
HEIGHT = 640
MARGIN = 48

REGION_COLORS = {"inside": "#7fc97f", "on_sigma_det": "#1b1b1b", "outside": "none"}
CURVE_COLOR = "#1b1b1b"
EIG_COLOR = "#000000"
CONTOUR_COLORS = ["#ff7f0e", "#1f77b4", "#2ca02c", "#d62728"]


def _fmt(x: float) -> str:
    return f"{x:.2f}"


class _Frame:
    """Affine map from data coordinates to SVG pixels (y axis flipped)."""

    def __init__(self, x_min, x_max, y_min, y_max, width=WIDTH, height=HEIGHT):
        if x_max <= x_min:
            x_max = x_min + 1.0
        if y_max <= y_min:
            y_max = y_min + 1.0
        self.x_min, self.x_max = x_min, x_max
        self.y_min, self.y_max = y_min, y_max
        self.width, self.height = width, height

    def x(self, v: float) -> float:
        t = (v - self.x_min) / (self.x_max - self.x_min)
        return MARGIN + t * (self.width - 2 * MARGIN)

    def y(self, v: float) -> float:
        t = (v - self.y_min) / (self.y_max - self.y_min)
        return self.height - MARGIN - t * (self.height - 2 * MARGIN)


def _document(body: list[str], width=WIDTH, height=HEIGHT) -> str:
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" '
        f'height="{height}" viewBox="0 0 {width} {height}">'
    )
    frame_rect = (
        f'<rect x="{MARGIN}" y="{MARGIN}" width="{width - 2 * MARGIN}" '
        f'height="{height - 2 * MARGIN}" fill="none" stroke="#888" stroke-width="1"/>'
    )
    return "\n".join([head, frame_rect, *body, "</svg>"]) + "\n"


def marching_squares(
    xs: np.ndarray, ys: np.ndarray, z: np.ndarray, level: float
) -> list[tuple[float, float, float, float]]:
    """Line segments of the level set {z = level} on a rectilinear grid.

    z has shape (len(ys), len(xs)).  Each active cell contributes one or two
    segments with linearly interpolated crossing points; the two ambiguous
    saddle cases are split by the cell-center average.
    """

    def interp(va, vb, pa, pb):
        t = (level - va) / (vb - va)
        return (pa[0] + t * (pb[0] - pa[0]), pa[1] + t * (pb[1] - pa[1]))

    segments = []
    for j in range(len(ys) - 1):
        for i in range(len(xs) - 1):
            corners = [
                (z[j, i], (xs[i], ys[j])),
                (z[j, i + 1], (xs[i + 1], ys[j])),
                (z[j + 1, i + 1], (xs[i + 1], ys[j + 1])),
                (z[j + 1, i], (xs[i], ys[j + 1])),
            ]
            code = 0
            for bit, (v, _) in enumerate(corners):
                if v > level:
                    code |= 1 << bit
            if code in (0, 15):
                continue
            edges = {
                "b": interp(corners[0][0], corners[1][0], corners[0][1], corners[1][1])
                if (code & 1) != ((code >> 1) & 1)
                else None,
                "r": interp(corners[1][0], corners[2][0], corners[1][1], corners[2][1])
                if ((code >> 1) & 1) != ((code >> 2) & 1)
                else None,
                "t": interp(corners[3][0], corners[2][0], corners[3][1], corners[2][1])
                if ((code >> 3) & 1) != ((code >> 2) & 1)
                else None,
                "l": interp(corners[0][0], corners[3][0], corners[0][1], corners[3][1])
                if (code & 1) != ((code >> 3) & 1)
                else None,
            }
            table = {
                1: [("l", "b")],
                2: [("b", "r")],
                3: [("l", "r")],
                4: [("r", "t")],
                6: [("b", "t")],
                7: [("l", "t")],
                8: [("t", "l")],
                9: [("t", "b")],
                11: [("t", "r")],
                12: [("r", "l")],
                13: [("r", "b")],
                14: [("b", "l")],
            }
            if code in (5, 10):
                center = sum(v for v, _ in corners) / 4.0
                if (center > level) == (code == 5):
                    pairs = [("l", "b"), ("r", "t")] if code == 5 else [("b", "r"), ("t", "l")]
                else:
                    pairs = [("l", "t"), ("r", "b")] if code == 5 else [("b", "l"), ("t", "r")]
            else:
                pairs = table[code]
            for e1, e2 in pairs:
                p, q = edges[e1], edges[e2]
                if p is not None and q is not None:
                    segments.append((p[0], p[1], q[0], q[1]))
    return segments


def region_svg(region_rows, curve_points) -> str:
    """Filled scatter of the nonzero-winding region with the spectral curves.

    region_rows: (re, im, label, winding) grid rows; curve_points: (re, im)
    samples of the determinant-spectrum curves.
    """
    xs = sorted({r[0] for r in region_rows})
    ys = sorted({r[1] for r in region_rows})
    all_x = xs + [p[0] for p in curve_points]
    all_y = ys + [p[1] for p in curve_points]
    frame = _Frame(min(all_x), max(all_x), min(all_y), max(all_y))
    cell_w = max(1.0, (WIDTH - 2 * MARGIN) / max(1, len(xs) - 1))
    cell_h = max(1.0, (HEIGHT - 2 * MARGIN) / max(1, len(ys) - 1))
    body = []
    for re, im, label, _ in region_rows:
        color = REGION_COLORS.get(label, "none")
        if color == "none":
            continue
        body.append(
            f'<rect x="{_fmt(frame.x(re) - cell_w / 2)}" y="{_fmt(frame.y(im) - cell_h / 2)}" '
            f'width="{_fmt(cell_w)}" height="{_fmt(cell_h)}" fill="{color}" stroke="none"/>'
        )
    for re, im in curve_points:
        body.append(
            f'<circle cx="{_fmt(frame.x(re))}" cy="{_fmt(frame.y(im))}" r="1.2" '
            f'fill="{CURVE_COLOR}"/>'
        )
    return _document(body)


def contour_svg(xs, ys, sigma, levels, eig_points) -> str:
    """Pseudospectrum level sets with the eigenvalues overlaid."""
    frame = _Frame(min(xs), max(xs), min(ys), max(ys))
    body = []
    z = np.asarray(sigma, dtype=float)
    for idx, eps in enumerate(levels):
        color = CONTOUR_COLORS[idx % len(CONTOUR_COLORS)]
        for x1, y1, x2, y2 in marching_squares(np.asarray(xs), np.asarray(ys), z, eps):
            body.append(
                f'<line x1="{_fmt(frame.x(x1))}" y1="{_fmt(frame.y(y1))}" '
                f'x2="{_fmt(frame.x(x2))}" y2="{_fmt(frame.y(y2))}" '
                f'stroke="{color}" stroke-width="1.5"/>'
            )
    for re, im in eig_points:
        body.append(
            f'<circle cx="{_fmt(frame.x(re))}" cy="{_fmt(frame.y(im))}" r="2.2" '
            f'fill="{EIG_COLOR}"/>'
        )
    return _document(body)


def modes_svg(mode_rows) -> str:
    """Superimposed per-site eigenvector moduli; the zero mode drawn gray.

    mode_rows: (mode_index, site, modulus, is_zero_mode) tuples.
    """
    by_mode: dict[int, list[tuple[int, float, bool]]] = {}
    for idx, site, modulus, is_zero in mode_rows:
        by_mode.setdefault(idx, []).append((site, modulus, is_zero))
    n_sites = max(site for rows in by_mode.values() for site, _, _ in rows)
    peak = max(m for rows in by_mode.values() for _, m, _ in rows)
    frame = _Frame(1.0, float(n_sites), 0.0, max(peak, 1e-300))
    body = []
    for idx in sorted(by_mode):
        rows = sorted(by_mode[idx])
        is_zero = rows[0][2]
        pts = " ".join(f"{_fmt(frame.x(site))},{_fmt(frame.y(m))}" for site, m, _ in rows)
        color = "#9a9a9a" if is_zero else "#101010"
        width = "2.5" if is_zero else "1.0"
        body.append(
            f'<polyline points="{pts}" fill="none" stroke="{color}" '
            f'stroke-width="{width}" stroke-opacity="0.75"/>'
        )
    return _document(body)


def scatter_svg(point_groups) -> str:
    """Generic scatter: list of (points, color, radius) groups."""
    all_pts = [p for pts, _, _ in point_groups for p in pts]
    if not all_pts:
        return _document([])
    frame = _Frame(
        min(p[0] for p in all_pts),
        max(p[0] for p in all_pts),
        min(p[1] for p in all_pts),
        max(p[1] for p in all_pts),
    )
    body = []
    for pts, color, radius in point_groups:
        for x, y in pts:
            body.append(
                f'<circle cx="{_fmt(frame.x(x))}" cy="{_fmt(frame.y(y))}" '
                f'r="{radius}" fill="{color}"/>'
            )
    return _document(body)
