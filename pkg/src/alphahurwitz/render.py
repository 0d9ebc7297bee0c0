"""SVG pictures of the closure: every circle clipped to the closed square.

Clipping is done in floating point; the pictures play no part in any check.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional

import numpy as np

from .cf_core import Alpha

_EPS = 1e-12


@dataclass
class RenderSpec:
    width_px: int = 600
    height_px: int = 600
    stroke_width: float = 1.5
    show_grid: bool = False
    mode: str = "superset"  # or "realized"
    output_path: Optional[str] = None
    margin: float = 0.05


def clip_to_box(circle: tuple[float, float, float, float], box: tuple[float, float, float, float]) -> list[tuple]:
    """Pieces of ``M(a, b, c)`` inside ``[x0, x1] x [y0, y1]``.

    Returns ``("seg", p, q)``, ``("arc", center, r, t0, t1)`` (counterclockwise
    from ``t0`` to ``t1``) or ``("circle", center, r)`` tuples.
    """
    a, br, bi, c = circle
    x0, x1, y0, y1 = box
    if a == 0:
        return _clip_line(br, bi, c, box)
    cx, cy = br / a, bi / a
    r = math.sqrt(max(br * br + bi * bi - a * c, 0.0)) / abs(a)
    angles = []
    for X in (x0, x1):
        d = r * r - (X - cx) ** 2
        if d >= 0:
            for y in (cy + math.sqrt(d), cy - math.sqrt(d)):
                if y0 - _EPS <= y <= y1 + _EPS:
                    angles.append(math.atan2(y - cy, X - cx) % (2 * math.pi))
    for Y in (y0, y1):
        d = r * r - (Y - cy) ** 2
        if d >= 0:
            for x in (cx + math.sqrt(d), cx - math.sqrt(d)):
                if x0 - _EPS <= x <= x1 + _EPS:
                    angles.append(math.atan2(Y - cy, x - cx) % (2 * math.pi))
    angles = sorted(angles)
    uniq = []
    for t in angles:
        if not uniq or t - uniq[-1] > 1e-12:
            uniq.append(t)
    if len(uniq) > 1 and uniq[0] + 2 * math.pi - uniq[-1] <= 1e-12:
        uniq.pop()

    def inside(t):
        x, y = cx + r * math.cos(t), cy + r * math.sin(t)
        return x0 - _EPS <= x <= x1 + _EPS and y0 - _EPS <= y <= y1 + _EPS

    if len(uniq) <= 1:
        probe = uniq[0] + math.pi if uniq else 0.0
        return [("circle", (cx, cy), r)] if inside(probe) else []
    pieces = []
    for k, t0 in enumerate(uniq):
        t1 = uniq[k + 1] if k + 1 < len(uniq) else uniq[0] + 2 * math.pi
        if inside((t0 + t1) / 2):
            pieces.append(("arc", (cx, cy), r, t0, t1))
    return pieces


def _clip_line(br, bi, c, box):
    x0, x1, y0, y1 = box
    nn = br * br + bi * bi
    px, py = br * c / (2 * nn), bi * c / (2 * nn)
    dx, dy = -bi, br
    t_lo, t_hi = -math.inf, math.inf
    for p, d, lo, hi in ((px, dx, x0, x1), (py, dy, y0, y1)):
        if abs(d) < 1e-300:
            if p < lo - _EPS or p > hi + _EPS:
                return []
            continue
        ta, tb = (lo - p) / d, (hi - p) / d
        t_lo, t_hi = max(t_lo, min(ta, tb)), min(t_hi, max(ta, tb))
    if t_lo > t_hi + _EPS:
        return []
    return [("seg", (px + t_lo * dx, py + t_lo * dy), (px + t_hi * dx, py + t_hi * dy))]


def sample_pieces(pieces: Iterable[tuple], k: int) -> Iterable[complex]:
    for piece in pieces:
        if piece[0] == "seg":
            (ax, ay), (bx, by) = piece[1], piece[2]
            for j in range(k + 1):
                s = j / k
                yield complex(ax + s * (bx - ax), ay + s * (by - ay))
        else:
            (cx, cy), r = piece[1], piece[2]
            t0, t1 = (piece[3], piece[4]) if piece[0] == "arc" else (0.0, 2 * math.pi)
            for j in range(k + 1):
                t = t0 + (t1 - t0) * j / k
                yield complex(cx + r * math.cos(t), cy + r * math.sin(t))


def piece_distances(piece, z) -> np.ndarray:
    """Distance from each of the points ``z`` to a clipped piece."""
    z = np.asarray(z, dtype=np.complex128)
    if piece[0] == "seg":
        (ax, ay), (bx, by) = piece[1], piece[2]
        vx, vy = bx - ax, by - ay
        L = vx * vx + vy * vy
        s = np.zeros(z.shape) if L == 0 else np.clip(((z.real - ax) * vx + (z.imag - ay) * vy) / L, 0.0, 1.0)
        return np.abs(z - (ax + s * vx + 1j * (ay + s * vy)))
    (cx, cy), r = piece[1], piece[2]
    w = z - complex(cx, cy)
    d = np.abs(np.abs(w) - r)
    if piece[0] == "arc":
        t = np.mod(np.arctan2(w.imag, w.real), 2 * math.pi)
        t0, t1 = piece[3], piece[4]
        on = ((t0 <= t) & (t <= t1)) | ((t0 <= t + 2 * math.pi) & (t + 2 * math.pi <= t1))
        ends = [complex(cx + r * math.cos(u), cy + r * math.sin(u)) for u in (t0, t1)]
        off = np.minimum(np.abs(z - ends[0]), np.abs(z - ends[1]))
        d = np.where(on, d, off)
    return d


def _fmt(v: float) -> str:
    s = f"{v:.4f}".rstrip("0").rstrip(".")
    return "0" if s in ("-0", "") else s


def render_svg(circle_set, alpha: Alpha, spec: Optional[RenderSpec] = None, realized_points=None) -> str:
    """SVG 1.1 document of ``circle_set`` over the closed square of ``alpha``.

    ``circle_set`` may be a ``CircleSet`` or a list of integer quadruples.  In
    ``realized`` mode only pieces passing within 1e-7 of one of
    ``realized_points`` (orbit points of the boundary) are drawn.
    """
    spec = spec or RenderSpec()
    quads = circle_set.quadruples() if hasattr(circle_set, "quadruples") else sorted(circle_set)
    x0, x1 = float(alpha.a1) - 1, float(alpha.a1)
    y0, y1 = float(alpha.a2) - 1, float(alpha.a2)
    W, H = spec.width_px, spec.height_px
    side = min(W, H) * (1 - 2 * spec.margin)
    ox, oy = (W - side) / 2, (H - side) / 2

    def px(x, y):
        return ox + (x - x0) * side, oy + (y1 - y) * side

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        f'<rect x="0" y="0" width="{W}" height="{H}" fill="white"/>',
    ]
    if spec.show_grid:
        ax, ay = px(0, 0)
        out.append(
            f'<g stroke="#bbbbbb" stroke-width="0.5"><line x1="{_fmt(ox)}" y1="{_fmt(ay)}" x2="{_fmt(ox + side)}" y2="{_fmt(ay)}"/>'
            f'<line x1="{_fmt(ax)}" y1="{_fmt(oy)}" x2="{_fmt(ax)}" y2="{_fmt(oy + side)}"/></g>'
        )
    sw = _fmt(spec.stroke_width)
    out.append(f'<g fill="none" stroke="#1f3b73" stroke-width="{sw}" stroke-linecap="round">')
    box = (x0, x1, y0, y1)
    pts = np.asarray(realized_points, dtype=np.complex128) if realized_points is not None else None
    for quad in quads:
        if quad[0] == 0 and _is_boundary(quad, box):
            continue
        for piece in clip_to_box(tuple(float(v) for v in quad), box):
            if spec.mode == "realized":
                if pts is None:
                    raise ValueError("realized mode needs orbit points")
                if not pts.size or not (piece_distances(piece, pts) < 1e-7).any():
                    continue
            out.append(_piece_svg(piece, px, side))
    out.append("</g>")
    sx, sy = px(x0, y1)
    out.append(
        f'<rect x="{_fmt(sx)}" y="{_fmt(sy)}" width="{_fmt(side)}" height="{_fmt(side)}" '
        f'fill="none" stroke="black" stroke-width="{sw}"/>'
    )
    out.append("</svg>")
    return "\n".join(out) + "\n"


def _is_boundary(quad, box) -> bool:
    a, br, bi, c = quad
    x0, x1, y0, y1 = box
    if bi == 0:
        return any(abs(c / (2 * br) - x) < _EPS for x in (x0, x1))
    if br == 0:
        return any(abs(c / (2 * bi) - y) < _EPS for y in (y0, y1))
    return False


def _piece_svg(piece, px, side) -> str:
    if piece[0] == "seg":
        (ax, ay), (bx, by) = piece[1], piece[2]
        (u0, v0), (u1, v1) = px(ax, ay), px(bx, by)
        return f'<path d="M {_fmt(u0)} {_fmt(v0)} L {_fmt(u1)} {_fmt(v1)}"/>'
    (cx, cy), r = piece[1], piece[2]
    if piece[0] == "circle":
        u, v = px(cx, cy)
        return f'<circle cx="{_fmt(u)}" cy="{_fmt(v)}" r="{_fmt(r * side)}"/>'
    t0, t1 = piece[3], piece[4]
    u0, v0 = px(cx + r * math.cos(t0), cy + r * math.sin(t0))
    u1, v1 = px(cx + r * math.cos(t1), cy + r * math.sin(t1))
    large = 1 if t1 - t0 > math.pi else 0
    R = _fmt(r * side)
    # y is flipped, so a counterclockwise arc runs against the SVG angle direction
    return f'<path d="M {_fmt(u0)} {_fmt(v0)} A {R} {R} 0 {large} 0 {_fmt(u1)} {_fmt(v1)}"/>'


def write_svg(doc: str, path) -> Path:
    path = Path(path)
    try:
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(doc, encoding="utf-8")
    except OSError as e:
        raise OSError(f"cannot write SVG to {path}: {e}") from e
    return path
