"""Plain SVG 1.1 drawing of a planar scenario: tau, sigma, zero lines, signs, R."""

from __future__ import annotations

import numpy as np

from .admissibility import AdmissibilityReport, build_constraints
from .scenarios import Scenario

SIZE = 600
MARGIN_PX = 40


def _window(points: np.ndarray) -> tuple[np.ndarray, float]:
    lo, hi = points.min(axis=0), points.max(axis=0)
    span = float(max(hi - lo))
    return lo, span if span > 0 else 1.0


def _clip_line(p, d, lo, span):
    """Segment of the line p + s d inside the square window."""
    s_min, s_max = -np.inf, np.inf
    for k in range(2):
        a, b = lo[k], lo[k] + span
        if abs(d[k]) < 1e-15:
            if not a <= p[k] <= b:
                return None
            continue
        s1, s2 = (a - p[k]) / d[k], (b - p[k]) / d[k]
        s_min, s_max = max(s_min, min(s1, s2)), min(s_max, max(s1, s2))
    if s_min >= s_max:
        return None
    return p + s_min * d, p + s_max * d


def render_2d(sc: Scenario, report: AdmissibilityReport) -> str:
    if sc.tau.n != 2:
        raise ValueError("only planar scenarios can be drawn")
    pts = [sc.tau.vertices, sc.sigma.vertices]
    R = None
    if report.degeneracy.concurrent is not None:
        R = report.degeneracy.concurrent.point
        pts.append(R[None, :])
    lo, span = _window(np.vstack(pts))
    scale = SIZE - 2 * MARGIN_PX

    def px(p):
        x = MARGIN_PX + (p[0] - lo[0]) / span * scale
        y = MARGIN_PX + (1.0 - (p[1] - lo[1]) / span) * scale
        return f"{x:.2f},{y:.2f}"

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}">',
        f'<rect x="0" y="0" width="{SIZE}" height="{SIZE}" fill="white"/>',
        '<polygon id="tau" points="' + " ".join(px(v) for v in sc.tau.vertices) + '" '
        'fill="#eef3fb" stroke="#1f3b73" stroke-width="2"/>',
        '<polygon id="sigma" points="' + " ".join(px(v) for v in sc.sigma.vertices) + '" '
        'fill="#fbe9d7" stroke="#a0522d" stroke-width="1.5"/>',
    ]
    for k, v in enumerate(sc.tau.vertices):
        out.append(f'<text x="{px(v).split(",")[0]}" y="{px(v).split(",")[1]}" dy="-6" font-size="14" '
                   f'fill="#1f3b73">A{k}</text>')
    cons = build_constraints(sc.sigma, sc.tau, report.incidence, sc.S)
    label = 0.05 * span
    for c in cons:
        if c.is_zero:
            continue
        g = c.unit_gradient
        d = np.array([-g[1], g[0]])
        seg = _clip_line(c.base, d, lo, span)
        i, j = c.pair
        if seg is not None:
            out.append(
                f'<polyline class="zero-line" data-pair="{i},{j}" points="{px(seg[0])} {px(seg[1])}" '
                'fill="none" stroke="#555" stroke-width="1" stroke-dasharray="8,3,2,3"/>'
            )
        for sign, offset in (("+", label), ("−", -label)):
            pos = c.base + 0.5 * label * d + offset * g
            x, y = px(pos).split(",")
            out.append(f'<text class="sign" x="{x}" y="{y}" font-size="16" text-anchor="middle" '
                       f'fill="{"#2a7d2a" if sign == "+" else "#b22222"}">{sign}</text>')
    for k, p in enumerate(sc.sigma.vertices):
        x, y = px(p).split(",")
        out.append(f'<circle cx="{x}" cy="{y}" r="4" fill="#a0522d"/>')
        out.append(f'<text x="{x}" y="{y}" dx="6" dy="14" font-size="14" fill="#a0522d">P{k}</text>')
    if R is not None:
        x, y = px(R).split(",")
        out.append(f'<circle id="R" cx="{x}" cy="{y}" r="5" fill="black"/>')
        out.append(f'<text x="{x}" y="{y}" dx="8" dy="-8" font-size="14">R</text>')
    out.append(f'<text x="{MARGIN_PX}" y="{SIZE - 12}" font-size="13">{report.verdict.value}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
