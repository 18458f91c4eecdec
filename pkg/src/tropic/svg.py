"""Plane pictures of two-dimensional instances.

In max-plus the span of the columns is a strip between two lines of slope
one; in max-times it is a cone between two rays from the origin. Both are
intersections of half-planes, so every shaded region is produced by clipping
the viewport rectangle.
"""

from __future__ import annotations

import math
from typing import Optional
from xml.sax.saxutils import escape

import numpy as np

from .distance import nearest_point, project_above, project_below
from .io import ProblemDocument, ProblemError
from .linalg import Matrix, Vector
from .semifield import MAX_PLUS, MAX_TIMES, Semifield

SIZE = 480
PAD = 30


class UnsupportedPlotError(ProblemError):
    exit_code = 8


def _slopes(sf: Semifield, A: Matrix) -> tuple[float, float]:
    """Lowest and highest direction among the nonzero columns: offsets
    ``a2 - a1`` in max-plus, ratios ``a2 / a1`` in max-times."""
    offs = []
    for a1, a2 in A.values.T:
        if a1 == sf.zero and a2 == sf.zero:
            continue
        if a1 == sf.zero:
            offs.append(math.inf)
        elif a2 == sf.zero:
            offs.append(-math.inf if sf is MAX_PLUS else 0.0)
        else:
            offs.append(a2 - a1 if sf is MAX_PLUS else a2 / a1)
    return min(offs), max(offs)


def _direction(sf: Semifield, p) -> float:
    return p[1] - p[0] if sf is MAX_PLUS else (math.inf if p[0] == 0 else p[1] / p[0])


def _span_halfplanes(sf: Semifield, lo: float, hi: float) -> list[tuple[float, float, float]]:
    """Half-planes ``a u + b v <= c`` whose intersection is the span."""
    planes = []
    if sf is MAX_PLUS:
        if math.isfinite(hi):
            planes.append((-1.0, 1.0, hi))
        if math.isfinite(lo):
            planes.append((1.0, -1.0, -lo))
    else:
        planes += [(-1.0, 0.0, 0.0), (0.0, -1.0, 0.0)]
        if math.isfinite(hi):
            planes.append((-hi, 1.0, 0.0))
        if lo > 0:
            planes.append((lo, -1.0, 0.0))
    return planes


def _clip(poly: list, plane) -> list:
    """One Sutherland-Hodgman pass against ``a u + b v <= c``."""
    a, b, c = plane
    out = []
    for i, p in enumerate(poly):
        q = poly[(i + 1) % len(poly)]
        fp = a * p[0] + b * p[1] - c
        fq = a * q[0] + b * q[1] - c
        if fp <= 0:
            out.append(p)
        if (fp < 0 < fq) or (fq < 0 < fp):
            t = fp / (fp - fq)
            out.append((p[0] + t * (q[0] - p[0]), p[1] + t * (q[1] - p[1])))
    return out


def _region(box, planes) -> list:
    x0, y0, x1, y1 = box
    poly = [(x0, y0), (x1, y0), (x1, y1), (x0, y1)]
    for plane in planes:
        if not poly:
            break
        poly = _clip(poly, plane)
    return poly


def _area(poly) -> float:
    return abs(sum(p[0] * q[1] - q[0] * p[1] for p, q in zip(poly, poly[1:] + poly[:1]))) / 2


def _dedupe(poly) -> list:
    out = []
    for p in poly:
        if not out or max(abs(p[0] - out[-1][0]), abs(p[1] - out[-1][1])) > 1e-12:
            out.append(p)
    if len(out) > 1 and max(abs(out[0][0] - out[-1][0]), abs(out[0][1] - out[-1][1])) <= 1e-12:
        out.pop()
    return out


def _regular(sf: Semifield, v) -> Optional[tuple[float, float]]:
    if v is None:
        return None
    vals = v.values if isinstance(v, Vector) else np.asarray(v, float)
    if np.any(vals == sf.zero) or not np.all(np.isfinite(vals)):
        return None
    return float(vals[0]), float(vals[1])


def _extended_segment(sf: Semifield, b, lo: float, hi: float):
    """Segment from ``b`` to the span when ``b`` lies outside it."""
    direction = _direction(sf, b)
    if direction > hi:
        u = b[1] - hi if sf is MAX_PLUS else b[1] / hi
        return b, (u, b[1])
    if direction < lo:
        v = b[0] + lo if sf is MAX_PLUS else b[0] * lo
        return b, (b[0], v)
    return None


def _fmt(v: float) -> str:
    return f"{v:.2f}"


def _delta_label(sf: Semifield, delta: float, tol: float) -> str:
    if delta == sf.top:
        return "Δ = ∞"
    if sf.is_one(delta, tol):
        return "Δ = 𝟙"
    return f"Δ = {delta:.6g}"


def render_svg(doc: ProblemDocument, result: Optional[dict] = None) -> str:
    sf = doc.semifield
    A = doc.A
    if sf not in (MAX_PLUS, MAX_TIMES):
        raise UnsupportedPlotError(f"plots are drawn for max-plus and max-times, not {sf.tag}")
    if A.shape[0] != 2:
        raise UnsupportedPlotError(f"plots need two rows, A has {A.shape[0]}")
    if A.is_zero():
        raise UnsupportedPlotError("the zero matrix spans only the zero vector")
    command = (result or {}).get("command")
    lo, hi = _slopes(sf, A)

    points = {"origin": (0.0, 0.0)}
    for j in range(A.shape[1]):
        p = _regular(sf, A.column(j))
        if p is not None:
            points[f"a{j + 1}"] = p
    d = doc.d
    delta = None
    if d is not None and not d.is_zero():
        res = nearest_point(A, d)
        delta = res.delta.value
        points["d"] = _regular(sf, d)
        if res.finite and not res.is_member(doc.tolerance):
            points["y*"] = _regular(sf, res.nearest_y)
            points["y1"] = _regular(sf, A @ project_below(A, d)[0])
            points["y2"] = _regular(sf, A @ project_above(A, d)[0])
    segment = None
    b = _regular(sf, doc.b) if command == "extended" else None
    if b is not None:
        points["b"] = b
        segment = _extended_segment(sf, b, lo, hi)
        if segment is not None:
            points["b'"] = segment[1]
    points = {k: v for k, v in points.items() if v is not None}

    xs = [p[0] for p in points.values()]
    ys = [p[1] for p in points.values()]
    w = max(max(xs) - min(xs), max(ys) - min(ys), 1.0)
    cx, cy = (max(xs) + min(xs)) / 2, (max(ys) + min(ys)) / 2
    half = 0.55 * w  # 10% margin around the bounding square
    box = (cx - half, cy - half, cx + half, cy + half)

    def sx(u):
        return PAD + (u - box[0]) / (box[2] - box[0]) * (SIZE - 2 * PAD)

    def sy(v):
        return SIZE - PAD - (v - box[1]) / (box[3] - box[1]) * (SIZE - 2 * PAD)

    def region(poly, cls):
        # a span of collinear generators has no area: draw it as a line
        pts = " ".join(f"{_fmt(sx(u))},{_fmt(sy(v))}" for u, v in _dedupe(poly))
        tag = "polygon" if _area(poly) > 1e-9 * (box[2] - box[0]) ** 2 else "polyline"
        return f'<{tag} class="{cls}" points="{pts}"/>'

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{SIZE}" '
        f'height="{SIZE}" viewBox="0 0 {SIZE} {SIZE}">',
        "<style>"
        ".span{fill:#9ecae1;fill-opacity:0.45;stroke:#3182bd}"
        ".reach{fill:#fd8d3c;fill-opacity:0.5;stroke:#e6550d}"
        ".axis{stroke:#444;stroke-width:1}"
        ".gen{stroke:#08519c;stroke-width:2}"
        ".seg{stroke:#e6550d;stroke-width:3}"
        ".pt{fill:#000}.proj{fill:#31a354}"
        "text{font-family:sans-serif;font-size:13px}"
        "</style>",
        f"<title>{escape(f'{sf.tag} span of {A.shape[1]} vectors')}</title>",
    ]
    span = _region(box, _span_halfplanes(sf, lo, hi))
    if len(_dedupe(span)) >= 2:
        out.append(region(span, "span"))
    if b is not None:
        # reachable set of Ax + b: the span above and to the right of b
        planes = _span_halfplanes(sf, lo, hi) + [(-1.0, 0.0, -b[0]), (0.0, -1.0, -b[1])]
        reach = _region(box, planes)
        if len(_dedupe(reach)) >= 2:
            out.append(region(reach, "reach"))
        if segment is not None:
            (u0, v0), (u1, v1) = segment
            out.append(
                f'<line class="seg" x1="{_fmt(sx(u0))}" y1="{_fmt(sy(v0))}" '
                f'x2="{_fmt(sx(u1))}" y2="{_fmt(sy(v1))}"/>'
            )
    ox, oy = sx(0.0), sy(0.0)
    if box[0] <= 0 <= box[2]:
        out.append(f'<line class="axis" x1="{_fmt(ox)}" y1="0" x2="{_fmt(ox)}" y2="{SIZE}"/>')
    if box[1] <= 0 <= box[3]:
        out.append(f'<line class="axis" x1="0" y1="{_fmt(oy)}" x2="{SIZE}" y2="{_fmt(oy)}"/>')
    for name, (u, v) in points.items():
        if name == "origin":
            continue
        if name.startswith("a"):
            out.append(
                f'<line class="gen" x1="{_fmt(ox)}" y1="{_fmt(oy)}" '
                f'x2="{_fmt(sx(u))}" y2="{_fmt(sy(v))}"/>'
            )
        cls = "proj" if name.startswith("y") else "pt"
        out.append(f'<circle class="{cls}" cx="{_fmt(sx(u))}" cy="{_fmt(sy(v))}" r="3.5"/>')
        out.append(f'<text x="{_fmt(sx(u) + 6)}" y="{_fmt(sy(v) - 6)}">{escape(name)}</text>')
    if delta is not None:
        out.append(f'<text x="{PAD}" y="{PAD - 10}">{escape(_delta_label(sf, delta, doc.tolerance))}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_svg(doc: ProblemDocument, result: Optional[dict], path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(render_svg(doc, result))
