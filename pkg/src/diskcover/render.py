"""Static SVG rendering of instances and solutions.

The output is plain SVG 1.1 written directly (no plotting library), so
repeated renders of the same input are byte-identical: floats are
formatted with a fixed shortest-form rule and elements are emitted in
input order.  Points are dots, disks are their arcs above the
separating line, half-planes their boundary lines; regions in the
solution are stroked distinctly.
"""

from __future__ import annotations

import math
from typing import Iterable, Optional, Set

from .instance import Instance, atomic_write

_W = 800.0          # fixed drawing width in px
_PAD = 20.0

_BASE_STYLE = 'fill="#88aadd" fill-opacity="0.25" stroke="#5577aa" stroke-width="1"'
_CHOSEN_STYLE = 'fill="#ffcc66" fill-opacity="0.35" stroke="#cc5500" stroke-width="2.5"'
_BASE_LINE = 'stroke="#5577aa" stroke-width="1"'
_CHOSEN_LINE = 'stroke="#cc5500" stroke-width="2.5"'


def _f(v: float) -> str:
    return f"{v:.6g}"


def _bounds(inst: Instance):
    xs = [0.0]
    ys = [inst.line_y]
    if inst.n:
        xs.extend(inst.points[:, 0].tolist())
        ys.extend(inst.points[:, 1].tolist())
    if inst.is_halfplane:
        for a, b in (inst.halfplanes if inst.m else []):
            ys.extend((a * x + b for x in (min(xs), max(xs))))
    else:
        for cx, cy, r in (inst.disks if inst.m else []):
            d = r * r - (cy - inst.line_y) ** 2
            if d >= 0:
                h = math.sqrt(d)
                xs.extend((cx - h, cx + h))
                ys.append(cy + r)
            ys.append(inst.line_y)
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    if x1 - x0 < 1e-9:
        x0 -= 1.0
        x1 += 1.0
    if y1 - y0 < 1e-9:
        y0 -= 1.0
        y1 += 1.0
    mx = 0.05 * (x1 - x0)
    my = 0.05 * (y1 - y0)
    return x0 - mx, y0 - my, x1 + mx, y1 + my


def render_svg(inst: Instance, chosen: Optional[Iterable[int]] = None) -> str:
    chosen_set: Set[int] = set(chosen or ())
    x0, y0, x1, y1 = _bounds(inst)
    scale = (_W - 2 * _PAD) / (x1 - x0)
    height = (y1 - y0) * scale + 2 * _PAD

    def sx(x):
        return _PAD + (x - x0) * scale

    def sy(y):
        return height - _PAD - (y - y0) * scale

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
        f'width="{_f(_W)}" height="{_f(height)}" '
        f'viewBox="0 0 {_f(_W)} {_f(height)}">',
        f'<line x1="0" y1="{_f(sy(inst.line_y))}" x2="{_f(_W)}" '
        f'y2="{_f(sy(inst.line_y))}" stroke="#333333" stroke-width="1" '
        'stroke-dasharray="6 3"/>',
    ]
    for j in range(inst.m):
        style = _CHOSEN_STYLE if j in chosen_set else _BASE_STYLE
        line_style = _CHOSEN_LINE if j in chosen_set else _BASE_LINE
        if inst.is_halfplane:
            a, b = inst.halfplanes[j]
            ya = a * x0 + b
            yb = a * x1 + b
            out.append(f'<line x1="{_f(sx(x0))}" y1="{_f(sy(ya))}" '
                       f'x2="{_f(sx(x1))}" y2="{_f(sy(yb))}" {line_style}/>')
        else:
            cx, cy, r = inst.disks[j]
            d = r * r - (cy - inst.line_y) ** 2
            if d < 0:
                continue
            h = math.sqrt(d)
            rs = r * scale
            # upper arc from the left to the right extent endpoint, closed
            # back along the separating line
            out.append(
                f'<path d="M {_f(sx(cx - h))} {_f(sy(inst.line_y))} '
                f'A {_f(rs)} {_f(rs)} 0 0 1 '
                f'{_f(sx(cx + h))} {_f(sy(inst.line_y))} Z" {style}/>')
    for i in range(inst.n):
        px, py = inst.points[i]
        out.append(f'<circle cx="{_f(sx(px))}" cy="{_f(sy(py))}" r="2.5" '
                   'fill="#111111"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def write_svg(inst: Instance, path, chosen: Optional[Iterable[int]] = None) -> None:
    atomic_write(path, render_svg(inst, chosen))
