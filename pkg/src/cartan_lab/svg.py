"""Self-contained SVG scatter plots of Cartan projections."""
from __future__ import annotations

import math
from xml.sax.saxutils import escape

SIZE = 480
PAD = 48
COLORS = {
    "C_plus": "#1f77b4",
    "C_minus": "#d62728",
    "OnWall": "#222222",
    "C_1": "#1f77b4",
    "C_2": "#d62728",
}


def _svg(body, title):
    head = (
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{SIZE}" height="{SIZE}" '
        f'viewBox="0 0 {SIZE} {SIZE}" font-family="sans-serif" font-size="12">\n'
        f"<title>{escape(title)}</title>\n"
        f'<rect width="{SIZE}" height="{SIZE}" fill="white"/>\n'
    )
    return head + "".join(body) + "</svg>\n"


def _f(x):
    return f"{x:.2f}"


def scatter_pairs(rows, title="Cartan projections of pairs") -> str:
    """x = left scalar, y = right scalar (both ``x_1 - x_2``); the diagonal is the wall."""
    pts = [(float(r.mu.left.scalar), float(r.mu.right.scalar), r.label) for r in rows]
    top = max([max(u, v) for u, v, _ in pts] + [1.0]) * 1.05
    span = SIZE - 2 * PAD

    def sx(u):
        return PAD + u / top * span

    def sy(v):
        return SIZE - PAD - v / top * span

    body = [
        f'<line x1="{_f(sx(0))}" y1="{_f(sy(0))}" x2="{_f(sx(top))}" y2="{_f(sy(0))}" stroke="black"/>\n',
        f'<line x1="{_f(sx(0))}" y1="{_f(sy(0))}" x2="{_f(sx(0))}" y2="{_f(sy(top))}" stroke="black"/>\n',
        f'<line x1="{_f(sx(0))}" y1="{_f(sy(0))}" x2="{_f(sx(top))}" y2="{_f(sy(top))}" '
        'stroke="gray" stroke-dasharray="4 3"/>\n',
        f'<text x="{SIZE / 2:.0f}" y="{SIZE - 12}" text-anchor="middle">left scalar x1 - x2</text>\n',
        f'<text x="14" y="{SIZE / 2:.0f}" text-anchor="middle" transform="rotate(-90 14 {SIZE / 2:.0f})">'
        "right scalar x1 - x2</text>\n",
        f'<text x="{_f(sx(top) - 4)}" y="{_f(sy(0) - 6)}" text-anchor="end">{top / 1.05:.4g}</text>\n',
    ]
    for u, v, label in pts:
        body.append(f'<circle cx="{_f(sx(u))}" cy="{_f(sy(v))}" r="3" fill="{COLORS.get(label, "#555")}" '
                    f'fill-opacity="0.6"><title>{label}</title></circle>\n')
    return _svg(body, title)


def _bary(x):
    x1, x2, x3 = (float(c) for c in x)
    return (x1 - x3) / math.sqrt(2), (x1 - 2 * x2 + x3) / math.sqrt(6)


def scatter_sl3(rows, title="Cartan projections in the SL_3 chamber") -> str:
    """Planar projection of the chamber ``x1 >= x2 >= x3``; the wall ``x2 = 0`` is dashed."""
    pts = [(*_bary(r.mu.coords), r.label) for r in rows]
    reach = max([math.hypot(a, b) for a, b, _ in pts] + [1.0]) * 1.05
    # the chamber opens to the right, symmetric about the horizontal axis
    cx, cy = PAD, SIZE / 2
    scale = (SIZE - 2 * PAD) / reach

    def to_px(a, b):
        return cx + a * scale, cy - b * scale

    def ray(direction, style):
        a, b = _bary(direction)
        norm = math.hypot(a, b)
        ex, ey = to_px(a / norm * reach, b / norm * reach)
        return f'<line x1="{_f(cx)}" y1="{_f(cy)}" x2="{_f(ex)}" y2="{_f(ey)}" {style}/>\n'

    body = [
        ray((1, 1, -2), 'stroke="black"'),
        ray((2, -1, -1), 'stroke="black"'),
        ray((1, 0, -1), 'stroke="gray" stroke-dasharray="4 3"'),
        f'<text x="{SIZE / 2:.0f}" y="20" text-anchor="middle">{escape(title)}; dashed: wall x2 = 0</text>\n',
    ]
    for a, b, label in pts:
        x, y = to_px(a, b)
        body.append(f'<circle cx="{_f(x)}" cy="{_f(y)}" r="3" fill="{COLORS.get(label, "#555")}" '
                    f'fill-opacity="0.6"><title>{label}</title></circle>\n')
    return _svg(body, title)
