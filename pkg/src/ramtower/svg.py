"""Static SVG rendering of Newton polygons.

Byte-stable by construction: every coordinate is computed in exact rational
arithmetic and formatted through one fixed-point decimal routine, so the
output is a pure function of the polygon's vertices.  No floats anywhere.
"""

from __future__ import annotations

from fractions import Fraction

from .polygon import NewtonPolygon, format_rat

_W, _H = 640, 420
_MARGIN = 48


def _fmt(x: Fraction) -> str:
    """Fixed-point decimal with two fractional digits, exact rounding."""
    scaled = round(Fraction(x) * 100)
    sign = "-" if scaled < 0 else ""
    scaled = abs(scaled)
    whole, frac = divmod(scaled, 100)
    return f"{sign}{whole}.{frac:02d}"


def render_svg(np: NewtonPolygon) -> str:
    vs = [(Fraction(x), Fraction(y)) for x, y in np.vertices]
    xs = [x for x, _ in vs]
    ys = [y for _, y in vs]
    x0, x1 = min(xs), max(xs)
    y0, y1 = min(ys), max(ys)
    spanx = (x1 - x0) or Fraction(1)
    spany = (y1 - y0) or Fraction(1)

    def sx(x):
        return _MARGIN + (x - x0) / spanx * (_W - 2 * _MARGIN)

    def sy(y):
        # SVG y grows downward
        return _H - _MARGIN - (y - y0) / spany * (_H - 2 * _MARGIN)

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 {_W} {_H}">',
        f'<rect width="{_W}" height="{_H}" fill="white"/>',
    ]
    pts = " ".join(f"{_fmt(sx(x))},{_fmt(sy(y))}" for x, y in vs)
    if len(vs) > 1:
        out.append(
            f'<polyline points="{pts}" fill="none" stroke="black" stroke-width="1.5"/>'
        )
    for x, y in vs:
        cx, cy = _fmt(sx(x)), _fmt(sy(y))
        label = f"({format_rat(x)}, {format_rat(y)})"
        out.append(f'<circle cx="{cx}" cy="{cy}" r="3" fill="black"/>')
        out.append(
            f'<text x="{_fmt(sx(x) + 6)}" y="{_fmt(sy(y) - 6)}" '
            f'font-family="monospace" font-size="12">{label}</text>'
        )
    for side, (a, b) in zip(np.sides, zip(vs, vs[1:])):
        mx = (a[0] + b[0]) / 2
        my = (a[1] + b[1]) / 2
        out.append(
            f'<text x="{_fmt(sx(mx) + 4)}" y="{_fmt(sy(my) + 14)}" '
            f'font-family="monospace" font-size="11" fill="#444">'
            f"slope {format_rat(side.slope)}</text>"
        )
    out.append("</svg>")
    return "\n".join(out) + "\n"
