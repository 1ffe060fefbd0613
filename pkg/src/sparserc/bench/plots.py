"""Minimal static SVG line charts; no plotting dependency."""

from xml.sax.saxutils import escape

W, H = 480, 320
LEFT, RIGHT, TOP, BOTTOM = 64, 16, 32, 48


def _ticks(lo, hi, k=5):
    if hi == lo:
        return [lo]
    return [lo + (hi - lo) * i / (k - 1) for i in range(k)]


def line_chart_svg(xs, ys, errs=None, xlabel="", ylabel="", title=""):
    """Polyline of ys against xs with optional +-err bars."""
    errs = errs or [0.0] * len(ys)
    lo_y = min(y - e for y, e in zip(ys, errs))
    hi_y = max(y + e for y, e in zip(ys, errs))
    if hi_y == lo_y:
        lo_y, hi_y = lo_y - 1, hi_y + 1
    lo_x, hi_x = min(xs), max(xs)
    if hi_x == lo_x:
        lo_x, hi_x = lo_x - 1, hi_x + 1

    def px(x):
        return LEFT + (x - lo_x) / (hi_x - lo_x) * (W - LEFT - RIGHT)

    def py(y):
        return H - BOTTOM - (y - lo_y) / (hi_y - lo_y) * (H - TOP - BOTTOM)

    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{W}" height="{H}" viewBox="0 0 {W} {H}">',
        '<rect width="100%" height="100%" fill="white"/>',
        f'<text x="{W / 2}" y="20" text-anchor="middle" font-size="14">{escape(title)}</text>',
        f'<line x1="{LEFT}" y1="{H - BOTTOM}" x2="{W - RIGHT}" y2="{H - BOTTOM}" stroke="black"/>',
        f'<line x1="{LEFT}" y1="{TOP}" x2="{LEFT}" y2="{H - BOTTOM}" stroke="black"/>',
        f'<text x="{W / 2}" y="{H - 8}" text-anchor="middle" font-size="12">{escape(xlabel)}</text>',
        f'<text x="14" y="{H / 2}" text-anchor="middle" font-size="12" '
        f'transform="rotate(-90 14 {H / 2})">{escape(ylabel)}</text>',
    ]
    for t in _ticks(lo_y, hi_y):
        parts.append(f'<text x="{LEFT - 6}" y="{py(t) + 4:.1f}" text-anchor="end" font-size="10">{t:.3g}</text>')
    for x in xs:
        parts.append(f'<text x="{px(x):.1f}" y="{H - BOTTOM + 14}" text-anchor="middle" font-size="10">{x:g}</text>')
    pts = " ".join(f"{px(x):.1f},{py(y):.1f}" for x, y in zip(xs, ys))
    parts.append(f'<polyline points="{pts}" fill="none" stroke="steelblue" stroke-width="2"/>')
    for x, y, e in zip(xs, ys, errs):
        if e:
            parts.append(f'<line x1="{px(x):.1f}" y1="{py(y - e):.1f}" x2="{px(x):.1f}" '
                         f'y2="{py(y + e):.1f}" stroke="steelblue"/>')
        parts.append(f'<circle cx="{px(x):.1f}" cy="{py(y):.1f}" r="3" fill="steelblue"/>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"
