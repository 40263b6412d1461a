"""Standalone SVG 1.1 rendering of a :class:`ContourSet`."""
from __future__ import annotations

from xml.sax.saxutils import escape

from .contour import ContourSet


def render_svg(c: ContourSet, size: int = 600, margin: int = 20, stroke: str = "#1f4e9c",
               stroke_width: float = 1.5, title: str = "") -> bytes:
    """One ``<path>`` per polyline inside an axes box; byte-identical for equal input."""
    x0, x1, y0, y1 = c.window
    inner = size - 2 * margin
    sx, sy = inner / (x1 - x0), inner / (y1 - y0)

    def px(x, y):
        return margin + (x - x0) * sx, margin + (y1 - y) * sy

    out = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}">',
    ]
    if title:
        out.append(f"<title>{escape(title)}</title>")
    out.append(f'<rect class="axes" x="{margin}" y="{margin}" width="{inner}" height="{inner}" '
               f'fill="none" stroke="#000" stroke-width="1"/>')
    if x0 < 0 < x1:
        ax, _ = px(0.0, y0)
        out.append(f'<line class="axis" x1="{ax:.2f}" y1="{margin}" x2="{ax:.2f}" y2="{margin + inner}" '
                   f'stroke="#bbb" stroke-width="0.5"/>')
    if y0 < 0 < y1:
        _, ay = px(x0, 0.0)
        out.append(f'<line class="axis" x1="{margin}" y1="{ay:.2f}" x2="{margin + inner}" y2="{ay:.2f}" '
                   f'stroke="#bbb" stroke-width="0.5"/>')
    for line, closed in zip(c.polylines, c.closed):
        pts = [px(x, y) for x, y in (line[:-1] if closed else line)]
        d = "M" + " L".join(f"{a:.2f} {b:.2f}" for a, b in pts) + (" Z" if closed else "")
        out.append(f'<path d="{d}" fill="none" stroke="{stroke}" stroke-width="{stroke_width}"/>')
    out.append("</svg>")
    return ("\n".join(out) + "\n").encode("utf-8")
