"""Dependency-free SVG bar charts for metric tables.

Output is a pure function of the input rows: coordinates are printed with
fixed precision and nothing time- or environment-dependent is embedded.
"""

import math
from xml.sax.saxutils import escape

from .metrics import METRIC_NAMES, MetricReport, format_value

WIDTH = 640
HEIGHT = 360
MARGIN_LEFT = 70
MARGIN_RIGHT = 20
MARGIN_TOP = 40
MARGIN_BOTTOM = 60
BAR_FILL = "#4c72b0"


def _num(x):
    return f"{x:.2f}"


def bar_chart_svg(reports, metric, title=None):
    """Render one bar per operator row for `metric` as an SVG string.

    A row named ``ideal`` supplies the reference line and is not drawn as a
    bar. Infinite and NaN values get a text label instead of a bar.
    """
    if metric not in METRIC_NAMES:
        raise ValueError(f"unknown metric {metric!r}; expected one of {', '.join(METRIC_NAMES)}")
    ideal = MetricReport.ideal()
    rows = []
    for rep in reports:
        if rep.method == "ideal":
            ideal = rep
        else:
            rows.append((rep.method, getattr(rep, metric)))
    ideal_value = getattr(ideal, metric)

    finite = [v for _, v in rows if math.isfinite(v)]
    if math.isfinite(ideal_value):
        finite.append(ideal_value)
    lo = min([0.0] + finite)
    hi = max([0.0] + finite)
    if hi == lo:
        hi = lo + 1.0
    span = hi - lo
    hi += 0.05 * span
    if lo < 0:
        lo -= 0.05 * span

    plot_w = WIDTH - MARGIN_LEFT - MARGIN_RIGHT
    plot_h = HEIGHT - MARGIN_TOP - MARGIN_BOTTOM

    def y_of(v):
        return MARGIN_TOP + (hi - v) / (hi - lo) * plot_h

    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" '
        f'viewBox="0 0 {WIDTH} {HEIGHT}">',
        f'<rect x="0" y="0" width="{WIDTH}" height="{HEIGHT}" fill="white"/>',
        f'<text x="{WIDTH / 2:.2f}" y="24" text-anchor="middle" font-family="sans-serif" '
        f'font-size="16">{escape(title or metric.upper())}</text>',
    ]
    y0 = y_of(0.0)
    out.append(f'<line x1="{MARGIN_LEFT}" y1="{_num(y0)}" x2="{WIDTH - MARGIN_RIGHT}" '
               f'y2="{_num(y0)}" stroke="black" stroke-width="1"/>')
    out.append(f'<line x1="{MARGIN_LEFT}" y1="{MARGIN_TOP}" x2="{MARGIN_LEFT}" '
               f'y2="{HEIGHT - MARGIN_BOTTOM}" stroke="black" stroke-width="1"/>')
    for tick in (lo, (lo + hi) / 2, hi):
        out.append(f'<text x="{MARGIN_LEFT - 6}" y="{_num(y_of(tick) + 4)}" text-anchor="end" '
                   f'font-family="sans-serif" font-size="10">{tick:.4g}</text>')

    slot = plot_w / max(1, len(rows))
    bar_w = 0.6 * slot
    for i, (name, value) in enumerate(rows):
        cx = MARGIN_LEFT + (i + 0.5) * slot
        if math.isfinite(value):
            top = min(y_of(value), y0)
            height = abs(y_of(value) - y0)
            out.append(f'<rect class="bar" x="{_num(cx - bar_w / 2)}" y="{_num(top)}" '
                       f'width="{_num(bar_w)}" height="{_num(height)}" fill="{BAR_FILL}">'
                       f'<title>{escape(name)}: {format_value(value)}</title></rect>')
        else:
            out.append(f'<text class="missing" x="{_num(cx)}" y="{_num(y0 - 6)}" '
                       f'text-anchor="middle" font-family="sans-serif" font-size="11">'
                       f'{format_value(value)}</text>')
        out.append(f'<text x="{_num(cx)}" y="{HEIGHT - MARGIN_BOTTOM + 18}" text-anchor="middle" '
                   f'font-family="sans-serif" font-size="12">{escape(name.upper())}</text>')

    if math.isfinite(ideal_value):
        yi = y_of(ideal_value)
        out.append(f'<line class="ideal" x1="{MARGIN_LEFT}" y1="{_num(yi)}" '
                   f'x2="{WIDTH - MARGIN_RIGHT}" y2="{_num(yi)}" stroke="#c44e52" '
                   f'stroke-width="1.5" stroke-dasharray="6,4"/>')
    out.append(f'<text x="{WIDTH - MARGIN_RIGHT}" y="{HEIGHT - 12}" text-anchor="end" '
               f'font-family="sans-serif" font-size="11" fill="#c44e52">'
               f'ideal: {format_value(ideal_value)}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
