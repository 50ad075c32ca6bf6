"""Gantt charts of crane schedules as SVG 1.1 or plain text.

One lane per crane, highest crane on top. A bar spans ``[s_i, c_i]`` and
carries the task id; the bay is written above it. Bars are drawn inside a
group scaled to time units, so the right edge of the last bar is exactly
the makespan in user coordinates of that group.
"""

from __future__ import annotations

import math
from xml.sax.saxutils import escape

from ..feasibility import Schedule, ScheduleError, check
from ..model import Instance

__all__ = ["emit_gantt", "svg_gantt", "text_gantt"]

_COLORS = ("#4e79a7", "#f28e2b", "#59a14f", "#e15759", "#76b7b2", "#edc948", "#b07aa1",
           "#ff9da7", "#9c755f", "#bab0ac")


def emit_gantt(inst: Instance, sched: Schedule, fmt: str = "svg", **kw) -> str:
    """Render `sched`; refuses schedules that violate the model."""
    report = check(inst, sched)
    if report:
        raise ScheduleError(f"refusing to draw an infeasible schedule:\n{report}")
    if fmt == "svg":
        return svg_gantt(inst, sched, **kw)
    if fmt == "text":
        return text_gantt(inst, sched, **kw)
    raise ValueError(f"unknown format {fmt!r}; expected 'svg' or 'text'")


def _tick_step(span: float, target: int = 8) -> int:
    raw = span / target
    mag = 10 ** math.floor(math.log10(raw)) if raw >= 1 else 1
    for f in (1, 2, 5, 10):
        if f * mag >= raw:
            return max(1, int(f * mag))
    return int(10 * mag)


def svg_gantt(inst: Instance, sched: Schedule, width: int = 800, lane: int = 40,
              title: str | None = None) -> str:
    cmax = sched.makespan
    left, right, top, bottom = 70, 110, 30 if title else 12, 44
    height = top + inst.m * lane + bottom
    sx = width / cmax
    total_w = left + width + right

    def x(t):
        return left + t * sx

    out = [
        '<?xml version="1.0" standalone="no"?>',
        '<!DOCTYPE svg PUBLIC "-//W3C//DTD SVG 1.1//EN" '
        '"http://www.w3.org/Graphics/SVG/1.1/DTD/svg11.dtd">',
        f'<svg version="1.1" xmlns="http://www.w3.org/2000/svg" width="{total_w}" '
        f'height="{height}" viewBox="0 0 {total_w} {height}" font-family="sans-serif">',
        f'<desc>makespan {cmax}; direction {sched.direction}</desc>',
    ]
    if title:
        out.append(f'<text x="{left}" y="18" font-size="14">{escape(title)}</text>')

    def lane_y(k):
        return top + (inst.m - k) * lane

    for k in range(1, inst.m + 1):
        y = lane_y(k)
        out.append(f'<rect x="{left}" y="{y}" width="{width}" height="{lane}" '
                   f'fill="{"#f4f4f4" if k % 2 else "#ffffff"}"/>')
        out.append(f'<text x="{left - 8}" y="{y + lane / 2 + 4:.1f}" font-size="12" '
                   f'text-anchor="end">QC{k}</text>')

    # bars in time units: x is the start time, width the processing time
    out.append(f'<g id="bars" transform="translate({left} 0) scale({sx!r} 1)">')
    for i in range(inst.n):
        k = sched.assignment[i]
        y = lane_y(k) + 8
        out.append(f'<rect class="task" id="task{i + 1}" x="{sched.start[i]}" y="{y}" '
                   f'width="{inst.p[i]}" height="{lane - 12}" '
                   f'fill="{_COLORS[i % len(_COLORS)]}" fill-opacity="0.85">'
                   f'<title>task {i + 1}, bay {inst.bay[i]}: {sched.start[i]} to '
                   f'{sched.completion[i]}</title></rect>')
    out.append('</g>')

    for i in range(inst.n):
        k = sched.assignment[i]
        cx = x((sched.start[i] + sched.completion[i]) / 2)
        y = lane_y(k)
        out.append(f'<text x="{cx:.2f}" y="{y + lane / 2 + 7:.1f}" font-size="11" '
                   f'text-anchor="middle" fill="#ffffff">{i + 1}</text>')
        out.append(f'<text x="{cx:.2f}" y="{y + 7:.1f}" font-size="8" '
                   f'text-anchor="middle" fill="#555555">b{inst.bay[i]}</text>')

    axis_y = top + inst.m * lane
    out.append(f'<line x1="{left}" y1="{axis_y}" x2="{left + width}" y2="{axis_y}" '
               f'stroke="#000000"/>')
    step = _tick_step(cmax)
    for t in range(0, cmax + 1, step):
        out.append(f'<line x1="{x(t):.2f}" y1="{axis_y}" x2="{x(t):.2f}" y2="{axis_y + 5}" '
                   f'stroke="#000000"/>')
        if cmax - t >= step / 2 or t == 0:
            out.append(f'<text x="{x(t):.2f}" y="{axis_y + 18}" font-size="10" '
                       f'text-anchor="middle">{t}</text>')
    out.append(f'<text x="{left + width / 2:.1f}" y="{axis_y + 36}" font-size="11" '
               f'text-anchor="middle">time</text>')

    # makespan marker
    out.append(f'<line id="makespan" x1="{x(cmax):.2f}" y1="{top}" x2="{x(cmax):.2f}" '
               f'y2="{axis_y + 5}" stroke="#d62728" stroke-dasharray="4 3"/>')
    out.append(f'<text x="{x(cmax):.2f}" y="{axis_y + 18}" font-size="10" '
               f'text-anchor="middle" fill="#d62728">{cmax}</text>')
    out.append(f'<text x="{x(cmax) + 6:.2f}" y="{top + 12}" font-size="11" '
               f'fill="#d62728">C_max = {cmax}</text>')
    out.append('</svg>')
    return "\n".join(out) + "\n"


def text_gantt(inst: Instance, sched: Schedule, width: int = 72) -> str:
    """Monospaced chart, one row per crane; bar lengths are proportional to durations."""
    cmax = sched.makespan

    def col(t):
        return round(t * width / cmax)

    label_w = len(f"QC{inst.m}")
    rows = []
    for k in range(inst.m, 0, -1):
        line = [" "] * width
        for i in sched.crane_tasks(k):
            a, b = col(sched.start[i - 1]), col(sched.completion[i - 1])
            b = max(b, a + 1)
            span = b - a
            tag = str(i)
            if span >= len(tag) + 2:
                fill = "[" + tag.center(span - 2, "=") + "]"
            elif span >= len(tag):
                fill = tag.center(span, "=")
            else:
                fill = "#" * span
            line[a:b] = fill
        rows.append(f"{f'QC{k}':>{label_w}} |" + "".join(line[:width]) + "|")
    pad = " " * label_w
    rows.append(pad + " +" + "-" * width + "+")
    end = str(cmax)
    rows.append(pad + "  0" + end.rjust(width))
    rows.append(f"{pad}  C_max = {cmax}, direction {sched.direction}")
    return "\n".join(rows) + "\n"
