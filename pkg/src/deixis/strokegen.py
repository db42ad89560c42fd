"""Parametric stroke generators, one per shape class.

Used to calibrate and regression-test the classifier: each generator draws a
clean canonical stroke with randomized size, position, and orientation;
``add_noise`` perturbs points with Gaussian noise scaled to the stroke's
bounding-box diagonal.
"""

from __future__ import annotations

import math
import random

from .model import StrokePoint
from .strokes import ShapeClass

_SAMPLE_DT_MS = 16  # ~60 Hz capture


def _emit(coords: list[tuple[float, float]]) -> list[StrokePoint]:
    return [StrokePoint(round(x, 6), round(y, 6), i * _SAMPLE_DT_MS) for i, (x, y) in enumerate(coords)]


def _rotated(coords: list[tuple[float, float]], angle: float, cx: float, cy: float):
    c, s = math.cos(angle), math.sin(angle)
    return [(cx + (x - cx) * c - (y - cy) * s, cy + (x - cx) * s + (y - cy) * c) for x, y in coords]


def gen_dot(rng: random.Random) -> list[StrokePoint]:
    cx, cy = rng.uniform(0.2, 0.8), rng.uniform(0.2, 0.8)
    n = rng.randint(4, 6)
    coords = [(cx + rng.uniform(-0.002, 0.002), cy + rng.uniform(-0.002, 0.002)) for _ in range(n)]
    return _emit(coords)


def gen_line(rng: random.Random) -> list[StrokePoint]:
    length = rng.uniform(0.4, 0.7)
    angle = rng.uniform(0, 2 * math.pi)
    cx, cy = 0.5, 0.5
    n = 6
    coords = [(cx - length / 2 + length * i / (n - 1), cy) for i in range(n)]
    return _emit(_rotated(coords, angle, cx, cy))


def gen_arrow(rng: random.Random) -> list[StrokePoint]:
    # shaft, then barb-retrace-barb: the retrace puts two wide-margin sharp
    # turns in the final fifth of the path
    shaft = rng.uniform(0.4, 0.6)
    angle = rng.uniform(0, 2 * math.pi)
    head = 0.075 * shaft
    cx, cy = 0.5, 0.5
    x0 = cx - shaft / 2
    tip = (x0 + shaft, cy)
    coords = [(x0 + shaft * i / 3, cy) for i in range(4)]
    barb = math.radians(170)
    e1 = (tip[0] + head * math.cos(barb), cy + head * math.sin(barb))
    e2 = (tip[0] + head * math.cos(-barb), cy + head * math.sin(-barb))
    near_tip = (tip[0], cy + 0.25 * head)  # inexact retrace keeps turns off 180
    coords += [e1, near_tip, e2]
    return _emit(_rotated(coords, angle, cx, cy))


def gen_closed_loop(rng: random.Random) -> list[StrokePoint]:
    r = rng.uniform(0.12, 0.25)
    cx, cy = rng.uniform(0.3, 0.7), rng.uniform(0.3, 0.7)
    span = 2 * math.pi + rng.uniform(0.15, 0.35)
    phase = rng.uniform(0, 2 * math.pi)
    sweep = rng.choice((1, -1))
    n = 32
    coords = [
        (cx + r * math.cos(phase + sweep * span * i / (n - 1)), cy + r * math.sin(phase + sweep * span * i / (n - 1)))
        for i in range(n)
    ]
    return _emit(coords)


def gen_zigzag_scan(rng: random.Random) -> list[StrokePoint]:
    width = rng.uniform(0.35, 0.6)
    height = width * rng.uniform(0.35, 0.55)
    sweeps = rng.randint(4, 6)
    angle = rng.uniform(0, 2 * math.pi)
    cx, cy = 0.5, 0.5
    coords = []
    per = 4
    for s in range(sweeps):
        y = cy - height / 2 + height * s / (sweeps - 1)
        xs = [cx - width / 2 + width * i / (per - 1) for i in range(per)]
        if s % 2:
            xs.reverse()
        coords += [(x, y) for x in xs]
    return _emit(_rotated(coords, angle, cx, cy))


def gen_wavy_line(rng: random.Random) -> list[StrokePoint]:
    length = rng.uniform(0.45, 0.65)
    periods = 3
    amp = 0.05 * length
    angle = rng.uniform(0, 2 * math.pi)
    cx, cy = 0.5, 0.5
    n = 9 * periods
    coords = [
        (
            cx - length / 2 + length * i / (n - 1),
            cy + amp * math.sin(2 * math.pi * periods * i / (n - 1)),
        )
        for i in range(n)
    ]
    return _emit(_rotated(coords, angle, cx, cy))


def gen_arc(rng: random.Random) -> list[StrokePoint]:
    r = rng.uniform(0.15, 0.3)
    cx, cy = 0.5, 0.5
    span = rng.uniform(0.6 * math.pi, 1.15 * math.pi)
    phase = rng.uniform(0, 2 * math.pi)
    sweep = rng.choice((1, -1))
    n = 16
    coords = [
        (cx + r * math.cos(phase + sweep * span * i / (n - 1)), cy + r * math.sin(phase + sweep * span * i / (n - 1)))
        for i in range(n)
    ]
    return _emit(coords)


def gen_other(rng: random.Random) -> list[StrokePoint]:
    # S-curve: two opposing half circles; net turning cancels, the wide
    # aspect keeps wavy/zigzag out of reach, and nothing else fits
    r = rng.uniform(0.08, 0.13)
    angle = rng.uniform(0, 2 * math.pi)
    cx, cy = 0.5, 0.5 - 2 * r
    n = 6
    upper = [
        (cx + r * math.sin(math.pi * i / (n - 1)), cy + r - r * math.cos(math.pi * i / (n - 1))) for i in range(n)
    ]
    lower = [
        (cx - r * math.sin(math.pi * i / (n - 1)), cy + 3 * r - r * math.cos(math.pi * i / (n - 1)))
        for i in range(1, n)
    ]
    return _emit(_rotated(upper + lower, angle, 0.5, 0.5))


GENERATORS: dict[ShapeClass, object] = {
    ShapeClass.DOT: gen_dot,
    ShapeClass.LINE: gen_line,
    ShapeClass.ARROW: gen_arrow,
    ShapeClass.CLOSED_LOOP: gen_closed_loop,
    ShapeClass.ZIGZAG_SCAN: gen_zigzag_scan,
    ShapeClass.WAVY_LINE: gen_wavy_line,
    ShapeClass.ARC: gen_arc,
    ShapeClass.OTHER: gen_other,
}


def bbox_diag(points: list[StrokePoint]) -> float:
    xs = [p.x for p in points]
    ys = [p.y for p in points]
    return math.hypot(max(xs) - min(xs), max(ys) - min(ys))


def add_noise(points: list[StrokePoint], rng: random.Random, sigma_frac: float = 0.02) -> list[StrokePoint]:
    sigma = sigma_frac * bbox_diag(points)
    return [
        StrokePoint(round(p.x + rng.gauss(0, sigma), 6), round(p.y + rng.gauss(0, sigma), 6), p.t_ms)
        for p in points
    ]


def transform(points: list[StrokePoint], scale: float = 1.0, angle: float = 0.0) -> list[StrokePoint]:
    """Uniform scale then rotation about the centroid."""
    cx = sum(p.x for p in points) / len(points)
    cy = sum(p.y for p in points) / len(points)
    c, s = math.cos(angle), math.sin(angle)
    out = []
    for p in points:
        x, y = (p.x - cx) * scale, (p.y - cy) * scale
        out.append(StrokePoint(cx + x * c - y * s, cy + x * s + y * c, p.t_ms))
    return out
