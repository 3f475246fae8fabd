"""Bounding-box distances and constant-velocity extrapolation."""

from __future__ import annotations

import math

from .core import BBox

# Extrapolated boxes never shrink below one pixel per side.
MIN_EXTRAPOLATED_SIZE = 1.0


def iou_distance(a: BBox, b: BBox) -> float:
    """1 - IoU of two boxes; 0 for identical boxes, 1 for disjoint ones."""
    iw = min(a.right, b.right) - max(a.x, b.x)
    ih = min(a.bottom, b.bottom) - max(a.y, b.y)
    if iw <= 0.0 or ih <= 0.0:
        return 1.0
    inter = iw * ih
    union = a.area + b.area - inter
    return 1.0 - inter / union


def box_displacement(a: BBox, b: BBox) -> float:
    """Mean distance between corresponding corners, scaled by average box size.

    The left-top and right-bottom corner offsets are each normalized by the
    mean width (x) and mean height (y) of the two boxes, so the result is
    measured in box-size units rather than pixels.
    """
    mean_w = (a.w + b.w) / 2.0
    mean_h = (a.h + b.h) / 2.0
    d1 = math.hypot((a.x - b.x) / mean_w, (a.y - b.y) / mean_h)
    d2 = math.hypot((a.right - b.right) / mean_w, (a.bottom - b.bottom) / mean_h)
    return (d1 + d2) / 2.0


def extrapolate(prev: BBox, curr: BBox, steps: int) -> BBox:
    """Displace `curr` by `steps` times the per-frame delta from `prev` to `curr`.

    Position and size are both extrapolated linearly; sizes are clamped so the
    box stays valid. With prev == curr the result equals curr.
    """
    if steps < 1:
        raise ValueError(f"steps must be >= 1, got {steps}")
    return BBox(
        x=curr.x + steps * (curr.x - prev.x),
        y=curr.y + steps * (curr.y - prev.y),
        w=max(curr.w + steps * (curr.w - prev.w), MIN_EXTRAPOLATED_SIZE),
        h=max(curr.h + steps * (curr.h - prev.h), MIN_EXTRAPOLATED_SIZE),
    )
