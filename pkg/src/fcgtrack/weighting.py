"""Temporal and spatial priors weighting the appearance distance between tracklets.

A tracklet pair is compared through the last box of the earlier tracklet and
the first box of the later one. Pairs that cannot be ordered in time (their
frame spans interleave) get the cannot-link sentinel instead of a weighted
distance.
"""

from __future__ import annotations

from dataclasses import dataclass

from .appearance import tracklet_distance
from .clustering import CANNOT_LINK
from .core import BBox, FcgConfig, Tracklet
from .geometry import box_displacement, extrapolate, iou_distance


@dataclass(frozen=True)
class PairContext:
    """Endpoint geometry of an ordered tracklet pair.

    `last_box_k` is the last detection of the earlier tracklet (already
    motion-extrapolated when that is enabled), `first_box_q` the first
    detection of the later one, `delta_t` the frame gap between them (>= 1).
    """

    last_box_k: BBox
    first_box_q: BBox
    delta_t: int


def temporal_weight(delta_t: int, cfg: FcgConfig) -> float:
    """1 within the association horizon, the harder `ct` factor beyond it."""
    if delta_t < 0:
        raise ValueError(f"delta_t must be >= 0, got {delta_t}")
    return 1.0 if delta_t <= cfg.kt else cfg.ct


def spatial_weights(ctx: PairContext, cfg: FcgConfig) -> tuple[float, float]:
    """(close, far) factors: overlap eases fusion, large displacement hardens it."""
    lambda_c = min(1.0, iou_distance(ctx.last_box_k, ctx.first_box_q) + cfg.off)
    d_box = box_displacement(ctx.last_box_k, ctx.first_box_q)
    lambda_f = 1.0 if d_box <= cfg.kf else cfg.cf
    return lambda_c, lambda_f


def pair_context(t1: Tracklet, t2: Tracklet, cfg: FcgConfig) -> PairContext | None:
    """Order a tracklet pair in time and collect its endpoint boxes.

    Returns None when neither ordering leaves a gap (interleaved spans).
    With motion enabled the earlier tracklet's last box is extrapolated at
    its final velocity over min(delta_t, window) frames.
    """
    if t1.last_frame < t2.first_frame:
        earlier, later = t1, t2
    elif t2.last_frame < t1.first_frame:
        earlier, later = t2, t1
    else:
        return None
    delta_t = later.first_frame - earlier.last_frame
    last_box = earlier.last.bbox
    if cfg.use_motion:
        prev_box = (
            earlier.detections[-2].bbox if len(earlier.detections) >= 2 else last_box
        )
        last_box = extrapolate(prev_box, last_box, min(delta_t, cfg.window))
    return PairContext(
        last_box_k=last_box, first_box_q=later.first.bbox, delta_t=delta_t
    )


def weighted_distance(t1: Tracklet, t2: Tracklet, cfg: FcgConfig) -> float:
    """Appearance distance scaled by the enabled temporal and spatial priors.

    With every toggle off this is exactly the plain tracklet distance.
    Temporally interleaved pairs return the cannot-link sentinel.
    """
    ctx = pair_context(t1, t2, cfg)
    if ctx is None:
        return CANNOT_LINK
    d = tracklet_distance(t1, t2)
    if cfg.use_temporal:
        d *= temporal_weight(ctx.delta_t, cfg)
    if cfg.use_spatial:
        lambda_c, lambda_f = spatial_weights(ctx, cfg)
        d *= lambda_c * lambda_f
    return d
