"""Appearance distances between detections and between tracklets."""

from __future__ import annotations

import math

import numpy as np

from .core import DegenerateFeatureError, DimensionMismatchError, Tracklet


def cosine_distance(h1: np.ndarray, h2: np.ndarray) -> float:
    """1 minus the cosine of the angle between two feature vectors.

    Scale-invariant; 0 for parallel vectors, 1 for orthogonal, up to 2 for
    opposite directions. The result is clamped into [0, 2] against rounding.
    """
    h1 = np.asarray(h1, dtype=np.float64)
    h2 = np.asarray(h2, dtype=np.float64)
    if h1.shape != h2.shape:
        raise DimensionMismatchError(
            f"feature dimensions differ: {h1.shape[0]} vs {h2.shape[0]}"
        )
    s1 = float(np.dot(h1, h1))
    s2 = float(np.dot(h2, h2))
    if s1 == 0.0 or s2 == 0.0:
        raise DegenerateFeatureError("cosine distance undefined for zero-norm vector")
    d = 1.0 - float(np.dot(h1, h2)) / math.sqrt(s1 * s2)
    return min(2.0, max(0.0, d))


def tracklet_distance(t1: Tracklet, t2: Tracklet) -> float:
    """Cosine distance between the cached median features of two tracklets."""
    return cosine_distance(t1.median_feature, t2.median_feature)
