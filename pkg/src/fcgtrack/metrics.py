"""Identity metrics: IDF1 and ID-switch count against ground truth."""

from __future__ import annotations

from collections import defaultdict

import numpy as np
from scipy.optimize import linear_sum_assignment

from .core import BBox, TrackSet
from .geometry import iou_distance


def _boxes_by_frame(tracks: TrackSet) -> dict[int, list[tuple[int, BBox]]]:
    frames: dict[int, list[tuple[int, BBox]]] = defaultdict(list)
    for tid in sorted(tracks.tracks):
        for entry in tracks.tracks[tid]:
            frames[entry.frame].append((tid, entry.bbox))
    return frames


def _iou(a: BBox, b: BBox) -> float:
    return 1.0 - iou_distance(a, b)


def idf1(gt: TrackSet, pred: TrackSet, iou_threshold: float = 0.5) -> float:
    """Identity F1 under the best global one-to-one GT-to-prediction ID mapping.

    A (gt, pred) pairing counts at a frame when both boxes exist there with
    IoU >= iou_threshold; the assignment maximizing the total matched frames
    defines IDTP. Returns 1.0 when both track sets are empty.
    """
    if not 0.0 < iou_threshold <= 1.0:
        raise ValueError(f"iou_threshold must be in (0, 1], got {iou_threshold}")
    total_gt = gt.num_boxes
    total_pred = pred.num_boxes
    if total_gt == 0 and total_pred == 0:
        return 1.0
    if total_gt == 0 or total_pred == 0:
        return 0.0

    gt_frames = _boxes_by_frame(gt)
    pred_frames = _boxes_by_frame(pred)
    counts: dict[tuple[int, int], int] = defaultdict(int)
    for frame, gt_boxes in gt_frames.items():
        pred_boxes = pred_frames.get(frame)
        if not pred_boxes:
            continue
        for gid, gbox in gt_boxes:
            for pid, pbox in pred_boxes:
                if _iou(gbox, pbox) >= iou_threshold:
                    counts[(gid, pid)] += 1

    if not counts:
        return 0.0
    gt_ids = sorted(gt.tracks)
    pred_ids = sorted(pred.tracks)
    gt_pos = {g: i for i, g in enumerate(gt_ids)}
    pred_pos = {p: i for i, p in enumerate(pred_ids)}
    matrix = np.zeros((len(gt_ids), len(pred_ids)), dtype=np.int64)
    for (gid, pid), c in counts.items():
        matrix[gt_pos[gid], pred_pos[pid]] = c
    rows, cols = linear_sum_assignment(matrix, maximize=True)
    idtp = int(matrix[rows, cols].sum())
    return 2.0 * idtp / (total_gt + total_pred)


def id_switches(gt: TrackSet, pred: TrackSet, iou_threshold: float = 0.5) -> int:
    """Count frames where a GT identity's matched predicted ID changes.

    Per frame, predictions are matched to GT greedily by descending IoU
    (one-to-one, IoU >= iou_threshold, ties toward the lower predicted ID);
    a switch is counted whenever a GT identity's match differs from its most
    recent previous match.
    """
    if not 0.0 < iou_threshold <= 1.0:
        raise ValueError(f"iou_threshold must be in (0, 1], got {iou_threshold}")
    gt_frames = _boxes_by_frame(gt)
    pred_frames = _boxes_by_frame(pred)

    last_match: dict[int, int] = {}
    switches = 0
    for frame in sorted(gt_frames):
        pred_boxes = pred_frames.get(frame)
        if not pred_boxes:
            continue
        candidates = []
        for gid, gbox in gt_frames[frame]:
            for pid, pbox in pred_boxes:
                iou = _iou(gbox, pbox)
                if iou >= iou_threshold:
                    candidates.append((-iou, pid, gid))
        candidates.sort()
        used_gt: set[int] = set()
        used_pred: set[int] = set()
        for _, pid, gid in candidates:
            if gid in used_gt or pid in used_pred:
                continue
            used_gt.add(gid)
            used_pred.add(pid)
            if gid in last_match and last_match[gid] != pid:
                switches += 1
            last_match[gid] = pid
    return switches
