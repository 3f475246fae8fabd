"""Reading and writing MOTChallenge-style files, plus fps subsampling.

Detections travel as a CSV file ("frame,id,x,y,w,h,conf,...") with a binary
feature sidecar; feature row i belongs to CSV data line i. Results are written
as "frame,id,x,y,w,h,score,-1,-1,-1" rows with fixed decimal precision.
"""

from __future__ import annotations

import struct
from collections import defaultdict
from dataclasses import dataclass, replace

import numpy as np

from .core import (
    BBox,
    Detection,
    FcgConfig,
    FcgError,
    ParseError,
    TrackEntry,
    TrackSet,
)

FEATURE_MAGIC = b"FCGF"
FEATURE_VERSION = 1
_HEADER = struct.Struct("<4sIII")


@dataclass(frozen=True)
class SequenceInput:
    """Score-filtered detections of one sequence, sorted by (frame, source_row)."""

    detections: tuple[Detection, ...]
    name: str = "sequence"
    fps_ratio_applied: int = 1


def write_features(features: np.ndarray) -> bytes:
    """Serialize an (R, D) feature matrix to the binary sidecar format."""
    features = np.asarray(features, dtype=np.float64)
    if features.ndim != 2:
        raise ValueError(f"expected a 2-d feature matrix, got shape {features.shape}")
    rows, dim = features.shape
    header = _HEADER.pack(FEATURE_MAGIC, FEATURE_VERSION, rows, dim)
    return header + features.astype("<f4").tobytes()


def read_features(blob: bytes) -> np.ndarray:
    """Parse the binary feature sidecar into an (R, D) float matrix."""
    if len(blob) < _HEADER.size:
        raise ParseError("feature blob shorter than its header")
    magic, version, rows, dim = _HEADER.unpack_from(blob, 0)
    if magic != FEATURE_MAGIC:
        raise ParseError(f"bad feature blob magic {magic!r}")
    if version != FEATURE_VERSION:
        raise ParseError(f"unsupported feature blob version {version}")
    if dim < 1:
        raise ParseError(f"feature blob declares dimension {dim}")
    expected = _HEADER.size + 4 * rows * dim
    if len(blob) != expected:
        raise ParseError(
            f"feature blob length {len(blob)} does not match header "
            f"({rows} rows x {dim} dims needs {expected})"
        )
    data = np.frombuffer(blob, dtype="<f4", offset=_HEADER.size)
    return data.reshape(rows, dim).astype(np.float64)


def _data_lines(data: bytes):
    for lineno, raw in enumerate(data.decode("utf-8").split("\n"), start=1):
        line = raw.strip()
        if line:
            yield lineno, line


def parse_detections(
    det_data: bytes, feature_data: bytes, cfg: FcgConfig, name: str = "det"
) -> SequenceInput:
    """Parse a detection CSV plus its feature sidecar into a SequenceInput.

    Rows with confidence below cfg.score_threshold are dropped (their feature
    rows are skipped with them); invalid boxes or malformed lines raise with
    the offending line number. The sidecar must carry exactly one feature row
    per CSV data line, at the configured dimension.
    """
    features = read_features(feature_data)
    if features.shape[1] != cfg.feature_dim:
        raise ParseError(
            f"{name}: feature dimension {features.shape[1]} does not match "
            f"configured {cfg.feature_dim}"
        )
    rows = list(_data_lines(det_data))
    if len(rows) != features.shape[0]:
        raise ParseError(
            f"{name}: {len(rows)} detection rows but {features.shape[0]} feature rows"
        )

    detections = []
    for row_idx, (lineno, line) in enumerate(rows):
        fields = line.split(",")
        if len(fields) < 7:
            raise ParseError(
                f"{name} line {lineno}: expected at least 7 fields, got {len(fields)}"
            )
        try:
            frame = int(fields[0])
            x, y, w, h = (float(v) for v in fields[2:6])
            conf = float(fields[6])
        except ValueError as exc:
            raise ParseError(f"{name} line {lineno}: {exc}") from exc
        if frame < 1:
            raise ParseError(f"{name} line {lineno}: frame index {frame} < 1")
        if w <= 0 or h <= 0:
            raise ParseError(f"{name} line {lineno}: nonpositive box size {w}x{h}")
        if conf < cfg.score_threshold:
            continue
        try:
            det = Detection(
                frame=frame,
                bbox=BBox(x, y, w, h),
                score=conf,
                feature=features[row_idx],
                source_row=row_idx,
            )
        except (FcgError, ValueError) as exc:
            raise ParseError(f"{name} line {lineno}: {exc}") from exc
        detections.append(det)

    detections.sort(key=lambda d: (d.frame, d.source_row))
    return SequenceInput(detections=tuple(detections), name=name, fps_ratio_applied=1)


def write_detections(seq: SequenceInput) -> bytes:
    """Serialize detections to CSV with full-precision coordinates, id column -1."""
    lines = [
        f"{d.frame},-1,{d.bbox.x!r},{d.bbox.y!r},{d.bbox.w!r},{d.bbox.h!r},{d.score!r},-1,-1,-1"
        for d in seq.detections
    ]
    return ("\n".join(lines) + "\n").encode("utf-8") if lines else b""


def detection_features(seq: SequenceInput, feature_dim: int | None = None) -> np.ndarray:
    """Feature matrix aligned with write_detections row order.

    `feature_dim` fixes the column count when the sequence is empty.
    """
    if not seq.detections:
        return np.zeros((0, feature_dim if feature_dim else 1), dtype=np.float64)
    return np.stack([d.feature for d in seq.detections])


def write_tracks(tracks: TrackSet) -> bytes:
    """Serialize tracks to result rows sorted by (frame, id).

    Coordinates carry 2 decimals, scores 4; the stream is newline-terminated
    with no trailing blank line.
    """
    rows = []
    for tid, entries in tracks.tracks.items():
        for e in entries:
            rows.append((e.frame, tid, e.bbox, e.score))
    rows.sort(key=lambda r: (r[0], r[1]))
    lines = [
        f"{frame},{tid},{b.x:.2f},{b.y:.2f},{b.w:.2f},{b.h:.2f},{score:.4f},-1,-1,-1"
        for frame, tid, b, score in rows
    ]
    return ("\n".join(lines) + "\n").encode("utf-8") if lines else b""


def parse_ground_truth(gt_data: bytes, name: str = "gt") -> TrackSet:
    """Parse ground-truth CSV rows; rows with a zero flag column are ignored.

    Track IDs are kept as found in the file (not renumbered).
    """
    per_id: dict[int, list[TrackEntry]] = defaultdict(list)
    seen: set[tuple[int, int]] = set()
    for lineno, line in _data_lines(gt_data):
        fields = line.split(",")
        if len(fields) < 7:
            raise ParseError(
                f"{name} line {lineno}: expected at least 7 fields, got {len(fields)}"
            )
        try:
            frame = int(fields[0])
            tid = int(fields[1])
            x, y, w, h = (float(v) for v in fields[2:6])
            flag = float(fields[6])
        except ValueError as exc:
            raise ParseError(f"{name} line {lineno}: {exc}") from exc
        if flag == 0:
            continue
        if frame < 1:
            raise ParseError(f"{name} line {lineno}: frame index {frame} < 1")
        if tid < 1:
            raise ParseError(f"{name} line {lineno}: track id {tid} < 1")
        if (frame, tid) in seen:
            raise ParseError(f"{name} line {lineno}: duplicate (frame, id) ({frame}, {tid})")
        seen.add((frame, tid))
        try:
            bbox = BBox(x, y, w, h)
        except ValueError as exc:
            raise ParseError(f"{name} line {lineno}: {exc}") from exc
        per_id[tid].append(TrackEntry(frame, bbox, 1.0))
    tracks = {
        tid: tuple(sorted(entries, key=lambda e: e.frame))
        for tid, entries in per_id.items()
    }
    return TrackSet(tracks=tracks)


def write_ground_truth(tracks: TrackSet) -> bytes:
    """Serialize a TrackSet as ground-truth rows (flag 1, class 1, visibility 1)."""
    rows = []
    for tid, entries in tracks.tracks.items():
        for e in entries:
            rows.append((e.frame, tid, e.bbox))
    rows.sort(key=lambda r: (r[0], r[1]))
    lines = [
        f"{frame},{tid},{b.x!r},{b.y!r},{b.w!r},{b.h!r},1,1,1"
        for frame, tid, b in rows
    ]
    return ("\n".join(lines) + "\n").encode("utf-8") if lines else b""


def subsample(seq: SequenceInput, ratio: int) -> SequenceInput:
    """Keep every ratio-th frame (those with (frame-1) % ratio == 0), renumbered.

    Kept frame f becomes (f-1)//ratio + 1, so the output is a consecutive
    frame grid and all frame-gap logic operates in kept frames.
    """
    if ratio < 1:
        raise ValueError(f"ratio must be >= 1, got {ratio}")
    if ratio == 1:
        return seq
    kept = tuple(
        replace(d, frame=(d.frame - 1) // ratio + 1)
        for d in seq.detections
        if (d.frame - 1) % ratio == 0
    )
    return SequenceInput(
        detections=kept,
        name=seq.name,
        fps_ratio_applied=seq.fps_ratio_applied * ratio,
    )


def subsample_tracks(tracks: TrackSet, ratio: int) -> TrackSet:
    """Apply the subsampling frame rule to a TrackSet (for low-fps evaluation)."""
    if ratio < 1:
        raise ValueError(f"ratio must be >= 1, got {ratio}")
    if ratio == 1:
        return tracks
    out = {}
    for tid, entries in tracks.tracks.items():
        kept = tuple(
            TrackEntry((e.frame - 1) // ratio + 1, e.bbox, e.score)
            for e in entries
            if (e.frame - 1) % ratio == 0
        )
        if kept:
            out[tid] = kept
    return TrackSet(tracks=out)
