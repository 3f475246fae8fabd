"""Constrained average-linkage agglomerative clustering with a threshold cut.

Clusters are merged greedily by minimum current distance. Inter-cluster
distance is the arithmetic mean over all member pairs, maintained through the
size-weighted update

    d(K+L, M) = (|K| * d(K, M) + |L| * d(L, M)) / (|K| + |L|)

Cannot-link constraints are enforced two ways at once: constrained pair
distances are pinned to a large finite sentinel, and a merged cluster inherits
the cannot-link partners of both inputs, so dilution of the sentinel through
averaging can never co-cluster a forbidden pair.
"""

from __future__ import annotations

import heapq
from collections import defaultdict
from dataclasses import dataclass
from typing import Callable, Iterable, NamedTuple, Sequence, TextIO

import numpy as np

from .core import _frozen_array

# Distance assigned to forbidden pairs; strictly above any admissible cut
# threshold, kept finite so weighted averages stay finite.
CANNOT_LINK = 1.0e6


def condensed_size(n: int) -> int:
    return n * (n - 1) // 2


def condensed_index(n: int, i: int, j: int) -> int:
    """Index of pair (i, j), i < j, in a row-major upper-triangle layout."""
    if not 0 <= i < j < n:
        raise IndexError(f"bad pair ({i}, {j}) for n={n}")
    return n * i - i * (i + 1) // 2 + (j - i - 1)


@dataclass(frozen=True)
class CondensedMatrix:
    """Upper-triangle pairwise distances for n items, row-major."""

    n: int
    values: np.ndarray

    def __post_init__(self):
        vals = _frozen_array(self.values)
        if vals.shape != (condensed_size(self.n),):
            raise ValueError(
                f"expected {condensed_size(self.n)} condensed entries for n={self.n}, "
                f"got {vals.shape}"
            )
        if self.n and vals.size and not np.all(vals >= 0.0):
            raise ValueError("distances must be nonnegative")
        object.__setattr__(self, "values", vals)

    def get(self, i: int, j: int) -> float:
        if i == j:
            return 0.0
        if i > j:
            i, j = j, i
        return float(self.values[condensed_index(self.n, i, j)])


@dataclass(frozen=True)
class ConstraintSet:
    """Unordered item-index pairs that may never share a cluster."""

    cannot_link: frozenset[tuple[int, int]]

    @classmethod
    def of(cls, pairs: Iterable[tuple[int, int]] = ()) -> "ConstraintSet":
        normalized = set()
        for a, b in pairs:
            if a == b:
                raise ValueError(f"cannot-link pair must be irreflexive, got ({a}, {b})")
            normalized.add((a, b) if a < b else (b, a))
        return cls(frozenset(normalized))

    def forbids(self, i: int, j: int) -> bool:
        return ((i, j) if i < j else (j, i)) in self.cannot_link


EMPTY_CONSTRAINTS = ConstraintSet.of()


class Merge(NamedTuple):
    a: int
    b: int
    height: float
    size: int


@dataclass(frozen=True)
class Dendrogram:
    """Merge history of one clustering run over n leaves.

    Leaves are clusters 0..n-1; the k-th merge creates cluster n+k. With
    constraints the sequence may stop short of n-1 merges.
    """

    n: int
    merges: tuple[Merge, ...]


def linkage(
    matrix: CondensedMatrix,
    constraints: ConstraintSet = EMPTY_CONSTRAINTS,
    *,
    trace: TextIO | None = None,
) -> Dendrogram:
    """Run constrained average-linkage clustering over a distance matrix.

    Ties on the minimum distance break toward the lexicographically smallest
    cluster-index pair. Stops when only forbidden (sentinel) pairs remain.
    When `trace` is given, one "merge <a> <b> <height> <size>" line per merge
    is written to it.
    """
    n = matrix.n
    size = {i: 1 for i in range(n)}
    partners: dict[int, set[int]] = defaultdict(set)
    for a, b in constraints.cannot_link:
        if not (0 <= a < n and 0 <= b < n):
            raise IndexError(f"constraint ({a}, {b}) outside item range 0..{n - 1}")
        partners[a].add(b)
        partners[b].add(a)

    dist: dict[tuple[int, int], float] = {}
    heap: list[tuple[float, int, int]] = []
    for i in range(n):
        for j in range(i + 1, n):
            d = CANNOT_LINK if j in partners[i] else matrix.get(i, j)
            dist[(i, j)] = d
            heap.append((d, i, j))
    heapq.heapify(heap)

    active = set(range(n))
    merges: list[Merge] = []
    while heap:
        d, a, b = heapq.heappop(heap)
        if a not in active or b not in active:
            continue
        if d >= CANNOT_LINK:
            break
        new = n + len(merges)
        active.discard(a)
        active.discard(b)
        size[new] = size[a] + size[b]
        merges.append(Merge(a, b, d, size[new]))
        if trace is not None:
            trace.write(f"merge {a} {b} {d!r} {size[new]}\n")

        inherited = partners[a] | partners[b]
        partners[new] = inherited
        for p in inherited:
            partners[p].add(new)

        for m in active:
            if m in inherited:
                dm = CANNOT_LINK
            else:
                key_a = (m, a) if m < a else (a, m)
                key_b = (m, b) if m < b else (b, m)
                dm = (size[a] * dist[key_a] + size[b] * dist[key_b]) / size[new]
            dist[(m, new)] = dm
            heapq.heappush(heap, (dm, m, new))
        active.add(new)

    return Dendrogram(n=n, merges=tuple(merges))


def cut(dendrogram: Dendrogram, threshold: float) -> list[list[int]]:
    """Apply all merges with height <= threshold and return the flat partition.

    Clusters are listed by their smallest member index, members ascending.
    """
    if not 0.0 < threshold < CANNOT_LINK:
        raise ValueError(
            f"threshold must be in (0, {CANNOT_LINK}), got {threshold}"
        )
    members: dict[int, list[int]] = {i: [i] for i in range(dendrogram.n)}
    for k, merge in enumerate(dendrogram.merges):
        # Heights are nondecreasing, so the applicable merges are a prefix.
        if merge.height > threshold:
            break
        members[dendrogram.n + k] = members.pop(merge.a) + members.pop(merge.b)
    return sorted((sorted(c) for c in members.values()), key=lambda c: c[0])


def cluster(
    items: Sequence,
    metric: Callable,
    constraints: ConstraintSet = EMPTY_CONSTRAINTS,
    *,
    threshold: float,
) -> list[list[int]]:
    """Cluster items under a pairwise metric; returns item-index clusters."""
    n = len(items)
    if n == 0:
        return []
    values = np.empty(condensed_size(n), dtype=np.float64)
    k = 0
    for i in range(n):
        for j in range(i + 1, n):
            values[k] = metric(items[i], items[j])
            k += 1
    matrix = CondensedMatrix(n=n, values=values)
    return cut(linkage(matrix, constraints), threshold)
