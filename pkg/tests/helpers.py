"""Independent oracles the frozen test values were derived with.

Nothing here reuses the package's closed forms: distances go through a dense
coordinate grid, word sets through exhaustive enumeration, and separated
counts through a literal restatement of the greedy definition.
"""

from __future__ import annotations

import itertools
import math

import numpy as np

from stardyn.hyperspace import Arc, ArcUnion, FinitePointSet, StarPiece

GRID_STEP = 1e-4


def as_segments(space, S):
    if isinstance(S, Arc):
        return [(S.edge, S.a, S.b)]
    if isinstance(S, StarPiece):
        segs = [(j, 0.0, r) for j, r in enumerate(S.reaches) if r > 0]
        return segs or [(0, 0.0, 0.0)]
    if isinstance(S, FinitePointSet):
        return [(p.edge, p.t, p.t) for p in S.points]
    if isinstance(S, ArcUnion):
        return [(0, a, b) for a, b in S.arcs]
    raise TypeError(type(S).__name__)


def _cells(space, S, step):
    """Per-edge sorted arrays of grid cell indices covered by S. The branch
    point is duplicated onto every edge so same-edge scans see it."""
    lists = [set() for _ in range(space.k)]
    touches_branch = False
    for e, lo, hi in as_segments(space, S):
        i0 = int(math.ceil(lo / step - 1e-9))
        i1 = int(math.floor(hi / step + 1e-9))
        lists[e].update(range(i0, i1 + 1))
        lists[e].add(int(round(lo / step)))
        lists[e].add(int(round(hi / step)))
        if lo <= step / 2:
            touches_branch = True
    if touches_branch:
        for cells in lists:
            cells.add(0)
    return [np.array(sorted(c), dtype=np.int64) for c in lists]


def _directed(cells_a, cells_b, step):
    mins = [c[0] * step if len(c) else math.inf for c in cells_b]
    worst = 0.0
    for j, a in enumerate(cells_a):
        if not len(a):
            continue
        b = cells_b[j]
        if len(b):
            pos = np.searchsorted(b, a)
            left = np.where(pos > 0, a - b[np.clip(pos - 1, 0, None)], 2 ** 40)
            right = np.where(pos < len(b), b[np.clip(pos, None, len(b) - 1)] - a,
                             2 ** 40)
            same = np.minimum(left, right) * step
        else:
            same = np.full(len(a), math.inf)
        cross = min((m for e, m in enumerate(mins) if e != j), default=math.inf)
        d = np.minimum(same, a * step + cross)
        worst = max(worst, float(d.max()))
    return worst


def grid_hausdorff(space, S, T, step: float = GRID_STEP) -> float:
    """Brute-force Hausdorff distance on a dense grid (error ~ one step)."""
    ca, cb = _cells(space, S, step), _cells(space, T, step)
    return max(_directed(ca, cb, step), _directed(cb, ca, step))


def brute_sparse_words(k: int, m: int) -> frozenset:
    """All k-track length-m words with at most one 1 per track, by filtering
    the full alphabet product. Only feasible for small k*m."""
    out = []
    for word in itertools.product(range(1 << k), repeat=m):
        if all(sum((c >> j) & 1 for c in word) <= 1 for j in range(k)):
            out.append(word)
    return frozenset(out)


def slow_dyn_distance(metric, step, x, y, n: int) -> float:
    worst = 0.0
    for _ in range(n):
        worst = max(worst, metric(x, y))
        x, y = step(x), step(y)
    return worst


def slow_separated(metric, step, candidates, n: int, eps: float) -> list:
    """First-fit greedy straight from the definition, no caching."""
    kept = []
    for c in candidates:
        if all(slow_dyn_distance(metric, step, c, s, n) >= eps for s in kept):
            kept.append(c)
    return kept
