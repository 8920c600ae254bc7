"""Geometry of k-stars.

A k-star is k closed intervals (edges) of possibly different lengths glued at
a common branch point b. Points are (edge, t) with t the distance from b along
that edge. k = 1 and k = 2 are allowed, so a plain interval is the degenerate
star with one edge (b sits at the left endpoint).

The geodesic metric: same edge -> |t_p - t_q|, different edges -> t_p + t_q
(the path runs through b). The branch point has the single canonical
representation (edge=0, t=0.0), which keeps float equality of points usable
as set membership downstream.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import DomainError


@dataclass(frozen=True, order=True)
class StarPoint:
    edge: int
    t: float


@dataclass(frozen=True)
class StarSpace:
    k: int
    edge_lengths: tuple[float, ...]

    def __post_init__(self):
        if self.k < 1:
            raise DomainError(f"k must be >= 1, got {self.k}")
        if len(self.edge_lengths) != self.k:
            raise DomainError(
                f"expected {self.k} edge lengths, got {len(self.edge_lengths)}")
        for j, length in enumerate(self.edge_lengths):
            if not (length > 0):
                raise DomainError(f"edge {j} length must be positive, got {length}")

    @classmethod
    def uniform(cls, k: int, length: float = 1.0) -> "StarSpace":
        return cls(k, (float(length),) * k)

    @classmethod
    def interval(cls, length: float = 1.0) -> "StarSpace":
        """The interval [0, length] as a 1-star anchored at 0."""
        return cls(1, (float(length),))

    def point(self, edge: int, t: float) -> StarPoint:
        return canonicalize(self, StarPoint(edge, t))

    @property
    def branch(self) -> StarPoint:
        return StarPoint(0, 0.0)


def canonicalize(space: StarSpace, p: StarPoint) -> StarPoint:
    """Validate p against the space and normalize the branch representation."""
    if not 0 <= p.edge < space.k:
        raise DomainError(f"edge {p.edge} out of range for k={space.k}")
    if not (0.0 <= p.t <= space.edge_lengths[p.edge]):
        raise DomainError(
            f"t={p.t} outside [0, {space.edge_lengths[p.edge]}] on edge {p.edge}")
    if p.t == 0.0:
        return StarPoint(0, 0.0)
    return StarPoint(p.edge, float(p.t))


def distance(space: StarSpace, p: StarPoint, q: StarPoint) -> float:
    """Geodesic distance between two canonical points."""
    if p.edge == q.edge:
        return abs(p.t - q.t)
    return p.t + q.t
