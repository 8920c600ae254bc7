"""Hyperspace element representations and exact Hausdorff geometry.

Three concrete representations of compact subsets of a star:

  Arc          closed subinterval of one edge, avoiding the branch point
  StarPiece    connected neighborhood of the branch, one reach per edge
  FinitePointSet  sorted distinct canonical points
  ArcUnion     union of <= n disjoint closed intervals of the interval star

Distances are computed in closed form, never by sampling. Every element turns
into a list of edge segments; for a fixed edge the distance-to-set function is
a minimum of slope +-1 affine pieces, so the directed sup is attained at a
segment endpoint or at the midpoint of a gap of the target's shadow on that
edge's line. Enumerating those candidates gives the exact value.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from .errors import DomainError, InvariantError
from .maps import StarHomeo, apply
from .spaces import StarPoint, StarSpace, canonicalize


@dataclass(frozen=True)
class Arc:
    edge: int
    a: float
    b: float

    def __post_init__(self):
        if not (0.0 < self.a <= self.b):
            raise DomainError(f"arc needs 0 < a <= b, got [{self.a}, {self.b}]")


@dataclass(frozen=True)
class StarPiece:
    reaches: tuple[float, ...]

    def __post_init__(self):
        if any(r < 0 for r in self.reaches):
            raise DomainError(f"reaches must be >= 0, got {self.reaches}")


@dataclass(frozen=True)
class FinitePointSet:
    points: tuple[StarPoint, ...]

    def __post_init__(self):
        if not self.points:
            raise DomainError("point set must be nonempty")
        if list(self.points) != sorted(set(self.points)):
            raise DomainError("points must be sorted and distinct")


def finite_point_set(space: StarSpace, pts) -> FinitePointSet:
    canon = sorted({canonicalize(space, p) for p in pts})
    return FinitePointSet(tuple(canon))


@dataclass(frozen=True)
class ArcUnion:
    arcs: tuple[tuple[float, float], ...]

    def __post_init__(self):
        if not self.arcs:
            raise DomainError("arc union must be nonempty")
        prev_hi = None
        for a, b in self.arcs:
            if not (0.0 <= a <= b):
                raise DomainError(f"bad component [{a}, {b}]")
            if prev_hi is not None and not (a > prev_hi):
                raise DomainError("components must be sorted and disjoint")
            prev_hi = b


Element = object  # any of the four classes above


def _segments(space: StarSpace, S: Element) -> list[tuple[int, float, float]]:
    """Normalize any representation to a list of (edge, lo, hi) segments."""
    k, lengths = space.k, space.edge_lengths
    if isinstance(S, Arc):
        if not 0 <= S.edge < k:
            raise DomainError(f"arc edge {S.edge} out of range")
        if S.b > lengths[S.edge]:
            raise DomainError(f"arc reaches past edge length {lengths[S.edge]}")
        return [(S.edge, S.a, S.b)]
    if isinstance(S, StarPiece):
        if len(S.reaches) != k:
            raise DomainError(f"expected {k} reaches, got {len(S.reaches)}")
        segs = []
        for j, r in enumerate(S.reaches):
            if r > lengths[j]:
                raise DomainError(f"reach {r} past edge {j} length")
            if r > 0:
                segs.append((j, 0.0, r))
        return segs or [(0, 0.0, 0.0)]
    if isinstance(S, FinitePointSet):
        return [(p.edge, p.t, p.t) for p in
                (canonicalize(space, p) for p in S.points)]
    if isinstance(S, ArcUnion):
        if k > 2:
            raise DomainError("arc unions live on interval stars (k <= 2)")
        if S.arcs[-1][1] > lengths[0]:
            raise DomainError("arc union reaches past the interval")
        return [(0, a, b) for a, b in S.arcs]
    raise DomainError(f"unknown representation {type(S).__name__}")


def _shadow(segs, edge: int) -> list[tuple[float, float]]:
    """Target segments as intervals on the line of `edge`: same-edge segments
    keep their coordinates, everything else collapses through the branch to
    the point -lo. Returns merged, sorted intervals."""
    raw = []
    for e, lo, hi in segs:
        raw.append((lo, hi) if e == edge else (-lo, -lo))
    raw.sort()
    merged = [list(raw[0])]
    for lo, hi in raw[1:]:
        if lo <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], hi)
        else:
            merged.append([lo, hi])
    return [(lo, hi) for lo, hi in merged]


def _dist_to_shadow(t: float, shadow) -> float:
    best = None
    for lo, hi in shadow:
        d = lo - t if t < lo else (t - hi if t > hi else 0.0)
        if best is None or d < best:
            best = d
    return best


def _directed(space: StarSpace, segs_s, segs_t) -> float:
    worst = 0.0
    by_edge: dict[int, list] = {}
    for e, lo, hi in segs_s:
        by_edge.setdefault(e, []).append((lo, hi))
    for e, own in by_edge.items():
        shadow = _shadow(segs_t, e)
        candidates = []
        for lo, hi in own:
            candidates.append(lo)
            candidates.append(hi)
            for (a0, b0), (a1, b1) in zip(shadow, shadow[1:]):
                mid = 0.5 * (b0 + a1)
                if lo < mid < hi:
                    candidates.append(mid)
        for t in candidates:
            d = _dist_to_shadow(t, shadow)
            if d > worst:
                worst = d
    return worst


def hausdorff(space: StarSpace, S: Element, T: Element) -> float:
    """Exact Hausdorff distance between two represented sets."""
    segs_s = _segments(space, S)
    segs_t = _segments(space, T)
    return max(_directed(space, segs_s, segs_t), _directed(space, segs_t, segs_s))


def point_to_set(space: StarSpace, p: StarPoint, T: Element) -> float:
    p = canonicalize(space, p)
    return _dist_to_shadow(p.t, _shadow(_segments(space, T), p.edge))


def contains(space: StarSpace, S: Element, p: StarPoint) -> bool:
    """Exact membership test; float comparisons, no tolerance."""
    p = canonicalize(space, p)
    for e, lo, hi in _segments(space, S):
        if p.edge == e and lo <= p.t <= hi:
            return True
        if p.t == 0.0 and lo == 0.0:
            return True
    return False


def induced_apply(h: StarHomeo, S: Element) -> Element:
    """Image of a represented set under the induced map (elementwise h)."""
    space = h.space
    if isinstance(S, Arc):
        pa = apply(h, StarPoint(S.edge, S.a))
        pb = apply(h, StarPoint(S.edge, S.b))
        if pa.t == 0.0:
            raise InvariantError("arc image collapsed onto the branch (underflow)")
        return Arc(h.perm[S.edge], pa.t, pb.t)
    if isinstance(S, StarPiece):
        _segments(space, S)  # bounds check
        out = [0.0] * space.k
        for j, r in enumerate(S.reaches):
            if r > 0:
                q = apply(h, StarPoint(j, r))
                out[h.perm[j]] = q.t
        return StarPiece(tuple(out))
    if isinstance(S, FinitePointSet):
        return finite_point_set(space, (apply(h, p) for p in S.points))
    if isinstance(S, ArcUnion):
        _segments(space, S)
        mapped = []
        for a, b in S.arcs:
            qa = apply(h, StarPoint(0, a)) if a > 0 else space.branch
            qb = apply(h, StarPoint(0, b)) if b > 0 else space.branch
            mapped.append((qa.t, qb.t))
        return ArcUnion(tuple(mapped))
    raise DomainError(f"unknown representation {type(S).__name__}")


def endpoints(space: StarSpace, S: Element) -> FinitePointSet:
    """Topological endpoint set E(K): tips of a star piece (plus the branch
    when it has degree <= 1), arc endpoints, the points themselves."""
    if isinstance(S, Arc):
        return finite_point_set(space, [StarPoint(S.edge, S.a), StarPoint(S.edge, S.b)])
    if isinstance(S, StarPiece):
        tips = [StarPoint(j, r) for j, r in enumerate(S.reaches) if r > 0]
        if len(tips) <= 1:
            tips.append(space.branch)
        return finite_point_set(space, tips)
    if isinstance(S, FinitePointSet):
        return S
    if isinstance(S, ArcUnion):
        return boundary(space, S)
    raise DomainError(f"unknown representation {type(S).__name__}")


def boundary(space: StarSpace, U: ArcUnion) -> FinitePointSet:
    pts = []
    for a, b in U.arcs:
        pts.append(StarPoint(0, a))
        pts.append(StarPoint(0, b))
    return finite_point_set(space, pts)


C2_CLASSES = ("A", "B1", "B2", "C", "OTHER")


def classify_C2(U: ArcUnion) -> str:
    """Partition class of a <=2-component arc union: A two nondegenerate
    components, B1 arc then point, B2 point then arc, C connected, OTHER two
    singletons (excluded from the coding arguments)."""
    if len(U.arcs) == 1:
        return "C"
    if len(U.arcs) != 2:
        raise DomainError(f"classify_C2 needs <= 2 components, got {len(U.arcs)}")
    first_deg = U.arcs[0][0] == U.arcs[0][1]
    second_deg = U.arcs[1][0] == U.arcs[1][1]
    if first_deg and second_deg:
        return "OTHER"
    if first_deg:
        return "B2"
    if second_deg:
        return "B1"
    return "A"


def make_Y_element(space: StarSpace, tips: dict[int, float]) -> StarPiece:
    """Star piece with the given positive tip heights on >= 2 distinct edges."""
    if len(tips) < 2:
        raise DomainError("Y elements need tips on at least 2 edges")
    reaches = [0.0] * space.k
    for j, t in tips.items():
        if not 0 <= j < space.k:
            raise DomainError(f"edge {j} out of range")
        if not (0.0 < t <= space.edge_lengths[j]):
            raise DomainError(f"tip height {t} outside (0, {space.edge_lengths[j]}]")
        reaches[j] = float(t)
    return StarPiece(tuple(reaches))


# --- seeded samplers (uniform coordinates, then canonicalized) ---------------


def random_arc(space: StarSpace, rng: random.Random) -> Arc:
    e = rng.randrange(space.k)
    L = space.edge_lengths[e]
    while True:
        a, b = sorted((rng.uniform(0.0, L), rng.uniform(0.0, L)))
        if a > 0.0:  # exact 0 has probability ~0; resample rather than special-case
            return Arc(e, a, b)


def random_star_piece(space: StarSpace, rng: random.Random,
                      full_support: bool = False) -> StarPiece:
    reaches = []
    for j in range(space.k):
        if full_support or rng.random() < 0.8:
            reaches.append(rng.uniform(0.0, space.edge_lengths[j]))
        else:
            reaches.append(0.0)
    return StarPiece(tuple(reaches))


def random_finite_point_set(space: StarSpace, rng: random.Random,
                            size: int) -> FinitePointSet:
    pts = set()
    while len(pts) < size:
        e = rng.randrange(space.k)
        pts.add(canonicalize(space, StarPoint(e, rng.uniform(0.0, space.edge_lengths[e]))))
    return FinitePointSet(tuple(sorted(pts)))


def random_arc_union(space: StarSpace, rng: random.Random,
                     components: int = 2) -> ArcUnion:
    L = space.edge_lengths[0]
    cuts = sorted(rng.uniform(0.0, L) for _ in range(2 * components))
    arcs = tuple((cuts[2 * i], cuts[2 * i + 1]) for i in range(components))
    return ArcUnion(arcs)


def random_element(space: StarSpace, rng: random.Random) -> Element:
    kind = rng.randrange(3 if space.k > 2 else 4)
    if kind == 0:
        return random_arc(space, rng)
    if kind == 1:
        return random_star_piece(space, rng)
    if kind == 2:
        return random_finite_point_set(space, rng, rng.randrange(1, 5))
    return random_arc_union(space, rng, rng.randrange(1, 3))
