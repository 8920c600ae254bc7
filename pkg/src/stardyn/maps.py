"""Star homeomorphisms: edge permutation plus monotone edge maps.

Edge maps act on normalized coordinates u in [0, 1]; a homeomorphism carries
edge j onto edge perm[j], rescaling by the length ratio. Orbits are computed
by stepwise application of the one-step map. This keeps composition exact at
the bit level (n steps then m steps is literally n+m applications of the same
float function), which the symbolic coding relies on for exact membership.
Forward power-map orbits eventually underflow; anything below 1e-300 is
clamped to the branch point. That only matters for windows far deeper than
any float64 orbit can resolve anyway.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import ConfigError, DomainError, InvariantError
from .spaces import StarPoint, StarSpace, canonicalize, distance

CLAMP = 1e-300


class EdgeMap:
    """Increasing homeomorphism of [0, 1] fixing both endpoints."""

    def forward(self, u: float) -> float:
        raise NotImplementedError

    def inverse(self, u: float) -> float:
        raise NotImplementedError

    def to_config(self) -> dict:
        raise NotImplementedError


@dataclass(frozen=True)
class PowerMap(EdgeMap):
    """u -> u**p for p > 0. p > 1 drifts interior points toward 0."""

    p: float

    def __post_init__(self):
        if not (self.p > 0) or not math.isfinite(self.p):
            raise DomainError(f"power exponent must be positive, got {self.p}")

    def forward(self, u: float) -> float:
        if u == 0.0 or u == 1.0:
            return u
        return u ** self.p

    def inverse(self, u: float) -> float:
        if u == 0.0 or u == 1.0:
            return u
        return u ** (1.0 / self.p)

    def to_config(self) -> dict:
        return {"family": "power", "p": self.p}


@dataclass(frozen=True)
class PiecewiseLinearMap(EdgeMap):
    """Strictly increasing piecewise-linear map given by breakpoints.

    Breakpoints must start at (0,0), end at (1,1), and be strictly increasing
    in both coordinates. Segments whose endpoints lie on the diagonal are
    evaluated as the exact identity so that fixed plateaus are detected by
    float equality, not approximately.
    """

    points: tuple[tuple[float, float], ...]

    def __post_init__(self):
        pts = self.points
        if len(pts) < 2 or pts[0] != (0.0, 0.0) or pts[-1] != (1.0, 1.0):
            raise DomainError("breakpoints must run from (0,0) to (1,1)")
        for (x0, y0), (x1, y1) in zip(pts, pts[1:]):
            if not (x1 > x0 and y1 > y0):
                raise DomainError("breakpoints must be strictly increasing")

    def _eval(self, u: float, xs_first: bool) -> float:
        for (x0, y0), (x1, y1) in zip(self.points, self.points[1:]):
            a0, b0 = (x0, y0) if xs_first else (y0, x0)
            a1, b1 = (x1, y1) if xs_first else (y1, x1)
            if u == a0:
                return b0
            if u == a1:
                return b1
            if a0 < u < a1:
                if a0 == b0 and a1 == b1:
                    return u
                return b0 + (u - a0) * ((b1 - b0) / (a1 - a0))
        raise DomainError(f"u={u} outside [0, 1]")

    def forward(self, u: float) -> float:
        return self._eval(u, True)

    def inverse(self, u: float) -> float:
        return self._eval(u, False)

    def to_config(self) -> dict:
        return {"family": "pwl", "points": [list(p) for p in self.points]}


@dataclass(frozen=True)
class ComposedEdgeMap(EdgeMap):
    """Composition chain, applied left to right. Used when raising a
    homeomorphism to its edge period."""

    maps: tuple[EdgeMap, ...]

    def forward(self, u: float) -> float:
        for g in self.maps:
            u = g.forward(u)
        return u

    def inverse(self, u: float) -> float:
        for g in reversed(self.maps):
            u = g.inverse(u)
        return u

    def to_config(self) -> dict:
        return {"family": "composed", "maps": [g.to_config() for g in self.maps]}


def edge_map_from_config(cfg: dict, pointer: str = "/edge_map") -> EdgeMap:
    if not isinstance(cfg, dict) or "family" not in cfg:
        raise ConfigError(pointer, "expected object with a 'family' key")
    family = cfg["family"]
    if family == "power":
        p = cfg.get("p")
        if not isinstance(p, (int, float)) or not p > 0:
            raise ConfigError(pointer + "/p", "expected positive number")
        return PowerMap(float(p))
    if family == "pwl":
        pts = cfg.get("points")
        if not isinstance(pts, list) or len(pts) < 2:
            raise ConfigError(pointer + "/points", "expected list of [x, y] pairs")
        try:
            return PiecewiseLinearMap(tuple((float(x), float(y)) for x, y in pts))
        except (TypeError, ValueError) as exc:
            raise ConfigError(pointer + "/points", str(exc)) from None
        except DomainError as exc:
            raise ConfigError(pointer + "/points", str(exc)) from None
    raise ConfigError(pointer + "/family", f"unknown family {family!r}")


@dataclass(frozen=True)
class StarHomeo:
    space: StarSpace
    perm: tuple[int, ...]
    edge_maps: tuple[EdgeMap, ...]

    def __post_init__(self):
        k = self.space.k
        if sorted(self.perm) != list(range(k)):
            raise DomainError(f"perm {self.perm} is not a permutation of 0..{k - 1}")
        if len(self.edge_maps) != k:
            raise DomainError(f"expected {k} edge maps, got {len(self.edge_maps)}")

    @classmethod
    def on_interval(cls, g: EdgeMap, length: float = 1.0) -> "StarHomeo":
        return cls(StarSpace.interval(length), (0,), (g,))


def _perm_inverse(perm: tuple[int, ...]) -> tuple[int, ...]:
    inv = [0] * len(perm)
    for j, e in enumerate(perm):
        inv[e] = j
    return tuple(inv)


def apply(h: StarHomeo, p: StarPoint) -> StarPoint:
    p = canonicalize(h.space, p)
    if p.t == 0.0:
        return h.space.branch
    j = p.edge
    lengths = h.space.edge_lengths
    u = p.t / lengths[j]
    v = h.edge_maps[j].forward(u)
    t = v * lengths[h.perm[j]]
    if 0.0 < t < CLAMP:
        t = 0.0
    return canonicalize(h.space, StarPoint(h.perm[j], t))


def apply_inverse(h: StarHomeo, q: StarPoint) -> StarPoint:
    q = canonicalize(h.space, q)
    if q.t == 0.0:
        return h.space.branch
    j = _perm_inverse(h.perm)[q.edge]
    lengths = h.space.edge_lengths
    u = q.t / lengths[h.perm[j]]
    v = h.edge_maps[j].inverse(u)
    t = v * lengths[j]
    if 0.0 < t < CLAMP:
        t = 0.0
    return canonicalize(h.space, StarPoint(j, t))


def iterate(h: StarHomeo, p: StarPoint, n: int) -> StarPoint:
    step = apply if n >= 0 else apply_inverse
    for _ in range(abs(n)):
        p = step(h, p)
    return p


def edge_period(h: StarHomeo) -> int:
    """Least m >= 1 with perm^m the identity."""
    identity = tuple(range(h.space.k))
    cur = h.perm
    m = 1
    while cur != identity:
        cur = tuple(h.perm[j] for j in cur)
        m += 1
    return m


def raise_to_edge_period(h: StarHomeo) -> StarHomeo:
    """h^m for m the edge period, with identity permutation.

    Edge maps compose in normalized coordinates, so length rescaling between
    visited edges cancels exactly.
    """
    m = edge_period(h)
    if m == 1:
        return h
    chains = []
    for j in range(h.space.k):
        chain, e = [], j
        for _ in range(m):
            chain.append(h.edge_maps[e])
            e = h.perm[e]
        chains.append(ComposedEdgeMap(tuple(chain)))
    return StarHomeo(h.space, tuple(range(h.space.k)), tuple(chains))


def is_wandering(h: StarHomeo, p: StarPoint) -> bool:
    """True iff p moves under h^(edge period). Exact float comparison: the
    iterate either reproduces p bit for bit (fixed plateau, identity) or not."""
    p = canonicalize(h.space, p)
    if p.t == 0.0 or p.t == h.space.edge_lengths[p.edge]:
        raise DomainError("wandering test needs a point interior to its edge")
    return iterate(h, p, edge_period(h)) != p


@dataclass(frozen=True)
class WanderingLattice:
    """Orbit window x^j_n = f^n(x^j) for |n| <= m, plus the minimum pairwise
    distance delta over all distinct (j, r) != (i, l)."""

    space: StarSpace
    m: int
    points: dict = field(repr=False)
    delta: float = 0.0

    def point(self, j: int, n: int) -> StarPoint:
        return self.points[(j, n)]

    def track(self, j: int) -> list[StarPoint]:
        return [self.points[(j, n)] for n in range(-self.m, self.m + 1)]


def wandering_lattice(h: StarHomeo, base: list[StarPoint], m: int) -> WanderingLattice:
    """Build the coding lattice for a homeomorphism with trivial edge action.

    Each track is generated as a forward-consistent chain: m inverse steps to
    the window floor, then 2m forward steps. apply(h, x_n) == x_{n+1} holds
    bitwise across the window, which exact coding membership depends on; the
    price is that x_0 matches the requested base point only to roundoff.
    """
    if edge_period(h) != 1:
        raise DomainError("wandering_lattice needs edge period 1; raise h first")
    k = h.space.k
    if len(base) != k:
        raise DomainError(f"expected {k} base points, got {len(base)}")
    if m < 0:
        raise DomainError("window radius must be >= 0")
    points: dict = {}
    for j, x in enumerate(base):
        x = canonicalize(h.space, x)
        if x.t == 0.0 or x.edge != j:
            raise DomainError(f"base point {j} must be interior to edge {j}")
        if not is_wandering(h, x):
            raise DomainError(f"base point {j} is not wandering (delta would be 0)")
        L = h.space.edge_lengths[j]
        cur = x
        for _ in range(m):
            cur = apply_inverse(h, cur)
        for n in range(-m, m + 1):
            if not (cur.edge == j and 0.0 < cur.t < L):
                raise InvariantError(
                    f"track {j}: orbit left the open edge at n={n} (window too deep)")
            points[(j, n)] = cur
            if n < m:
                cur = apply(h, cur)
    delta = _lattice_delta(h.space, points, k, m)
    if not delta > 0.0:
        raise InvariantError("two lattice points coincide (delta = 0)")
    return WanderingLattice(h.space, m, points, delta)


def _lattice_delta(space: StarSpace, points: dict, k: int, m: int) -> float:
    # Interval-homeo orbits are monotone, so each track is sorted along n and
    # the same-edge minimum is a consecutive gap; cross-edge pairs minimize at
    # the two smallest t values since d = t + t'.
    delta = math.inf
    minima = []
    for j in range(k):
        ts = [points[(j, n)].t for n in range(-m, m + 1)]
        for a, b in zip(ts, ts[1:]):
            delta = min(delta, abs(b - a))
        minima.append(min(ts))
    if k >= 2:
        lo = sorted(minima)
        delta = min(delta, lo[0] + lo[1])
    if m == 0 and k == 1:
        delta = math.inf  # single point, no pairs; callers treat inf as fine
    return delta


def star_orbit_values(h: StarHomeo, j: int, t0: float, back: int, fwd: int) -> list[float]:
    """Edge-j orbit coordinates as plain floats, positions -back..fwd, built
    with the same forward-consistent chain discipline as wandering_lattice."""
    p = h.space.point(j, t0)
    for _ in range(back):
        p = apply_inverse(h, p)
    out = []
    for n in range(-back, fwd + 1):
        out.append(p.t if p.edge == j or p.t == 0.0 else math.nan)
        if n < fwd:
            p = apply(h, p)
    return out
