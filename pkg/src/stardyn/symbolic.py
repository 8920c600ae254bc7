"""Symbolic coding of orbit windows and word-complexity counting.

A k-track symbol window assigns a {0,1}^k letter to each integer index in a
finite range; letters are stored as k-bit masks. code_set codes a finite set
against a wandering orbit lattice: bit (j, n) says whether the lattice point
x^j_n belongs to the set, decided by exact float equality (both sides come
from the same stepwise orbit chain, so equality is bit-for-bit).

Two intensional families are supported:

  AT_MOST_ONE_PER_TRACK(k): each track carries at most one 1 in total.
      Length-m factors: m+1 choices per track, (m+1)^k words.
  FULL_SHIFT(k): no constraint, 2^(k*m) words.

Counts are exact Python ints (they overflow floats fast for full shifts).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import DomainError
from .growth import GrowthFit, fit_growth
from .hyperspace import FinitePointSet, contains
from .maps import StarHomeo, WanderingLattice, wandering_lattice
from .spaces import StarPoint

AT_MOST_ONE_PER_TRACK = "at_most_one_per_track"
FULL_SHIFT = "full_shift"

ENUM_GUARD = 4_000_000


@dataclass(frozen=True)
class SymbolicFamily:
    kind: str
    k: int

    def __post_init__(self):
        if self.kind not in (AT_MOST_ONE_PER_TRACK, FULL_SHIFT):
            raise DomainError(f"unknown family kind {self.kind!r}")
        if self.k < 1:
            raise DomainError(f"k must be >= 1, got {self.k}")

    @classmethod
    def at_most_one_per_track(cls, k: int) -> "SymbolicFamily":
        return cls(AT_MOST_ONE_PER_TRACK, k)

    @classmethod
    def full_shift(cls, k: int) -> "SymbolicFamily":
        return cls(FULL_SHIFT, k)


@dataclass(frozen=True)
class SymbolWindow:
    """Letters over the index range [lo, lo + len - 1], one k-bit mask each."""

    k: int
    lo: int
    letters: tuple[int, ...]

    def __post_init__(self):
        if self.k < 1:
            raise DomainError("k must be >= 1")
        top = 1 << self.k
        if any(not 0 <= c < top for c in self.letters):
            raise DomainError("letter out of range for k tracks")

    @property
    def hi(self) -> int:
        return self.lo + len(self.letters) - 1

    def bit(self, track: int, n: int) -> int:
        if not 0 <= track < self.k:
            raise DomainError(f"track {track} out of range")
        if not self.lo <= n <= self.hi:
            raise DomainError(f"index {n} outside [{self.lo}, {self.hi}]")
        return (self.letters[n - self.lo] >> track) & 1

    def track_string(self, track: int) -> str:
        return "".join(str((c >> track) & 1) for c in self.letters)


def shift(w: SymbolWindow, l: int) -> SymbolWindow:
    """The shift sigma^l: (sigma^l w)(n) = w(n + l); the index range moves
    down by l, letters unchanged."""
    return SymbolWindow(w.k, w.lo - l, w.letters)


def truncate(w: SymbolWindow, lo: int, hi: int) -> SymbolWindow:
    if not (w.lo <= lo and hi <= w.hi and lo <= hi):
        raise DomainError(f"[{lo}, {hi}] not inside [{w.lo}, {w.hi}]")
    return SymbolWindow(w.k, lo, w.letters[lo - w.lo: hi - w.lo + 1])


@dataclass(frozen=True)
class WordSet:
    m: int
    k: int
    words: frozenset
    skipped: int = 0

    @property
    def count(self) -> int:
        return len(self.words)


def code_window(lattice: WanderingLattice, K) -> SymbolWindow:
    """Coding of any represented set against the lattice: bit (j, n) records
    whether the lattice point x^j_n lies in K, by exact membership."""
    if isinstance(K, FinitePointSet):
        kset = set(K.points)
        member = lambda p: p in kset
    else:
        member = lambda p: contains(lattice.space, K, p)
    m = lattice.m
    letters = []
    for n in range(-m, m + 1):
        letter = 0
        for j in range(lattice.space.k):
            if member(lattice.point(j, n)):
                letter |= 1 << j
        letters.append(letter)
    return SymbolWindow(lattice.space.k, -m, tuple(letters))


def code_set(h: StarHomeo, base: list[StarPoint], K: FinitePointSet,
             m: int) -> SymbolWindow:
    """Code K against the orbit window of radius m around the base points."""
    return code_window(wandering_lattice(h, base, m), K)


def words_sampled(windows, m: int) -> WordSet:
    """Distinct length-m factors seen across the given windows. Windows
    shorter than m are skipped and counted."""
    if m < 1:
        raise DomainError("word length must be >= 1")
    words = set()
    skipped = 0
    k = None
    for w in windows:
        if k is None:
            k = w.k
        elif w.k != k:
            raise DomainError(f"mixed track counts: {k} vs {w.k}")
        if len(w.letters) < m:
            skipped += 1
            continue
        for i in range(len(w.letters) - m + 1):
            words.add(w.letters[i:i + m])
    if k is None:
        raise DomainError("no windows given")
    return WordSet(m, k, frozenset(words), skipped)


def complexity_enumerated(fam: SymbolicFamily, m: int) -> int:
    """Exact factor count at length m, as an arbitrary-precision int."""
    if m < 1:
        raise DomainError("word length must be >= 1")
    if fam.kind == AT_MOST_ONE_PER_TRACK:
        return (m + 1) ** fam.k
    return 2 ** (fam.k * m)


def words_enumerated(fam: SymbolicFamily, m: int) -> frozenset:
    """Explicit factor enumeration (guarded by size)."""
    total = complexity_enumerated(fam, m)
    if total > ENUM_GUARD:
        raise DomainError(f"{total} words is past the enumeration guard")
    if fam.kind == AT_MOST_ONE_PER_TRACK:
        out = []
        for marks in itertools.product(range(m + 1), repeat=fam.k):
            letters = [0] * m
            for j, pos in enumerate(marks):
                if pos < m:  # position m encodes "no mark on this track"
                    letters[pos] |= 1 << j
            out.append(tuple(letters))
        return frozenset(out)
    return frozenset(itertools.product(range(1 << fam.k), repeat=m))


def de_bruijn(alphabet: int, order: int) -> list[int]:
    """Standard de Bruijn sequence: every length-`order` word over
    0..alphabet-1 appears exactly once cyclically."""
    seq = []
    a = [0] * alphabet * order

    def db(t: int, p: int):
        if t > order:
            if order % p == 0:
                seq.extend(a[1: p + 1])
        else:
            a[t] = a[t - p]
            db(t + 1, p)
            for j in range(a[t - p] + 1, alphabet):
                a[t] = j
                db(t + 1, t)

    db(1, 1)
    return seq


def covering_windows(fam: SymbolicFamily, m: int) -> list[SymbolWindow]:
    """A systematic window collection whose length-m factors are exactly the
    family's factors. Full shifts get a single de Bruijn window; the
    one-mark-per-track family gets one zero-padded window per factor."""
    if m < 1:
        raise DomainError("word length must be >= 1")
    if fam.kind == FULL_SHIFT:
        a = 1 << fam.k
        if a ** m > ENUM_GUARD:
            raise DomainError(f"de Bruijn window of {a}^{m} letters is too large")
        seq = de_bruijn(a, m)
        letters = tuple(seq + seq[: m - 1])
        return [SymbolWindow(fam.k, 0, letters)]
    pad = (0,) * m
    return [SymbolWindow(fam.k, -m, pad + w + pad)
            for w in sorted(words_enumerated(fam, m))]


def cylinder_join_count(source, n: int, l: int) -> int:
    """Nonempty cylinders in the join V_n v sigma^-1 V_n v ... v sigma^-(l-1) V_n,
    i.e. distinct blocks on coordinates [-n, n+l-1] (length 2n+l).

    `source` is either a SymbolicFamily (counted through the covering-window
    route) or an iterable of SymbolWindows (restrictions are deduplicated;
    windows not spanning the coordinate range are skipped).
    """
    if n < 0 or l < 1:
        raise DomainError("need n >= 0 and l >= 1")
    width = 2 * n + l
    if isinstance(source, SymbolicFamily):
        return words_sampled(covering_windows(source, width), width).count
    blocks = set()
    for w in source:
        if w.lo <= -n and w.hi >= n + l - 1:
            blocks.add(truncate(w, -n, n + l - 1).letters)
    return len(blocks)


def entropy_from_complexity(counts, mode: str) -> GrowthFit:
    """Growth fit of a complexity table {m: count}. Requires >= 8 points,
    positive and nondecreasing counts."""
    if isinstance(counts, dict):
        pairs = sorted(counts.items())
    else:
        pairs = sorted(counts)
    if len(pairs) < 8:
        raise DomainError(f"need >= 8 complexity points, got {len(pairs)}")
    prev = None
    for m, c in pairs:
        if c < 1:
            raise DomainError(f"count at m={m} must be positive")
        if prev is not None and c < prev:
            raise DomainError(f"counts must be nondecreasing (drop at m={m})")
        prev = c
    return fit_growth(pairs, mode)
