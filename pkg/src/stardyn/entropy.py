"""Bowen-style separated/spanning counting and entropy estimation.

Everything here works on an abstract dynamical system: a metric plus a
one-step map. Elements are arbitrary hashable objects. The greedy algorithms
are first-fit over the candidate order handed in, which makes every count
reproducible bit for bit; candidate generators are expected to enumerate in
lexicographic order of their representation fields.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Any, Callable, Sequence

from .errors import CoverageError, DomainError
from .growth import POLYNOMIAL, R2_GATE, GrowthFit, fit_count_table
from .hyperspace import hausdorff, induced_apply
from .maps import StarHomeo, apply
from .spaces import distance


@dataclass(frozen=True)
class DynSystem:
    metric: Callable[[Any, Any], float]
    step: Callable[[Any], Any]
    name: str = ""


def point_system(h: StarHomeo) -> DynSystem:
    return DynSystem(
        metric=lambda p, q: distance(h.space, p, q),
        step=lambda p: apply(h, p),
        name="points")


def hyper_system(h: StarHomeo) -> DynSystem:
    """Induced system on represented subsets with the Hausdorff metric."""
    return DynSystem(
        metric=lambda S, T: hausdorff(h.space, S, T),
        step=lambda S: induced_apply(h, S),
        name="hyperspace")


def product_system(sys_a: DynSystem, sys_b: DynSystem) -> DynSystem:
    return DynSystem(
        metric=lambda x, y: max(sys_a.metric(x[0], y[0]), sys_b.metric(x[1], y[1])),
        step=lambda x: (sys_a.step(x[0]), sys_b.step(x[1])),
        name=f"({sys_a.name})x({sys_b.name})")


def power_system(sys: DynSystem, k: int) -> DynSystem:
    if k < 1:
        raise DomainError("power must be >= 1")

    def stepk(x):
        for _ in range(k):
            x = sys.step(x)
        return x

    return DynSystem(metric=sys.metric, step=stepk, name=f"{sys.name}^{k}")


def dyn_distance(sys: DynSystem, x, y, n: int) -> float:
    """Bowen metric d_n: max of the metric along the first n iterates."""
    if n < 1:
        raise DomainError("n must be >= 1")
    worst = 0.0
    for _ in range(n):
        d = sys.metric(x, y)
        if d > worst:
            worst = d
        x = sys.step(x)
        y = sys.step(y)
    return worst


class _Orbits:
    """Per-candidate orbit rows, grown on demand and shared across cells."""

    def __init__(self, sys: DynSystem, elements: Sequence):
        self.sys = sys
        self.rows = [[e] for e in elements]

    def row(self, i: int, n: int) -> list:
        r = self.rows[i]
        while len(r) < n:
            r.append(self.sys.step(r[-1]))
        return r

    def dn(self, i: int, j: int, n: int, stop_at: float | None = None) -> float:
        ri, rj = self.row(i, n), self.row(j, n)
        metric = self.sys.metric
        worst = 0.0
        for l in range(n):
            d = metric(ri[l], rj[l])
            if d > worst:
                worst = d
                if stop_at is not None and worst >= stop_at:
                    break
        return worst


def greedy_separated(sys: DynSystem, candidates: Sequence, n: int, eps: float,
                     _orbits: _Orbits | None = None) -> list:
    """Maximal (n, eps)-separated subset, first-fit in candidate order."""
    if eps <= 0:
        raise DomainError("eps must be positive")
    orbits = _orbits or _Orbits(sys, candidates)
    selected: list[int] = []
    for i in range(len(candidates)):
        ok = True
        for j in selected:
            if orbits.dn(i, j, n, stop_at=eps) < eps:
                ok = False
                break
        if ok:
            selected.append(i)
    return [candidates[i] for i in selected]


def greedy_spanning(sys: DynSystem, candidates: Sequence, targets: Sequence,
                    n: int, eps: float) -> list:
    """Greedy (n, eps)-spanning subset of the candidates covering the targets.

    A target that is itself a candidate covers itself (self-preference keeps
    the construction deterministic and, for targets forming a prefix of the
    candidate list, guarantees span <= sep). A target with no candidate within
    eps raises CoverageError naming it.
    """
    if eps <= 0:
        raise DomainError("eps must be positive")
    cand_pos = {}
    for i, c in enumerate(candidates):
        cand_pos.setdefault(c, i)
    orbits = _Orbits(sys, list(candidates))
    tgt_orbit = _Orbits(sys, list(targets))

    def dn_cross(ci: int, ti: int) -> float:
        rc, rt = orbits.row(ci, n), tgt_orbit.row(ti, n)
        metric = sys.metric
        worst = 0.0
        for l in range(n):
            d = metric(rc[l], rt[l])
            if d > worst:
                worst = d
        return worst

    chosen: list[int] = []
    for ti, t in enumerate(targets):
        if any(dn_cross(ci, ti) <= eps for ci in chosen):
            continue
        if t in cand_pos:
            chosen.append(cand_pos[t])
            continue
        for ci in range(len(candidates)):
            if dn_cross(ci, ti) <= eps:
                chosen.append(ci)
                break
        else:
            raise CoverageError(t, eps)
    return [candidates[ci] for ci in chosen]


DEFAULT_EPS = tuple(2.0 ** -e for e in range(3, 10))
DEFAULT_NS = (8, 16, 32, 64, 128, 256)


def estimate_entropy(sys: DynSystem, candidates, eps_list=DEFAULT_EPS,
                     n_list=DEFAULT_NS, mode: str = POLYNOMIAL,
                     r2_gate: float = R2_GATE) -> GrowthFit:
    """Separated-count growth estimate over an (eps, n) grid.

    For each eps the counts are fitted over the upper half of n_list; the
    reported fit is the one at the smallest eps whose R^2 clears the gate.
    If no eps does, the best fit is returned flagged unstable.
    """
    if callable(candidates):
        candidates = list(candidates())
    else:
        candidates = list(candidates)
    if not candidates:
        raise DomainError("no candidates")
    eps_sorted = sorted(set(eps_list), reverse=True)
    n_sorted = sorted(set(n_list))
    if len(n_sorted) < 2:
        raise DomainError("need at least 2 n values")
    orbits = _Orbits(sys, candidates)
    rows = []
    for n in n_sorted:
        for eps in eps_sorted:
            count = len(greedy_separated(sys, candidates, n, eps, _orbits=orbits))
            rows.append((n, eps, count))
    return fit_count_table(rows, mode, r2_gate)


def product_power_check(sys: DynSystem, candidates: Sequence, eps_list, n_list,
                        mode: str = POLYNOMIAL, k: int = 2) -> dict:
    """Estimate the base system, its k-fold product, and its k-th power.

    Product candidates are k-tuples in lexicographic order; the power system
    reuses the base candidates. Returns the three fits plus the ratios the
    product and power laws predict to be k and 1.
    """
    base = estimate_entropy(sys, candidates, eps_list, n_list, mode)
    prod_sys = sys
    for _ in range(k - 1):
        prod_sys = product_system(prod_sys, sys)

    def tuplize(combo):
        out = combo[0]
        for c in combo[1:]:
            out = (out, c)
        return out

    prod_cands = [tuplize(c) for c in itertools.product(candidates, repeat=k)]
    prod = estimate_entropy(prod_sys, prod_cands, eps_list, n_list, mode)
    power = estimate_entropy(power_system(sys, k), candidates, eps_list, n_list, mode)
    return {
        "base": base,
        "product": prod,
        "power": power,
        "product_ratio": prod.slope / base.slope if base.slope else float("inf"),
        "power_ratio": power.slope / base.slope if base.slope else float("inf"),
    }
