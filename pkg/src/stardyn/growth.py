"""Growth-rate regression shared by the symbolic and estimation modules.

POLYNOMIAL mode fits log(count) against log(x); the slope is the growth
exponent. EXPONENTIAL mode fits log(count) against x; the slope is the rate
in nats. Fits always use the upper half of the x-range (by sorted index),
where transients have decayed.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DomainError

POLYNOMIAL = "polynomial"
EXPONENTIAL = "exponential"


@dataclass(frozen=True)
class GrowthFit:
    mode: str
    slope: float
    intercept: float
    r2: float
    window: tuple[float, float]
    rows: tuple = ()
    epsilon: float | None = None
    stable: bool = True
    by_epsilon: tuple = ()

    def to_json(self) -> dict:
        out = {
            "slope": self.slope,
            "intercept": self.intercept,
            "r2": self.r2,
            "window": list(self.window),
            "mode": self.mode,
        }
        if self.epsilon is not None:
            out["epsilon"] = self.epsilon
        if not self.stable:
            out["stable"] = False
        return out


def fit_growth(pairs, mode: str, min_points: int = 2) -> GrowthFit:
    """Least-squares growth fit over the upper half of the x-range.

    pairs: iterable of (x, count) with x > 0 and count >= 1. Counts may be
    arbitrary-precision ints; logs are taken with math.log, which handles
    ints beyond float range.
    """
    if mode not in (POLYNOMIAL, EXPONENTIAL):
        raise DomainError(f"unknown fit mode {mode!r}")
    data = sorted((float(x), c) for x, c in pairs)
    if len(data) < 2:
        raise DomainError("need at least 2 points to fit")
    for x, c in data:
        if x <= 0:
            raise DomainError(f"x values must be positive, got {x}")
        if c < 1:
            raise DomainError(f"counts must be >= 1, got {c}")
    lo = len(data) // 2
    if len(data) - lo < min_points:
        lo = max(0, len(data) - min_points)
    window = data[lo:]
    xs = [math.log(x) if mode == POLYNOMIAL else x for x, _ in window]
    ys = [math.log(c) for _, c in window]
    n = len(xs)
    mean_x = sum(xs) / n
    mean_y = sum(ys) / n
    sxx = sum((x - mean_x) ** 2 for x in xs)
    if sxx == 0.0:
        raise DomainError("degenerate fit: all x values equal in the window")
    sxy = sum((x - mean_x) * (y - mean_y) for x, y in zip(xs, ys))
    slope = sxy / sxx
    intercept = mean_y - slope * mean_x
    ss_res = sum((y - (intercept + slope * x)) ** 2 for x, y in zip(xs, ys))
    ss_tot = sum((y - mean_y) ** 2 for y in ys)
    if ss_tot == 0.0:
        r2 = 1.0 if ss_res < 1e-18 else 0.0
    else:
        r2 = 1.0 - ss_res / ss_tot
    return GrowthFit(
        mode=mode,
        slope=slope,
        intercept=intercept,
        r2=r2,
        window=(window[0][0], window[-1][0]),
        rows=tuple(data),
    )


R2_GATE = 0.98


def fit_count_table(rows, mode: str, r2_gate: float = R2_GATE) -> GrowthFit:
    """Pick one fit from an (n, eps, count) table.

    Counts are fitted per eps; the reported fit is the one at the smallest
    eps whose R^2 clears the gate, since smaller scales resolve more of the
    dynamics. If no eps clears it, the best fit comes back flagged unstable.
    """
    rows = sorted(rows, key=lambda r: (r[0], -r[1]))
    by_eps: dict[float, list] = {}
    for n, eps, count in rows:
        by_eps.setdefault(eps, []).append((n, count))
    fits = []
    for eps in sorted(by_eps, reverse=True):
        f = fit_growth(by_eps[eps], mode)
        fits.append(GrowthFit(
            mode=f.mode, slope=f.slope, intercept=f.intercept, r2=f.r2,
            window=f.window, rows=f.rows, epsilon=eps))
    passing = [f for f in fits if f.r2 >= r2_gate]
    if passing:
        best = min(passing, key=lambda f: f.epsilon)
        stable = True
    else:
        best = max(fits, key=lambda f: f.r2)
        stable = False
    return GrowthFit(
        mode=best.mode, slope=best.slope, intercept=best.intercept,
        r2=best.r2, window=best.window, rows=tuple(rows),
        epsilon=best.epsilon, stable=stable, by_epsilon=tuple(fits))
