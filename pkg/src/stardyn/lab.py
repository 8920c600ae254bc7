"""Seeded experiment scenarios with machine-checkable verdicts.

Each scenario owns a default config, validates overrides field by field
(errors carry a JSON-pointer path), runs a deterministic experiment, and
returns count tables, growth fits, and named boolean verdicts. Output bytes
depend only on the scenario, config, and seed; thread count changes nothing
but wall time.
"""

from __future__ import annotations

import copy
import itertools
import json
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from .errors import ConfigError
from .growth import EXPONENTIAL, POLYNOMIAL, GrowthFit, fit_count_table, fit_growth
from .hyperspace import (ArcUnion, StarPiece, boundary,
                         classify_C2, endpoints, finite_point_set, hausdorff,
                         induced_apply, make_Y_element, random_element,
                         random_finite_point_set, random_star_piece)
from .lattice import (ball_kill, count_grid, float_chain, gap_table,
                      greedy_count_1d, greedy_count_product,
                      triangle_candidates, tuple_distance_matrix)
from .maps import (PiecewiseLinearMap, PowerMap, StarHomeo, apply,
                   edge_map_from_config, wandering_lattice)
from .spaces import StarPoint, StarSpace, distance
from .symbolic import (ENUM_GUARD, SymbolicFamily, code_window,
                       complexity_enumerated, covering_windows,
                       cylinder_join_count, shift, truncate, words_enumerated,
                       words_sampled)

COUNTS_HEADER = ("n", "epsilon", "count", "grid", "seed")
COMPLEXITY_HEADER = ("m", "count", "family", "k")
AUDIT_HEADER = ("check", "samples", "max_error")


@dataclass
class RunResult:
    verdicts: dict = field(default_factory=dict)
    tables: dict = field(default_factory=dict)   # filename -> (header, rows)
    fits: dict = field(default_factory=dict)     # name -> GrowthFit
    notes: dict = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(self.verdicts.values())


@dataclass(frozen=True)
class Scenario:
    name: str
    claim: str
    defaults: dict
    runner: Callable


# --- config plumbing ---------------------------------------------------------


def merge_config(defaults: dict, override: dict, pointer: str = "") -> dict:
    """Deep-merge an override into the defaults, rejecting unknown keys and
    type changes. Error messages carry JSON-pointer paths."""
    if not isinstance(override, dict):
        raise ConfigError(pointer or "/", "expected an object")
    out = copy.deepcopy(defaults)
    for key, val in override.items():
        ptr = f"{pointer}/{key}"
        if key not in defaults:
            raise ConfigError(ptr, "unknown key")
        cur = defaults[key]
        if isinstance(cur, dict):
            out[key] = merge_config(cur, val, ptr)
        elif isinstance(cur, bool):
            if not isinstance(val, bool):
                raise ConfigError(ptr, "expected true or false")
            out[key] = val
        elif isinstance(cur, int):
            if isinstance(val, bool) or not isinstance(val, int):
                raise ConfigError(ptr, "expected an integer")
            out[key] = val
        elif isinstance(cur, float):
            if isinstance(val, bool) or not isinstance(val, (int, float)):
                raise ConfigError(ptr, "expected a number")
            out[key] = float(val)
        elif isinstance(cur, str):
            if not isinstance(val, str):
                raise ConfigError(ptr, "expected a string")
            out[key] = val
        elif isinstance(cur, list):
            if not isinstance(val, list):
                raise ConfigError(ptr, "expected a list")
            out[key] = copy.deepcopy(val)
        else:
            out[key] = copy.deepcopy(val)
    return out


def _int_range(cfg: dict, key: str, lo: int, hi: int) -> int:
    v = cfg[key]
    if not lo <= v <= hi:
        raise ConfigError(f"/{key}", f"expected an integer in [{lo}, {hi}]")
    return v


def _unit_open(cfg: dict, key: str) -> float:
    v = cfg[key]
    if not 0.0 < v < 1.0:
        raise ConfigError(f"/{key}", "expected a number strictly between 0 and 1")
    return v


def _n_list(cfg: dict, key: str = "n_list") -> list[int]:
    vals = cfg[key]
    if len(vals) < 2:
        raise ConfigError(f"/{key}", "need at least 2 entries")
    for i, v in enumerate(vals):
        if isinstance(v, bool) or not isinstance(v, int) or v < 1:
            raise ConfigError(f"/{key}/{i}", "expected a positive integer")
    if len(set(vals)) != len(vals):
        raise ConfigError(f"/{key}", "entries must be distinct")
    return sorted(vals)


def _eps_list(cfg: dict, key: str = "eps_list") -> list[float]:
    vals = cfg[key]
    if not vals:
        raise ConfigError(f"/{key}", "need at least 1 entry")
    out = []
    for i, v in enumerate(vals):
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not v > 0:
            raise ConfigError(f"/{key}/{i}", "expected a positive number")
        out.append(float(v))
    if len(set(out)) != len(out):
        raise ConfigError(f"/{key}", "entries must be distinct")
    return sorted(out, reverse=True)


def _count_rows(rows, grid: str, seed: int) -> list[tuple]:
    return [(n, eps, count, grid, seed) for n, eps, count in rows]


def _in_band(fit: GrowthFit, lo: float, hi: float) -> bool:
    return fit.stable and lo <= fit.slope <= hi


# --- star_hpol ---------------------------------------------------------------


def _run_star_hpol(cfg: dict, seed: int, threads: int,
                   rng: random.Random) -> RunResult:
    k = _int_range(cfg, "k", 2, 8)
    base_t = _unit_open(cfg, "base_t")
    back = _int_range(cfg, "back", 4, 4000)
    cand_fwd = _int_range(cfg, "cand_fwd", 0, 1000)
    n_list = _n_list(cfg)
    eps_list = _eps_list(cfg)
    audit_pairs = _int_range(cfg, "audit_pairs", 0, 100000)
    audit_steps = _int_range(cfg, "audit_steps", 1, max(n_list))
    if cfg["edge_maps"]:
        if len(cfg["edge_maps"]) != k:
            raise ConfigError("/edge_maps", f"expected {k} entries")
        gs = tuple(edge_map_from_config(mc, f"/edge_maps/{i}")
                   for i, mc in enumerate(cfg["edge_maps"]))
    else:
        gs = tuple(PowerMap(1.5) for _ in range(k))
    h = StarHomeo(StarSpace.uniform(k), tuple(range(k)), gs)

    n_max = max(n_list)
    chains = [float_chain(h, j, base_t, back, cand_fwd + n_max)
              for j in range(k)]
    hi = back + cand_fwd
    windows = [(0, hi)] * k
    rows = count_grid(
        lambda n, eps: greedy_count_product(chains, windows, n, eps),
        n_list, eps_list, threads)
    fit = fit_count_table(rows, POLYNOMIAL)

    err = 0.0
    for _ in range(audit_pairs):
        u = [rng.randrange(hi + 1) for _ in range(k)]
        v = [rng.randrange(hi + 1) for _ in range(k)]
        for l in range(audit_steps):
            ru = tuple(float(chains[j][u[j] + l]) for j in range(k))
            rv = tuple(float(chains[j][v[j] + l]) for j in range(k))
            formula = max(abs(a - b) for a, b in zip(ru, rv))
            exact = hausdorff(h.space, StarPiece(ru), StarPiece(rv))
            err = max(err, abs(formula - exact))

    res = RunResult()
    res.tables["counts.csv"] = (COUNTS_HEADER,
                                _count_rows(rows, "reach_tuples", seed))
    res.fits["reach_tuples"] = fit
    res.verdicts["exponent_in_band"] = _in_band(
        fit, cfg["expect"]["slope_min"], cfg["expect"]["slope_max"])
    res.verdicts["reach_metric_is_hausdorff"] = err == 0.0
    res.notes["audit_max_error"] = err
    res.notes["exponent"] = fit.slope
    return res


# --- interval_C --------------------------------------------------------------


def _run_interval_C(cfg: dict, seed: int, threads: int,
                    rng: random.Random) -> RunResult:
    base_t = _unit_open(cfg, "base_t")
    back = _int_range(cfg, "back", 4, 4000)
    cand_fwd = _int_range(cfg, "cand_fwd", 0, 1000)
    n_list = _n_list(cfg)
    eps_list = _eps_list(cfg)
    audit_pairs = _int_range(cfg, "audit_pairs", 0, 100000)
    audit_steps = _int_range(cfg, "audit_steps", 1, max(n_list))
    g = edge_map_from_config(cfg["map"], "/map")
    h = StarHomeo.on_interval(g)

    n_max = max(n_list)
    chain = float_chain(h, 0, base_t, back, cand_fwd + n_max)
    hi = back + cand_fwd

    rows_pts = count_grid(
        lambda n, eps: greedy_count_1d(chain, 0, hi, n, eps),
        n_list, eps_list, threads)

    tri = triangle_candidates(0, hi)

    def interval_cells(n: int) -> list[tuple]:
        G = gap_table(chain, hi + 1, n)
        D = tuple_distance_matrix(G, tri)
        return [(n, eps, len(ball_kill(D, eps))) for eps in eps_list]

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(interval_cells, n_list))
    else:
        chunks = [interval_cells(n) for n in n_list]
    rows_int = [row for chunk in chunks for row in chunk]

    fit_int = fit_count_table(rows_int, POLYNOMIAL)
    fit_pts = fit_count_table(rows_pts, POLYNOMIAL)

    err = 0.0
    for _ in range(audit_pairs):
        u = tri[rng.randrange(len(tri))]
        v = tri[rng.randrange(len(tri))]
        for l in range(audit_steps):
            su = _interval_element(chain, int(u[0]) + l, int(u[1]) + l)
            sv = _interval_element(chain, int(v[0]) + l, int(v[1]) + l)
            formula = max(abs(float(chain[u[0] + l]) - float(chain[v[0] + l])),
                          abs(float(chain[u[1] + l]) - float(chain[v[1] + l])))
            err = max(err, abs(formula - hausdorff(h.space, su, sv)))

    res = RunResult()
    res.tables["counts.csv"] = (
        COUNTS_HEADER,
        _count_rows(rows_int, "intervals", seed) +
        _count_rows(rows_pts, "points", seed))
    res.fits["intervals"] = fit_int
    res.fits["points"] = fit_pts
    e = cfg["expect"]
    res.verdicts["intervals_exponent_in_band"] = _in_band(
        fit_int, e["intervals_min"], e["intervals_max"])
    res.verdicts["points_exponent_in_band"] = _in_band(
        fit_pts, e["points_min"], e["points_max"])
    res.verdicts["endpoint_metric_is_hausdorff"] = err == 0.0
    res.notes["audit_max_error"] = err
    res.notes["intervals_exponent"] = fit_int.slope
    res.notes["points_exponent"] = fit_pts.slope
    return res


def _interval_element(chain, i: int, j: int):
    """Candidate (i, j) as a represented set: the chain decreases, so the
    interval is [chain[j], chain[i]]; a left end that has frozen onto 0 turns
    the interval into a branch-anchored piece."""
    a, b = float(chain[j]), float(chain[i])
    if a > b:
        a, b = b, a
    if a == 0.0:
        return StarPiece((b,))
    return ArcUnion(((a, b),))


# --- interval_Cn -------------------------------------------------------------


def _block_map(blocks: int, mu: float, knot: float) -> PiecewiseLinearMap:
    pts = [(0.0, 0.0)]
    w = 1.0 / blocks
    for b in range(blocks):
        a0 = b * w
        pts.append((a0 + knot * w, a0 + mu * knot * w))
        pts.append((a0 + w, a0 + w))
    return PiecewiseLinearMap(tuple(pts))


def _run_interval_Cn(cfg: dict, seed: int, threads: int,
                     rng: random.Random) -> RunResult:
    blocks = _int_range(cfg, "blocks", 2, 16)
    if blocks % 2:
        raise ConfigError("/blocks", "expected an even number of blocks")
    mu = cfg["mu"]
    knot = _unit_open(cfg, "knot")
    if not 1.0 < mu < 1.0 / knot:
        raise ConfigError("/mu", f"expected 1 < mu < {1.0 / knot:.3f}")
    base_frac = _unit_open(cfg, "base_frac")
    back = _int_range(cfg, "back", 4, 4000)
    fwd_arcs = _int_range(cfg, "cand_fwd_arcs", 0, 1000)
    fwd_pts = _int_range(cfg, "cand_fwd_points", 0, 1000)
    n_list = _n_list(cfg)
    eps_list = _eps_list(cfg)
    audit_pairs = _int_range(cfg, "audit_pairs", 0, 100000)
    audit_steps = _int_range(cfg, "audit_steps", 1, max(n_list))

    h = StarHomeo.on_interval(_block_map(blocks, mu, knot))
    n_max = max(n_list)
    fwd = max(fwd_arcs, fwd_pts) + n_max
    chains = [float_chain(h, 0, (b + base_frac) / blocks, back, fwd)
              for b in range(blocks)]

    win_arcs = [(0, back + fwd_arcs)] * blocks
    win_pts = [(0, back + fwd_pts)] * blocks
    rows_arcs = count_grid(
        lambda n, eps: greedy_count_product(chains, win_arcs, n, eps),
        n_list, eps_list, threads)
    rows_pts = count_grid(
        lambda n, eps: greedy_count_product(chains, win_pts, n, eps),
        n_list, eps_list, threads)
    fit_arcs = fit_count_table(rows_arcs, POLYNOMIAL)
    fit_pts = fit_count_table(rows_pts, POLYNOMIAL)

    def sample_tuple(windows):
        return [rng.randrange(lo, hi + 1) for lo, hi in windows]

    def coords(idx, l):
        return [float(chains[b][idx[b] + l]) for b in range(blocks)]

    arc_ratio_max, pts_ratio_max = 1.0, 1.0
    lower_ok = True
    skipped = 0
    for _ in range(audit_pairs):
        u, v = sample_tuple(win_arcs), sample_tuple(win_arcs)
        up, vp = sample_tuple(win_pts), sample_tuple(win_pts)
        for l in range(audit_steps):
            cu, cv = coords(u, l), coords(v, l)
            pu, pv = coords(up, l), coords(vp, l)
            try:
                au = ArcUnion(tuple((cu[2 * i], cu[2 * i + 1])
                                    for i in range(blocks // 2)))
                av = ArcUnion(tuple((cv[2 * i], cv[2 * i + 1])
                                    for i in range(blocks // 2)))
                fu = finite_point_set(h.space, (StarPoint(0, t) for t in pu))
                fv = finite_point_set(h.space, (StarPoint(0, t) for t in pv))
            except Exception:
                skipped += 1
                continue
            if len(fu.points) < blocks or len(fv.points) < blocks:
                skipped += 1
                continue
            for formula, exact in (
                    (max(abs(a - b) for a, b in zip(cu, cv)),
                     hausdorff(h.space, au, av)),
                    (max(abs(a - b) for a, b in zip(pu, pv)),
                     hausdorff(h.space, fu, fv))):
                if formula < exact - 1e-12:
                    lower_ok = False
            f_arc = max(abs(a - b) for a, b in zip(cu, cv))
            e_arc = hausdorff(h.space, au, av)
            if e_arc > 0:
                arc_ratio_max = max(arc_ratio_max, f_arc / e_arc)
            f_pt = max(abs(a - b) for a, b in zip(pu, pv))
            e_pt = hausdorff(h.space, fu, fv)
            if e_pt > 0:
                pts_ratio_max = max(pts_ratio_max, f_pt / e_pt)

    res = RunResult()
    res.tables["counts.csv"] = (
        COUNTS_HEADER,
        _count_rows(rows_arcs, "arc_unions", seed) +
        _count_rows(rows_pts, "point_tuples", seed))
    res.fits["arc_unions"] = fit_arcs
    res.fits["point_tuples"] = fit_pts
    e = cfg["expect"]
    res.verdicts["arc_unions_exponent_in_band"] = _in_band(
        fit_arcs, e["arc_unions_min"], e["arc_unions_max"])
    res.verdicts["point_tuples_exponent_in_band"] = _in_band(
        fit_pts, e["point_tuples_min"], e["point_tuples_max"])
    res.verdicts["coordinate_metric_dominates_hausdorff"] = lower_ok
    res.verdicts["arc_union_distortion_within_2"] = arc_ratio_max <= 2.0 + 1e-9
    res.verdicts["point_distortion_within_bound"] = (
        pts_ratio_max <= e["points_ratio_max"])
    res.notes["arc_ratio_max"] = arc_ratio_max
    res.notes["points_ratio_max"] = pts_ratio_max
    res.notes["audit_skipped"] = skipped
    res.notes["arc_unions_exponent"] = fit_arcs.slope
    res.notes["point_tuples_exponent"] = fit_pts.slope
    return res


# --- fullshift_code ----------------------------------------------------------


def _guard_cap(fam: SymbolicFamily, m_limit: int) -> int:
    m = 0
    while m < m_limit and complexity_enumerated(fam, m + 1) <= ENUM_GUARD:
        m += 1
    return m


def _run_fullshift_code(cfg: dict, seed: int, threads: int,
                        rng: random.Random) -> RunResult:
    k = _int_range(cfg, "k", 1, 8)
    m_max = _int_range(cfg, "m_max", 8, 64)
    enum_m_max = _int_range(cfg, "enum_m_max", 1, 64)
    cover_m_max = _int_range(cfg, "cover_m_max", 1, 64)
    for i, q in enumerate(cfg["poly_k_list"]):
        if isinstance(q, bool) or not isinstance(q, int) or q < 1:
            raise ConfigError(f"/poly_k_list/{i}", "expected a positive integer")
    poly_m = _n_list(cfg, "poly_m_list")

    full = SymbolicFamily.full_shift(k)
    marks = SymbolicFamily.at_most_one_per_track(k)
    rows = []
    full_pairs, marks_pairs = [], []
    for m in range(1, m_max + 1):
        cf = complexity_enumerated(full, m)
        cm = complexity_enumerated(marks, m)
        rows.append((m, cf, "full_shift", k))
        rows.append((m, cm, "sparse_marks", k))
        full_pairs.append((m, cf))
        marks_pairs.append((m, cm))

    enum_ok = True
    for fam in (full, marks):
        cap = _guard_cap(fam, enum_m_max)
        for m in range(1, cap + 1):
            enum_ok &= len(words_enumerated(fam, m)) == complexity_enumerated(fam, m)

    cover_ok = True
    for fam in (full, marks):
        cap = _guard_cap(fam, cover_m_max)
        for m in range(1, cap + 1):
            sampled = words_sampled(covering_windows(fam, m), m).words
            cover_ok &= sampled == words_enumerated(fam, m)

    fit_full = fit_growth(full_pairs, EXPONENTIAL)
    import math
    rate_err = abs(fit_full.slope - k * math.log(2))

    poly_fits = {}
    poly_err = 0.0
    for q in cfg["poly_k_list"]:
        famq = SymbolicFamily.at_most_one_per_track(q)
        pairs = [(m, complexity_enumerated(famq, m)) for m in poly_m]
        f = fit_growth(pairs, POLYNOMIAL)
        poly_fits[f"sparse_marks_k{q}"] = f
        poly_err = max(poly_err, abs(f.slope - q))
        for m in poly_m:
            rows.append((m, complexity_enumerated(famq, m), "sparse_marks", q))

    res = RunResult()
    res.tables["complexity.csv"] = (COMPLEXITY_HEADER, rows)
    res.fits["full_shift"] = fit_full
    res.fits.update(poly_fits)
    res.verdicts["closed_forms_match_enumeration"] = enum_ok
    res.verdicts["covering_windows_realize_all_words"] = cover_ok
    res.verdicts["full_shift_rate_matches"] = rate_err <= cfg["expect"]["rate_tol"]
    res.verdicts["sparse_marks_exponent_matches"] = (
        poly_err <= cfg["expect"]["poly_tol"])
    res.notes["rate_error"] = rate_err
    res.notes["poly_exponent_error"] = poly_err
    return res


# --- coding_crosscheck -------------------------------------------------------


def _run_coding_crosscheck(cfg: dict, seed: int, threads: int,
                           rng: random.Random) -> RunResult:
    k = _int_range(cfg, "k", 1, 4)
    base_t = _unit_open(cfg, "base_t")
    m = _int_range(cfg, "m", 2, 64)
    w_max = _int_range(cfg, "w_max", 1, 2 * m + 1)
    shift_steps = _int_range(cfg, "shift_steps", 1, m)
    if (2 * m + 1) ** k > 100_000:
        raise ConfigError("/m", "anchor family too large for this k")
    if cfg["edge_maps"]:
        if len(cfg["edge_maps"]) != k:
            raise ConfigError("/edge_maps", f"expected {k} entries")
        gs = tuple(edge_map_from_config(mc, f"/edge_maps/{i}")
                   for i, mc in enumerate(cfg["edge_maps"]))
    else:
        gs = tuple(PowerMap(2.0) for _ in range(k))
    h = StarHomeo(StarSpace.uniform(k), tuple(range(k)), gs)
    base = [StarPoint(j, base_t) for j in range(k)]
    lattice = wandering_lattice(h, base, m)

    lattice_ok = lattice.delta > 0.0
    for j in range(k):
        for n in range(-m, m):
            lattice_ok &= apply(h, lattice.point(j, n)) == lattice.point(j, n + 1)

    anchors = list(itertools.product(range(-m, m + 1), repeat=k))
    family = [StarPiece(tuple(lattice.point(j, a[j]).t for j in range(k)))
              for a in anchors]
    codes = [code_window(lattice, endpoints(h.space, K)) for K in family]

    fam = SymbolicFamily.at_most_one_per_track(k)
    words_ok = True
    word_rows = []
    for w in range(1, w_max + 1):
        sampled = words_sampled(codes, w)
        words_ok &= sampled.words == words_enumerated(fam, w)
        word_rows.append((w, sampled.count, "sampled", k))
        word_rows.append((w, complexity_enumerated(fam, w), "sparse_marks", k))

    probe = min(len(family), 40)
    picks = rng.sample(range(len(family)), probe)
    conj_ok = True
    for idx in picks:
        K, w0 = family[idx], codes[idx]
        Ki = K
        for i in range(1, shift_steps + 1):
            Ki = induced_apply(h, Ki)
            coded = truncate(
                code_window(lattice, endpoints(h.space, Ki)), -m + i, m)
            predicted = truncate(shift(w0, -i), -m + i, m)
            conj_ok &= coded == predicted

    res = RunResult()
    res.tables["words.csv"] = (COMPLEXITY_HEADER, word_rows)
    res.verdicts["lattice_chain_consistent"] = lattice_ok
    res.verdicts["reach_family_realizes_all_words"] = words_ok
    res.verdicts["coding_commutes_with_shift"] = conj_ok
    res.notes["delta"] = lattice.delta
    res.notes["family_size"] = len(family)
    return res


# --- isometry_check ----------------------------------------------------------


def _run_isometry_check(cfg: dict, seed: int, threads: int,
                        rng: random.Random) -> RunResult:
    k = _int_range(cfg, "k", 2, 8)
    tol = cfg["tol"]
    if not tol > 0:
        raise ConfigError("/tol", "expected a positive number")
    psi_pairs = _int_range(cfg, "psi_pairs", 1, 10 ** 6)
    matched_pairs = _int_range(cfg, "matched_pairs", 1, 10 ** 6)
    triples = _int_range(cfg, "triples", 1, 10 ** 6)
    structure_samples = _int_range(cfg, "structure_samples", 1, 10 ** 6)
    space = StarSpace.uniform(k)

    psi_err = 0.0
    for _ in range(psi_pairs):
        S = random_star_piece(space, rng, full_support=True)
        T = random_star_piece(space, rng, full_support=True)
        sup = max(abs(a - b) for a, b in zip(S.reaches, T.reaches))
        psi_err = max(psi_err, abs(hausdorff(space, S, T) - sup))

    matched_err = 0.0
    for _ in range(matched_pairs):
        K = random_finite_point_set(space, rng, 2 + rng.randrange(3))
        pts = K.points
        delta = min(distance(space, p, q)
                    for p, q in itertools.combinations(pts, 2))
        sup = 0.0
        moved = []
        for p in pts:
            if p.t == 0.0:
                moved.append(p)
                continue
            cap = min(delta / 3.0, p.t / 2.0,
                      (space.edge_lengths[p.edge] - p.t) / 2.0)
            d = rng.uniform(-cap, cap)
            moved.append(StarPoint(p.edge, p.t + d))
            sup = max(sup, abs(d))
        K2 = finite_point_set(space, moved)
        matched_err = max(matched_err, abs(hausdorff(space, K, K2) - sup))

    axiom_err = 0.0
    axioms_ok = True
    for _ in range(triples):
        S, T, U = (random_element(space, rng) for _ in range(3))
        dst, dts = hausdorff(space, S, T), hausdorff(space, T, S)
        axioms_ok &= dst == dts
        axioms_ok &= hausdorff(space, S, S) == 0.0
        slack = hausdorff(space, S, U) - (dst + hausdorff(space, T, U))
        axiom_err = max(axiom_err, slack)

    interval = StarSpace.interval(1.0)
    h_int = StarHomeo.on_interval(PowerMap(2.0))
    structure_ok = True
    for _ in range(structure_samples):
        vals = sorted(rng.uniform(0.05, 0.95) for _ in range(4))
        if len(set(vals)) < 4:
            continue
        a, b, c, d = vals
        built = {
            "A": ArcUnion(((a, b), (c, d))),
            "B1": ArcUnion(((a, b), (c, c))),
            "B2": ArcUnion(((a, a), (c, d))),
            "C": ArcUnion(((a, d),)),
            "OTHER": ArcUnion(((a, a), (c, c))),
        }
        for label, U in built.items():
            structure_ok &= classify_C2(U) == label
            structure_ok &= classify_C2(induced_apply(h_int, U)) == label
        structure_ok &= (endpoints(interval, built["A"])
                         == boundary(interval, built["A"]))
        edges = rng.sample(range(k), 2)
        tips = {j: rng.uniform(0.1, 1.0) for j in edges}
        Y = make_Y_element(space, tips)
        expected = finite_point_set(
            space, [StarPoint(j, t) for j, t in tips.items()])
        structure_ok &= endpoints(space, Y) == expected

    res = RunResult()
    res.tables["audit.csv"] = (AUDIT_HEADER, [
        ("reach_isometry", psi_pairs, psi_err),
        ("matched_points_sup", matched_pairs, matched_err),
        ("triangle_slack", triples, max(axiom_err, 0.0)),
    ])
    res.verdicts["reach_coordinates_isometric"] = psi_err <= tol
    res.verdicts["matched_points_sup_formula"] = matched_err <= tol
    res.verdicts["metric_axioms_hold"] = axioms_ok and axiom_err <= tol
    res.verdicts["structure_maps_consistent"] = structure_ok
    res.notes["psi_max_error"] = psi_err
    res.notes["matched_max_error"] = matched_err
    res.notes["triangle_max_slack"] = axiom_err
    return res


# --- cylinder_check ----------------------------------------------------------


def _run_cylinder_check(cfg: dict, seed: int, threads: int,
                        rng: random.Random) -> RunResult:
    k_full = _int_range(cfg, "fullshift_k", 1, 4)
    k_marks = _int_range(cfg, "marks_k", 1, 6)
    n_max = _int_range(cfg, "n_max", 1, 16)
    l_max = _int_range(cfg, "l_max", 1, 32)
    width_max = 2 * n_max + l_max
    if complexity_enumerated(SymbolicFamily.full_shift(k_full),
                             width_max) > ENUM_GUARD:
        raise ConfigError("/n_max", "full-shift join too large to enumerate")
    if complexity_enumerated(SymbolicFamily.at_most_one_per_track(k_marks),
                             width_max) > ENUM_GUARD:
        raise ConfigError("/n_max", "sparse-marks join too large to enumerate")

    rows = []
    ok = True
    for fam, label in ((SymbolicFamily.full_shift(k_full), "full_shift"),
                       (SymbolicFamily.at_most_one_per_track(k_marks),
                        "sparse_marks")):
        for n in range(1, n_max + 1):
            for l in range(1, l_max + 1):
                width = 2 * n + l
                joined = cylinder_join_count(fam, n, l)
                closed = complexity_enumerated(fam, width)
                direct = len(words_enumerated(fam, width))
                ok &= joined == closed == direct
                rows.append((width, joined, label, fam.k))

    res = RunResult()
    res.tables["cylinders.csv"] = (COMPLEXITY_HEADER, rows)
    res.verdicts["join_counts_match_complexity"] = ok
    return res


# --- product_power -----------------------------------------------------------


def _run_product_power(cfg: dict, seed: int, threads: int,
                       rng: random.Random) -> RunResult:
    base_t = _unit_open(cfg, "base_t")
    back = _int_range(cfg, "back", 4, 4000)
    cand_fwd = _int_range(cfg, "cand_fwd", 0, 1000)
    power = _int_range(cfg, "power", 2, 8)
    n_list = _n_list(cfg)
    eps_list = _eps_list(cfg)
    g = edge_map_from_config(cfg["map"], "/map")
    h = StarHomeo.on_interval(g)

    n_max = max(n_list)
    chain = float_chain(h, 0, base_t, back, cand_fwd + power * n_max)
    hi = back + cand_fwd

    rows_base = count_grid(
        lambda n, eps: greedy_count_1d(chain, 0, hi, n, eps),
        n_list, eps_list, threads)
    rows_prod = count_grid(
        lambda n, eps: greedy_count_product(
            [chain, chain], [(0, hi), (0, hi)], n, eps),
        n_list, eps_list, threads)
    # The power map covers `power` base steps per unit time, so sample it on
    # a time axis shrunk by the same factor to stay inside the orbit budget.
    pow_n = sorted({max(2, n // power) for n in n_list})
    rows_pow = count_grid(
        lambda n, eps: greedy_count_1d(chain, 0, hi, n, eps, stride=power),
        pow_n, eps_list, threads)

    fit_base = fit_count_table(rows_base, POLYNOMIAL)
    fit_prod = fit_count_table(rows_prod, POLYNOMIAL)
    fit_pow = fit_count_table(rows_pow, POLYNOMIAL)

    res = RunResult()
    res.tables["counts.csv"] = (
        COUNTS_HEADER,
        _count_rows(rows_base, "base", seed) +
        _count_rows(rows_prod, "product", seed) +
        _count_rows(rows_pow, "power", seed))
    res.fits["base"] = fit_base
    res.fits["product"] = fit_prod
    res.fits["power"] = fit_pow
    e = cfg["expect"]
    stable = fit_base.stable and fit_prod.stable and fit_pow.stable
    res.verdicts["product_doubles_exponent"] = stable and (
        abs(fit_prod.slope - 2.0 * fit_base.slope) <= e["product_tol"])
    res.verdicts["power_preserves_exponent"] = stable and (
        abs(fit_pow.slope - fit_base.slope) <= e["power_tol"])
    res.notes["base_exponent"] = fit_base.slope
    res.notes["product_exponent"] = fit_prod.slope
    res.notes["power_exponent"] = fit_pow.slope
    return res


# --- registry ----------------------------------------------------------------


SCENARIOS: dict[str, Scenario] = {}


def _register(name, claim, defaults, runner):
    SCENARIOS[name] = Scenario(name, claim, defaults, runner)


_register(
    "star_hpol",
    "On a k-armed star with arm-preserving drift maps, separated counts for "
    "the induced map on branch-anchored pieces grow polynomially with "
    "exponent close to k.",
    {
        "k": 3,
        "edge_maps": [],
        "base_t": 0.5,
        "back": 84,
        "cand_fwd": 4,
        "n_list": [16, 24, 32, 48, 64, 80],
        "eps_list": [0.5, 0.45, 0.4],
        "audit_pairs": 200,
        "audit_steps": 12,
        "expect": {"slope_min": 2.5, "slope_max": 3.5},
    },
    _run_star_hpol)

_register(
    "interval_C",
    "For the squaring map on the unit interval, induced subinterval dynamics "
    "grow with exponent close to 2 while single points give close to 1.",
    {
        "map": {"family": "power", "p": 2.0},
        "base_t": 0.5,
        "back": 50,
        "cand_fwd": 4,
        "n_list": [8, 12, 16, 24, 32, 40, 48],
        "eps_list": [0.3, 0.25, 0.2],
        "audit_pairs": 200,
        "audit_steps": 6,
        "expect": {"intervals_min": 1.6, "intervals_max": 2.4,
                   "points_min": 0.7, "points_max": 1.3},
    },
    _run_interval_C)

_register(
    "interval_Cn",
    "For an interval map with four wandering blocks, two-component arc "
    "unions and one-point-per-block sets both grow with exponent close to 4.",
    {
        "blocks": 4,
        "mu": 1.3,
        "knot": 0.55,
        "base_frac": 0.5,
        "back": 110,
        "cand_fwd_arcs": 4,
        "cand_fwd_points": 2,
        "n_list": [12, 18, 24, 36, 48, 64, 80, 96],
        "eps_list": [0.05, 0.04, 0.03],
        "audit_pairs": 150,
        "audit_steps": 10,
        "expect": {"arc_unions_min": 3.4, "arc_unions_max": 4.6,
                   "point_tuples_min": 3.5, "point_tuples_max": 4.5,
                   "points_ratio_max": 6.0},
    },
    _run_interval_Cn)

_register(
    "fullshift_code",
    "Sparse-mark shift complexity is exactly (m+1)^k and the full shift "
    "doubles per symbol per track; fitted rates match the closed forms.",
    {
        "k": 2,
        "m_max": 16,
        "enum_m_max": 8,
        "cover_m_max": 8,
        "poly_k_list": [1, 2, 3, 4],
        "poly_m_list": [64, 128, 256, 512, 1024],
        "expect": {"rate_tol": 1e-9, "poly_tol": 0.05},
    },
    _run_fullshift_code)

_register(
    "coding_crosscheck",
    "Orbit coding of branch-anchored reach families realizes exactly the "
    "sparse-mark shift and commutes with the map as a one-step shift.",
    {
        "k": 2,
        "edge_maps": [],
        "base_t": 0.5,
        "m": 8,
        "w_max": 6,
        "shift_steps": 3,
    },
    _run_coding_crosscheck)

_register(
    "isometry_check",
    "Reach coordinates are an exact isometry for branch-anchored pieces, and "
    "matched point sets realize the coordinate sup metric.",
    {
        "k": 3,
        "psi_pairs": 10000,
        "matched_pairs": 10000,
        "triples": 1000,
        "structure_samples": 1000,
        "tol": 1e-12,
    },
    _run_isometry_check)

_register(
    "cylinder_check",
    "Joined cylinder counts at displacement l equal window complexity at "
    "width 2n+l for both symbolic families.",
    {
        "fullshift_k": 1,
        "marks_k": 2,
        "n_max": 4,
        "l_max": 8,
    },
    _run_cylinder_check)

_register(
    "product_power",
    "Separated-count exponents double under the two-fold product and are "
    "preserved by taking a power of the map.",
    {
        "map": {"family": "power", "p": 2.0},
        "base_t": 0.5,
        "back": 50,
        "cand_fwd": 4,
        "power": 2,
        "n_list": [8, 12, 16, 24, 32, 40],
        "eps_list": [0.2, 0.1, 0.05],
        "expect": {"product_tol": 0.4, "power_tol": 0.2},
    },
    _run_product_power)


# --- running and writing -----------------------------------------------------


def list_scenarios() -> list[dict]:
    """Catalog of runnable scenarios in stable name order.

    Each entry carries the scenario name, the claim its verdicts check, and
    a copy of the default config (safe to edit and pass back as overrides).
    """
    return [{"name": name, "claim": sc.claim,
             "defaults": copy.deepcopy(sc.defaults)}
            for name, sc in sorted(SCENARIOS.items())]


def run_scenario(name: str, overrides: dict | None = None, seed: int = 0,
                 threads: int = 1) -> tuple[RunResult, dict]:
    if name not in SCENARIOS:
        known = ", ".join(sorted(SCENARIOS))
        raise ConfigError("/scenario", f"unknown scenario {name!r}; known: {known}")
    if not 0 <= seed < 2 ** 64:
        raise ConfigError("/seed", "expected an unsigned 64-bit integer")
    if threads < 1:
        raise ConfigError("/threads", "expected a positive integer")
    sc = SCENARIOS[name]
    cfg = merge_config(sc.defaults, overrides or {})
    rng = random.Random(seed)
    result = sc.runner(cfg, seed, threads, rng)
    return result, cfg


def write_run(outdir, name: str, cfg: dict, seed: int,
              result: RunResult) -> list[str]:
    """Write tables, fits, and the run manifest; returns the file names."""
    import csv as _csv

    outdir = Path(outdir)
    outdir.mkdir(parents=True, exist_ok=True)
    written = []
    for fname, (header, rows) in sorted(result.tables.items()):
        with open(outdir / fname, "w", newline="") as fh:
            w = _csv.writer(fh, lineterminator="\n")
            w.writerow(header)
            w.writerows(rows)
        written.append(fname)
    if result.fits:
        payload = {k: f.to_json() for k, f in sorted(result.fits.items())}
        (outdir / "fits.json").write_text(
            json.dumps(payload, sort_keys=True, indent=2) + "\n")
        written.append("fits.json")
    manifest = {
        "scenario": name,
        "seed": seed,
        "config": cfg,
        "verdicts": result.verdicts,
        "pass": result.passed,
        "notes": result.notes,
        "outputs": sorted(written),
    }
    (outdir / "run.json").write_text(
        json.dumps(manifest, sort_keys=True, indent=2) + "\n")
    written.append("run.json")
    return sorted(written)


SELFTEST_OVERRIDES: dict[str, dict] = {
    "interval_C": {"audit_pairs": 40, "audit_steps": 4},
    "interval_Cn": {"audit_pairs": 40, "audit_steps": 6},
    "star_hpol": {"audit_pairs": 40, "audit_steps": 6},
    "isometry_check": {"psi_pairs": 500, "matched_pairs": 500,
                       "triples": 150, "structure_samples": 150},
    "cylinder_check": {"n_max": 3, "l_max": 5},
    "fullshift_code": {"m_max": 12, "enum_m_max": 6, "cover_m_max": 6,
                       "poly_m_list": [64, 128, 256, 512]},
    "coding_crosscheck": {"m": 6, "w_max": 4},
    "product_power": {"n_list": [8, 12, 16, 24, 32]},
}


def selftest(base_dir=None, log=print) -> bool:
    """Run every scenario on a reduced schedule and re-run one for byte
    determinism. Returns True when all verdicts pass."""
    import tempfile

    root = Path(base_dir) if base_dir else Path(tempfile.mkdtemp(prefix="lab-"))
    all_ok = True
    for name in sorted(SCENARIOS):
        overrides = SELFTEST_OVERRIDES.get(name, {})
        result, cfg = run_scenario(name, overrides, seed=7, threads=1)
        write_run(root / name, name, cfg, 7, result)
        again, _ = run_scenario(name, overrides, seed=7, threads=2)
        stable = again.tables == result.tables and again.verdicts == result.verdicts
        ok = result.passed and stable
        all_ok &= ok
        status = "PASS" if ok else "FAIL"
        detail = "" if stable else " (nondeterministic)"
        log(f"[{status}] {name}{detail}")
        if not result.passed:
            for v, flag in result.verdicts.items():
                if not flag:
                    log(f"       failed: {v}")
    return all_ok
