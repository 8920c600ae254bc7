"""Vectorized separated-set counting on cached orbit chains.

The generic greedy in entropy.py calls the map once per candidate per step,
which is fine for a few hundred candidates but not for the product families
the scenarios need. Here a candidate is an index (or index tuple) into a
cached orbit chain, one map application is an index shift, and the Bowen
distance is a sliding maximum over chain gaps, so whole count tables reduce
to numpy passes over a single float array.

Two facts keep this honest. First, chains are built by iterating the real
map, so the value a candidate visits at time l is bitwise the value the
generic path would compute. Second, for the families these kernels serve
(reach tuples, interval endpoint pairs, block-separated arc unions) the
Hausdorff distance equals the max over coordinate differences exactly, so
first-fit greedy over the lexicographic product order factors into
independent per-coordinate walks.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError, InvariantError
from .maps import StarHomeo, star_orbit_values


def float_chain(h: StarHomeo, edge: int, t0: float, back: int, fwd: int) -> np.ndarray:
    """Orbit coordinates on one edge as an array; index i is time i - back.

    The homeomorphism must keep the edge fixed, otherwise positions in the
    chain would not stay comparable.
    """
    if h.perm[edge] != edge:
        raise DomainError(f"edge {edge} is not fixed by the edge permutation")
    vals = star_orbit_values(h, edge, t0, back, fwd)
    arr = np.array(vals, dtype=np.float64)
    if np.isnan(arr).any():
        raise InvariantError("orbit left its edge")
    return arr


def _check_window(chain: np.ndarray, lo: int, hi: int, n: int, stride: int) -> None:
    if not (0 <= lo <= hi):
        raise DomainError("bad candidate window")
    need = hi + (n - 1) * stride
    if need >= len(chain):
        raise DomainError(
            f"chain too short: need index {need}, have {len(chain) - 1}")


def bowen_gap(chain: np.ndarray, i: int, j: int, n: int, stride: int = 1) -> float:
    """max over l < n of |chain[i + l*stride] - chain[j + l*stride]|."""
    a = chain[i:i + n * stride:stride]
    b = chain[j:j + n * stride:stride]
    return float(np.max(np.abs(a - b)))


def greedy_count_1d(chain: np.ndarray, lo: int, hi: int, n: int, eps: float,
                    stride: int = 1, return_indices: bool = False):
    """First-fit (n, eps)-separated count over candidate indices lo..hi.

    Chain values over the used index range must be monotone; then the Bowen
    gap grows with index distance and first-fit reduces to a single walk that
    only compares against the last selected candidate. The selected set is
    identical to what the generic greedy picks on the same candidates.
    """
    if eps <= 0:
        raise DomainError("eps must be positive")
    if n < 1:
        raise DomainError("n must be >= 1")
    _check_window(chain, lo, hi, n, stride)
    used = chain[lo:hi + (n - 1) * stride + 1]
    diffs = np.diff(used)
    if not ((diffs >= 0).all() or (diffs <= 0).all()):
        raise InvariantError("chain is not monotone over the used range")
    selected = [lo]
    last = lo
    for i in range(lo + 1, hi + 1):
        if bowen_gap(chain, last, i, n, stride) >= eps:
            selected.append(i)
            last = i
    if return_indices:
        return selected
    return len(selected)


def greedy_count_product(chains, windows, n: int, eps: float, stride: int = 1) -> int:
    """Separated count for the full product family, one coordinate per chain.

    Candidates are all index tuples from the per-coordinate windows in
    lexicographic order; the metric is the max over coordinates. First-fit
    greedy then selects exactly the product of the per-coordinate selections,
    so the count is the product of the 1-d counts.
    """
    total = 1
    for chain, (lo, hi) in zip(chains, windows):
        total *= greedy_count_1d(chain, lo, hi, n, eps, stride=stride)
    return total


def gap_table(chain: np.ndarray, size: int, n: int) -> np.ndarray:
    """Symmetric table G[i, j] = Bowen gap between start indices i, j < size.

    Diagonal d of the table is a sliding maximum of the lag-d gap sequence,
    so the whole table costs one vectorized pass per diagonal.
    """
    _check_window(chain, 0, size - 1, n, 1)
    G = np.zeros((size, size), dtype=np.float64)
    for d in range(1, size):
        g = np.abs(chain[d:] - chain[:len(chain) - d])
        win = np.lib.stride_tricks.sliding_window_view(g, n)
        diag = win.max(axis=1)[:size - d]
        G[np.arange(size - d), np.arange(d, size)] = diag
        G[np.arange(d, size), np.arange(size - d)] = diag
    return G


def tuple_distance_matrix(gap: np.ndarray, cand_idx: np.ndarray) -> np.ndarray:
    """Pairwise max-over-coordinates Bowen distance for index-tuple candidates."""
    cand_idx = np.asarray(cand_idx)
    if cand_idx.ndim != 2:
        raise DomainError("cand_idx must be 2-d")
    cols = cand_idx.T
    D = gap[np.ix_(cols[0], cols[0])].copy()
    for col in cols[1:]:
        np.maximum(D, gap[np.ix_(col, col)], out=D)
    return D


def ball_kill(D: np.ndarray, eps: float) -> list[int]:
    """First-fit greedy on a precomputed distance matrix.

    Scanning in order and deleting the open eps-ball of each selection gives
    the same set as rejecting candidates closer than eps to any earlier pick.
    """
    if eps <= 0:
        raise DomainError("eps must be positive")
    m = D.shape[0]
    alive = np.ones(m, dtype=bool)
    selected: list[int] = []
    pos = 0
    while pos < m:
        off = int(np.argmax(alive[pos:]))
        if not alive[pos + off]:
            break
        s = pos + off
        selected.append(s)
        alive &= D[s] >= eps
        alive[s] = False
        pos = s + 1
    return selected


def greedy_count_tuples(chain: np.ndarray, cand_idx, n: int, eps: float) -> int:
    """Separated count for candidates given as index tuples into one chain."""
    cand_idx = np.asarray(cand_idx)
    size = int(cand_idx.max()) + 1
    G = gap_table(chain, size, n)
    D = tuple_distance_matrix(G, cand_idx)
    return len(ball_kill(D, eps))


def triangle_candidates(lo: int, hi: int) -> np.ndarray:
    """Index pairs (i, j), lo <= i <= j <= hi, in lexicographic order.

    With a decreasing chain these are the intervals [chain[j], chain[i]]:
    every subinterval with both endpoints on the lattice.
    """
    pairs = [(i, j) for i in range(lo, hi + 1) for j in range(i, hi + 1)]
    return np.array(pairs, dtype=np.intp)


def count_grid(count_fn, n_list, eps_list, threads: int = 1):
    """Evaluate count_fn(n, eps) over the grid, optionally in a thread pool.

    Rows come back sorted by (n, eps desc) regardless of thread scheduling,
    so output bytes do not depend on the thread count.
    """
    cells = [(n, eps) for n in sorted(set(n_list))
             for eps in sorted(set(eps_list), reverse=True)]
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor
        with ThreadPoolExecutor(max_workers=threads) as pool:
            counts = list(pool.map(lambda c: count_fn(*c), cells))
    else:
        counts = [count_fn(n, eps) for n, eps in cells]
    return [(n, eps, c) for (n, eps), c in zip(cells, counts)]
