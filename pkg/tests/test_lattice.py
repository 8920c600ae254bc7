import random

import numpy as np
import pytest

from stardyn.entropy import (greedy_separated, hyper_system,
                             point_system, product_system)
from stardyn.errors import DomainError, InvariantError
from stardyn.hyperspace import ArcUnion, StarPiece
from stardyn.lattice import (ball_kill, bowen_gap, count_grid, float_chain,
                             gap_table, greedy_count_1d, greedy_count_product,
                             greedy_count_tuples, triangle_candidates,
                             tuple_distance_matrix)
from stardyn.maps import PowerMap, StarHomeo, iterate
from stardyn.spaces import StarPoint, StarSpace


def square_chain(back=10, fwd=8):
    h = StarHomeo.on_interval(PowerMap(2.0))
    return h, float_chain(h, 0, 0.5, back, fwd)


def test_float_chain_matches_iterate():
    # chains walk back once and regenerate forward, so index i is bitwise
    # the i-th forward iterate of the deepest backward point
    h, chain = square_chain(back=6, fwd=6)
    deepest = iterate(h, StarPoint(0, 0.5), -6)
    for i, val in enumerate(chain):
        assert val == iterate(h, deepest, i).t


def test_float_chain_requires_fixed_edge():
    g = PowerMap(2.0)
    h = StarHomeo(StarSpace.uniform(2), (1, 0), (g, g))
    with pytest.raises(DomainError):
        float_chain(h, 0, 0.5, 2, 2)


def test_bowen_gap_matches_slow_loop():
    _, chain = square_chain()
    rng = random.Random(53)
    for _ in range(200):
        i, j = rng.randrange(10), rng.randrange(10)
        n = rng.randrange(1, 6)
        stride = rng.choice((1, 2))
        slow = max(abs(chain[i + l * stride] - chain[j + l * stride])
                   for l in range(n))
        assert bowen_gap(chain, i, j, n, stride) == slow


def test_greedy_count_1d_matches_generic_greedy():
    h, chain = square_chain(back=12, fwd=8)
    sys = point_system(h)
    for n in (1, 2, 4):
        for eps in (0.3, 0.1, 0.05, 0.01):
            idx = greedy_count_1d(chain, 0, 12, n, eps, return_indices=True)
            cands = [StarPoint(0, float(chain[i])) for i in range(13)]
            picked = greedy_separated(sys, cands, n, eps)
            assert [cands[i] for i in idx] == picked


def test_greedy_count_1d_validates():
    _, chain = square_chain()
    with pytest.raises(DomainError):
        greedy_count_1d(chain, 0, 10, 0, 0.1)
    with pytest.raises(DomainError):
        greedy_count_1d(chain, 0, 10, 2, 0.0)
    with pytest.raises(DomainError):
        greedy_count_1d(chain, 0, 18, 4, 0.1)  # window runs off the chain
    bumpy = np.array([0.1, 0.5, 0.3, 0.7, 0.2])
    with pytest.raises(InvariantError):
        greedy_count_1d(bumpy, 0, 2, 3, 0.1)


def test_greedy_count_product_matches_generic():
    h, chain = square_chain(back=10, fwd=6)
    g = PowerMap(2.0)
    h2 = StarHomeo(StarSpace.uniform(2), (0, 1), (g, g))
    sys2 = product_system(point_system(h), point_system(h))
    win = (2, 8)
    for n in (1, 2, 3):
        for eps in (0.2, 0.08):
            fast = greedy_count_product([chain, chain], [win, win], n, eps)
            cands = [(StarPoint(0, float(chain[i])),
                      StarPoint(0, float(chain[j])))
                     for i in range(win[0], win[1] + 1)
                     for j in range(win[0], win[1] + 1)]
            assert fast == len(greedy_separated(sys2, cands, n, eps))


def test_gap_table_matches_double_loop():
    _, chain = square_chain()
    size, n = 9, 3
    G = gap_table(chain, size, n)
    for i in range(size):
        for j in range(size):
            assert G[i, j] == bowen_gap(chain, i, j, n)


def test_tuple_distance_matrix():
    _, chain = square_chain()
    G = gap_table(chain, 8, 2)
    cand = triangle_candidates(0, 5)
    D = tuple_distance_matrix(G, cand)
    for a, (i, j) in enumerate(cand):
        for b, (p, q) in enumerate(cand):
            assert D[a, b] == max(G[i, p], G[j, q])
    with pytest.raises(DomainError):
        tuple_distance_matrix(G, np.array([1, 2, 3]))


def test_ball_kill_matches_brute_first_fit():
    rng = random.Random(59)
    for _ in range(100):
        m = rng.randrange(1, 30)
        D = np.zeros((m, m))
        for i in range(m):
            for j in range(i + 1, m):
                D[i, j] = D[j, i] = rng.random()
        eps = rng.uniform(0.1, 0.9)
        brute = []
        for i in range(m):
            if all(D[i, j] >= eps for j in brute):
                brute.append(i)
        assert ball_kill(D, eps) == brute
    with pytest.raises(DomainError):
        ball_kill(np.zeros((2, 2)), 0.0)


def test_greedy_count_tuples_matches_hausdorff_greedy():
    # interval pairs (a, b) from a decreasing chain; for nested/disjoint
    # single intervals the Hausdorff distance is max(|da|, |db|)
    h, chain = square_chain(back=10, fwd=5)
    sys = hyper_system(h)
    cand = triangle_candidates(0, 6)

    def element(i, j):
        b, a = float(chain[i]), float(chain[j])  # chain decreases
        return ArcUnion(((a, b),)) if a > 0 else StarPiece((b,))

    for n in (1, 2, 3):
        for eps in (0.25, 0.1, 0.04):
            fast = greedy_count_tuples(chain, cand, n, eps)
            cands = [element(i, j) for i, j in cand]
            assert fast == len(greedy_separated(sys, cands, n, eps))


def test_triangle_candidates_ordering():
    cand = triangle_candidates(2, 4)
    assert cand.tolist() == [[2, 2], [2, 3], [2, 4], [3, 3], [3, 4], [4, 4]]


def test_count_grid_thread_invariance():
    _, chain = square_chain(back=20, fwd=10)

    def cell(n, eps):
        return greedy_count_1d(chain, 0, 20, n, eps)

    rows1 = count_grid(cell, [2, 4, 8], [0.2, 0.1, 0.05], threads=1)
    rows4 = count_grid(cell, [8, 2, 4], [0.05, 0.2, 0.1], threads=4)
    assert rows1 == rows4
    assert [r[:2] for r in rows1] == [
        (n, e) for n in (2, 4, 8) for e in (0.2, 0.1, 0.05)]
