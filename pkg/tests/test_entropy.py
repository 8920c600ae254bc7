import random

import pytest

from stardyn.entropy import (DynSystem, dyn_distance, estimate_entropy,
                             greedy_separated, greedy_spanning, hyper_system,
                             point_system, power_system, product_power_check,
                             product_system)
from stardyn.errors import CoverageError, DomainError
from stardyn.hyperspace import StarPiece, hausdorff, induced_apply
from stardyn.maps import PowerMap, StarHomeo
from stardyn.spaces import StarPoint

from helpers import slow_dyn_distance, slow_separated

LINE = DynSystem(metric=lambda x, y: abs(x - y), step=lambda x: x,
                 name="line")


def shrink_system(rate=0.5) -> DynSystem:
    return DynSystem(metric=lambda x, y: abs(x - y),
                     step=lambda x: x * rate, name="shrink")


def test_dyn_distance_n1_is_plain_metric():
    assert dyn_distance(shrink_system(), 0.2, 0.9, 1) == pytest.approx(0.7)


def test_dyn_distance_identity_constant():
    assert dyn_distance(LINE, 0.2, 0.9, 50) == pytest.approx(0.7)


def test_dyn_distance_square_map():
    h = StarHomeo.on_interval(PowerMap(2.0))
    sys = point_system(h)
    d = dyn_distance(sys, StarPoint(0, 0.5), StarPoint(0, 0.6), 2)
    assert d == pytest.approx(0.11, abs=1e-12)


def test_dyn_distance_matches_slow_oracle():
    rng = random.Random(41)
    sys = shrink_system(0.8)
    for _ in range(200):
        x, y = rng.random(), rng.random()
        n = rng.randrange(1, 6)
        assert dyn_distance(sys, x, y, n) == \
            slow_dyn_distance(sys.metric, sys.step, x, y, n)
    with pytest.raises(DomainError):
        dyn_distance(sys, 0.1, 0.2, 0)


def test_greedy_matches_slow_oracle():
    rng = random.Random(43)
    sys = shrink_system(0.9)
    for _ in range(50):
        cands = [rng.random() for _ in range(rng.randrange(2, 20))]
        n = rng.randrange(1, 5)
        eps = rng.uniform(0.05, 0.5)
        assert greedy_separated(sys, cands, n, eps) == \
            slow_separated(sys.metric, sys.step, cands, n, eps)


def test_separated_grid_counts():
    N = 64
    grid = [i / N for i in range(N + 1)]
    picked = greedy_separated(LINE, grid, 4, 2 / N)
    assert len(picked) == N // 2 + 1
    assert greedy_separated(LINE, [0.5], 3, 0.1) == [0.5]
    assert len(greedy_separated(LINE, grid, 2, 2.0)) == 1
    with pytest.raises(DomainError):
        greedy_separated(LINE, grid, 2, 0.0)


def test_spanning_counts():
    N = 64
    grid = [i / N for i in range(N + 1)]
    assert len(greedy_spanning(LINE, grid, grid, 2, 2.0)) == 1
    cover = greedy_spanning(LINE, grid, grid, 2, 1.0 / N)
    assert N // 3 <= len(cover) <= N // 2 + 1


def test_spanning_never_beats_separated():
    # with targets == candidates and self-preference the spanning set at eps
    # never exceeds the separated set at eps
    rng = random.Random(47)
    sys = shrink_system(0.85)
    for _ in range(40):
        cands = [rng.random() for _ in range(rng.randrange(3, 25))]
        n = rng.randrange(1, 5)
        eps = rng.uniform(0.02, 0.4)
        sep = greedy_separated(sys, cands, n, eps)
        span = greedy_spanning(sys, cands, cands, n, eps)
        assert len(span) <= len(sep)


def test_spanning_coverage_error_names_target():
    with pytest.raises(CoverageError) as err:
        greedy_spanning(LINE, [0.0], [0.0, 0.9], 1, 0.1)
    assert err.value.target == 0.9
    assert err.value.epsilon == 0.1


def test_hyper_system_step_and_metric():
    h = StarHomeo.on_interval(PowerMap(2.0))
    sys = hyper_system(h)
    a, b = StarPiece((0.5,)), StarPiece((0.7,))
    assert sys.metric(a, b) == hausdorff(h.space, a, b) == pytest.approx(0.2)
    assert sys.step(a) == induced_apply(h, a)


def test_product_system_max_metric():
    sys = product_system(LINE, shrink_system())
    assert sys.metric((0.0, 0.0), (0.4, 0.1)) == pytest.approx(0.4)
    assert sys.step((0.3, 0.8)) == (0.3, 0.4)


def test_power_system():
    sys = power_system(shrink_system(0.5), 3)
    assert sys.step(1.0) == pytest.approx(0.125)
    with pytest.raises(DomainError):
        power_system(LINE, 0)


def test_estimate_entropy_identity_is_flat():
    grid = [i / 128 for i in range(129)]
    fit = estimate_entropy(LINE, grid, eps_list=(0.25, 0.125),
                           n_list=(4, 8, 16, 32))
    assert fit.stable
    assert abs(fit.slope) <= 1e-9


def test_estimate_entropy_validates_inputs():
    grid = [i / 16 for i in range(17)]
    with pytest.raises(DomainError):
        estimate_entropy(LINE, [], eps_list=(0.25,), n_list=(4, 8))
    with pytest.raises(DomainError):
        estimate_entropy(LINE, grid, eps_list=(0.25,), n_list=(4,))


def test_estimate_entropy_callable_candidates():
    fit = estimate_entropy(LINE, lambda: (i / 64 for i in range(65)),
                           eps_list=(0.25,), n_list=(4, 8, 16))
    assert fit.stable and abs(fit.slope) <= 1e-9


def test_product_power_check_small():
    h = StarHomeo.on_interval(PowerMap(2.0))
    sys = point_system(h)
    cands = [StarPoint(0, 0.3 + 0.4 * i / 12) for i in range(13)]
    out = product_power_check(sys, cands, eps_list=(0.2, 0.1),
                              n_list=(2, 3, 4, 6), k=2)
    assert set(out) >= {"base", "product", "power",
                        "product_ratio", "power_ratio"}
    n, eps = 3, 0.15
    base_count = len(greedy_separated(sys, cands, n, eps))
    prod_sys = product_system(sys, sys)
    prod_cands = [(a, b) for a in cands for b in cands]
    prod_count = len(greedy_separated(prod_sys, prod_cands, n, eps))
    assert prod_count == base_count ** 2
