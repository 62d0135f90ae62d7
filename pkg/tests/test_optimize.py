import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qaoa_maxcut.errors import ManifoldError, QAOAError
from qaoa_maxcut.optimize import (
    HALF_PI,
    ManifoldKind,
    ManifoldSpec,
    OptimizerConfig,
    canonicalize,
    equivalent,
    expand_manifold,
    extract_free,
    finite_diff_gradient,
    grid_local_minima,
    landscape_scan,
    manifold_objective,
    normal_derivative_check,
    on_manifold,
    optimize,
    symmetry_images,
)
from qaoa_maxcut.ring import ring_energy_per_site, ring_expectation
from qaoa_maxcut.schedule import AngleSchedule, Convention

PI = math.pi
M1, M2, FULL = ManifoldKind.M1, ManifoldKind.M2, ManifoldKind.FULL


def ring_sched(gammas, betas):
    return AngleSchedule(tuple(gammas), tuple(betas), Convention.RING)


def test_expand_level1_m1():
    s = expand_manifold([0.125 * PI], ManifoldSpec(M1, 1))
    assert s.gammas == pytest.approx((0.125 * PI,))
    assert s.betas == pytest.approx((0.375 * PI,))
    assert equivalent(s, ring_sched([PI / 8], [3 * PI / 8]))
    zero = expand_manifold([0.0], ManifoldSpec(M1, 1))
    assert zero.gammas == (0.0,) and zero.betas == (0.0,)


def test_expand_level2_m1_table_row():
    s = expand_manifold(PI * np.array([0.2052, 0.1026]), ManifoldSpec(M1, 2))
    np.testing.assert_allclose(np.array(s.gammas) / PI, [0.2052, 0.3974], atol=1e-12)
    np.testing.assert_allclose(np.array(s.betas) / PI, [0.1026, 0.2948], atol=1e-12)


def test_expand_m2_and_full():
    s = expand_manifold([0.3, 0.2, 0.1], ManifoldSpec(M2, 3))
    assert s.gammas == pytest.approx((0.3, 0.1, 0.2))
    assert s.betas == pytest.approx((0.2, 0.1, 0.3))
    assert on_manifold(s, M2)
    full = expand_manifold([0.1, 0.2, 0.3, 0.4], ManifoldSpec(FULL, 2))
    assert full.gammas == (0.1, 0.2) and full.betas == (0.3, 0.4)
    with pytest.raises(ManifoldError):
        expand_manifold([0.1], ManifoldSpec(M1, 2))


@pytest.mark.parametrize("kind", list(ManifoldKind))
@pytest.mark.parametrize("p", [1, 2, 3, 4, 5])
def test_extract_inverts_expand(kind, p):
    spec = ManifoldSpec(kind, p)
    free = np.random.default_rng(p).uniform(0, HALF_PI, spec.n_free)
    s = expand_manifold(free, spec)
    np.testing.assert_allclose(extract_free(s, spec), free, atol=1e-14)
    if kind is not FULL:
        assert on_manifold(s, kind)


def test_finite_difference_examples():
    obj = manifold_objective(ManifoldSpec(FULL, 1), n=4)
    assert np.linalg.norm(finite_diff_gradient(obj, [3 * PI / 8, PI / 8], batched=True)) < 1e-6
    slope = finite_diff_gradient(lambda x: 3.0 * x[0] - 2.0 * x[1] + 1.0, [0.4, -1.2])
    np.testing.assert_allclose(slope, [3.0, -2.0], atol=1e-10)
    assert finite_diff_gradient(lambda x: math.sin(4 * x[0]), [0.0], step=1e-5)[0] == pytest.approx(4, abs=1e-8)


def test_normal_derivative_level1():
    rng = np.random.default_rng(0)
    for g in rng.uniform(0, HALF_PI, 10):
        point = ring_sched([g], [(-g) % HALF_PI])
        assert normal_derivative_check(point) < 1e-6
    with pytest.raises(ManifoldError, match="not on manifold"):
        normal_derivative_check(ring_sched([0.3], [0.4]))


def test_normal_derivative_level2_random_points():
    rng = np.random.default_rng(1)
    spec = ManifoldSpec(M1, 2)
    worst = max(normal_derivative_check(expand_manifold(rng.uniform(0, HALF_PI, 2), spec)) for _ in range(50))
    assert worst < 1e-6


def test_canonicalize_examples():
    a = canonicalize(ring_sched([3 * PI / 8], [PI / 8]))
    b = canonicalize(ring_sched([PI / 8], [3 * PI / 8]))
    assert a.as_vector() == pytest.approx(b.as_vector(), abs=1e-12)
    assert canonicalize(ring_sched([0.0], [0.0])).as_vector().tolist() == [0.0, 0.0]
    first = AngleSchedule.from_interleaved(PI * np.array([0.3956, 0.1978, 0.3022, 0.1044]))
    second = AngleSchedule.from_interleaved(PI * np.array([0.2052, 0.1026, 0.3974, 0.2948]))
    assert not equivalent(first, second, tol=1e-3)


schedules = st.integers(1, 5).flatmap(
    lambda p: st.tuples(
        st.lists(st.floats(-4.0, 4.0), min_size=p, max_size=p),
        st.lists(st.floats(-4.0, 4.0), min_size=p, max_size=p),
    )
)


@settings(max_examples=100, deadline=None)
@given(schedules)
def test_canonical_form_is_constant_on_orbits(gb):
    sched = ring_sched(*gb)
    canon = canonicalize(sched)
    assert np.all((canon.as_vector() >= 0) & (canon.as_vector() < HALF_PI))
    assert canonicalize(canon).as_vector() == pytest.approx(canon.as_vector(), abs=1e-12)
    g, b = np.array(gb[0]), np.array(gb[1])
    shift = np.zeros(g.size)
    shift[0] = HALF_PI
    orbit = [
        ring_sched(-b[::-1], -g[::-1]),
        ring_sched(b[::-1], g[::-1]),
        ring_sched(-g, -b),
        ring_sched(g + shift, b - 3 * shift),
    ] + symmetry_images(sched)
    for img in orbit:
        assert equivalent(img, sched)
    n = 2 * sched.p + 2
    F = ring_expectation(n, sched).F_per_site
    assert ring_expectation(n, canon).F_per_site == pytest.approx(F, abs=1e-12)


@pytest.mark.parametrize("p", [1, 2, 3])
def test_optimizer_levels(p):
    res = optimize(p, "m1", seed=0)
    assert res.best_F_per_site == pytest.approx(-p / (p + 1), abs=1e-9)
    assert res.best_r == pytest.approx((2 * p + 1) / (2 * p + 2), abs=1e-9)
    assert res.n == 2 * p + 2


def test_level1_optimum_is_eighth_pi():
    res = optimize(1, "m1", seed=3)
    assert equivalent(res.best.schedule, ring_sched([PI / 8], [3 * PI / 8]))


def test_level3_table_row_is_found():
    res = optimize(3, "m1", seed=0)
    row = expand_manifold(PI * np.array([0.2268, 0.1888, 0.0918]), ManifoldSpec(M1, 3))
    # table precision is 1e-4 in units of pi
    assert any(equivalent(o.schedule, row, tol=2e-4) for o in res.optima)


def test_reported_optima_contract():
    cfg = OptimizerConfig(starts=24)
    for p in (2, 3):
        res = optimize(p, "m1", cfg, seed=5)
        obj = manifold_objective(ManifoldSpec(M1, p))
        for i, o in enumerate(res.optima):
            assert float(obj(o.free)) == pytest.approx(o.F_per_site, abs=1e-10)
            grad = finite_diff_gradient(obj, o.free, cfg.fd_step, batched=True)
            assert np.linalg.norm(grad) < cfg.grad_tol
            for other in res.optima[:i]:
                assert not equivalent(o.schedule, other.schedule)


def test_optimizer_is_deterministic():
    a = optimize(2, "m1", OptimizerConfig(starts=8), seed=11)
    b = optimize(2, "m1", OptimizerConfig(starts=8), seed=11)
    np.testing.assert_array_equal(a.final_values, b.final_values)
    assert [o.free.tolist() for o in a.optima] == [o.free.tolist() for o in b.optima]


def test_start_streams_do_not_depend_on_start_count():
    a = optimize(2, "m1", OptimizerConfig(starts=4), seed=2)
    b = optimize(2, "m1", OptimizerConfig(starts=9), seed=2)
    np.testing.assert_array_equal(a.final_values, b.final_values[:4])


@pytest.mark.parametrize("p", [1, 2, 3, 4, 5])
def test_m1_minimum_equals_full_minimum(p):
    m1 = optimize(p, "m1", OptimizerConfig(starts=16), seed=1)
    full = optimize(p, "full", OptimizerConfig(starts=32), seed=1)
    assert m1.best_F_per_site == pytest.approx(full.best_F_per_site, abs=1e-8)


@pytest.mark.parametrize("p", [1, 2, 3])
def test_m2_maximum_equals_full_maximum(p):
    m2 = optimize(p, "m2", OptimizerConfig(starts=16, sense="max"), seed=1)
    full = optimize(p, "full", OptimizerConfig(starts=32, sense="max"), seed=1)
    assert m2.best_F_per_site == pytest.approx(full.best_F_per_site, abs=1e-8)
    assert m2.best_F_per_site > 0


@pytest.mark.parametrize("p", [1, 2, 3])
def test_no_trap_within_m1(p):
    res = optimize(p, "m1", OptimizerConfig(starts=100), seed=7)
    assert res.converged == 100
    assert np.max(np.abs(res.final_values + p / (p + 1))) < 1e-6


def test_warm_start_chain():
    res = optimize(1, "m1")
    # the zero-padded level-1 optimum is itself a critical point at level 2
    alone = optimize(2, "m1", OptimizerConfig(starts=1), warm_start=res.best.free)
    assert alone.final_values[0] == pytest.approx(-0.5, abs=1e-12)
    nxt = optimize(2, "m1", OptimizerConfig(starts=8), warm_start=res.best.free)
    assert nxt.final_values[0] == pytest.approx(-0.5, abs=1e-12)
    assert nxt.best_F_per_site == pytest.approx(-2 / 3, abs=1e-9)


def test_gradient_descent_variant():
    res = optimize(1, "m1", OptimizerConfig(starts=4, method="gd"))
    assert res.best_F_per_site == pytest.approx(-0.5, abs=1e-9)


def test_config_and_level_validation():
    with pytest.raises(QAOAError):
        OptimizerConfig(method="newton")
    with pytest.raises(QAOAError):
        optimize(0)
    with pytest.raises(ManifoldError):
        optimize(2, ManifoldSpec(M1, 3))


def test_level1_full_scan():
    grid = landscape_scan(ManifoldSpec(FULL, 1), 64)
    assert grid.values.shape == (64, 64)
    assert np.all(np.isfinite(grid.values))
    step = HALF_PI / 64
    # |Hessian| at the optimum is 16 * 1/2 per axis
    assert grid.values.min() + 0.5 < 2 * (PI / 128) ** 2 * 8 * math.sqrt(2) + 1e-12
    i, j = np.unravel_index(np.argmin(grid.values), grid.values.shape)
    images = [(3 * PI / 8, PI / 8), (PI / 8, 3 * PI / 8)]
    assert any(abs(i * step - g) <= step / 2 and abs(j * step - b) <= step / 2 for g, b in images)
    flipped = grid.values[(-np.arange(64)) % 64][:, (-np.arange(64)) % 64]
    np.testing.assert_allclose(flipped, grid.values, atol=1e-12)


def test_scan_matches_pointwise_evaluation():
    grid = landscape_scan(ManifoldSpec(M1, 2), 12, n=10)
    pts = grid.points()
    for k in (0, 17, 143):
        s = expand_manifold(pts[k], ManifoldSpec(M1, 2))
        assert grid.values.ravel()[k] == pytest.approx(ring_expectation(10, s).F_per_site, abs=1e-13)


def test_scan_limits():
    with pytest.raises(QAOAError):
        landscape_scan(ManifoldSpec(FULL, 2), 8)
    with pytest.raises(QAOAError):
        landscape_scan(ManifoldSpec(M1, 4), 8)
    with pytest.raises(QAOAError):
        landscape_scan(ManifoldSpec(M1, 1), 7)
    assert landscape_scan(ManifoldSpec(M1, 3), 8).values.shape == (8, 8, 8)


def test_grid_local_minima_periodic():
    x = np.arange(10) * 2 * PI / 10
    vals = np.cos(x)[:, None] + np.cos(x)[None, :]
    assert grid_local_minima(vals) == [(5, 5)]
    assert grid_local_minima(np.zeros((4, 4))) == []
