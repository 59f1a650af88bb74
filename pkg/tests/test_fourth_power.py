import numpy as np
import pytest

from mawpcn.channel import Position, channel_coefficient, generate_realization
from mawpcn.fourth_power import (
    QuadraticFormCache,
    curvature_bound,
    curvature_tightness,
    gain4,
    gain4_batch,
    gain4_gradient,
    gain4_hessian,
    gain4_value_gradient,
    hap_gain_cache,
    hessian_fro_batch,
    quadratic_minorant,
    wd_gain_cache,
)
from mawpcn.params import default_params
from mawpcn.verify import quad_sum_gain4, quad_sum_gradient

from oracles import central_diff_grad, gain4_direct

LAMBDA = 0.06


def random_cache(rng, n_paths, scale=1.0):
    w = scale * (rng.standard_normal(n_paths) + 1j * rng.standard_normal(n_paths))
    return QuadraticFormCache(
        weights=np.ascontiguousarray(w),
        dir_x=rng.uniform(-1.0, 1.0, n_paths),
        dir_y=rng.uniform(-1.0, 1.0, n_paths),
        wavelength_m=LAMBDA,
    )


@pytest.fixture(scope="module")
def params():
    return default_params()


def test_gain_composes_to_channel_fourth_power(params):
    rng = np.random.default_rng(0)
    real = generate_realization(0, params)
    for k in range(params.num_wds):
        hap = Position(*rng.uniform(-0.15, 0.15, 2))
        wd = Position(*rng.uniform(-0.15, 0.15, 2))
        h = channel_coefficient(hap, wd, real, k, params.wavelength_m)
        hap_cache = hap_gain_cache(real, k, wd, params.wavelength_m)
        wd_cache = wd_gain_cache(real, k, hap, params.wavelength_m)
        assert gain4(hap_cache, hap) == pytest.approx(abs(h) ** 4, rel=1e-12)
        assert gain4(wd_cache, wd) == pytest.approx(abs(h) ** 4, rel=1e-12)


def test_gain4_matches_direct_scalar_oracle():
    rng = np.random.default_rng(1)
    for _ in range(20):
        cache = random_cache(rng, int(rng.integers(1, 12)))
        x, y = rng.uniform(-0.15, 0.15, 2)
        want = gain4_direct(cache.weights, cache.dir_x, cache.dir_y, x, y, LAMBDA)
        assert gain4(cache, (x, y)) == pytest.approx(want, rel=1e-12)


def test_single_path_values_are_flat():
    rng = np.random.default_rng(2)
    cache = random_cache(rng, 1)
    const = abs(cache.weights[0]) ** 4
    for _ in range(5):
        pos = rng.uniform(-0.15, 0.15, 2)
        assert gain4(cache, pos) == pytest.approx(const, rel=1e-12)
        assert np.allclose(gain4_gradient(cache, pos), 0.0)
    assert curvature_bound(cache) == 0.0


def test_gradient_matches_central_differences():
    rng = np.random.default_rng(3)
    h = 1e-6 * LAMBDA
    for _ in range(30):
        cache = random_cache(rng, int(rng.integers(2, 12)))
        pos = rng.uniform(-0.12, 0.12, 2)
        got = gain4_gradient(cache, pos)
        fd = central_diff_grad(lambda x, y: gain4(cache, (x, y)), pos, h)
        scale = max(np.linalg.norm(got), np.linalg.norm(fd))
        assert np.linalg.norm(got - fd) <= 1e-5 * scale


def test_value_gradient_pair_consistent():
    rng = np.random.default_rng(4)
    cache = random_cache(rng, 8)
    pos = (0.01, -0.02)
    val, grad = gain4_value_gradient(cache, pos)
    assert val == pytest.approx(gain4(cache, pos), rel=1e-14)
    assert np.allclose(grad, gain4_gradient(cache, pos))


def test_hessian_symmetric_and_matches_gradient_differences():
    rng = np.random.default_rng(5)
    h = 1e-5 * LAMBDA
    for _ in range(10):
        cache = random_cache(rng, int(rng.integers(2, 12)))
        pos = rng.uniform(-0.1, 0.1, 2)
        hess = gain4_hessian(cache, pos)
        assert hess[0, 1] == hess[1, 0]
        fd = np.column_stack([
            (gain4_gradient(cache, pos + [h, 0]) - gain4_gradient(cache, pos - [h, 0])) / (2 * h),
            (gain4_gradient(cache, pos + [0, h]) - gain4_gradient(cache, pos - [0, h])) / (2 * h),
        ])
        scale = max(np.abs(hess).max(), np.abs(fd).max())
        assert np.abs(hess - fd).max() <= 1e-4 * scale


def test_quadruple_sum_parity():
    # the O(L^4) cosine expansion is the independent cross-check for both the
    # value and the gradient
    rng = np.random.default_rng(6)
    for _ in range(5):
        cache = random_cache(rng, int(rng.integers(2, 7)))
        pts = rng.uniform(-0.1, 0.1, (50, 2))
        fast = gain4_batch(cache, pts)
        slow = quad_sum_gain4(cache, pts)
        assert np.allclose(fast, slow, rtol=1e-9, atol=1e-9 * max(1.0, fast.max()))
        grad_fast = gain4_gradient(cache, pts[0])
        grad_slow = quad_sum_gradient(cache, pts[0])
        scale = max(np.linalg.norm(grad_fast), 1e-300)
        assert np.linalg.norm(grad_fast - grad_slow) <= 1e-9 * scale


def test_curvature_dominates_hessian_norm():
    rng = np.random.default_rng(7)
    for _ in range(20):
        cache = random_cache(rng, int(rng.integers(2, 12)))
        psi = curvature_bound(cache)
        pts = rng.uniform(-0.15, 0.15, (500, 2))
        fro = hessian_fro_batch(cache, pts)
        assert np.all(fro <= psi * (1 + 1e-12))


def test_curvature_scales_as_fourth_power_of_weights():
    rng = np.random.default_rng(8)
    cache = random_cache(rng, 9)
    scaled = QuadraticFormCache(
        weights=np.ascontiguousarray(3.0 * cache.weights),
        dir_x=cache.dir_x, dir_y=cache.dir_y, wavelength_m=cache.wavelength_m,
    )
    assert curvature_bound(scaled) == pytest.approx(81.0 * curvature_bound(cache), rel=1e-12)


def test_global_phase_invariance():
    rng = np.random.default_rng(9)
    cache = random_cache(rng, 7)
    spun = QuadraticFormCache(
        weights=np.ascontiguousarray(cache.weights * np.exp(1j * 0.83)),
        dir_x=cache.dir_x, dir_y=cache.dir_y, wavelength_m=cache.wavelength_m,
    )
    pos = (0.03, -0.07)
    assert gain4(spun, pos) == pytest.approx(gain4(cache, pos), rel=1e-12)
    assert np.allclose(gain4_gradient(spun, pos), gain4_gradient(cache, pos), rtol=1e-12)
    assert curvature_bound(spun) == pytest.approx(curvature_bound(cache), rel=1e-12)


def test_minorant_touches_at_reference_and_lower_bounds_everywhere():
    rng = np.random.default_rng(10)
    for _ in range(5):
        cache = random_cache(rng, int(rng.integers(2, 12)))
        ref = rng.uniform(-0.1, 0.1, 2)
        value, grad, psi = quadratic_minorant(cache, ref)
        assert value == pytest.approx(gain4(cache, ref), rel=1e-14)
        pts = rng.uniform(-0.15, 0.15, (1000, 2))
        diffs = pts - ref
        surrogate = (
            value
            + diffs @ grad
            - 0.5 * psi * np.einsum("ij,ij->i", diffs, diffs)
        )
        actual = gain4_batch(cache, pts)
        scale = max(actual.max(), 1.0)
        assert np.all(surrogate <= actual + 1e-9 * scale)


def test_pair_and_quadruple_structure():
    rng = np.random.default_rng(11)
    cache = random_cache(rng, 4)
    quad = cache.quadratic_matrix
    assert np.allclose(quad, quad.conj().T)            # Hermitian
    assert np.linalg.matrix_rank(quad) == 1            # outer product
    coeffs = cache.angle_diff_coeffs()
    assert coeffs[0].min() >= -4 and coeffs[0].max() <= 4
    assert coeffs[1].min() >= -4 and coeffs[1].max() <= 4


def test_batch_values_match_scalar_calls():
    rng = np.random.default_rng(12)
    cache = random_cache(rng, 6)
    pts = rng.uniform(-0.1, 0.1, (20, 2))
    batch = gain4_batch(cache, pts)
    singles = np.array([gain4(cache, p) for p in pts])
    assert np.allclose(batch, singles, rtol=1e-12)


def test_curvature_tightness_reports_ratio():
    rng = np.random.default_rng(13)
    cache = random_cache(rng, 8)
    report = curvature_tightness(cache, region_size_m=0.3, n_samples=200, seed=0)
    assert 0.0 < report["max_sampled_hessian_norm"] <= report["curvature_bound"]
    assert report["ratio"] >= 1.0
    assert report["n_samples"] == 200
