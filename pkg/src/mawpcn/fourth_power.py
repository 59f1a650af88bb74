"""Fourth-power channel-gain surfaces in a single antenna's position.

For one device the channel magnitude seen while moving one antenna (the HAP's
or the device's own) is |w^H g(pos)| where w is a fixed complex weight vector
and g(pos) collects unit-modulus per-path phase terms.  This module evaluates
the gain surface |w^H g|^4, its gradient and Hessian in the position, and a
position-free curvature bound used to build concave quadratic minorants.

The quadratic form behind the surface, (g^H W g)^2 with W = w w^H, is rank one,
so everything reduces to O(L) sums; the entry-wise quadruple-sum expansion is
kept only as a test/verification oracle (see tests and verify.py).
"""

from dataclasses import dataclass

import numpy as np

from . import kernels
from .channel import Position, receive_field_response, transmit_field_response


def as_xy(pos):
    """Accept a Position or any length-2 sequence; return (x, y) floats."""
    if isinstance(pos, Position):
        return pos.x_m, pos.y_m
    x, y = pos
    return float(x), float(y)


@dataclass(frozen=True)
class QuadraticFormCache:
    """Fixed data of one gain surface: weights, path directions, wavelength."""

    weights: np.ndarray     # complex (L,)
    dir_x: np.ndarray       # (L,) first direction component per path
    dir_y: np.ndarray       # (L,) second direction component per path
    wavelength_m: float

    def __post_init__(self):
        object.__setattr__(
            self, "weights", np.ascontiguousarray(self.weights, dtype=np.complex128)
        )
        object.__setattr__(self, "dir_x", np.ascontiguousarray(self.dir_x, dtype=float))
        object.__setattr__(self, "dir_y", np.ascontiguousarray(self.dir_y, dtype=float))
        if not (self.weights.shape == self.dir_x.shape == self.dir_y.shape):
            raise ValueError("weights/dir_x/dir_y must share one shape (L,)")

    @property
    def num_paths(self):
        return self.weights.shape[0]

    @property
    def quadratic_matrix(self):
        """The rank-one Hermitian matrix w w^H behind the squared gain."""
        return np.outer(self.weights, np.conj(self.weights))

    def pair_magnitudes(self):
        return np.abs(self.quadratic_matrix)

    def pair_phases(self):
        return np.angle(self.quadratic_matrix)

    def pair_dir_diffs(self):
        """(L, L) arrays of direction-component differences d[j] - d[i]."""
        return (
            self.dir_x[None, :] - self.dir_x[:, None],
            self.dir_y[None, :] - self.dir_y[:, None],
        )

    def angle_diff_coeffs(self):
        """(L, L, L, L) tensors of pair-sum direction differences.

        Entry [i1, i2, i3, i4] is (d[i2]-d[i1]) + (d[i4]-d[i3]) for each
        component; every entry lies in [-4, 4] since components lie in [-1, 1].
        Only oracle/diagnostic paths should touch these (O(L^4) memory).
        """
        dx, dy = self.pair_dir_diffs()
        alpha = dx[:, :, None, None] + dx[None, None, :, :]
        beta = dy[:, :, None, None] + dy[None, None, :, :]
        return alpha, beta


def hap_gain_cache(realization, k, wd_pos, wavelength):
    """Gain surface of device k as a function of the HAP antenna position."""
    f = receive_field_response(_as_pos(wd_pos), realization, k, wavelength)
    weights = np.conj(realization.path_response[k]) * f
    return QuadraticFormCache(weights, realization.aod_dir_x[k], realization.aod_dir_y[k], wavelength)


def wd_gain_cache(realization, k, hap_pos, wavelength):
    """Gain surface of device k as a function of its own antenna position."""
    g = transmit_field_response(_as_pos(hap_pos), realization, k, wavelength)
    weights = realization.path_response[k] * g
    return QuadraticFormCache(weights, realization.aoa_dir_x[k], realization.aoa_dir_y[k], wavelength)


def _as_pos(pos):
    if isinstance(pos, Position):
        return pos
    return Position(float(pos[0]), float(pos[1]))


def gain4(cache, pos):
    """|w^H g(pos)|^4, the fourth power of the channel magnitude."""
    x, y = as_xy(pos)
    return kernels.gain4_value(cache.weights, cache.dir_x, cache.dir_y, x, y, cache.wavelength_m)


def gain4_value_gradient(cache, pos):
    x, y = as_xy(pos)
    return kernels.gain4_value_gradient(
        cache.weights, cache.dir_x, cache.dir_y, x, y, cache.wavelength_m
    )


def gain4_gradient(cache, pos):
    return gain4_value_gradient(cache, pos)[1]


def gain4_hessian(cache, pos):
    x, y = as_xy(pos)
    return kernels.gain4_hessian(
        cache.weights, cache.dir_x, cache.dir_y, x, y, cache.wavelength_m
    )


def curvature_bound(cache):
    """Position-independent upper bound on ||Hessian||_F over the whole plane."""
    return kernels.curvature_bound(cache.weights, cache.dir_x, cache.dir_y, cache.wavelength_m)


def quadratic_minorant(cache, ref_pos):
    """Return (value, gradient, curvature) of the concave minorant anchored at ref_pos.

    The minorant is value + gradient.(p - ref) - curvature/2 * |p - ref|^2; it
    touches the true surface at ref_pos and lies below it everywhere because
    curvature bounds the Hessian norm globally.
    """
    value, grad = gain4_value_gradient(cache, ref_pos)
    return value, grad, curvature_bound(cache)


# ---------------------------------------------------------------------------
# Batched evaluation (numpy, backend independent) for verification sweeps.


def _phase_matrix(cache, pts):
    pts = np.asarray(pts, dtype=float)
    k = 2.0 * np.pi / cache.wavelength_m
    return k * (np.outer(pts[:, 0], cache.dir_x) + np.outer(pts[:, 1], cache.dir_y))


def gain4_batch(cache, pts):
    """|w^H g|^4 at many positions; pts has shape (P, 2)."""
    terms = np.exp(1j * _phase_matrix(cache, pts)) * np.conj(cache.weights)
    s = terms.sum(axis=1)
    m = s.real**2 + s.imag**2
    return m * m


def hessian_fro_batch(cache, pts):
    """Frobenius norm of the gain-surface Hessian at many positions."""
    terms = np.exp(1j * _phase_matrix(cache, pts)) * np.conj(cache.weights)
    k = 2.0 * np.pi / cache.wavelength_m
    s = terms.sum(axis=1)
    sx = 1j * k * (terms * cache.dir_x).sum(axis=1)
    sy = 1j * k * (terms * cache.dir_y).sum(axis=1)
    sxx = -k * k * (terms * cache.dir_x**2).sum(axis=1)
    sxy = -k * k * (terms * cache.dir_x * cache.dir_y).sum(axis=1)
    syy = -k * k * (terms * cache.dir_y**2).sum(axis=1)
    m = s.real**2 + s.imag**2
    rx = (np.conj(s) * sx).real
    ry = (np.conj(s) * sy).real
    hxx = 8.0 * rx * rx + 4.0 * m * (np.abs(sx) ** 2 + (np.conj(s) * sxx).real)
    hxy = 8.0 * rx * ry + 4.0 * m * ((np.conj(sx) * sy).real + (np.conj(s) * sxy).real)
    hyy = 8.0 * ry * ry + 4.0 * m * (np.abs(sy) ** 2 + (np.conj(s) * syy).real)
    return np.sqrt(hxx * hxx + 2.0 * hxy * hxy + hyy * hyy)


def curvature_tightness(cache, region_size_m, n_samples=1000, seed=0):
    """Diagnostic: how loose is the curvature bound over the moving region.

    Samples the Hessian norm uniformly over the region and reports the ratio
    bound / max sampled norm (>= 1 when the bound holds).  Reporting only; no
    algorithm consumes this.
    """
    rng = np.random.default_rng(seed)
    half = 0.5 * region_size_m
    pts = rng.uniform(-half, half, size=(n_samples, 2))
    norms = hessian_fro_batch(cache, pts)
    bound = curvature_bound(cache)
    peak = float(norms.max()) if n_samples else 0.0
    return {
        "curvature_bound": float(bound),
        "max_sampled_hessian_norm": peak,
        "ratio": float(bound / peak) if peak > 0 else float("inf"),
        "n_samples": int(n_samples),
    }
