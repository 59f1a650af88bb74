"""Pure-numpy fallback for the compiled kernels (same call surface as _kernels).

Every function evaluates quantities of the scalar channel amplitude
s(x, y) = sum_i conj(w_i) * exp(j*(2*pi/wavelength)*(x*dir_x_i + y*dir_y_i)),
i.e. the gain surface |s|^4, its gradient/Hessian in the antenna position, and
a position-independent curvature bound.
"""

import numpy as np

BACKEND = "python"
TWO_PI = 2.0 * np.pi


def field_response(x, y, dir_x, dir_y, wavelength):
    phase = (TWO_PI / wavelength) * (x * np.asarray(dir_x) + y * np.asarray(dir_y))
    return np.exp(1j * phase)


def _weighted_terms(w, dir_x, dir_y, x, y, wavelength):
    # conj(w_i) * exp(j*phase_i): the per-path summands of s(x, y).
    g = field_response(x, y, dir_x, dir_y, wavelength)
    return np.conj(np.asarray(w)) * g


def gain4_value(w, dir_x, dir_y, x, y, wavelength):
    s = _weighted_terms(w, dir_x, dir_y, x, y, wavelength).sum()
    m = s.real * s.real + s.imag * s.imag
    return m * m


def gain4_value_gradient(w, dir_x, dir_y, x, y, wavelength):
    terms = _weighted_terms(w, dir_x, dir_y, x, y, wavelength)
    s = terms.sum()
    k = TWO_PI / wavelength
    sx = 1j * k * (terms * dir_x).sum()
    sy = 1j * k * (terms * dir_y).sum()
    m = s.real * s.real + s.imag * s.imag
    grad = 4.0 * m * np.array([(np.conj(s) * sx).real, (np.conj(s) * sy).real])
    return m * m, grad


def gain4_hessian(w, dir_x, dir_y, x, y, wavelength):
    terms = _weighted_terms(w, dir_x, dir_y, x, y, wavelength)
    dir_x = np.asarray(dir_x)
    dir_y = np.asarray(dir_y)
    s = terms.sum()
    k = TWO_PI / wavelength
    sx = 1j * k * (terms * dir_x).sum()
    sy = 1j * k * (terms * dir_y).sum()
    sxx = -k * k * (terms * dir_x * dir_x).sum()
    sxy = -k * k * (terms * dir_x * dir_y).sum()
    syy = -k * k * (terms * dir_y * dir_y).sum()
    m = s.real * s.real + s.imag * s.imag
    rx = (np.conj(s) * sx).real
    ry = (np.conj(s) * sy).real
    hxx = 8.0 * rx * rx + 4.0 * m * ((np.conj(sx) * sx).real + (np.conj(s) * sxx).real)
    hxy = 8.0 * rx * ry + 4.0 * m * ((np.conj(sx) * sy).real + (np.conj(s) * sxy).real)
    hyy = 8.0 * ry * ry + 4.0 * m * ((np.conj(sy) * sy).real + (np.conj(s) * syy).real)
    return np.array([[hxx, hxy], [hxy, hyy]])


def curvature_bound(w, dir_x, dir_y, wavelength):
    """Upper bound on the Frobenius norm of the gain-surface Hessian.

    Obtained by setting every oscillatory cosine in the entry-wise quadruple
    sums to one.  For the rank-one quadratic form those sums collapse to
    moments of |w| against the direction components.
    """
    aw = np.abs(np.asarray(w))
    dir_x = np.asarray(dir_x)
    dir_y = np.asarray(dir_y)
    m0 = aw.sum()
    # Pairwise spread form of the weighted second-moment determinants (exact
    # zeros for coincident directions; the moment difference m0*mxx - mx*mx
    # cancels catastrophically there).  Quadratic in the path count.
    pair_w = aw[:, None] * aw[None, :]
    dx = dir_x[:, None] - dir_x[None, :]
    dy = dir_y[:, None] - dir_y[None, :]
    vxx = 0.5 * (pair_w * dx * dx).sum()
    vxy = 0.5 * (pair_w * dx * dy).sum()
    vyy = 0.5 * (pair_w * dy * dy).sum()
    sxx = 4.0 * m0 * m0 * vxx
    sxy = 4.0 * m0 * m0 * vxy
    syy = 4.0 * m0 * m0 * vyy
    k2 = (TWO_PI / wavelength) ** 2
    return k2 * np.sqrt(sxx * sxx + 2.0 * sxy * sxy + syy * syy)
