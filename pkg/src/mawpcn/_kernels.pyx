# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels.  Reference semantics live in _kernels_py; the two backends
must stay call-compatible and numerically equivalent (tests enforce parity)."""

import numpy as np

from libc.math cimport cos, sin, sqrt, M_PI

BACKEND = "compiled"


def field_response(double x, double y, const double[:] dir_x, const double[:] dir_y,
                   double wavelength):
    cdef Py_ssize_t n = dir_x.shape[0]
    cdef Py_ssize_t i
    out = np.empty(n, dtype=np.complex128)
    cdef double complex[:] ov = out
    cdef double k = 2.0 * M_PI / wavelength
    cdef double ph
    for i in range(n):
        ph = k * (x * dir_x[i] + y * dir_y[i])
        ov[i] = cos(ph) + 1j * sin(ph)
    return out


def gain4_value(const double complex[:] w, const double[:] dir_x, const double[:] dir_y,
                double x, double y, double wavelength):
    cdef Py_ssize_t n = w.shape[0]
    cdef Py_ssize_t i
    cdef double k = 2.0 * M_PI / wavelength
    cdef double ph, c, s, wr, wi
    cdef double sr = 0.0, si = 0.0
    for i in range(n):
        ph = k * (x * dir_x[i] + y * dir_y[i])
        c = cos(ph)
        s = sin(ph)
        wr = w[i].real
        wi = w[i].imag
        # conj(w_i) * exp(j*ph)
        sr += wr * c + wi * s
        si += wr * s - wi * c
    cdef double m = sr * sr + si * si
    return m * m


def gain4_value_gradient(const double complex[:] w, const double[:] dir_x, const double[:] dir_y,
                         double x, double y, double wavelength):
    cdef Py_ssize_t n = w.shape[0]
    cdef Py_ssize_t i
    cdef double k = 2.0 * M_PI / wavelength
    cdef double ph, c, s, wr, wi, tr, ti, ax, ay
    cdef double sr = 0.0, si = 0.0
    cdef double sxr = 0.0, sxi = 0.0, syr = 0.0, syi = 0.0
    for i in range(n):
        ph = k * (x * dir_x[i] + y * dir_y[i])
        c = cos(ph)
        s = sin(ph)
        wr = w[i].real
        wi = w[i].imag
        tr = wr * c + wi * s
        ti = wr * s - wi * c
        sr += tr
        si += ti
        ax = dir_x[i]
        ay = dir_y[i]
        # d/dx adds a factor j*k*ax to each term
        sxr -= k * ax * ti
        sxi += k * ax * tr
        syr -= k * ay * ti
        syi += k * ay * tr
    cdef double m = sr * sr + si * si
    cdef double gx = 4.0 * m * (sr * sxr + si * sxi)
    cdef double gy = 4.0 * m * (sr * syr + si * syi)
    grad = np.empty(2)
    cdef double[:] gv = grad
    gv[0] = gx
    gv[1] = gy
    return m * m, grad


def gain4_hessian(const double complex[:] w, const double[:] dir_x, const double[:] dir_y,
                  double x, double y, double wavelength):
    cdef Py_ssize_t n = w.shape[0]
    cdef Py_ssize_t i
    cdef double k = 2.0 * M_PI / wavelength
    cdef double k2 = k * k
    cdef double ph, c, s, wr, wi, tr, ti, ax, ay
    cdef double sr = 0.0, si = 0.0
    cdef double sxr = 0.0, sxi = 0.0, syr = 0.0, syi = 0.0
    cdef double sxxr = 0.0, sxxi = 0.0, sxyr = 0.0, sxyi = 0.0
    cdef double syyr = 0.0, syyi = 0.0
    for i in range(n):
        ph = k * (x * dir_x[i] + y * dir_y[i])
        c = cos(ph)
        s = sin(ph)
        wr = w[i].real
        wi = w[i].imag
        tr = wr * c + wi * s
        ti = wr * s - wi * c
        sr += tr
        si += ti
        ax = dir_x[i]
        ay = dir_y[i]
        sxr -= k * ax * ti
        sxi += k * ax * tr
        syr -= k * ay * ti
        syi += k * ay * tr
        sxxr -= k2 * ax * ax * tr
        sxxi -= k2 * ax * ax * ti
        sxyr -= k2 * ax * ay * tr
        sxyi -= k2 * ax * ay * ti
        syyr -= k2 * ay * ay * tr
        syyi -= k2 * ay * ay * ti
    cdef double m = sr * sr + si * si
    cdef double rx = sr * sxr + si * sxi
    cdef double ry = sr * syr + si * syi
    cdef double hxx = 8.0 * rx * rx + 4.0 * m * (
        sxr * sxr + sxi * sxi + sr * sxxr + si * sxxi)
    cdef double hxy = 8.0 * rx * ry + 4.0 * m * (
        sxr * syr + sxi * syi + sr * sxyr + si * sxyi)
    cdef double hyy = 8.0 * ry * ry + 4.0 * m * (
        syr * syr + syi * syi + sr * syyr + si * syyi)
    out = np.empty((2, 2))
    cdef double[:, :] hv = out
    hv[0, 0] = hxx
    hv[0, 1] = hxy
    hv[1, 0] = hxy
    hv[1, 1] = hyy
    return out


def curvature_bound(const double complex[:] w, const double[:] dir_x, const double[:] dir_y,
                    double wavelength):
    cdef Py_ssize_t n = w.shape[0]
    cdef Py_ssize_t i, j
    cdef double ai, aj, dx, dy
    cdef double m0 = 0.0
    cdef double vxx = 0.0, vxy = 0.0, vyy = 0.0
    for i in range(n):
        m0 += sqrt(w[i].real * w[i].real + w[i].imag * w[i].imag)
    # Pairwise spread form of the weighted second-moment determinants: it is
    # exact (and exactly zero) when all directions coincide, unlike the
    # cancellation-prone moment difference m0*mxx - mx*mx.
    for i in range(n):
        ai = sqrt(w[i].real * w[i].real + w[i].imag * w[i].imag)
        for j in range(i + 1, n):
            aj = ai * sqrt(w[j].real * w[j].real + w[j].imag * w[j].imag)
            dx = dir_x[i] - dir_x[j]
            dy = dir_y[i] - dir_y[j]
            vxx += aj * dx * dx
            vxy += aj * dx * dy
            vyy += aj * dy * dy
    cdef double sxx = 4.0 * m0 * m0 * vxx
    cdef double sxy = 4.0 * m0 * m0 * vxy
    cdef double syy = 4.0 * m0 * m0 * vyy
    cdef double k = 2.0 * M_PI / wavelength
    return k * k * sqrt(sxx * sxx + 2.0 * sxy * sxy + syy * syy)
