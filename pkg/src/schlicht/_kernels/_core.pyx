# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: extended Horner and truncated Cauchy product.

Same recurrences as `_fallback.py`, but with the complex arithmetic spelled
out over separate real/imaginary arrays (unit stride, coefficient-major) so
the C compiler can vectorize across grid points; results agree with the
numpy backend to a few ulps.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


cdef void _split(object values, double[::1] re, double[::1] im):
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] arr = np.ascontiguousarray(
        values, dtype=np.complex128)
    cdef Py_ssize_t j
    for j in range(arr.shape[0]):
        re[j] = arr[j].real
        im[j] = arr[j].imag


def horner_triple(coeffs, points):
    """Evaluate a polynomial and its first two derivatives at many points."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] a = np.ascontiguousarray(
        coeffs, dtype=np.complex128)
    flat = np.ascontiguousarray(np.atleast_1d(points),
                                dtype=np.complex128).ravel()
    cdef Py_ssize_t n = a.shape[0], m = flat.shape[0]
    cdef double[::1] zr = np.empty(m), zi = np.empty(m)
    _split(flat, zr, zi)
    cdef double[::1] br = np.full(m, a[n - 1].real), bi = np.full(m, a[n - 1].imag)
    cdef double[::1] c1r = np.zeros(m), c1i = np.zeros(m)
    cdef double[::1] c2r = np.zeros(m), c2i = np.zeros(m)
    cdef Py_ssize_t j, k
    cdef double akr, aki, tr, ti
    for k in range(n - 2, -1, -1):
        akr = a[k].real
        aki = a[k].imag
        for j in range(m):
            tr = c2r[j] * zr[j] - c2i[j] * zi[j] + c1r[j]
            ti = c2r[j] * zi[j] + c2i[j] * zr[j] + c1i[j]
            c2r[j] = tr
            c2i[j] = ti
            tr = c1r[j] * zr[j] - c1i[j] * zi[j] + br[j]
            ti = c1r[j] * zi[j] + c1i[j] * zr[j] + bi[j]
            c1r[j] = tr
            c1i[j] = ti
            tr = br[j] * zr[j] - bi[j] * zi[j] + akr
            ti = br[j] * zi[j] + bi[j] * zr[j] + aki
            br[j] = tr
            bi[j] = ti
    shape = np.shape(points)
    f = (np.asarray(br) + 1j * np.asarray(bi)).reshape(shape)
    d1 = (np.asarray(c1r) + 1j * np.asarray(c1i)).reshape(shape)
    d2 = (2.0 * (np.asarray(c2r) + 1j * np.asarray(c2i))).reshape(shape)
    return f, d1, d2


def horner_pair(coeffs, points):
    """Evaluate a polynomial and its first derivative at many points."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] a = np.ascontiguousarray(
        coeffs, dtype=np.complex128)
    flat = np.ascontiguousarray(np.atleast_1d(points),
                                dtype=np.complex128).ravel()
    cdef Py_ssize_t n = a.shape[0], m = flat.shape[0]
    cdef double[::1] zr = np.empty(m), zi = np.empty(m)
    _split(flat, zr, zi)
    cdef double[::1] br = np.full(m, a[n - 1].real), bi = np.full(m, a[n - 1].imag)
    cdef double[::1] c1r = np.zeros(m), c1i = np.zeros(m)
    cdef Py_ssize_t j, k
    cdef double akr, aki, tr, ti
    for k in range(n - 2, -1, -1):
        akr = a[k].real
        aki = a[k].imag
        for j in range(m):
            tr = c1r[j] * zr[j] - c1i[j] * zi[j] + br[j]
            ti = c1r[j] * zi[j] + c1i[j] * zr[j] + bi[j]
            c1r[j] = tr
            c1i[j] = ti
            tr = br[j] * zr[j] - bi[j] * zi[j] + akr
            ti = br[j] * zi[j] + bi[j] * zr[j] + aki
            br[j] = tr
            bi[j] = ti
    shape = np.shape(points)
    f = (np.asarray(br) + 1j * np.asarray(bi)).reshape(shape)
    d1 = (np.asarray(c1r) + 1j * np.asarray(c1i)).reshape(shape)
    return f, d1


def horner_eval(coeffs, points):
    """Plain Horner evaluation of a polynomial at many points."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] a = np.ascontiguousarray(
        coeffs, dtype=np.complex128)
    flat = np.ascontiguousarray(np.atleast_1d(points),
                                dtype=np.complex128).ravel()
    cdef Py_ssize_t n = a.shape[0], m = flat.shape[0]
    cdef double[::1] zr = np.empty(m), zi = np.empty(m)
    _split(flat, zr, zi)
    cdef double[::1] br = np.full(m, a[n - 1].real), bi = np.full(m, a[n - 1].imag)
    cdef Py_ssize_t j, k
    cdef double akr, aki, tr, ti
    for k in range(n - 2, -1, -1):
        akr = a[k].real
        aki = a[k].imag
        for j in range(m):
            tr = br[j] * zr[j] - bi[j] * zi[j] + akr
            ti = br[j] * zi[j] + bi[j] * zr[j] + aki
            br[j] = tr
            bi[j] = ti
    return (np.asarray(br) + 1j * np.asarray(bi)).reshape(np.shape(points))


def cauchy_truncated(a_in, b_in, Py_ssize_t n_out):
    """Truncated Cauchy product: c_k = sum_{i+j=k} a_i b_j for k < n_out."""
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] a = np.ascontiguousarray(
        a_in, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] b = np.ascontiguousarray(
        b_in, dtype=np.complex128)
    cdef cnp.ndarray[cnp.complex128_t, ndim=1] out = np.zeros(
        n_out, dtype=np.complex128)
    cdef Py_ssize_t na = a.shape[0], nb = b.shape[0]
    cdef Py_ssize_t k, i, lo, hi
    cdef double complex acc
    for k in range(n_out):
        lo = k - nb + 1
        if lo < 0:
            lo = 0
        hi = k
        if hi > na - 1:
            hi = na - 1
        acc = 0
        for i in range(lo, hi + 1):
            acc = acc + a[i] * b[k - i]
        out[k] = acc
    return out
