"""Pure-numpy implementations of the hot kernels.

Same algorithm and operation order as the compiled core (`_core.pyx`);
results agree to a few ulps (numpy's vectorized complex multiply uses
fused multiply-adds the plain-C core does not).
"""

from __future__ import annotations

import numpy as np


def horner_triple(coeffs, points):
    """Evaluate a polynomial and its first two derivatives at many points.

    Single extended-Horner pass over ``coeffs`` (ascending degree order):
    returns (p(z), p'(z), p''(z)) as complex arrays shaped like ``points``.
    """
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    points = np.ascontiguousarray(points, dtype=np.complex128)
    b = np.full(points.shape, coeffs[-1], dtype=np.complex128)
    c1 = np.zeros(points.shape, dtype=np.complex128)
    c2 = np.zeros(points.shape, dtype=np.complex128)
    for k in range(coeffs.shape[0] - 2, -1, -1):
        c2 *= points
        c2 += c1
        c1 *= points
        c1 += b
        b *= points
        b += coeffs[k]
    return b, c1, 2.0 * c2


def horner_pair(coeffs, points):
    """Evaluate a polynomial and its first derivative at many points."""
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    points = np.ascontiguousarray(points, dtype=np.complex128)
    b = np.full(points.shape, coeffs[-1], dtype=np.complex128)
    c1 = np.zeros(points.shape, dtype=np.complex128)
    for k in range(coeffs.shape[0] - 2, -1, -1):
        c1 *= points
        c1 += b
        b *= points
        b += coeffs[k]
    return b, c1


def horner_eval(coeffs, points):
    """Plain Horner evaluation of a polynomial at many points."""
    coeffs = np.ascontiguousarray(coeffs, dtype=np.complex128)
    points = np.ascontiguousarray(points, dtype=np.complex128)
    b = np.full(points.shape, coeffs[-1], dtype=np.complex128)
    for k in range(coeffs.shape[0] - 2, -1, -1):
        b *= points
        b += coeffs[k]
    return b


def cauchy_truncated(a, b, n_out):
    """Truncated Cauchy product: c_k = sum_{i+j=k} a_i b_j for k < n_out."""
    a = np.ascontiguousarray(a, dtype=np.complex128)
    b = np.ascontiguousarray(b, dtype=np.complex128)
    out = np.zeros(n_out, dtype=np.complex128)
    na, nb = a.shape[0], b.shape[0]
    for k in range(n_out):
        lo = max(0, k - nb + 1)
        hi = min(k, na - 1)
        acc = 0.0 + 0.0j
        for i in range(lo, hi + 1):
            acc += a[i] * b[k - i]
        out[k] = acc
    return out
