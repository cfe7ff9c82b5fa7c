"""Truncated power-series arithmetic over complex coefficients.

A series of truncation order N stores coefficients a_0..a_N of
a_0 + a_1 z + ... + a_N z^N.  All operations are pure; coefficient arrays
are frozen (non-writeable) so values can be shared freely across threads.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import _kernels
from .errors import NearZeroConstantTerm, OutsideDisk

#: |a_0| at or below this makes the reciprocal's triangular solve meaningless.
RECIPROCAL_FLOOR = 1e-9

#: Evaluations whose tail estimate exceeds this are flagged unreliable.
EVAL_TOLERANCE = 1e-6


@dataclass(frozen=True)
class TailBound:
    """Geometric-model estimate of |sum_{n>N} a_n z^n| at |z| = radius.

    The model fits rho = |a_N / a_{N-1}| (clamped to [0, 1]) and bounds the
    tail by |a_N| rho r^{N+1} / (1 - rho r); a vanishing top coefficient
    means a polynomial tail of exactly zero.  The bound is monotone
    nondecreasing in the radius.
    """

    radius: float
    bound: float

    @property
    def reliable(self) -> bool:
        return self.bound <= EVAL_TOLERANCE


def _freeze(arr: np.ndarray) -> np.ndarray:
    arr = np.array(arr, dtype=np.complex128)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True)
class CoefficientSeries:
    """Coefficients a_0..a_N of a truncated power series (N = len - 1 >= 1)."""

    coeffs: np.ndarray = field(repr=False)

    def __post_init__(self):
        object.__setattr__(self, "coeffs", _freeze(self.coeffs))
        if self.coeffs.ndim != 1 or self.coeffs.shape[0] < 2:
            raise ValueError("a series needs coefficients a_0..a_N with N >= 1")

    @property
    def truncation_order(self) -> int:
        return self.coeffs.shape[0] - 1

    @property
    def normalized(self) -> bool:
        """Class-A normalization: a_0 = 0 and a_1 = 1 exactly."""
        return self.coeffs[0] == 0 and self.coeffs[1] == 1

    def padded(self, order: int) -> "CoefficientSeries":
        """Same coefficients at truncation order >= the current one."""
        if order < self.truncation_order:
            raise ValueError("cannot pad to a lower order")
        if order == self.truncation_order:
            return self
        out = np.zeros(order + 1, dtype=np.complex128)
        out[: self.coeffs.shape[0]] = self.coeffs
        return CoefficientSeries(out)

    def truncated(self, order: int) -> "CoefficientSeries":
        if order >= self.truncation_order:
            return self.padded(order)
        return CoefficientSeries(self.coeffs[: order + 1])

    def __repr__(self):  # short: coefficient dumps are rarely useful
        return f"CoefficientSeries(order={self.truncation_order})"

    def to_json_dict(self) -> dict:
        return {
            "order": self.truncation_order,
            "coeffs": [[float(c.real), float(c.imag)] for c in self.coeffs],
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True)

    @staticmethod
    def from_json_dict(data: dict) -> "CoefficientSeries":
        coeffs = np.array([complex(re, im) for re, im in data["coeffs"]])
        if len(coeffs) != data["order"] + 1:
            raise ValueError("coefficient count does not match the stated order")
        return CoefficientSeries(coeffs)

    @staticmethod
    def loads(text: str) -> "CoefficientSeries":
        return CoefficientSeries.from_json_dict(json.loads(text))


def from_coefficients(values: Iterable[complex]) -> CoefficientSeries:
    return CoefficientSeries(np.array(list(values), dtype=np.complex128))


def identity_series(order: int) -> CoefficientSeries:
    """The series of f(z) = z."""
    coeffs = np.zeros(order + 1, dtype=np.complex128)
    coeffs[1] = 1.0
    return CoefficientSeries(coeffs)


def constant_series(value: complex, order: int) -> CoefficientSeries:
    coeffs = np.zeros(order + 1, dtype=np.complex128)
    coeffs[0] = value
    return CoefficientSeries(coeffs)


def add(a: CoefficientSeries, b: CoefficientSeries) -> CoefficientSeries:
    n = max(a.truncation_order, b.truncation_order)
    return CoefficientSeries(a.padded(n).coeffs + b.padded(n).coeffs)


def scale(alpha: complex, a: CoefficientSeries) -> CoefficientSeries:
    return CoefficientSeries(alpha * a.coeffs)


def cauchy_product(a: CoefficientSeries, b: CoefficientSeries) -> CoefficientSeries:
    """Degree-<=N truncation of the product, N = max of the input orders."""
    n = max(a.truncation_order, b.truncation_order)
    out = _kernels.cauchy_truncated(a.coeffs, b.coeffs, n + 1)
    return CoefficientSeries(out)


def reciprocal(a: CoefficientSeries) -> CoefficientSeries:
    """Series b with a * b = 1 up to the truncation order.

    Solves the triangular convolution system
    b_0 = 1/a_0,  b_k = -(1/a_0) sum_{j=1..k} a_j b_{k-j}.
    """
    a0 = a.coeffs[0]
    if abs(a0) <= RECIPROCAL_FLOOR:
        raise NearZeroConstantTerm(
            f"|a_0| = {abs(a0):.3e} <= {RECIPROCAL_FLOOR:g}"
        )
    n = a.truncation_order
    out = np.zeros(n + 1, dtype=np.complex128)
    out[0] = 1.0 / a0
    ac = a.coeffs
    for k in range(1, n + 1):
        acc = np.dot(ac[1 : k + 1], out[k - 1 :: -1][: k])
        out[k] = -acc / a0
    return CoefficientSeries(out)


def z_derivative(a: CoefficientSeries) -> CoefficientSeries:
    """The operator z d/dz: coefficient n becomes n * a_n."""
    n = np.arange(a.coeffs.shape[0], dtype=np.float64)
    return CoefficientSeries(n * a.coeffs)


def tail_bound(coeffs: np.ndarray, radius: float) -> float:
    """Geometric tail estimate for a truncated series (see TailBound)."""
    top = abs(coeffs[-1])
    if top == 0.0:
        return 0.0
    prev = abs(coeffs[-2]) if coeffs.shape[0] >= 2 else 0.0
    rho = top / prev if prev > 0.0 else np.inf
    rho = min(rho, 1.0)
    x = rho * radius
    if x >= 1.0:
        return np.inf
    n = coeffs.shape[0] - 1
    return top * rho * radius ** (n + 1) / (1.0 - x)


def evaluate(a: CoefficientSeries, z: complex) -> tuple[complex, TailBound]:
    """Horner evaluation of the truncated polynomial plus a tail estimate."""
    if abs(z) >= 1.0:
        raise OutsideDisk(f"|z| = {abs(z):.6f} >= 1")
    value = complex(_kernels.horner_eval(a.coeffs, np.complex128(z)))
    r = abs(z)
    return value, TailBound(radius=r, bound=tail_bound(a.coeffs, r))
