"""Analytic functions on the unit disk with a uniform evaluation surface.

Every function answers ``eval_triple`` (value, first and second derivative,
plus a reliability flag) at any point with |z| <= 1 - EVAL_GUARD, and
``to_series`` (degree-N Taylor coefficients).  Backends:

* closed forms (identity, generalized Koebe, half-plane map),
* stored coefficient series (optionally *exact*, i.e. the polynomial IS the
  function rather than a truncation),
* operator images, realized through the coefficient-multiplier path
  (see `operators`).

Evaluation accepts scalars or numpy arrays of points.
"""

from __future__ import annotations

import cmath
import json
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import _kernels
from . import series as _series
from .errors import InvalidParameter, OutsideDisk
from .series import CoefficientSeries, EVAL_TOLERANCE, tail_bound

#: No evaluation is requested at |z| > 1 - EVAL_GUARD; certification works on
#: compact subdisks, so nothing is lost.
EVAL_GUARD = 1e-3


@dataclass(frozen=True)
class EvalTriple:
    """f(z), f'(z), f''(z) with tail-reliability flags.

    `reliable` covers all three values; `reliable_first` only f and f'
    (consumers that never touch f'' check that one, e.g. the starlike
    ratio after the convex-family reduction).
    """

    value: np.ndarray
    d1: np.ndarray
    d2: np.ndarray
    reliable: bool
    reliable_first: bool = True


@dataclass(frozen=True)
class EvalPair:
    """f(z), f'(z) and the joint tail-reliability flag."""

    value: np.ndarray
    d1: np.ndarray
    reliable: bool


def _as_points(z) -> np.ndarray:
    pts = np.asarray(z, dtype=np.complex128)
    r = np.abs(pts)
    if np.any(r >= 1.0):
        raise OutsideDisk("evaluation outside the open unit disk")
    return pts


def _max_radius(pts: np.ndarray) -> float:
    return float(np.max(np.abs(pts))) if pts.size else 0.0


class AnalyticFunction:
    """Base class; subclasses implement `_triple` and `to_series`."""

    label: str = ""
    #: Optional membership witness for close-to-convex-style classes;
    #: generators attach the companion they built the function against.
    companion: Optional["AnalyticFunction"] = None

    def eval_triple(self, z) -> EvalTriple:
        pts = _as_points(z)
        triple = self._triple(pts)
        if _max_radius(pts) > 1.0 - EVAL_GUARD:
            return EvalTriple(triple.value, triple.d1, triple.d2, False, False)
        return triple

    def eval_pair(self, z) -> EvalPair:
        """f and f' only; the hot path for the ratio-based certifiers."""
        pts = _as_points(z)
        pair = self._pair(pts)
        if _max_radius(pts) > 1.0 - EVAL_GUARD:
            return EvalPair(pair.value, pair.d1, False)
        return pair

    def _triple(self, pts: np.ndarray) -> EvalTriple:
        raise NotImplementedError

    def _pair(self, pts: np.ndarray) -> EvalPair:
        t = self._triple(pts)
        return EvalPair(t.value, t.d1, t.reliable_first)

    def _quad(self, pts: np.ndarray):
        """(f, f', f'', f''') for backends that can supply a third derivative."""
        raise NotImplementedError

    def to_series(self, order: int) -> CoefficientSeries:
        raise NotImplementedError

    @property
    def series_is_exact(self) -> bool:
        """True when the function is a polynomial its series reproduces exactly."""
        return False

    def __repr__(self):
        return f"<{type(self).__name__} {self.label}>"


class SeriesFunction(AnalyticFunction):
    """Function given by coefficients; `exact` marks a genuine polynomial."""

    def __init__(self, coeffs: CoefficientSeries, exact: bool = False,
                 label: str = "", companion: Optional[AnalyticFunction] = None):
        self.series = coeffs
        self.exact = exact
        self.label = label or f"series(order={coeffs.truncation_order})"
        self.companion = companion

    @property
    def series_is_exact(self) -> bool:
        return self.exact

    def _triple(self, pts: np.ndarray) -> EvalTriple:
        c = self.series.coeffs
        f, d1, d2 = _kernels.horner_triple(c, pts)
        if self.exact:
            return EvalTriple(f, d1, d2, True)
        r = _max_radius(pts)
        n = np.arange(c.shape[0], dtype=np.float64)
        first = tail_bound(c, r) <= EVAL_TOLERANCE
        second = first
        if c.shape[0] >= 3:
            first = first and tail_bound((n * c)[1:], r) <= EVAL_TOLERANCE
            second = first and (tail_bound((n * (n - 1) * c)[2:], r)
                                <= EVAL_TOLERANCE)
        return EvalTriple(f, d1, d2, bool(second), bool(first))

    def _pair(self, pts: np.ndarray) -> EvalPair:
        c = self.series.coeffs
        f, d1 = _kernels.horner_pair(c, pts)
        if self.exact:
            return EvalPair(f, d1, True)
        r = _max_radius(pts)
        ok = tail_bound(c, r) <= EVAL_TOLERANCE
        if ok and c.shape[0] >= 3:
            n = np.arange(c.shape[0], dtype=np.float64)
            ok = tail_bound((n * c)[1:], r) <= EVAL_TOLERANCE
        return EvalPair(f, d1, bool(ok))

    def _quad(self, pts: np.ndarray):
        c = self.series.coeffs
        f, d1, d2 = _kernels.horner_triple(c, pts)
        n = np.arange(c.shape[0], dtype=np.float64)
        d3c = (n * (n - 1) * (n - 2) * c)[3:]
        if d3c.size == 0:
            d3 = np.zeros_like(f)
        else:
            d3 = _kernels.horner_eval(d3c, pts)
        return f, d1, d2, d3

    def to_series(self, order: int) -> CoefficientSeries:
        return self.series.truncated(order)


class IdentityFunction(AnalyticFunction):
    """f(z) = z."""

    label = "identity"

    def _triple(self, pts: np.ndarray) -> EvalTriple:
        one = np.ones_like(pts)
        return EvalTriple(pts.copy(), one, np.zeros_like(pts), True)

    def _quad(self, pts: np.ndarray):
        zero = np.zeros_like(pts)
        return pts.copy(), np.ones_like(pts), zero, zero

    @property
    def series_is_exact(self) -> bool:
        return True

    def to_series(self, order: int) -> CoefficientSeries:
        return _series.identity_series(order)


class KoebeFunction(AnalyticFunction):
    """f(z) = z / (1 - x z)^(2(1 - lam)), |x| = 1, 0 <= lam < 1.

    The extremal starlike-of-order-lam family; lam = 0, x = 1 is the
    classical Koebe function z/(1-z)^2.  Powers use the principal branch,
    which 1 - xz never leaves for |z| < 1.
    """

    def __init__(self, lam: float = 0.0, x: complex = 1.0):
        if not 0.0 <= lam < 1.0:
            raise InvalidParameter(f"koebe requires 0 <= lambda < 1, got {lam}")
        if abs(abs(x) - 1.0) > 1e-12:
            raise InvalidParameter(f"koebe requires |x| = 1, got |x| = {abs(x)}")
        self.lam = float(lam)
        self.x = complex(x)
        self.beta = 2.0 * (1.0 - self.lam)
        x_text = f"{self.x.real:g}" if self.x.imag == 0 else f"{self.x:g}"
        self.label = f"koebe(lambda={self.lam:g},x={x_text})"

    def _quad(self, pts: np.ndarray):
        b, x = self.beta, self.x
        w = 1.0 - x * pts
        # w^p via principal logarithm; Re(w) > 0 on the disk.
        powm = np.exp(-(b + 3.0) * np.log(w))  # w^-(b+3)
        f = pts * powm * w * w * w
        d1 = powm * w * w * (1.0 + (b - 1.0) * x * pts)
        d2 = b * x * powm * w * (2.0 + (b - 1.0) * x * pts)
        d3 = b * (b + 1.0) * x * x * powm * (3.0 + (b - 1.0) * x * pts)
        return f, d1, d2, d3

    def _triple(self, pts: np.ndarray) -> EvalTriple:
        f, d1, d2, _ = self._quad(pts)
        return EvalTriple(f, d1, d2, True)

    def to_series(self, order: int) -> CoefficientSeries:
        # a_n = binom(n - 2 + beta, n - 1) x^(n-1), built by ratio recurrence.
        coeffs = np.zeros(order + 1, dtype=np.complex128)
        if order >= 1:
            t = 1.0 + 0.0j
            coeffs[1] = t
            for m in range(1, order):
                t = t * self.x * (m + self.beta - 1.0) / m
                coeffs[m + 1] = t
        return CoefficientSeries(coeffs)


class HalfPlaneFunction(AnalyticFunction):
    """f(z) = z / (1 - z), the disk-to-half-plane map."""

    label = "half_plane"

    def _quad(self, pts: np.ndarray):
        w = 1.0 - pts
        inv2 = 1.0 / (w * w)
        return pts / w, inv2, 2.0 * inv2 / w, 6.0 * inv2 / (w * w)

    def _triple(self, pts: np.ndarray) -> EvalTriple:
        f, d1, d2, _ = self._quad(pts)
        return EvalTriple(f, d1, d2, True)

    def to_series(self, order: int) -> CoefficientSeries:
        coeffs = np.ones(order + 1, dtype=np.complex128)
        coeffs[0] = 0.0
        return CoefficientSeries(coeffs)


class ZTimesDerivative(AnalyticFunction):
    """g(z) = z f'(z) for a closed-form inner function.

    Series-backed inputs never reach this wrapper; `z_times_derivative`
    maps their coefficients exactly instead.
    """

    def __init__(self, inner: AnalyticFunction):
        self.inner = inner
        self.label = f"z*d({inner.label})"

    def _triple(self, pts: np.ndarray) -> EvalTriple:
        f, d1, d2, d3 = self.inner._quad(pts)
        return EvalTriple(pts * d1, d1 + pts * d2, 2.0 * d2 + pts * d3, True)

    def _pair(self, pts: np.ndarray) -> EvalPair:
        t = self.inner._triple(pts)
        return EvalPair(pts * t.d1, t.d1 + pts * t.d2, t.reliable)

    @property
    def series_is_exact(self) -> bool:
        return self.inner.series_is_exact

    def to_series(self, order: int) -> CoefficientSeries:
        return _series.z_derivative(self.inner.to_series(order))


def z_times_derivative(f: AnalyticFunction) -> AnalyticFunction:
    """The function z f'(z); exact coefficient map n * a_n for series backends."""
    if isinstance(f, SeriesFunction):
        return SeriesFunction(
            _series.z_derivative(f.series), exact=f.exact,
            label=f"z*d({f.label})",
        )
    if isinstance(f, IdentityFunction):
        return f
    return ZTimesDerivative(f)


def inverse_z_derivative(f: AnalyticFunction, order: int) -> AnalyticFunction:
    """The g with z g'(z) = f(z): coefficient map a_n / n (requires a_0 = 0)."""
    if isinstance(f, IdentityFunction):
        return f
    coeffs = f.to_series(order).coeffs
    if coeffs[0] != 0:
        raise InvalidParameter("inverse of z d/dz needs a vanishing constant term")
    n = np.arange(coeffs.shape[0], dtype=np.float64)
    out = np.zeros_like(coeffs)
    out[1:] = coeffs[1:] / n[1:]
    return SeriesFunction(
        CoefficientSeries(out), exact=f.series_is_exact,
        label=f"invzd({f.label})",
    )


def identity() -> AnalyticFunction:
    return IdentityFunction()


def koebe(lam: float = 0.0, x: complex = 1.0) -> AnalyticFunction:
    return KoebeFunction(lam, x)


def half_plane() -> AnalyticFunction:
    return HalfPlaneFunction()


def from_series(coeffs: CoefficientSeries, exact: bool = False,
                label: str = "") -> AnalyticFunction:
    return SeriesFunction(coeffs, exact=exact, label=label)


def generate_perturbed(seed: int, order: int, amplitude: float) -> AnalyticFunction:
    """Normalized polynomial z + sum_{n=2..N} eps_n z^n with |eps_n| <= amplitude/n^2.

    Deterministic in the seed; amplitude 0 gives the identity coefficients.
    The 1/n^2 decay keeps sum n|eps_n| under control, so modest amplitudes
    land inside the starlike classes with certifiable margin.
    """
    if amplitude < 0:
        raise InvalidParameter("amplitude must be nonnegative")
    rng = np.random.default_rng(seed)
    coeffs = np.zeros(order + 1, dtype=np.complex128)
    coeffs[1] = 1.0
    for n in range(2, order + 1):
        mag = rng.random() * amplitude / (n * n)
        phase = rng.random() * 2.0 * np.pi
        coeffs[n] = mag * cmath.exp(1j * phase)
    return SeriesFunction(
        CoefficientSeries(coeffs), exact=True,
        label=f"perturbed(seed={seed},order={order},amplitude={amplitude:g})",
    )


def function_from_spec(text: str) -> AnalyticFunction:
    """Parse a CLI function spec, e.g. ``koebe:lambda=0.25,x=1``.

    Builtins: identity, koebe, half_plane, perturbed; ``series:<path>``
    loads coefficients from a JSON file.
    """
    name, _, args = text.partition(":")
    name = name.strip()
    if name == "identity":
        return identity()
    if name == "half_plane":
        return half_plane()
    if name == "series":
        if not args:
            raise InvalidParameter("series spec needs a file path: series:<path>")
        with open(args) as fh:
            text = fh.read()
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidParameter(
                f"{args}:{exc.lineno}: malformed series file: {exc.msg}"
            ) from exc
        try:
            series = CoefficientSeries.from_json_dict(data)
        except (KeyError, TypeError, ValueError) as exc:
            raise InvalidParameter(
                f"{args}:1: malformed series file: {exc}"
            ) from exc
        return SeriesFunction(series, label=f"series:{args}")
    params = {}
    if args:
        for item in args.split(","):
            key, _, value = item.partition("=")
            if not _:
                raise InvalidParameter(f"malformed parameter {item!r} in {text!r}")
            params[key.strip()] = value.strip()
    if name == "koebe":
        lam = float(params.pop("lambda", 0.0))
        x = complex(params.pop("x", "1"))
        if params:
            raise InvalidParameter(f"unknown koebe parameters: {sorted(params)}")
        return koebe(lam, x)
    if name == "perturbed":
        seed = int(params.pop("seed", 0))
        order = int(params.pop("order", 32))
        amplitude = float(params.pop("amplitude", 0.1))
        if params:
            raise InvalidParameter(f"unknown perturbed parameters: {sorted(params)}")
        return generate_perturbed(seed, order, amplitude)
    raise InvalidParameter(f"unknown function spec {text!r}")
