"""Grid certification of the univalent-function subclasses.

Membership in each class is a strict open-disk inequality; the certifier
samples it on compact circles and reports a signed margin (grid minimum of
the distance to the defining boundary), the witness point attaining it, and
honest one-sided semantics: Member means "no violation found on this grid",
NonMember means "a violation was found".

Margins:

* starlike(lam):            min Re(z f'/f) - lam
* convex(lam):              min Re(1 + z f''/f') - lam
* close_to_convex(beta,lam): min Re(z f'/g) - beta, companion g starlike(lam)
* quasi_convex(beta,lam):   min Re((z f')'/g') - beta, companion g convex(lam)
* strongly_starlike(eta,lam): pi*eta/2 - max |arg(z f'/f - lam)|
* strongly_convex(eta,lam):   pi*eta/2 - max |arg(1 + z f''/f' - lam)|

The convex-family margins are computed as the starlike-family margins of
z f' (an exact pointwise identity), so the paired margins agree bitwise for
series-backed inputs.  An optional operator lift certifies the lifted
classes (the operator image is taken through the multiplier path first);
for the lifted strongly-starlike/convex classes the extra nondegeneracy
condition (the defining ratio stays a quantitative gap away from lam) is
reported in `nondegeneracy_ok`.
"""

from __future__ import annotations

import functools
import math
from dataclasses import dataclass, replace
from typing import NamedTuple, Optional

import numpy as np

from .errors import InvalidParameter, MissingCompanion
from .functions import AnalyticFunction, z_times_derivative
from .operators import (DEFAULT_OPERATOR_ORDER, OperatorSpec, apply_to_function,
                        bernardi, jks, operator_from_spec)

#: Grid margins inside (-MARGIN_FLOOR, MARGIN_FLOOR) cannot distinguish a
#: strict inequality from equality; such verdicts are Inconclusive.
MARGIN_FLOOR = 1e-7

#: Quantitative gap standing in for the pointwise "!= lam" conditions.
DEGENERACY_FLOOR = 1e-6

#: |denominator| below this at a grid point makes the ratio meaningless.
DIVISION_FLOOR = 1e-12

#: |w| below this leaves arg(w) undefined for certification purposes.
ARG_FLOOR = 1e-12

MEMBER = "member"
NON_MEMBER = "non_member"
INCONCLUSIVE = "inconclusive"

STARLIKE = "starlike"
CONVEX = "convex"
CLOSE_TO_CONVEX = "close_to_convex"
QUASI_CONVEX = "quasi_convex"
STRONGLY_STARLIKE = "strongly_starlike"
STRONGLY_CONVEX = "strongly_convex"

KINDS = (STARLIKE, CONVEX, CLOSE_TO_CONVEX, QUASI_CONVEX,
         STRONGLY_STARLIKE, STRONGLY_CONVEX)

_REDUCTIONS = {
    CONVEX: STARLIKE,
    STRONGLY_CONVEX: STRONGLY_STARLIKE,
    QUASI_CONVEX: CLOSE_TO_CONVEX,
}


@dataclass(frozen=True)
class DiskGrid:
    """Concentric sampling circles: ascending radii, M equispaced angles each."""

    radii: tuple[float, ...]
    angles: int

    def __post_init__(self):
        radii = tuple(float(r) for r in self.radii)
        object.__setattr__(self, "radii", radii)
        if not radii or any(not 0.0 < r <= 0.999 for r in radii):
            raise InvalidParameter("grid radii must lie in (0, 0.999]")
        if list(radii) != sorted(set(radii)):
            raise InvalidParameter("grid radii must be strictly ascending")
        if self.angles < 8:
            raise InvalidParameter("grid needs at least 8 angles per radius")

    def points(self) -> np.ndarray:
        """Flattened points ordered by (radius ascending, angle index ascending).

        That ordering plus first-occurrence argmin gives the deterministic
        tie-break: smallest radius first, then smallest angle index.
        """
        return _grid_points(self)

    def refined(self) -> "DiskGrid":
        """Superset grid: double the angles, add the circle at 0.99 * max radius."""
        extra = 0.99 * self.radii[-1]
        radii = tuple(sorted(set(self.radii) | {extra}))
        return DiskGrid(radii, self.angles * 2)

    @property
    def key(self) -> str:
        return f"r={','.join(f'{r:g}' for r in self.radii)};m={self.angles}"

    def to_json_dict(self) -> dict:
        return {"radii": list(self.radii), "angles": self.angles}


@functools.lru_cache(maxsize=64)
def _grid_points(grid: DiskGrid) -> np.ndarray:
    theta = 2.0 * np.pi * np.arange(grid.angles) / grid.angles
    ring = np.exp(1j * theta)
    pts = np.concatenate([r * ring for r in grid.radii])
    pts.flags.writeable = False
    return pts


DEFAULT_GRID = DiskGrid((0.1, 0.3, 0.5, 0.7, 0.85, 0.95), 256)


@dataclass(frozen=True)
class ClassSpec:
    """One of the six class kinds, its parameters, and an optional operator lift."""

    kind: str
    lam: float = 0.0
    beta: Optional[float] = None
    eta: Optional[float] = None
    lift: Optional[OperatorSpec] = None

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidParameter(f"unknown class kind {self.kind!r}")
        if not 0.0 <= self.lam < 1.0:
            raise InvalidParameter(f"class requires 0 <= lambda < 1, got {self.lam}")
        if self.kind in (CLOSE_TO_CONVEX, QUASI_CONVEX):
            if self.beta is None or not 0.0 <= self.beta < 1.0:
                raise InvalidParameter("close-to-convex kinds require 0 <= beta < 1")
        elif self.beta is not None:
            raise InvalidParameter(f"{self.kind} takes no beta parameter")
        if self.kind in (STRONGLY_STARLIKE, STRONGLY_CONVEX):
            if self.eta is None or not 0.0 < self.eta <= 1.0:
                raise InvalidParameter("strongly kinds require 0 < eta <= 1")
        elif self.eta is not None:
            raise InvalidParameter(f"{self.kind} takes no eta parameter")

    @property
    def needs_companion(self) -> bool:
        return self.kind in (CLOSE_TO_CONVEX, QUASI_CONVEX)

    @property
    def companion_kind(self) -> str:
        """Class the companion must belong to (same lift by convention)."""
        return STARLIKE if self.kind == CLOSE_TO_CONVEX else CONVEX

    @property
    def label(self) -> str:
        parts = [f"lambda={self.lam:g}"]
        if self.beta is not None:
            parts.insert(0, f"beta={self.beta:g}")
        if self.eta is not None:
            parts.insert(0, f"eta={self.eta:g}")
        base = f"{self.kind}({','.join(parts)})"
        if self.lift is not None:
            return f"{base}^[{self.lift.label}]"
        return base

    def to_json_dict(self) -> dict:
        out = {"kind": self.kind, "lambda": self.lam}
        if self.beta is not None:
            out["beta"] = self.beta
        if self.eta is not None:
            out["eta"] = self.eta
        if self.lift is not None:
            out["lift"] = {"kind": self.lift.kind, "value": self.lift.value}
        return out


def class_from_spec(text: str, lift: Optional[str] = None) -> ClassSpec:
    """Parse a CLI class spec, e.g. ``starlike:lambda=0.5``.

    ``lift`` is an optional operator spec string (``bernardi:c=1``).
    """
    name, _, args = text.partition(":")
    name = name.strip()
    if name not in KINDS:
        raise InvalidParameter(f"unknown class kind {name!r}")
    params: dict[str, float] = {}
    if args:
        for item in args.split(","):
            key, sep, value = item.partition("=")
            if not sep:
                raise InvalidParameter(f"malformed parameter {item!r} in {text!r}")
            params[key.strip()] = float(value)
    return ClassSpec(
        kind=name,
        lam=params.pop("lambda", 0.0),
        beta=params.pop("beta", None),
        eta=params.pop("eta", None),
        lift=operator_from_spec(lift) if lift else None,
    )


@dataclass(frozen=True)
class Verdict:
    """Certification outcome.

    status is one of member / non_member / inconclusive; margin is the
    signed grid minimum; witness the grid point attaining it (or the first
    degenerate point when that forced inconclusiveness); nondegeneracy_ok
    covers the lifted strongly classes' "!= lam" condition; reliable is
    False when any evaluation tripped a tail bound or a degenerate ratio.
    """

    status: str
    margin: float
    witness: Optional[complex]
    nondegeneracy_ok: bool
    reliable: bool
    grid: DiskGrid

    def to_json_dict(self) -> dict:
        return {
            "status": self.status,
            "margin": self.margin,
            "witness": None if self.witness is None
            else [self.witness.real, self.witness.imag],
            "nondegeneracy_ok": self.nondegeneracy_ok,
            "reliable": self.reliable,
            "grid": self.grid.to_json_dict(),
        }


class GridMin(NamedTuple):
    """Minimum of a hypothesis field over the grid, with witness and health."""

    value: float
    witness: Optional[complex]
    reliable: bool


def _masked_min(field: np.ndarray, mask: np.ndarray, pts: np.ndarray):
    """First-occurrence minimum of field over unmasked points."""
    if mask.any():
        field = np.where(mask, np.inf, field)
    idx = int(np.argmin(field))
    if not np.isfinite(field[idx]):
        return math.nan, None
    return float(field[idx]), complex(pts[idx])


def _first_masked(pts: np.ndarray, mask: np.ndarray) -> Optional[complex]:
    idx = np.flatnonzero(mask)
    return complex(pts[idx[0]]) if idx.size else None


def _reduce(f: AnalyticFunction, spec: ClassSpec,
            companion: Optional[AnalyticFunction]):
    """Convex-family kinds become starlike-family kinds of z f'."""
    kind = spec.kind
    if kind in _REDUCTIONS:
        f = z_times_derivative(f)
        if companion is not None and kind == QUASI_CONVEX:
            companion = z_times_derivative(companion)
        kind = _REDUCTIONS[kind]
    return f, kind, companion


def certify(f: AnalyticFunction, spec: ClassSpec, grid: DiskGrid = DEFAULT_GRID,
            companion: Optional[AnalyticFunction] = None, strict: bool = False,
            order: int = DEFAULT_OPERATOR_ORDER) -> Verdict:
    """Certify membership of f in the class over the grid.

    Close-to-convex kinds need the companion g (its own class membership is
    the caller's responsibility unless ``strict``).  A lift on the spec
    applies the operator (multiplier path) to the function -- and to the
    companion -- before the base-class check.
    """
    if spec.needs_companion and companion is None:
        raise MissingCompanion(f"{spec.kind} requires a companion function")
    if not spec.needs_companion:
        companion = None

    fr, kind, gr = _reduce(f, spec, companion)
    nondeg_required = (
        spec.lift is not None
        and spec.kind in (STRONGLY_STARLIKE, STRONGLY_CONVEX)
    )
    if spec.lift is not None:
        fr = apply_to_function(spec.lift, fr, order)
        if gr is not None:
            gr = apply_to_function(spec.lift, gr, order)

    pts = grid.points()
    # Every reduced kernel consumes only the value and first derivative.
    ft = fr.eval_pair(pts)
    reliable = ft.reliable
    num = pts * ft.d1
    if kind == CLOSE_TO_CONVEX:
        gt = gr.eval_pair(pts)
        reliable = reliable and gt.reliable
        den = gt.value
    else:
        den = ft.value
    div_mask = np.abs(den) < DIVISION_FLOOR
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = num / den

    mask = div_mask
    nondeg_ok = True
    if kind == STRONGLY_STARLIKE:
        w = ratio - spec.lam
        arg_mask = np.abs(w) < ARG_FLOOR
        mask = mask | arg_mask
        with np.errstate(invalid="ignore"):
            field = 0.5 * math.pi * spec.eta - np.abs(np.angle(w))
        if nondeg_required:
            # |w| near zero is exactly what the gap check must catch, so
            # only division-degenerate points are excluded here.
            gap = np.where(div_mask, np.inf, np.abs(w))
            nondeg_ok = bool(np.min(gap) > DEGENERACY_FLOOR)
    elif kind == CLOSE_TO_CONVEX:
        field = np.real(ratio) - spec.beta
    else:
        field = np.real(ratio) - spec.lam

    margin, witness = _masked_min(field, mask, pts)
    degenerate = bool(mask.any())
    if degenerate:
        reliable = False
        witness = _first_masked(pts, mask)

    if strict and gr is not None:
        comp_spec = ClassSpec(spec.companion_kind, lam=spec.lam, lift=spec.lift)
        comp = certify(companion, comp_spec, grid, order=order)
        reliable = reliable and comp.reliable
        if comp.status != MEMBER:
            return Verdict(INCONCLUSIVE, margin, witness, nondeg_ok, reliable, grid)

    if not reliable or math.isnan(margin) or abs(margin) < MARGIN_FLOOR:
        status = INCONCLUSIVE
    elif margin > 0:
        status = MEMBER
    else:
        status = NON_MEMBER
    return Verdict(status, margin, witness, nondeg_ok, reliable, grid)


def certify_lifted_pair(f: AnalyticFunction, spec: ClassSpec,
                        grid: DiskGrid = DEFAULT_GRID,
                        companion: Optional[AnalyticFunction] = None,
                        order: int = DEFAULT_OPERATOR_ORDER) -> Verdict:
    """Certify membership in a lifted class (spec.lift must be present).

    Same computation as `certify`; exposed separately so reports can name
    the lifted class explicitly.
    """
    if spec.lift is None:
        raise InvalidParameter("certify_lifted_pair needs a spec with a lift")
    return certify(f, spec, grid, companion=companion, order=order)


# --------------------------------------------------------------------------
# Hypothesis side conditions for the inclusion experiments
# --------------------------------------------------------------------------

RE_DIFF = "re_diff"
ARG_CMP = "arg_cmp"
COMPANION_RE_DIFF = "companion_re_diff"
CTC_DRIVE = "ctc_drive"
QC_DRIVE = "qc_drive"
NONDEG_STAR = "nondeg_star"
NONDEG_CONV = "nondeg_conv"

HYPOTHESIS_IDS = (RE_DIFF, ARG_CMP, COMPANION_RE_DIFF, CTC_DRIVE, QC_DRIVE,
                  NONDEG_STAR, NONDEG_CONV)


def _ratio(fn: AnalyticFunction, pts: np.ndarray):
    t = fn.eval_pair(pts)
    mask = np.abs(t.value) < DIVISION_FLOOR
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = pts * t.d1 / t.value
    return ratio, mask, t.reliable


def hypothesis_margin(f: AnalyticFunction, hyp: str, params: dict,
                      grid: DiskGrid = DEFAULT_GRID,
                      companion: Optional[AnalyticFunction] = None,
                      order: int = DEFAULT_OPERATOR_ORDER) -> GridMin:
    """Grid minimum of a catalogued side-condition expression.

    Positive means the (strict) hypothesis held everywhere on the grid.
    Forms:

    * re_diff(c):           Re(z f'/f - z F'/F), F the c-image of f
    * arg_cmp(c, lam):      |arg(z F'/F - lam)| - |arg(z f'/f - lam)|
    * companion_re_diff(c): re_diff applied to the companion
    * ctc_drive(op_c, den_c):  Re{ z (A/B)' / (z B'/B + den_c) },
                               A = image of z f', B = image of g
    * qc_drive(op_c, den_c):   Re{ z (A'/B')' / (z B''/B' + den_c) }
    * nondeg_star(lam[, c][, sigma]): min |z B'/B - lam| - gap floor, B the
      optional c-image of the optional sigma-image of f
    * nondeg_conv(lam[, c][, sigma]): same with the derivative-ratio form
    """
    pts = grid.points()
    if hyp == COMPANION_RE_DIFF:
        if companion is None:
            raise MissingCompanion("companion_re_diff needs a companion")
        return hypothesis_margin(companion, RE_DIFF, params, grid, order=order)

    if hyp == RE_DIFF:
        lifted = apply_to_function(bernardi(params["c"]), f, order)
        r1, m1, ok1 = _ratio(f, pts)
        r2, m2, ok2 = _ratio(lifted, pts)
        field = np.real(r1 - r2)
        mask = m1 | m2
        reliable = ok1 and ok2
    elif hyp == ARG_CMP:
        lam = params["lam"]
        lifted = apply_to_function(bernardi(params["c"]), f, order)
        r1, m1, ok1 = _ratio(f, pts)
        r2, m2, ok2 = _ratio(lifted, pts)
        w1 = r1 - lam
        w2 = r2 - lam
        mask = m1 | m2 | (np.abs(w1) < ARG_FLOOR) | (np.abs(w2) < ARG_FLOOR)
        with np.errstate(invalid="ignore"):
            field = np.abs(np.angle(w2)) - np.abs(np.angle(w1))
        reliable = ok1 and ok2
    elif hyp in (CTC_DRIVE, QC_DRIVE):
        if companion is None:
            raise MissingCompanion(f"{hyp} needs a companion")
        op = bernardi(params["op_c"])
        den_c = params["den_c"]
        a_fn = apply_to_function(op, z_times_derivative(f), order)
        b_fn = apply_to_function(op, companion, order)
        if hyp == CTC_DRIVE:
            at = a_fn.eval_pair(pts)
            bt = b_fn.eval_pair(pts)
            reliable = at.reliable and bt.reliable
            numer = pts * (at.d1 * bt.value - at.value * bt.d1)
            denom = bt.value * (pts * bt.d1 + den_c * bt.value)
        else:
            at = a_fn.eval_triple(pts)
            bt = b_fn.eval_triple(pts)
            reliable = at.reliable and bt.reliable
            numer = pts * (at.d2 * bt.d1 - at.d1 * bt.d2)
            denom = bt.d1 * (pts * bt.d2 + den_c * bt.d1)
        mask = np.abs(denom) < DIVISION_FLOOR
        with np.errstate(divide="ignore", invalid="ignore"):
            field = np.real(numer / denom)
    elif hyp in (NONDEG_STAR, NONDEG_CONV):
        lam = params["lam"]
        image = f
        if params.get("sigma") is not None:
            image = apply_to_function(jks(params["sigma"]), image, order)
        if params.get("c") is not None:
            image = apply_to_function(bernardi(params["c"]), image, order)
        if hyp == NONDEG_CONV:
            image = z_times_derivative(image)
        r, mask, reliable = _ratio(image, pts)
        field = np.abs(r - lam) - DEGENERACY_FLOOR
    else:
        raise InvalidParameter(f"unknown hypothesis id {hyp!r}")

    value, witness = _masked_min(field, mask, pts)
    if mask.any():
        reliable = False
        witness = _first_masked(pts, mask)
    return GridMin(value, witness, reliable)


def with_lift(spec: ClassSpec, lift: Optional[OperatorSpec]) -> ClassSpec:
    return replace(spec, lift=lift)
