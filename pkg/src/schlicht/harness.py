"""Inclusion-law catalog and generate-check-refine experiments.

Each catalog entry binds a hypothesis class (members are generated), side
conditions (grid minima of the catalogued expressions), and a conclusion
class.  A sample is *confirmed* when every hypothesis margin is strictly
positive and the conclusion certifies; *vacuous* when a hypothesis margin
sits at or below the floor; *inconclusive* when an evaluation was flagged
unreliable or a margin is too close to zero to call; and
*counterexample_flagged* only after a negative conclusion margin survives
every refinement level with all hypothesis margins still strictly positive.
A surviving flag is treated as an implementation-bug signal, not as a
refutation: the inclusions are proved, so reports carry full reproduction
data for any flag.

Determinism: one seed fixes every pool and every report byte-for-byte.
Member pools are keyed by (class, count, seed, grid, order) so experiments
that share a hypothesis class share the same pool.
"""

from __future__ import annotations

import json
import math
import os
import zlib
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from typing import Callable, Iterator, Optional

import numpy as np

from . import functions as _fn
from . import series as _series
from .classify import (ARG_CMP, CLOSE_TO_CONVEX, CONVEX, COMPANION_RE_DIFF,
                       CTC_DRIVE, DEFAULT_GRID, INCONCLUSIVE, MARGIN_FLOOR,
                       MEMBER, NON_MEMBER, NONDEG_CONV, NONDEG_STAR, QC_DRIVE,
                       QUASI_CONVEX, RE_DIFF, STARLIKE, STRONGLY_CONVEX,
                       STRONGLY_STARLIKE, ClassSpec, DiskGrid, Verdict, certify,
                       hypothesis_margin)
from .errors import ConfigError, GenerationExhausted
from .functions import AnalyticFunction, SeriesFunction
from .operators import (DEFAULT_OPERATOR_ORDER, OperatorSpec,
                        apply_to_function, bernardi, inverse_multiplier, jks)

SCHEMA_VERSION = 1

#: Default parameter sweep (filtered per entry domain): desk-scale minutes.
DEFAULT_LAMBDAS = (0.0, 0.25, 0.5)
DEFAULT_BETAS = (0.0, 0.25)
DEFAULT_ETAS = (0.5, 1.0)
DEFAULT_CS = (-0.25, 0.0, 1.0, 2.0)
DEFAULT_SIGMAS = (0.5, 1.0, 2.0)

#: Order of the polynomial samples drawn from the smooth perturbation family.
PERTURBED_ORDER = 24

#: Degree cap for generated polynomial samples (they are exact, so the cap
#: trades nothing but how closely the extremal family is tracked).
POOL_ORDER = 256

#: Pool acceptance demands a margin comfortably above the decision floor.
GENERATION_MARGIN = 10.0 * MARGIN_FLOOR

CONFIRMED = "confirmed"
VACUOUS = "vacuous"
FLAGGED = "counterexample_flagged"


def _threads() -> int:
    try:
        return max(1, int(os.environ.get("SCHLICHT_THREADS", "1")))
    except ValueError:
        return 1


def _stable_seed(*parts) -> np.random.SeedSequence:
    """Cross-process-stable seed material (Python's hash() is salted)."""
    entropy = [zlib.crc32(repr(p).encode()) for p in parts]
    return np.random.SeedSequence(entropy)


# --------------------------------------------------------------------------
# Catalog
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class CatalogEntry:
    theorem_id: str
    description: str
    uses: tuple[str, ...]
    hypothesis_spec: Callable[[dict], ClassSpec]
    conclusion_spec: Callable[[dict], ClassSpec]
    side_conditions: tuple = ()
    companion_spec: Optional[Callable[[dict], ClassSpec]] = None
    conclusion_companion_spec: Optional[Callable[[dict], ClassSpec]] = None
    domain: Callable[[dict], bool] = lambda p: True
    jks_image_conclusion: bool = False


def _sl(p, lift=None):
    return ClassSpec(STARLIKE, lam=p["lam"], lift=lift)


def _cv(p, lift=None):
    return ClassSpec(CONVEX, lam=p["lam"], lift=lift)


def _ss(p, lift=None):
    return ClassSpec(STRONGLY_STARLIKE, lam=p["lam"], eta=p["eta"], lift=lift)


def _sc(p, lift=None):
    return ClassSpec(STRONGLY_CONVEX, lam=p["lam"], eta=p["eta"], lift=lift)


def _k(p, lift=None):
    return ClassSpec(CLOSE_TO_CONVEX, lam=p["lam"], beta=p["beta"], lift=lift)


def _kq(p, lift=None):
    return ClassSpec(QUASI_CONVEX, lam=p["lam"], beta=p["beta"], lift=lift)


def _build_catalog() -> dict[str, CatalogEntry]:
    entries = [
        CatalogEntry(
            "T2_1_i",
            "c-lifted starlike class sits in the (c+1)-lifted one when the "
            "ratio difference Re(zf'/f - zF'/F) stays positive (F the c-image)",
            ("lam", "c"),
            lambda p: _sl(p, bernardi(p["c"])),
            lambda p: _sl(p, bernardi(p["c"] + 1)),
            ((RE_DIFF, RE_DIFF, lambda p: {"c": p["c"]}),),
        ),
        CatalogEntry(
            "T2_1_ii",
            "reverse inclusion of the lifted starlike classes under the "
            "ratio-difference drive against the (c+1)-image",
            ("lam", "c"),
            lambda p: _sl(p, bernardi(p["c"] + 1)),
            lambda p: _sl(p, bernardi(p["c"])),
            ((RE_DIFF, RE_DIFF, lambda p: {"c": p["c"] + 1}),),
        ),
        CatalogEntry(
            "T2_2_i",
            "c-lifted convex class sits in the (c+1)-lifted one under the "
            "same ratio-difference drive",
            ("lam", "c"),
            lambda p: _cv(p, bernardi(p["c"])),
            lambda p: _cv(p, bernardi(p["c"] + 1)),
            ((RE_DIFF, RE_DIFF, lambda p: {"c": p["c"]}),),
        ),
        CatalogEntry(
            "T2_2_ii",
            "reverse inclusion of the lifted convex classes",
            ("lam", "c"),
            lambda p: _cv(p, bernardi(p["c"] + 1)),
            lambda p: _cv(p, bernardi(p["c"])),
            ((RE_DIFF, RE_DIFF, lambda p: {"c": p["c"] + 1}),),
        ),
        CatalogEntry(
            "T2_3",
            "starlike functions land in the c-lifted starlike class for "
            "c >= -lambda",
            ("lam", "c"),
            lambda p: _sl(p),
            lambda p: _sl(p, bernardi(p["c"])),
            domain=lambda p: p["c"] >= -p["lam"],
        ),
        CatalogEntry(
            "C2_4",
            "convex functions land in the c-lifted convex class for "
            "c >= lambda",
            ("lam", "c"),
            lambda p: _cv(p),
            lambda p: _cv(p, bernardi(p["c"])),
            domain=lambda p: p["c"] >= p["lam"],
        ),
        CatalogEntry(
            "C2_4_wide",
            "convex-to-lifted-convex inclusion probed on the wider domain "
            "c >= -lambda (separate labeled experiment)",
            ("lam", "c"),
            lambda p: _cv(p),
            lambda p: _cv(p, bernardi(p["c"])),
            domain=lambda p: p["c"] >= -p["lam"],
        ),
        CatalogEntry(
            "T2_5_i",
            "c-lifted strongly-starlike class sits in the (c+1)-lifted one "
            "under the argument-comparison drive",
            ("lam", "eta", "c"),
            lambda p: _ss(p, bernardi(p["c"])),
            lambda p: _ss(p, bernardi(p["c"] + 1)),
            ((ARG_CMP, ARG_CMP, lambda p: {"c": p["c"], "lam": p["lam"]}),),
        ),
        CatalogEntry(
            "T2_5_ii",
            "reverse inclusion of the lifted strongly-starlike classes",
            ("lam", "eta", "c"),
            lambda p: _ss(p, bernardi(p["c"] + 1)),
            lambda p: _ss(p, bernardi(p["c"])),
            ((ARG_CMP, ARG_CMP,
              lambda p: {"c": p["c"] + 1, "lam": p["lam"]}),),
        ),
        CatalogEntry(
            "C2_6_i",
            "c-lifted strongly-convex class sits in the (c+1)-lifted one "
            "under the argument-comparison drive",
            ("lam", "eta", "c"),
            lambda p: _sc(p, bernardi(p["c"])),
            lambda p: _sc(p, bernardi(p["c"] + 1)),
            ((ARG_CMP, ARG_CMP, lambda p: {"c": p["c"], "lam": p["lam"]}),),
        ),
        CatalogEntry(
            "C2_6_ii",
            "reverse inclusion of the lifted strongly-convex classes",
            ("lam", "eta", "c"),
            lambda p: _sc(p, bernardi(p["c"] + 1)),
            lambda p: _sc(p, bernardi(p["c"])),
            ((ARG_CMP, ARG_CMP,
              lambda p: {"c": p["c"] + 1, "lam": p["lam"]}),),
        ),
        CatalogEntry(
            "T2_7",
            "the c-lifted strongly-convex class sits inside the c-lifted "
            "strongly-starlike class for every admissible c",
            ("lam", "eta", "c"),
            lambda p: _sc(p, bernardi(p["c"])),
            lambda p: _ss(p, bernardi(p["c"])),
        ),
        CatalogEntry(
            "T2_8_i",
            "c-lifted close-to-convex class sits in the (c+1)-lifted one "
            "under the transport drive and the companion ratio-difference",
            ("lam", "beta", "c"),
            lambda p: _k(p, bernardi(p["c"])),
            lambda p: _k(p, bernardi(p["c"] + 1)),
            (
                (CTC_DRIVE, CTC_DRIVE,
                 lambda p: {"op_c": p["c"], "den_c": p["c"]}),
                (COMPANION_RE_DIFF, COMPANION_RE_DIFF,
                 lambda p: {"c": p["c"]}),
            ),
            companion_spec=lambda p: _sl(p, bernardi(p["c"])),
            conclusion_companion_spec=lambda p: _sl(p, bernardi(p["c"] + 1)),
        ),
        CatalogEntry(
            "T2_8_ii",
            "reverse inclusion of the lifted close-to-convex classes; the "
            "companion class is the plain starlike one as stated",
            ("lam", "beta", "c"),
            lambda p: _k(p, bernardi(p["c"] + 1)),
            lambda p: _k(p, bernardi(p["c"])),
            (
                # Denominator constant stays + c, exactly as stated.
                (CTC_DRIVE, CTC_DRIVE,
                 lambda p: {"op_c": p["c"] + 1, "den_c": p["c"]}),
                (COMPANION_RE_DIFF, COMPANION_RE_DIFF,
                 lambda p: {"c": p["c"] + 1}),
            ),
            companion_spec=lambda p: _sl(p),
            conclusion_companion_spec=lambda p: _sl(p, bernardi(p["c"])),
        ),
        CatalogEntry(
            "T2_9_i",
            "c-lifted quasi-convex class sits in the (c+1)-lifted one under "
            "the derivative transport drive and the companion drive",
            ("lam", "beta", "c"),
            lambda p: _kq(p, bernardi(p["c"])),
            lambda p: _kq(p, bernardi(p["c"] + 1)),
            (
                (QC_DRIVE, QC_DRIVE,
                 lambda p: {"op_c": p["c"], "den_c": p["c"] + 1}),
                (COMPANION_RE_DIFF, COMPANION_RE_DIFF,
                 lambda p: {"c": p["c"]}),
            ),
            companion_spec=lambda p: _cv(p, bernardi(p["c"])),
            conclusion_companion_spec=lambda p: _cv(p, bernardi(p["c"] + 1)),
        ),
        CatalogEntry(
            "T2_9_ii",
            "reverse inclusion of the lifted quasi-convex classes",
            ("lam", "beta", "c"),
            lambda p: _kq(p, bernardi(p["c"] + 1)),
            lambda p: _kq(p, bernardi(p["c"])),
            (
                (QC_DRIVE, QC_DRIVE,
                 lambda p: {"op_c": p["c"] + 1, "den_c": p["c"] + 1}),
                (COMPANION_RE_DIFF, COMPANION_RE_DIFF,
                 lambda p: {"c": p["c"] + 1}),
            ),
            companion_spec=lambda p: _cv(p, bernardi(p["c"] + 1)),
            conclusion_companion_spec=lambda p: _cv(p, bernardi(p["c"])),
        ),
        CatalogEntry(
            "T2_10",
            "sigma-lifted starlike membership pushes the sigma-image into "
            "the c-lifted starlike class for -lambda <= c <= 1-2*lambda",
            ("lam", "sigma", "c"),
            lambda p: _sl(p, jks(p["sigma"])),
            lambda p: _sl(p, bernardi(p["c"])),
            domain=lambda p: -p["lam"] <= p["c"] <= 1.0 - 2.0 * p["lam"],
            jks_image_conclusion=True,
        ),
        CatalogEntry(
            "C2_11",
            "sigma-lifted convex membership pushes the sigma-image into the "
            "c-lifted convex class for -lambda < c < 1-2*lambda",
            ("lam", "sigma", "c"),
            lambda p: _cv(p, jks(p["sigma"])),
            lambda p: _cv(p, bernardi(p["c"])),
            domain=lambda p: -p["lam"] < p["c"] < 1.0 - 2.0 * p["lam"],
            jks_image_conclusion=True,
        ),
        CatalogEntry(
            "T2_12",
            "sigma-lifted strongly-starlike membership plus the composite "
            "nondegeneracy gap pushes the sigma-image into the c-lifted "
            "strongly-starlike class for c >= -lambda",
            ("lam", "eta", "sigma", "c"),
            lambda p: _ss(p, jks(p["sigma"])),
            lambda p: _ss(p, bernardi(p["c"])),
            ((NONDEG_STAR, NONDEG_STAR,
              lambda p: {"c": p["c"], "sigma": p["sigma"], "lam": p["lam"]}),),
            domain=lambda p: p["c"] >= -p["lam"],
            jks_image_conclusion=True,
        ),
        CatalogEntry(
            "C2_13",
            "sigma-lifted strongly-convex membership plus the composite "
            "derivative nondegeneracy gap pushes the sigma-image into the "
            "c-lifted strongly-convex class for c >= lambda",
            ("lam", "eta", "sigma", "c"),
            lambda p: _sc(p, jks(p["sigma"])),
            lambda p: _sc(p, bernardi(p["c"])),
            ((NONDEG_CONV, NONDEG_CONV,
              lambda p: {"c": p["c"], "sigma": p["sigma"], "lam": p["lam"]}),),
            domain=lambda p: p["c"] >= p["lam"],
            jks_image_conclusion=True,
        ),
    ]
    return {e.theorem_id: e for e in entries}


CATALOG = _build_catalog()
THEOREM_IDS = tuple(CATALOG)

#: Paired entries whose hypothesis/conclusion classes must swap exactly.
DUAL_PAIRS = (("T2_1_i", "T2_1_ii"), ("T2_2_i", "T2_2_ii"),
              ("T2_5_i", "T2_5_ii"), ("C2_6_i", "C2_6_ii"),
              ("T2_8_i", "T2_8_ii"), ("T2_9_i", "T2_9_ii"))


def validate_catalog() -> None:
    """Structural check: dual pairs test each conclusion against its matching
    hypothesis set (never a conclusion without the swapped hypothesis class).
    """
    probe = {"lam": 0.25, "beta": 0.0, "eta": 0.5, "c": 1.0, "sigma": 1.0}
    for a, b in DUAL_PAIRS:
        ea, eb = CATALOG[a], CATALOG[b]
        if ea.conclusion_spec(probe) != eb.hypothesis_spec(probe):
            raise ConfigError(f"catalog pair {a}/{b}: conclusion/hypothesis mismatch")
        if eb.conclusion_spec(probe) != ea.hypothesis_spec(probe):
            raise ConfigError(f"catalog pair {a}/{b}: reverse mismatch")
        if len(ea.side_conditions) != len(eb.side_conditions):
            raise ConfigError(f"catalog pair {a}/{b}: side-condition arity differs")


validate_catalog()


# --------------------------------------------------------------------------
# Member generation
# --------------------------------------------------------------------------


def _poly_from(fn: AnalyticFunction, order: int, label: str) -> SeriesFunction:
    """Freeze a candidate as the exact polynomial sample it will be tested as."""
    return SeriesFunction(fn.to_series(order), exact=True, label=label)


def _base_starlike_candidates(lam: float, eta: Optional[float], rng,
                              order: int) -> Iterator[AnalyticFunction]:
    """identity, then alternating extremal-family and perturbed polynomials."""
    yield _fn.identity()
    s_eta = 1.0 if eta is None else float(np.sin(0.5 * np.pi * eta))
    harmonic = float(np.sum(1.0 / np.arange(2, PERTURBED_ORDER + 1)))
    while True:
        if rng.random() < 0.5:
            u = rng.random()
            lam_prime = 1.0 - (1.0 - lam) * max(u ** 1.5 * s_eta, 1e-3)
            x = np.exp(2j * np.pi * rng.random())
            k = _fn.koebe(lam_prime, x)
            yield _poly_from(
                k, order,
                f"poly[koebe(lambda={lam_prime!r},x={complex(x)!r}),order={order}]",
            )
        else:
            amplitude = 0.45 * (1.0 - lam) * s_eta * rng.random() / harmonic
            seed = int(rng.integers(0, 2**63))
            yield _fn.generate_perturbed(seed, PERTURBED_ORDER, amplitude)


def _unlift(fn: AnalyticFunction, lift: Optional[OperatorSpec],
            order: int) -> AnalyticFunction:
    """Preimage under the lift's diagonal multiplier (exact)."""
    if lift is None or isinstance(fn, _fn.IdentityFunction):
        return fn
    series = inverse_multiplier(lift, fn.to_series(max(order, _degree(fn))))
    return SeriesFunction(series, exact=fn.series_is_exact,
                          label=f"unlift[{lift.label}]({fn.label})")


def _degree(fn: AnalyticFunction) -> int:
    if isinstance(fn, SeriesFunction):
        return fn.series.truncation_order
    return 1


def _drive_polynomial(beta: float, rng, terms: int = 8) -> _series.CoefficientSeries:
    """P = beta + (1-beta) q with q(0) = 1 and sum |q_k| < 1, so Re P > beta."""
    mass = 0.8 * rng.random()
    weights = rng.random(terms)
    weights = mass * weights / max(float(np.sum(weights)), 1e-300)
    coeffs = np.zeros(terms + 1, dtype=np.complex128)
    coeffs[0] = 1.0
    for k in range(1, terms + 1):
        coeffs[k] = weights[k - 1] * np.exp(2j * np.pi * rng.random())
    q = _series.CoefficientSeries(coeffs)
    return _series.add(_series.constant_series(beta, terms),
                       _series.scale(1.0 - beta, q))


def _pair_candidates(spec: ClassSpec, companion_spec: ClassSpec, rng,
                     order: int, grid: DiskGrid) -> Iterator[AnalyticFunction]:
    """(f, companion) candidates for the close-to-convex-family classes.

    Built at the starlike level: with G the lifted companion image, the
    witness ratio of the constructed F against G is a polynomial with real
    part above beta by design; quasi-convex pairs divide coefficients by n.
    """
    quasi = spec.kind == QUASI_CONVEX
    star_companion_spec = replace(
        companion_spec,
        kind=STARLIKE if companion_spec.kind == CONVEX else companion_spec.kind,
    )
    companions = _class_candidates(star_companion_spec, rng, order, grid)
    first = True
    for g_star in companions:
        if first:
            first = False
            ident = _fn.identity()
            ident.companion = _fn.identity()
            yield ident
            continue
        g_image = (apply_to_function(spec.lift, g_star, order)
                   if spec.lift else g_star)
        p = _drive_polynomial(spec.beta, rng)
        prod = _series.cauchy_product(g_image.to_series(order), p.padded(order))
        n = np.arange(order + 1, dtype=np.float64)
        lf = np.zeros(order + 1, dtype=np.complex128)
        lf[1:] = prod.coeffs[1:] / n[1:]
        f_image = _series.CoefficientSeries(lf)
        f_series = (inverse_multiplier(spec.lift, f_image)
                    if spec.lift else f_image)
        f_star = SeriesFunction(f_series, exact=True,
                                label=f"pair[{g_star.label}]")
        if quasi:
            f = _fn.inverse_z_derivative(f_star, order)
            g = _fn.inverse_z_derivative(g_star, order)
        else:
            f, g = f_star, g_star
        f.companion = g
        yield f


def _class_candidates(spec: ClassSpec, rng, order: int,
                      grid: DiskGrid) -> Iterator[AnalyticFunction]:
    if spec.needs_companion:
        raise ConfigError("companion classes need an explicit companion_spec")
    if spec.kind in (CONVEX, STRONGLY_CONVEX):
        star_kind = STARLIKE if spec.kind == CONVEX else STRONGLY_STARLIKE
        base = _class_candidates(replace(spec, kind=star_kind), rng, order, grid)
        for cand in base:
            yield (_fn.inverse_z_derivative(cand, max(order, _degree(cand)))
                   if not isinstance(cand, _fn.IdentityFunction) else cand)
        return
    eta = spec.eta
    for cand in _base_starlike_candidates(spec.lam, eta, rng, order):
        yield _unlift(cand, spec.lift, order)


def generate_members(spec: ClassSpec, count: int, seed: int,
                     grid: DiskGrid = DEFAULT_GRID,
                     order: int = DEFAULT_OPERATOR_ORDER,
                     companion_spec: Optional[ClassSpec] = None,
                     ) -> list[AnalyticFunction]:
    """Accept-reject generation of certified class members.

    Candidates come from the extremal family (with randomized order
    parameter and rotation) and the decaying-perturbation family, mapped
    through the exact inverse coefficient maps for the lifted and
    convex-family classes; each accepted member certified with margin
    above GENERATION_MARGIN (companions included, attached as
    ``fn.companion``).  Deterministic under the seed; raises
    GenerationExhausted after 1000 * count rejections.
    """
    if count < 1:
        raise ConfigError("count must be >= 1")
    rng = np.random.default_rng(_stable_seed("members", seed, spec.label,
                                             None if companion_spec is None
                                             else companion_spec.label))
    cand_order = min(order, POOL_ORDER)
    if spec.needs_companion:
        if companion_spec is None:
            companion_spec = ClassSpec(spec.companion_kind, lam=spec.lam,
                                       lift=spec.lift)
        stream = _pair_candidates(spec, companion_spec, rng, cand_order, grid)
    else:
        stream = _class_candidates(spec, rng, cand_order, grid)

    members: list[AnalyticFunction] = []
    rejections = 0
    budget = 1000 * count
    for candidate in stream:
        companion = candidate.companion
        verdict = certify(candidate, spec, grid, companion=companion,
                          order=order)
        ok = (verdict.status == MEMBER and verdict.nondegeneracy_ok
              and verdict.margin > GENERATION_MARGIN)
        comp_verdict = None
        if ok and companion is not None:
            comp_verdict = certify(companion, companion_spec, grid, order=order)
            ok = (comp_verdict.status == MEMBER and comp_verdict.nondegeneracy_ok
                  and comp_verdict.margin > GENERATION_MARGIN)
        if ok:
            candidate._pool_verdict = verdict
            if companion is not None:
                companion._pool_verdict = comp_verdict
            members.append(candidate)
            if len(members) == count:
                return members
        else:
            rejections += 1
            if rejections >= budget:
                raise GenerationExhausted(
                    f"{spec.label}: {rejections} rejections before "
                    f"{count} members were found"
                )
    raise GenerationExhausted("candidate stream ended unexpectedly")


# --------------------------------------------------------------------------
# Experiments
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    theorem: str
    sample_count: int = 50
    seed: int = 7
    grid: DiskGrid = DEFAULT_GRID
    refinement_levels: int = 2
    order: int = DEFAULT_OPERATOR_ORDER
    lambda_values: tuple[float, ...] = DEFAULT_LAMBDAS
    beta_values: tuple[float, ...] = DEFAULT_BETAS
    eta_values: tuple[float, ...] = DEFAULT_ETAS
    c_values: tuple[float, ...] = DEFAULT_CS
    sigma_values: tuple[float, ...] = DEFAULT_SIGMAS

    def __post_init__(self):
        if self.theorem not in CATALOG:
            raise ConfigError(f"unknown experiment id {self.theorem!r}")
        if self.sample_count < 1:
            raise ConfigError("sample_count must be >= 1")
        if any(c <= -1.0 for c in self.c_values):
            raise ConfigError("operator parameter c must exceed -1")

    def points(self) -> list[dict]:
        entry = CATALOG[self.theorem]
        axes = {
            "lam": self.lambda_values,
            "beta": self.beta_values,
            "eta": self.eta_values,
            "c": self.c_values,
            "sigma": self.sigma_values,
        }
        used = [u for u in ("lam", "beta", "eta", "c", "sigma")
                if u in entry.uses]
        points: list[dict] = [{}]
        for axis in used:
            points = [dict(p, **{axis: float(v)})
                      for p in points for v in axes[axis]]
        valid = [p for p in points if entry.domain(p)]
        if not valid:
            raise ConfigError(
                f"{self.theorem}: no parameter point satisfies the domain"
            )
        return valid

    def to_json_dict(self) -> dict:
        return {
            "theorem": self.theorem,
            "sample_count": self.sample_count,
            "seed": self.seed,
            "grid": self.grid.to_json_dict(),
            "refinement_levels": self.refinement_levels,
            "order": self.order,
            "lambda_values": list(self.lambda_values),
            "beta_values": list(self.beta_values),
            "eta_values": list(self.eta_values),
            "c_values": list(self.c_values),
            "sigma_values": list(self.sigma_values),
        }


class _RunContext:
    """Per-run caches: member pools and margin memos shared across theorems."""

    def __init__(self):
        self.pools: dict[tuple, list[AnalyticFunction]] = {}
        self.margins: dict[tuple, object] = {}

    def pool(self, spec: ClassSpec, companion_spec: Optional[ClassSpec],
             count: int, seed: int, grid: DiskGrid, order: int):
        key = (spec.label,
               None if companion_spec is None else companion_spec.label,
               count, seed, grid.key, order)
        if key not in self.pools:
            members = generate_members(
                spec, count, seed, grid, order=order,
                companion_spec=companion_spec,
            )
            # The acceptance verdicts double as the membership-hypothesis
            # certifications, so pre-seed the margin memo with them.
            for fn in members:
                comp = fn.companion
                self.margins[("certify", id(fn), spec.label, grid.key, order,
                              None if comp is None else id(comp))] = \
                    fn._pool_verdict
                if comp is not None and companion_spec is not None:
                    self.margins[("certify", id(comp), companion_spec.label,
                                  grid.key, order, None)] = comp._pool_verdict
            self.pools[key] = members
        return self.pools[key]

    def memo(self, key, compute):
        if key not in self.margins:
            self.margins[key] = compute()
        return self.margins[key]


def _verdict_dict(v: Verdict) -> dict:
    out = v.to_json_dict()
    del out["grid"]  # the report carries the grid once per evaluation level
    return out


def _certify_cached(ctx: _RunContext, fn: AnalyticFunction, spec: ClassSpec,
                    grid: DiskGrid, order: int,
                    companion: Optional[AnalyticFunction] = None) -> Verdict:
    key = ("certify", id(fn), spec.label, grid.key, order,
           None if companion is None else id(companion))
    return ctx.memo(key, lambda: certify(fn, spec, grid, companion=companion,
                                         order=order))


def _hyp_cached(ctx: _RunContext, fn: AnalyticFunction, hyp: str, params: dict,
                grid: DiskGrid, order: int,
                companion: Optional[AnalyticFunction]):
    key = ("hyp", id(fn), hyp, tuple(sorted(params.items())), grid.key, order,
           None if companion is None else id(companion))
    return ctx.memo(key, lambda: hypothesis_margin(
        fn, hyp, params, grid, companion=companion, order=order))


def _membership_nondeg(hyp_spec: ClassSpec, params: dict):
    """The lifted strongly classes carry their own "!= lam" gap hypothesis."""
    if hyp_spec.lift is None or hyp_spec.kind not in (STRONGLY_STARLIKE,
                                                      STRONGLY_CONVEX):
        return None
    hyp_id = NONDEG_STAR if hyp_spec.kind == STRONGLY_STARLIKE else NONDEG_CONV
    key = "c" if hyp_spec.lift.kind == "bernardi" else "sigma"
    return hyp_id, {key: hyp_spec.lift.value, "lam": params["lam"]}


def _evaluate_sample(entry: CatalogEntry, params: dict, fn: AnalyticFunction,
                     grid: DiskGrid, order: int, ctx: _RunContext):
    """All hypothesis margins plus the conclusion verdict at one grid level."""
    companion = fn.companion
    hyps: dict[str, dict] = {}

    hyp_spec = entry.hypothesis_spec(params)
    member_verdict = _certify_cached(ctx, fn, hyp_spec, grid, order,
                                     companion=companion)
    hyps["membership"] = {
        "margin": member_verdict.margin,
        "reliable": member_verdict.reliable,
    }
    nondeg = _membership_nondeg(hyp_spec, params)
    if nondeg is not None:
        gm = _hyp_cached(ctx, fn, nondeg[0], nondeg[1], grid, order, None)
        hyps["membership_nondeg"] = {"margin": gm.value, "reliable": gm.reliable}
    if entry.companion_spec is not None:
        comp_verdict = _certify_cached(
            ctx, companion, entry.companion_spec(params), grid, order)
        hyps["companion_membership"] = {
            "margin": comp_verdict.margin,
            "reliable": comp_verdict.reliable and comp_verdict.nondegeneracy_ok,
        }
    for name, hyp_id, params_fn in entry.side_conditions:
        gm = _hyp_cached(ctx, fn, hyp_id, params_fn(params), grid, order,
                         companion)
        hyps[name] = {"margin": gm.value, "reliable": gm.reliable}

    subject = fn
    if entry.jks_image_conclusion:
        subject = ctx.memo(
            ("jks_image", id(fn), params["sigma"], order),
            lambda: apply_to_function(jks(params["sigma"]), fn, order),
        )
    conclusion = _certify_cached(ctx, subject, entry.conclusion_spec(params),
                                 grid, order, companion=companion)
    conclusion_parts = {"main": _verdict_dict(conclusion)}
    combined_status = conclusion.status
    combined_margin = conclusion.margin
    if not conclusion.nondegeneracy_ok and combined_status == MEMBER:
        combined_status = INCONCLUSIVE
    if entry.conclusion_companion_spec is not None:
        comp_concl = _certify_cached(
            ctx, companion, entry.conclusion_companion_spec(params),
            grid, order)
        conclusion_parts["companion"] = _verdict_dict(comp_concl)
        combined_margin = min(combined_margin, comp_concl.margin)
        if comp_concl.status != MEMBER and combined_status == MEMBER:
            combined_status = comp_concl.status
        if not comp_concl.reliable:
            combined_status = INCONCLUSIVE
    return hyps, conclusion_parts, combined_status, combined_margin


def _hypotheses_hit(hyps: dict) -> bool:
    return all(h["reliable"] and not math.isnan(h["margin"])
               and h["margin"] > MARGIN_FLOOR for h in hyps.values())


def _classify_level(hyps: dict, status: str, margin: float):
    """Bucket one evaluation level: vacuous / inconclusive / confirmed / negative."""
    if any(not h["reliable"] or math.isnan(h["margin"]) for h in hyps.values()):
        return INCONCLUSIVE
    if any(h["margin"] <= MARGIN_FLOOR for h in hyps.values()):
        return VACUOUS
    if status == MEMBER:
        return CONFIRMED
    if status == NON_MEMBER and margin < -MARGIN_FLOOR:
        return "negative"
    return INCONCLUSIVE


def _run_sample(entry: CatalogEntry, params: dict, index: int,
                fn: AnalyticFunction, cfg: ExperimentConfig,
                ctx: _RunContext) -> dict:
    grid, order = cfg.grid, cfg.order
    hyps, parts, status, margin = _evaluate_sample(entry, params, fn, grid,
                                                   order, ctx)
    outcome = _classify_level(hyps, status, margin)
    hit = _hypotheses_hit(hyps)
    record = {
        "index": index,
        "label": fn.label,
        "hypotheses": hyps,
        "conclusion": parts,
        "refinements": [],
    }
    level = 0
    while outcome == "negative":
        if level >= cfg.refinement_levels:
            outcome = FLAGGED
            break
        level += 1
        grid = grid.refined()
        order = order * 2
        hyps, parts, status, margin = _evaluate_sample(entry, params, fn,
                                                       grid, order, ctx)
        refined_outcome = _classify_level(hyps, status, margin)
        record["refinements"].append({
            "level": level,
            "grid": grid.to_json_dict(),
            "order": order,
            "hypotheses": hyps,
            "conclusion": parts,
        })
        if refined_outcome == "negative":
            continue
        # A flag is cleared only by the hypothesis side weakening; a
        # conclusion margin that rose above the floor leaves the sample
        # inconclusive, never confirmed.
        outcome = refined_outcome if refined_outcome == VACUOUS else INCONCLUSIVE
    record["classification"] = outcome
    record["hypothesis_hit"] = hit
    return record


def refine(fn: AnalyticFunction, spec: ClassSpec, level: int,
           grid: DiskGrid = DEFAULT_GRID,
           order: int = DEFAULT_OPERATOR_ORDER,
           companion: Optional[AnalyticFunction] = None) -> Verdict:
    """Re-certify with the level-times refined grid and doubled series order.

    Each level doubles the angle count, inserts the circle at 0.99 * the
    previous maximum radius (a grid superset, so margins cannot rise), and
    doubles the operator-image truncation order.
    """
    if level < 0:
        raise ConfigError("refinement level must be >= 0")
    refined_grid, refined_order = grid, order
    for _ in range(level):
        refined_grid = refined_grid.refined()
        refined_order *= 2
    return certify(fn, spec, refined_grid, companion=companion,
                   order=refined_order)


def run_theorem(cfg: ExperimentConfig, ctx: Optional[_RunContext] = None) -> dict:
    """Run one catalog experiment; returns the report as a JSON-ready dict."""
    entry = CATALOG[cfg.theorem]
    context = ctx if ctx is not None else _RunContext()
    points = cfg.points()
    point_reports = []
    totals = {CONFIRMED: 0, VACUOUS: 0, INCONCLUSIVE: 0, FLAGGED: 0}
    for params in points:
        companion_spec = (entry.companion_spec(params)
                          if entry.companion_spec is not None else None)
        pool = context.pool(entry.hypothesis_spec(params), companion_spec,
                            cfg.sample_count, cfg.seed, cfg.grid, cfg.order)
        workers = _threads()
        if workers > 1:
            with ThreadPoolExecutor(max_workers=workers) as pool_exec:
                records = list(pool_exec.map(
                    lambda iv: _run_sample(entry, params, iv[0], iv[1], cfg,
                                           context),
                    enumerate(pool),
                ))
        else:
            records = [_run_sample(entry, params, i, fn, cfg, context)
                       for i, fn in enumerate(pool)]
        counts = {CONFIRMED: 0, VACUOUS: 0, INCONCLUSIVE: 0, FLAGGED: 0}
        hits = 0
        for rec in records:
            counts[rec["classification"]] += 1
            hits += 1 if rec["hypothesis_hit"] else 0
        for key in totals:
            totals[key] += counts[key]
        point_reports.append({
            "params": {k: params[k] for k in sorted(params)},
            "counts": counts,
            "hypothesis_hit_rate": hits / len(records),
            "samples": records,
        })
    return {
        "schema": SCHEMA_VERSION,
        "theorem": cfg.theorem,
        "description": entry.description,
        "config": cfg.to_json_dict(),
        "points": point_reports,
        "totals": totals,
    }


def run_catalog(sample_count: int = 50, seed: int = 7,
                grid: DiskGrid = DEFAULT_GRID, refinement_levels: int = 2,
                order: int = DEFAULT_OPERATOR_ORDER) -> dict:
    """Run every catalog entry with a shared cache; reports in catalog order."""
    ctx = _RunContext()
    reports = []
    for theorem_id in THEOREM_IDS:
        cfg = ExperimentConfig(
            theorem=theorem_id, sample_count=sample_count, seed=seed,
            grid=grid, refinement_levels=refinement_levels, order=order,
        )
        reports.append(run_theorem(cfg, ctx))
    return {"schema": SCHEMA_VERSION, "reports": reports}


def _jsonify(obj):
    """Coerce numpy scalars and complex values for deterministic JSON dumps."""
    if isinstance(obj, dict):
        return {k: _jsonify(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonify(v) for v in obj]
    if isinstance(obj, (np.floating, np.integer)):
        return obj.item()
    if isinstance(obj, complex):
        return [obj.real, obj.imag]
    if isinstance(obj, float) and obj != obj:
        return "nan"
    return obj


def report_to_json(report: dict) -> str:
    return json.dumps(_jsonify(report), sort_keys=True, indent=2) + "\n"
