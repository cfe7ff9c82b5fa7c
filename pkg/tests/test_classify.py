"""Certification margins against closed-form and brute-force oracles."""

import math

import numpy as np
import pytest

from schlicht.classify import (ClassSpec, DEFAULT_GRID, DiskGrid, MARGIN_FLOOR,
                               certify, certify_lifted_pair, class_from_spec,
                               hypothesis_margin)
from schlicht.errors import InvalidParameter, MissingCompanion
from schlicht.functions import (from_series, generate_perturbed, half_plane,
                                identity, koebe, z_times_derivative)
from schlicht.operators import bernardi, inverse_multiplier
from schlicht.series import CoefficientSeries


class TestSpecs:
    def test_parameter_domains(self):
        with pytest.raises(InvalidParameter):
            ClassSpec("starlike", lam=1.0)
        with pytest.raises(InvalidParameter):
            ClassSpec("close_to_convex", lam=0.0)  # beta required
        with pytest.raises(InvalidParameter):
            ClassSpec("strongly_starlike", lam=0.0, eta=0.0)
        with pytest.raises(InvalidParameter):
            ClassSpec("starlike", lam=0.0, eta=0.5)

    def test_parsing(self):
        spec = class_from_spec("starlike:lambda=0.5")
        assert spec.kind == "starlike" and spec.lam == 0.5
        spec = class_from_spec("strongly_convex:eta=0.5,lambda=0.25",
                               lift="bernardi:c=1")
        assert spec.eta == 0.5 and spec.lift.value == 1.0

    def test_grid_validation(self):
        with pytest.raises(InvalidParameter):
            DiskGrid((0.5, 0.3), 64)  # not ascending
        with pytest.raises(InvalidParameter):
            DiskGrid((0.5,), 4)  # too few angles
        with pytest.raises(InvalidParameter):
            DiskGrid((1.0,), 64)  # outside the allowed band


class TestBaseClassOracles:
    def test_identity_starlike_margin(self):
        verdict = certify(identity(), ClassSpec("starlike", lam=0.5))
        assert verdict.status == "member"
        assert verdict.margin == pytest.approx(0.5, abs=1e-12)

    def test_koebe_starlike_outermost_radius(self):
        """Grid margin equals the closed form (1-r)/(1+r); brute-force check."""
        verdict = certify(koebe(), ClassSpec("starlike", lam=0.0))
        r = DEFAULT_GRID.radii[-1]
        closed_form = (1 - r) / (1 + r)
        assert verdict.margin == pytest.approx(closed_form, abs=1e-9)
        # independent brute force over 10^4 angles at the outer radius
        theta = 2 * np.pi * np.arange(10_000) / 10_000
        z = r * np.exp(1j * theta)
        brute = np.min(np.real((1 + z) / (1 - z)))
        assert verdict.margin == pytest.approx(brute, abs=1e-9)
        assert verdict.witness == pytest.approx(-r, abs=1e-9)

    def test_koebe_not_convex(self):
        """Re(1 + zf''/f') = Re((1+4z+z^2)/(1-z^2)) dips negative."""
        verdict = certify(koebe(), ClassSpec("convex", lam=0.0))
        assert verdict.status == "non_member"
        pts = DEFAULT_GRID.points()
        brute = np.min(np.real((1 + 4 * pts + pts**2) / (1 - pts**2)))
        assert verdict.margin == pytest.approx(brute, rel=1e-9)

    def test_half_plane_strongly_starlike(self):
        verdict = certify(half_plane(),
                          ClassSpec("strongly_starlike", lam=0.0, eta=1.0))
        assert verdict.status == "member"
        # z f'/f = 1/(1-z) maps into Re > 1/2: arg stays inside (-pi/2, pi/2)
        pts = DEFAULT_GRID.points()
        brute = math.pi / 2 - np.max(np.abs(np.angle(1.0 / (1.0 - pts))))
        assert verdict.margin == pytest.approx(brute, abs=1e-12)

    def test_missing_companion(self):
        with pytest.raises(MissingCompanion):
            certify(koebe(), ClassSpec("close_to_convex", lam=0.0, beta=0.0))

    def test_close_to_convex_ratio_oracles(self):
        # companion z f': the witness ratio is identically 1, margin 1 - beta
        verdict = certify(koebe(), ClassSpec("close_to_convex", lam=0.0,
                                             beta=0.25),
                          companion=z_times_derivative(koebe()))
        assert verdict.status == "member"
        assert verdict.margin == pytest.approx(0.75, abs=1e-12)
        # companion f itself: the ratio becomes z f'/f, whose minimum real
        # part (1-r)/(1+r) sits below beta = 0.25 at the outer radius
        verdict = certify(koebe(), ClassSpec("close_to_convex", lam=0.0,
                                             beta=0.25), companion=koebe())
        assert verdict.status == "non_member"
        r = DEFAULT_GRID.radii[-1]
        assert verdict.margin == pytest.approx((1 - r) / (1 + r) - 0.25,
                                               abs=1e-12)


class TestEquivalences:
    @pytest.mark.parametrize("lam", [0.0, 0.5])
    def test_convex_vs_starlike_of_zfprime(self, lam):
        for seed in range(5):
            fn = generate_perturbed(seed, 24, 0.15)
            m_convex = certify(fn, ClassSpec("convex", lam=lam)).margin
            m_star = certify(z_times_derivative(fn),
                             ClassSpec("starlike", lam=lam)).margin
            assert m_convex == m_star  # bitwise: same reduced series

    @pytest.mark.parametrize("lam", [0.0, 0.5])
    def test_strongly_pair(self, lam):
        for seed in range(5):
            fn = generate_perturbed(seed + 10, 24, 0.1)
            m_sc = certify(fn, ClassSpec("strongly_convex", lam=lam,
                                         eta=0.5)).margin
            m_ss = certify(z_times_derivative(fn),
                           ClassSpec("strongly_starlike", lam=lam,
                                     eta=0.5)).margin
            assert m_sc == m_ss

    @pytest.mark.parametrize("lam", [0.0, 0.5])
    def test_quasi_vs_close_pair(self, lam):
        for seed in range(5):
            f = generate_perturbed(seed + 20, 24, 0.1)
            g = generate_perturbed(seed + 40, 24, 0.05)
            m_quasi = certify(f, ClassSpec("quasi_convex", lam=lam, beta=0.25),
                              companion=g).margin
            m_close = certify(z_times_derivative(f),
                              ClassSpec("close_to_convex", lam=lam, beta=0.25),
                              companion=z_times_derivative(g)).margin
            assert m_quasi == m_close

    def test_lift_derivative_exchange(self):
        """c-lifted convex margin of f == c-lifted starlike margin of z f'."""
        fn = generate_perturbed(7, 24, 0.1)
        lifted_cv = ClassSpec("convex", lam=0.25, lift=bernardi(1.0))
        lifted_st = ClassSpec("starlike", lam=0.25, lift=bernardi(1.0))
        m1 = certify_lifted_pair(fn, lifted_cv).margin
        m2 = certify_lifted_pair(z_times_derivative(fn), lifted_st).margin
        assert m1 == m2

    def test_sign_agreement_starlike_vs_strong_eta_one(self):
        """S*(0) membership sign matches S*(1, 0) membership sign."""
        cases = [generate_perturbed(3, 24, 0.1), koebe(), half_plane(),
                 generate_perturbed(4, 24, 3.0)]
        for fn in cases:
            m_star = certify(fn, ClassSpec("starlike", lam=0.0)).margin
            m_strong = certify(fn, ClassSpec("strongly_starlike", lam=0.0,
                                             eta=1.0)).margin
            assert (m_star > 0) == (m_strong > 0)


class TestLiftedClasses:
    def test_identity_in_every_lift(self):
        for c in (-0.5, 0.0, 1.0, 2.5):
            spec = ClassSpec("starlike", lam=0.25, lift=bernardi(c))
            verdict = certify_lifted_pair(identity(), spec)
            assert verdict.status == "member"

    def test_koebe_libera_lift_starlike(self):
        spec = ClassSpec("starlike", lam=0.0, lift=bernardi(1.0))
        verdict = certify_lifted_pair(koebe(), spec)
        assert verdict.status == "member"

    def test_koebe_nondegeneracy_in_lifted_strongly_convex(self):
        spec = ClassSpec("strongly_convex", lam=0.0, eta=1.0,
                         lift=bernardi(1.0))
        verdict = certify_lifted_pair(koebe(), spec)
        assert verdict.nondegeneracy_ok

    def test_lift_required(self):
        with pytest.raises(InvalidParameter):
            certify_lifted_pair(koebe(), ClassSpec("starlike", lam=0.0))

    def test_nondegeneracy_failure_detected(self):
        """A function whose defining ratio crosses lam trips the gap check."""
        # Build h with z h'/h = 1 - (z/0.3)^2 via the coefficient recurrence
        # n h_n = sum_k ratio_{n-k} h_k; the ratio hits 0 at z = 0.3 exactly
        # (a grid point), so the strongly-starlike gap check must fail.
        order = 32
        ratio = np.zeros(order + 1, dtype=complex)
        ratio[0] = 1.0
        ratio[2] = -1.0 / 0.09
        h = np.zeros(order + 1, dtype=complex)
        h[1] = 1.0
        for n in range(2, order + 1):
            h[n] = np.dot(ratio[1:n], h[n - 1:0:-1]) / (n - 1)
        hf = from_series(CoefficientSeries(h), exact=True, label="pinch")
        f = from_series(inverse_multiplier(bernardi(1.0),
                                           CoefficientSeries(h)), exact=True)
        spec = ClassSpec("strongly_starlike", lam=0.0, eta=1.0,
                         lift=bernardi(1.0))
        verdict = certify_lifted_pair(f, spec)
        assert not verdict.nondegeneracy_ok


class TestGridSemantics:
    def test_refinement_monotonicity(self):
        fn = koebe(0.25, 1.0)
        spec = ClassSpec("starlike", lam=0.0)
        for grid in (DEFAULT_GRID, DiskGrid((0.3, 0.7), 16)):
            refined = grid.refined()
            assert set(grid.radii) <= set(refined.radii)
            m_coarse = certify(fn, spec, grid).margin
            m_fine = certify(fn, spec, refined).margin
            assert m_fine <= m_coarse + 1e-15

    def test_witness_tie_break_order(self):
        # Exact ties resolve to the first grid point in (radius, angle
        # index) order: the min reduction is first-occurrence.
        from schlicht.classify import _masked_min

        pts = DEFAULT_GRID.points()
        field = np.zeros(pts.size)
        mask = np.zeros(pts.size, dtype=bool)
        value, witness = _masked_min(field, mask, pts)
        assert value == 0.0
        assert witness == complex(pts[0])
        field[0] = 1.0  # tie now shared by every later point
        _, witness = _masked_min(field, mask, pts)
        assert witness == complex(pts[1])

    def test_margin_floor_inconclusive(self):
        verdict = certify(identity(), ClassSpec("starlike", lam=1.0 - 5e-8))
        assert verdict.status == "inconclusive"

    def test_division_near_zero_inconclusive(self):
        # f(0.3) = 0 at the grid point 0.3 + 0j: starlike ratio undefined.
        coeffs = np.zeros(5, dtype=complex)
        coeffs[1] = 1.0
        coeffs[2] = -1.0 / 0.3
        fn = from_series(CoefficientSeries(coeffs), exact=True, label="zero")
        verdict = certify(fn, ClassSpec("starlike", lam=0.0))
        assert verdict.status == "inconclusive"
        assert not verdict.reliable
        assert verdict.witness == pytest.approx(0.3)

    def test_unreliable_tail_inconclusive(self):
        truncated = from_series(koebe().to_series(48), label="koebe-trunc")
        verdict = certify(truncated, ClassSpec("starlike", lam=0.0))
        assert verdict.status == "inconclusive"
        assert not verdict.reliable

    def test_strict_companion_check(self):
        # companion not actually starlike(0.5): strict mode goes inconclusive
        bad_companion = koebe()  # koebe is S*(0) but not S*(0.5)
        verdict = certify(koebe(), ClassSpec("close_to_convex", lam=0.5,
                                             beta=0.0),
                          companion=bad_companion, strict=True)
        assert verdict.status == "inconclusive"


class TestHypothesisMargins:
    def test_identity_degenerate_boundary(self):
        gm = hypothesis_margin(identity(), "re_diff", {"c": 1.0})
        assert gm.value == pytest.approx(0.0, abs=1e-13)
        assert gm.value <= MARGIN_FLOOR  # hypothesis not strictly satisfied

    def test_arg_comparison_self_image(self):
        gm = hypothesis_margin(identity(), "arg_cmp", {"c": 1.0, "lam": 0.0})
        assert gm.value == pytest.approx(0.0, abs=1e-13)

    def test_koebe_re_diff_fixture(self):
        """Frozen regression value for the ratio-difference drive at c=1.

        Minimum of Re(z f'/f - z F'/F) over radii <= 0.8; frozen from this
        implementation and cross-checked against the quadrature backend in
        test_fixture_against_quadrature below.
        """
        grid = DiskGrid((0.1, 0.3, 0.5, 0.7, 0.8), 256)
        gm = hypothesis_margin(koebe(), "re_diff", {"c": 1.0}, grid)
        assert gm.value == pytest.approx(-0.28808151913764046, abs=1e-9)
        assert gm.value < 0  # the drive hypothesis fails for the extremal map

    def test_fixture_against_quadrature(self):
        """Same expression at the witness point via the integral backend."""
        from schlicht.operators import apply_quadrature

        grid = DiskGrid((0.1, 0.3, 0.5, 0.7, 0.8), 256)
        gm = hypothesis_margin(koebe(), "re_diff", {"c": 1.0}, grid)
        z = gm.witness
        h = 1e-6
        lifted = lambda w: apply_quadrature(bernardi(1.0), koebe(), w)
        num = (lifted(z + h) - lifted(z - h)) / (2 * h)
        t = koebe().eval_triple(z)
        value = (z * complex(t.d1) / complex(t.value)
                 - z * num / lifted(z)).real
        assert gm.value == pytest.approx(value, abs=1e-5)

    def test_nondegenerate_gap_positive_for_identity(self):
        gm = hypothesis_margin(identity(), "nondeg_star",
                               {"c": 1.0, "lam": 0.25})
        assert gm.value == pytest.approx(0.75 - 1e-6, abs=1e-12)

    def test_unknown_hypothesis(self):
        with pytest.raises(InvalidParameter):
            hypothesis_margin(identity(), "maximum_principle", {})

    def test_drive_needs_companion(self):
        with pytest.raises(MissingCompanion):
            hypothesis_margin(identity(), "ctc_drive",
                              {"op_c": 1.0, "den_c": 1.0})
