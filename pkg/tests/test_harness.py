"""Member generation, experiment pipeline, determinism, refinement."""

import numpy as np
import pytest

from schlicht.classify import ClassSpec, DiskGrid, MARGIN_FLOOR, certify
from schlicht.errors import ConfigError, GenerationExhausted
from schlicht.functions import identity
from schlicht.harness import (CATALOG, DUAL_PAIRS, ExperimentConfig,
                              THEOREM_IDS, generate_members, refine,
                              report_to_json, run_theorem, validate_catalog)
from schlicht.operators import bernardi, jks

SMALL = dict(sample_count=4, seed=3, lambda_values=(0.0, 0.25),
             beta_values=(0.25,), eta_values=(0.5,), c_values=(0.0, 1.0),
             sigma_values=(1.0,))


class TestCatalog:
    def test_all_ids_present(self):
        stated = {"T2_1_i", "T2_1_ii", "T2_2_i", "T2_2_ii", "T2_3", "C2_4",
                  "T2_5_i", "T2_5_ii", "C2_6_i", "C2_6_ii", "T2_7", "T2_8_i",
                  "T2_8_ii", "T2_9_i", "T2_9_ii", "T2_10", "C2_11", "T2_12",
                  "C2_13"}
        assert stated <= set(THEOREM_IDS)
        assert "C2_4_wide" in THEOREM_IDS  # wider-domain companion experiment

    def test_dual_pairs_swap_hypothesis_and_conclusion(self):
        validate_catalog()
        probe = {"lam": 0.25, "beta": 0.0, "eta": 0.5, "c": 1.0, "sigma": 1.0}
        for a, b in DUAL_PAIRS:
            assert CATALOG[a].conclusion_spec(probe) == \
                CATALOG[b].hypothesis_spec(probe)

    def test_domain_filters(self):
        cfg = ExperimentConfig(theorem="T2_10", **SMALL)
        for point in cfg.points():
            lam, c = point["lam"], point["c"]
            assert -lam <= c <= 1 - 2 * lam
        for point in ExperimentConfig(theorem="C2_4", **SMALL).points():
            assert point["c"] >= point["lam"]
        for point in ExperimentConfig(theorem="C2_4_wide", **SMALL).points():
            assert point["c"] >= -point["lam"]
        for point in ExperimentConfig(theorem="T2_3", **SMALL).points():
            assert point["c"] >= -point["lam"]

    def test_out_of_domain_config_rejected(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(theorem="T2_10", sample_count=2, seed=1,
                             lambda_values=(0.0,), sigma_values=(1.0,),
                             c_values=(2.0,)).points()

    def test_unknown_theorem(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(theorem="T9_9")

    def test_c_domain_validation(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(theorem="T2_7", c_values=(-1.5,))


class TestGeneration:
    def test_pool_contains_identity_candidate(self):
        members = generate_members(ClassSpec("starlike", lam=0.0), 1, 5)
        assert members[0].label == "identity"

    def test_members_certify_with_margin(self):
        spec = ClassSpec("starlike", lam=0.5)
        members = generate_members(spec, 5, 11)
        assert len(members) == 5
        for fn in members:
            verdict = certify(fn, spec)
            assert verdict.status == "member"
            assert verdict.margin > 10 * MARGIN_FLOOR

    def test_deterministic_under_seed(self):
        spec = ClassSpec("strongly_starlike", lam=0.25, eta=0.5)
        a = generate_members(spec, 4, 17)
        b = generate_members(spec, 4, 17)
        assert [fn.label for fn in a] == [fn.label for fn in b]
        for x, y in zip(a, b):
            np.testing.assert_array_equal(x.to_series(64).coeffs,
                                          y.to_series(64).coeffs)

    def test_strongly_convex_via_coefficient_division(self):
        spec = ClassSpec("strongly_convex", lam=0.0, eta=0.5)
        members = generate_members(spec, 3, 23)
        for fn in members:
            assert certify(fn, spec).status == "member"
        labels = [fn.label for fn in members[1:]]
        assert any("invzd" in label for label in labels)

    def test_companion_attached_for_pair_classes(self):
        spec = ClassSpec("close_to_convex", lam=0.0, beta=0.25,
                         lift=bernardi(1.0))
        members = generate_members(spec, 3, 29)
        for fn in members:
            assert fn.companion is not None
            verdict = certify(fn, spec, companion=fn.companion)
            assert verdict.status == "member"

    def test_lifted_pool(self):
        spec = ClassSpec("starlike", lam=0.25, lift=jks(2.0))
        members = generate_members(spec, 3, 31)
        for fn in members:
            assert certify(fn, spec).status == "member"

    def test_exhaustion(self):
        # eta this small leaves the generator families no usable margin
        spec = ClassSpec("strongly_starlike", lam=0.0, eta=1e-7)
        with pytest.raises(GenerationExhausted):
            generate_members(spec, 2, 1)


class TestRunTheorem:
    def test_unconditional_confirms_everywhere(self):
        cfg = ExperimentConfig(theorem="T2_7", **SMALL)
        report = run_theorem(cfg)
        assert report["totals"]["counterexample_flagged"] == 0
        for point in report["points"]:
            assert point["counts"]["confirmed"] >= 1
            assert point["hypothesis_hit_rate"] > 0

    def test_identity_confirms_with_margin_eta_half_pi(self):
        cfg = ExperimentConfig(theorem="T2_7", sample_count=1, seed=3,
                               lambda_values=(0.25,), eta_values=(0.5,),
                               c_values=(1.0,))
        report = run_theorem(cfg)
        sample = report["points"][0]["samples"][0]
        assert sample["label"] == "identity"
        assert sample["classification"] == "confirmed"
        margin = sample["conclusion"]["main"]["margin"]
        assert margin == pytest.approx(np.pi * 0.5 / 2, abs=1e-9)

    def test_conditional_vacuity_is_sound_and_visible(self):
        cfg = ExperimentConfig(theorem="T2_1_i", **SMALL)
        report = run_theorem(cfg)
        assert report["totals"]["counterexample_flagged"] == 0
        for point in report["points"]:
            assert "hypothesis_hit_rate" in point
            for sample in point["samples"]:
                if sample["classification"] == "vacuous":
                    margins = [h["margin"]
                               for h in sample["hypotheses"].values()]
                    assert min(margins) <= MARGIN_FLOOR

    def test_determinism_same_config(self):
        cfg = ExperimentConfig(theorem="T2_3", **SMALL)
        a = report_to_json(run_theorem(cfg))
        b = report_to_json(run_theorem(cfg))
        assert a == b

    def test_jks_image_conclusion(self):
        cfg = ExperimentConfig(theorem="T2_10", **SMALL)
        report = run_theorem(cfg)
        assert report["totals"]["counterexample_flagged"] == 0
        for point in report["points"]:
            assert point["counts"]["confirmed"] >= 1

    def test_extremal_member_confirms_at_shifted_parameter(self):
        # koebe(lam) is starlike(lam); its c-image certifies for c = -lam+0.5
        lam = 0.25
        c = -lam + 0.5
        hyp = certify(identity(), ClassSpec("starlike", lam=lam))
        assert hyp.status == "member"
        from schlicht.functions import koebe

        assert certify(koebe(lam), ClassSpec("starlike", lam=lam)).status \
            == "member"
        lifted = ClassSpec("starlike", lam=lam, lift=bernardi(c))
        assert certify(koebe(lam), lifted).status == "member"

    def test_pair_theorem_runs(self):
        cfg = ExperimentConfig(theorem="T2_8_i", sample_count=3, seed=3,
                               lambda_values=(0.0,), beta_values=(0.25,),
                               c_values=(1.0,))
        report = run_theorem(cfg)
        assert report["totals"]["counterexample_flagged"] == 0
        sample = report["points"][0]["samples"][1]
        assert "companion_membership" in sample["hypotheses"]
        assert "companion" in sample["conclusion"]


class TestFlagMachinery:
    def test_false_inclusion_gets_flagged_after_refinement(self):
        """A synthetic entry whose conclusion is genuinely false must flag.

        Hypothesis pool: starlike(0); conclusion: starlike(0.9).  Generic
        members violate the conclusion at every refinement level, so the
        negative conclusion margin must survive as counterexample_flagged
        with the full refinement trail recorded.
        """
        from schlicht.harness import CatalogEntry

        entry = CatalogEntry(
            "X_FALSE", "synthetic flag-machinery exercise", ("lam",),
            lambda p: ClassSpec("starlike", lam=p["lam"]),
            lambda p: ClassSpec("starlike", lam=0.9),
        )
        CATALOG["X_FALSE"] = entry
        try:
            cfg = ExperimentConfig(theorem="X_FALSE", sample_count=6, seed=2,
                                   lambda_values=(0.0,),
                                   refinement_levels=2)
            report = run_theorem(cfg)
        finally:
            del CATALOG["X_FALSE"]
        flagged = [s for pt in report["points"] for s in pt["samples"]
                   if s["classification"] == "counterexample_flagged"]
        assert flagged, "the false conclusion must be flagged"
        for sample in flagged:
            assert len(sample["refinements"]) == 2
            for level in sample["refinements"]:
                assert level["conclusion"]["main"]["margin"] < -MARGIN_FLOOR
                assert all(h["margin"] > MARGIN_FLOOR
                           for h in level["hypotheses"].values())

    def test_thread_count_does_not_change_report(self, monkeypatch):
        cfg = ExperimentConfig(theorem="T2_3", **SMALL)
        monkeypatch.delenv("SCHLICHT_THREADS", raising=False)
        serial = report_to_json(run_theorem(cfg))
        monkeypatch.setenv("SCHLICHT_THREADS", "4")
        threaded = report_to_json(run_theorem(cfg))
        assert serial == threaded


class TestRefine:
    def test_grid_superset_and_monotone_margin(self):
        grid = DiskGrid((0.3, 0.7), 32)
        refined = grid.refined()
        assert set(grid.radii) < set(refined.radii)
        assert refined.angles == 64
        assert max(refined.radii) == pytest.approx(0.7)  # 0.99*max is interior

    def test_refine_keeps_member(self):
        from schlicht.functions import koebe

        spec = ClassSpec("starlike", lam=0.0)
        base = certify(koebe(), spec)
        refined = refine(koebe(), spec, level=2)
        assert refined.status == "member"
        assert refined.margin <= base.margin + 1e-15

    def test_refine_level_zero_is_identity(self):
        spec = ClassSpec("starlike", lam=0.5)
        assert refine(identity(), spec, level=0) == certify(identity(), spec)

    def test_negative_level_rejected(self):
        with pytest.raises(ConfigError):
            refine(identity(), ClassSpec("starlike", lam=0.0), level=-1)


class TestReportShape:
    def test_schema_and_round_trip(self):
        import json

        cfg = ExperimentConfig(theorem="C2_4", **SMALL)
        report = run_theorem(cfg)
        assert report["schema"] == 1
        text = report_to_json(report)
        parsed = json.loads(text)
        assert parsed["theorem"] == "C2_4"
        assert parsed["config"]["seed"] == 3
