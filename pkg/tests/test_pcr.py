import dataclasses

import numpy as np
import pytest
from conftest import random_orthogonal, spearman

from pcattack import (InvalidDimension, ParseError, UndefinedR2, attack_pcr,
                      fit_pcr, full_svd, load_feature_csv, r_squared,
                      synthetic_collinear)
from pcattack.pcr import DEFAULT_ETA_RATIOS


def toy_features(seed=0, d=6, n=30):
    return np.random.default_rng(seed).standard_normal((d, n))


class TestRSquared:
    def test_perfect_prediction(self):
        y = np.array([1.0, 2.0, 5.0])
        assert r_squared(y, y) == 1.0

    def test_mean_prediction(self):
        y = np.array([1.0, 2.0, 5.0])
        assert r_squared(np.full(3, y.mean()), y) == 0.0

    def test_hand_value(self):
        # ||y - ybar||^2 = 2, ||y - yhat||^2 = 1
        assert r_squared([1.0, 1.0, 3.0], [1.0, 2.0, 3.0]) == pytest.approx(0.5)

    def test_constant_actual(self):
        with pytest.raises(UndefinedR2):
            r_squared([1.0, 2.0], [3.0, 3.0])

    def test_length_mismatch(self):
        with pytest.raises(InvalidDimension):
            r_squared([1.0, 2.0], [1.0, 2.0, 3.0])


class TestFitPcr:
    def test_target_on_first_component(self):
        x = toy_features(1)
        xc = x - x.mean(axis=1, keepdims=True)
        u1 = full_svd(xc).u[:, 0]
        y = 2.5 * (u1 @ xc) + 0.7
        model = fit_pcr(x, y, k=2)
        assert model.r2_train == pytest.approx(1.0, abs=1e-10)

    def test_target_orthogonal_to_components(self):
        x = toy_features(2, d=4, n=12)
        xc = x - x.mean(axis=1, keepdims=True)
        scores = full_svd(xc).u[:, :2].T @ xc
        rng = np.random.default_rng(3)
        y = rng.standard_normal(12)
        design = np.column_stack([scores.T, np.ones(12)])
        y -= design @ np.linalg.lstsq(design, y, rcond=None)[0]
        model = fit_pcr(x, y, k=2)
        assert model.r2_train == pytest.approx(0.0, abs=1e-10)

    def test_collinear_benchmark_fits(self):
        features, targets = synthetic_collinear(seed=0)
        model = fit_pcr(features, targets, k=4)
        assert model.r2_train > 0.99

    def test_k_too_large(self):
        rng = np.random.default_rng(4)
        x = rng.standard_normal((5, 2)) @ rng.standard_normal((2, 20))
        with pytest.raises(InvalidDimension):
            fit_pcr(x, np.arange(20.0), k=3)  # centered rank is 2

    def test_train_r2_reproducible_from_predictions(self):
        features, targets = synthetic_collinear(seed=1)
        model = fit_pcr(features, targets, k=4)
        again = r_squared(model.predict(features), targets)
        assert abs(again - model.r2_train) < 1e-12

    def test_prediction_invariant_under_component_rotation(self):
        features, targets = synthetic_collinear(seed=2)
        model = fit_pcr(features, targets, k=4)
        q = random_orthogonal(np.random.default_rng(5), 4)
        rotated = dataclasses.replace(
            model, components=model.components @ q,
            coefficients=q.T @ model.coefficients)
        ref = model.predict(features)
        rot = rotated.predict(features)
        assert np.max(np.abs(ref - rot)) < 1e-10


class TestAttackPcr:
    def test_zero_budget_equals_baseline(self):
        features, targets = synthetic_collinear(seed=3)
        rep1 = attack_pcr(features, targets, 4, [0.0, 0.4], "unconstrained",
                          split_seed=7)
        rep2 = attack_pcr(features, targets, 4, [0.0], "unconstrained",
                          split_seed=7)
        assert rep1[0] == rep2[0]
        assert rep1[0].eta_ratio == 0.0

    def test_degradation_grows_with_budget(self):
        features, targets = synthetic_collinear(seed=4)
        reports = attack_pcr(features, targets, 4, [0.1, 0.9], "unconstrained",
                             split_seed=0)
        assert reports[1].r2_test < reports[0].r2_test

    def test_rank_one_strategy_runs(self):
        features, targets = synthetic_collinear(seed=5)
        reports = attack_pcr(features, targets, 4, [0.2, 0.6], "rank_one",
                             split_seed=0)
        assert [r.eta_ratio for r in reports] == [0.2, 0.6]
        assert all(r.strategy == "rank_one" for r in reports)

    def test_monotone_degradation_single_seed(self):
        features, targets = synthetic_collinear(seed=6)
        reports = attack_pcr(features, targets, 4, DEFAULT_ETA_RATIOS,
                             "unconstrained", split_seed=6)
        grid = [r.eta_ratio for r in reports]
        r2_test = [r.r2_test for r in reports]
        assert spearman(grid, r2_test) <= -0.9

    def test_invalid_strategy(self):
        features, targets = synthetic_collinear(seed=0)
        with pytest.raises(InvalidDimension):
            attack_pcr(features, targets, 4, [0.5], "both")


class TestFeatureCsv:
    def test_toy_file(self, tmp_path):
        path = tmp_path / "toy.csv"
        path.write_text("1,2,10\n3,4,20\n5,6,30\n")
        features, targets = load_feature_csv(path)
        assert features.shape == (2, 3)
        assert np.array_equal(features, np.array([[1.0, 3.0, 5.0], [2.0, 4.0, 6.0]]))
        assert np.array_equal(targets, [10.0, 20.0, 30.0])

    def test_header_skipped(self, tmp_path):
        path = tmp_path / "hdr.csv"
        path.write_text("f1,f2,target\n1,2,10\n3,4,20\n")
        features, targets = load_feature_csv(path)
        assert features.shape == (2, 2)
        assert np.array_equal(targets, [10.0, 20.0])

    def test_empty_file(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(ParseError):
            load_feature_csv(path)

    def test_ragged_row_reports_line(self, tmp_path):
        path = tmp_path / "ragged.csv"
        path.write_text("1,2,10\n3,4\n")
        with pytest.raises(ParseError, match="ragged.csv:2"):
            load_feature_csv(path)

    def test_non_numeric_cell(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("1,2,10\n3,oops,20\n")
        with pytest.raises(ParseError, match="bad.csv:2"):
            load_feature_csv(path)
