import numpy as np
import pytest

from crisumm.corpus import DisasterDataset
from crisumm.importance import (ImportanceVector, RegressionModel,
                                build_training_pairs, fit,
                                predict_importance)

from oracles import make_tweet, ols


class TestTrainingPairs:
    def _dataset(self, gold):
        tweets = tuple(make_tweet(f"t{i}", {"w"}) for i in range(10))
        return DisasterDataset(id="d", tweets=tweets,
                               disaster_type="natural", continent="asia",
                               gold_summary=gold)

    def _partition(self):
        return {
            "a": tuple(make_tweet(f"t{i}", {"w"}) for i in range(3)),
            "b": tuple(make_tweet(f"t{i + 3}", {"w"}) for i in range(7)),
        }

    def test_fraction_and_gold_count(self):
        gold = tuple(("t%d" % i, "a") for i in range(3)) + (("t5", "b"),)
        pairs = build_training_pairs(self._dataset(gold), self._partition(),
                                     ["a", "b"])
        assert pairs == [(0.3, 3.0), (0.7, 1.0)]

    def test_category_absent_from_gold_gets_zero(self):
        pairs = build_training_pairs(self._dataset((("t0", "a"),)),
                                     self._partition(), ["a", "b"])
        assert pairs == [(0.3, 1.0), (0.7, 0.0)]

    def test_one_pair_per_category(self):
        ids = ["a", "b", "c", "d", "e"]
        pairs = build_training_pairs(self._dataset((("t0", "a"),)),
                                     self._partition(), ids)
        assert len(pairs) == len(ids)

    def test_missing_gold_summary_rejected(self):
        with pytest.raises(ValueError, match="gold summary"):
            build_training_pairs(self._dataset(None), self._partition(),
                                 ["a", "b"])

    def test_unknown_gold_category_rejected(self):
        with pytest.raises(ValueError, match="mystery"):
            build_training_pairs(self._dataset((("t0", "mystery"),)),
                                 self._partition(), ["a", "b"])


class TestFit:
    def test_exact_interpolation(self):
        model = fit([(0, 0), (1, 1), (2, 2)], "linear")
        assert model.slope == pytest.approx(1.0, abs=1e-12)
        assert model.intercept == pytest.approx(0.0, abs=1e-12)

    def test_collinear_recovery(self):
        model = fit([(1, 2), (2, 4), (3, 6)], "linear")
        assert model.slope == pytest.approx(2.0, abs=1e-9)
        assert model.intercept == pytest.approx(0.0, abs=1e-9)

    def test_matches_ols_oracle_on_noisy_data(self):
        rng = np.random.default_rng(47)
        for _ in range(50):
            pairs = [(float(x), float(x) * 1.5 + rng.normal())
                     for x in rng.uniform(0, 1, size=int(rng.integers(2, 9)))]
            model = fit(pairs, "linear")
            slope, intercept = ols(pairs)
            assert model.slope == pytest.approx(slope, abs=1e-9)
            assert model.intercept == pytest.approx(intercept, abs=1e-9)

    def test_zero_variance_degenerates_gracefully(self):
        model = fit([(0.5, 1.0), (0.5, 3.0)], "linear")
        assert model.slope == 0.0
        assert model.intercept == 2.0

    def test_ridge_large_alpha_kills_slope(self):
        model = fit([(0, 0), (1, 10)], "ridge", ridge_alpha=1e12)
        assert abs(model.slope) < 1e-9

    def test_ridge_approaches_ols(self):
        pairs = [(0.1, 1.0), (0.4, 2.0), (0.9, 5.0)]
        ols_slope = fit(pairs, "linear").slope
        gaps = [abs(fit(pairs, "ridge", ridge_alpha=a).slope - ols_slope)
                for a in (1.0, 1e-3, 1e-9)]
        assert gaps[0] > gaps[1] > gaps[2]
        assert gaps[2] < 1e-6

    def test_bayesian_shrinks_toward_zero(self):
        pairs = [(0.0, 1.0), (1.0, 3.0), (2.0, 5.0)]
        ols_model = fit(pairs, "linear")
        bayes = fit(pairs, "bayesian", prior_precision=1.0,
                    noise_precision=1.0)
        assert 0.0 < bayes.slope < ols_model.slope
        loose = fit(pairs, "bayesian", prior_precision=1e-9,
                    noise_precision=1e9)
        assert loose.slope == pytest.approx(ols_model.slope, abs=1e-6)
        assert loose.intercept == pytest.approx(ols_model.intercept,
                                                abs=1e-6)

    def test_bayesian_predictive_variance(self):
        pairs = [(0.0, 1.0), (1.0, 3.0), (2.0, 5.0)]
        model = fit(pairs, "bayesian")
        assert model.predictive_variance(1.0) > 0
        tighter = fit(pairs, "bayesian", noise_precision=100.0)
        assert tighter.predictive_variance(1.0) < \
            model.predictive_variance(1.0)

    def test_equal_kind_has_no_coefficients(self):
        model = fit([], "equal")
        assert model.slope is None and model.intercept is None
        with pytest.raises(ValueError):
            model.predict(0.5)

    def test_too_few_pairs_rejected(self):
        for kind in ("linear", "ridge", "bayesian"):
            with pytest.raises(ValueError, match="at least 2"):
                fit([(1.0, 1.0)], kind)

    def test_invalid_hyperparameters_rejected(self):
        pairs = [(0.0, 0.0), (1.0, 1.0)]
        with pytest.raises(ValueError):
            fit(pairs, "ridge", ridge_alpha=-1.0)
        with pytest.raises(ValueError):
            fit(pairs, "bayesian", prior_precision=0.0)


class TestPredictImportance:
    def test_exact_fractions(self):
        model = RegressionModel(kind="linear", slope=10.0, intercept=0.0)
        vec = predict_importance(model, {"a": 0.5, "b": 0.3, "c": 0.2},
                                 {"a": 99, "b": 99, "c": 99}, 10)
        assert vec.counts == {"a": 5, "b": 3, "c": 2}

    def test_equal_kind_tie_breaks_by_category_id(self):
        vec = predict_importance(RegressionModel(kind="equal"),
                                 {"a": 1 / 3, "b": 1 / 3, "c": 1 / 3},
                                 {"a": 99, "b": 99, "c": 99}, 10)
        assert vec.counts == {"a": 4, "b": 3, "c": 3}

    def test_remainder_tie_prefers_larger_fraction(self):
        vec = predict_importance(RegressionModel(kind="equal"),
                                 {"a": 0.2, "b": 0.5, "c": 0.3},
                                 {"a": 99, "b": 99, "c": 99}, 10)
        assert vec.counts == {"a": 3, "b": 4, "c": 3}

    def test_clamp_and_redistribute(self):
        model = RegressionModel(kind="linear", slope=10.0, intercept=0.0)
        vec = predict_importance(model, {"a": 1.0, "b": 0.0, "c": 0.0},
                                 {"a": 4, "b": 9, "c": 9}, 6)
        assert vec.counts == {"a": 4, "b": 1, "c": 1}

    def test_negative_predictions_clamp_to_zero(self):
        model = RegressionModel(kind="linear", slope=10.0, intercept=-5.0)
        vec = predict_importance(model, {"a": 0.9, "b": 0.1},
                                 {"a": 20, "b": 20}, 4)
        assert vec.counts["a"] == 4
        assert vec.counts["b"] == 0

    def test_full_capacity_fills_every_category(self):
        rng = np.random.default_rng(97)
        for _ in range(50):
            ids = [f"c{i}" for i in range(int(rng.integers(1, 7)))]
            available = {cid: int(rng.integers(0, 6)) for cid in ids}
            total = sum(available.values())
            if total == 0:
                continue
            model = RegressionModel(kind="linear",
                                    slope=float(rng.uniform(-2, 8)),
                                    intercept=float(rng.uniform(-1, 1)))
            fractions = {cid: float(rng.uniform(0, 1)) for cid in ids}
            vec = predict_importance(model, fractions, available, total)
            assert vec.counts == available

    def test_shortfall_reported(self):
        model = RegressionModel(kind="linear", slope=1.0, intercept=0.0)
        with pytest.raises(ValueError, match="short by 3"):
            predict_importance(model, {"a": 1.0}, {"a": 2}, 5)

    def test_importance_vector_invariants(self):
        with pytest.raises(ValueError):
            ImportanceVector(counts={"a": 2, "b": 1}, m=4)
        with pytest.raises(ValueError):
            ImportanceVector(counts={"a": -1, "b": 5}, m=4)
