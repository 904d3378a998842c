import numpy as np
import pytest

from maasar.corpus import Decision
from maasar.features import FEATURE_NAMES, FEATURE_SCHEMA_VERSION, NUM_FEATURES, featurize
from maasar.models import (
    LinearMarginClassifier,
    TreeEnsembleClassifier,
    load_model,
    predict_proba,
    save_model,
    train,
)

def separable_data(n=60, seed=5):
    """Positives have has_number=1 and strong_positive >= 1."""
    rng = np.random.default_rng(seed)
    X = np.zeros((n, NUM_FEATURES))
    y = np.zeros(n, dtype=int)
    for i in range(n):
        positive = i % 3 == 0
        y[i] = int(positive)
        X[i, 0] = rng.integers(1, 3) if positive else 0  # strong_positive_count
        X[i, 4] = 1.0 if positive else rng.integers(0, 2)  # has_number
        X[i, 10] = rng.random()  # relative_position
        X[i, 12] = 1 - X[i, 10]
    return X, y


class TestFeaturize:
    def test_dimension_names_fixed(self):
        assert len(FEATURE_NAMES) == NUM_FEATURES == 13
        assert FEATURE_SCHEMA_VERSION == 1

    def test_keyword_free_sentence_zero_counts(self, lexicon):
        decision = Decision.from_text("c", "ריק לחלוטין. עוד משפט כאן.")
        fv = featurize(decision.sentences[0], decision, lexicon)
        assert fv.shape == (NUM_FEATURES,)
        assert fv[:10].sum() == 0
        assert np.isfinite(fv).all()

    def test_empty_sentence_positions_still_defined(self, lexicon):
        from maasar.corpus import Sentence

        empty = Sentence(1, "", 0, 1.0)
        decision = Decision(
            case_id="c", year=0, court="", raw_text="א.", sentences=(Sentence(0, "א.", 1, 0.0), empty)
        )
        fv = featurize(empty, decision, lexicon)
        assert fv[:10].sum() == 0
        assert fv[FEATURE_NAMES.index("relative_position")] == 1.0
        assert np.isfinite(fv).all()

    def test_two_strong_positive_hits(self, lexicon):
        verbs = sorted(lexicon.strong_positive)[:2]
        decision = Decision.from_text("c", f"אני {verbs[0]} וגם {verbs[1]} עונש.")
        fv = featurize(decision.sentences[0], decision, lexicon)
        assert fv[FEATURE_NAMES.index("strong_positive_count")] == 2

    def test_last_sentence_positions(self, lexicon):
        decision = Decision.from_text("c", "ראשון כאן. שני כאן. אחרון ממש.")
        fv = featurize(decision.sentences[-1], decision, lexicon)
        assert fv[FEATURE_NAMES.index("relative_position")] == 1.0
        assert fv[FEATURE_NAMES.index("distance_to_document_end")] == 0.0

    def test_docket_marker_count(self, lexicon):
        decision = Decision.from_text("c", "ראו 1049/12 וגם 33/98 לעניין מאסר.")
        fv = featurize(decision.sentences[0], decision, lexicon)
        assert fv[FEATURE_NAMES.index("docket_marker_count")] == 2

    def test_indicators_are_binary(self, lexicon, synthetic):
        decision = synthetic.decisions[0]
        for s in decision.sentences[:10]:
            fv = featurize(s, decision, lexicon)
            assert fv[FEATURE_NAMES.index("has_number")] in (0.0, 1.0)
            assert fv[FEATURE_NAMES.index("has_time_unit")] in (0.0, 1.0)


@pytest.mark.parametrize("kind", ["linear_margin", "tree_ensemble"])
class TestLearnersCommon:
    def test_separable_training_accuracy(self, kind):
        X, y = separable_data()
        model = train([(x, bool(label)) for x, label in zip(X, y)], kind, seed=3)
        predictions = (model.predict_proba(X) >= 0.5).astype(int)
        assert (predictions == y).all()

    def test_deterministic_under_seed(self, kind):
        X, y = separable_data()
        records = [(x, bool(label)) for x, label in zip(X, y)]
        a = train(records, kind, seed=11).predict_proba(X)
        b = train(records, kind, seed=11).predict_proba(X)
        assert a.tobytes() == b.tobytes()

    def test_single_class_rejected(self, kind):
        X, _ = separable_data()
        with pytest.raises(ValueError, match="single class"):
            train([(x, True) for x in X], kind)

    def test_nan_rejected(self, kind):
        X, y = separable_data()
        X[0, 0] = np.nan
        with pytest.raises(ValueError, match="NaN"):
            train([(x, bool(label)) for x, label in zip(X, y)], kind)

    def test_save_load_round_trip(self, kind, tmp_path):
        X, y = separable_data()
        model = train([(x, bool(label)) for x, label in zip(X, y)], kind, seed=2)
        path = tmp_path / "model.json"
        save_model(model, path)
        loaded = load_model(path)
        assert loaded.kind == model.kind
        assert loaded.rng_seed == model.rng_seed
        assert (loaded.predict_proba(X) == model.predict_proba(X)).all()
        save_model(loaded, tmp_path / "model2.json")
        assert (tmp_path / "model.json").read_bytes() == (tmp_path / "model2.json").read_bytes()


class TestTreeEnsemble:
    def test_probability_is_exact_vote_fraction(self):
        X, y = separable_data()
        clf = TreeEnsembleClassifier(n_trees=100, seed=0).fit(X, y)
        clf.trees_ = [{"vote": 1}] * 80 + [{"vote": 0}] * 20
        proba = clf.predict_proba(X[:1])[0, 1]
        assert proba == 80 / 100

    def test_probabilities_are_vote_multiples(self):
        X, y = separable_data()
        clf = TreeEnsembleClassifier(n_trees=25, seed=0).fit(X, y)
        probs = clf.predict_proba(X)[:, 1]
        votes = probs * 25
        assert np.allclose(votes, np.round(votes))

    def test_get_params(self):
        clf = TreeEnsembleClassifier(n_trees=10, seed=4)
        params = clf.get_params()
        assert params["n_trees"] == 10 and params["seed"] == 4


class TestLinearMargin:
    def test_zero_margin_maps_to_half(self):
        clf = LinearMarginClassifier()
        clf.weights_ = np.zeros(NUM_FEATURES)
        clf.bias_ = 0.0
        clf.n_features_in_ = NUM_FEATURES
        clf.calibration_scale_ = 3.7
        clf.calibration_offset_ = 0.0
        proba = clf.predict_proba(np.ones((1, NUM_FEATURES)))[0, 1]
        assert proba == 0.5

    def test_calibration_exposed(self):
        X, y = separable_data()
        model = train([(x, bool(label)) for x, label in zip(X, y)], "linear_margin")
        assert model.calibration is not None
        assert model.calibration["offset"] == 0.0
        assert model.calibration["scale"] > 0

    def test_tree_model_has_no_calibration(self):
        X, y = separable_data()
        model = train([(x, bool(label)) for x, label in zip(X, y)], "tree_ensemble")
        assert model.calibration is None


class TestSchemaGuard:
    def test_wrong_width_rejected(self):
        X, y = separable_data()
        model = train([(x, bool(label)) for x, label in zip(X, y)], "linear_margin")
        with pytest.raises(ValueError, match="dimensions|columns"):
            model.predict_proba(np.ones((1, NUM_FEATURES + 1)))

    def test_wrong_schema_version_rejected(self):
        X, y = separable_data()
        model = train([(x, bool(label)) for x, label in zip(X, y)], "linear_margin")
        model.feature_schema_version = 99
        with pytest.raises(ValueError, match="schema"):
            model.predict_proba(X[:1])

    def test_predict_proba_scalar_helper(self):
        X, y = separable_data()
        model = train([(x, bool(label)) for x, label in zip(X, y)], "tree_ensemble")
        value = predict_proba(model, X[0])
        assert isinstance(value, float)
        assert 0.0 <= value <= 1.0

    def test_kind_aliases(self):
        X, y = separable_data()
        records = [(x, bool(label)) for x, label in zip(X, y)]
        assert train(records, "svm").kind == "linear_margin"
        assert train(records, "rf").kind == "tree_ensemble"
        with pytest.raises(ValueError, match="unknown model kind"):
            train(records, "boosting")
