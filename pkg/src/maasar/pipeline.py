"""Supervised sentence selection, cross-validation, and the end-to-end
extraction estimator.

Candidate sentences (keyword filter survivors) are scored by a trained
classifier; the detection stage keeps every candidate above a probability
threshold, while the per-document selection takes the argmax, breaking
ties toward the end of the decision. Cross-validation folds partition
whole decisions so no document's sentences straddle the train/test line.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .base import ParamsMixin
from .corpus import AnnotationRecord, Decision
from .detect import filter_candidates, score_candidates, select_sentence_rule_based
from .extraction import DurationScoringConfig, ExtractionResult, extract
from .features import featurize_candidates
from .lexicon import Lexicon
from .metrics import (
    ErrorCategory,
    EvaluationReport,
    PerCaseResult,
    categorize_error,
    detection_prf,
    extraction_f1_and_error,
    selection_f1,
)
from .models import TrainedModel, train


@dataclass(frozen=True)
class CrossValConfig:
    """Document-level cross-validation settings."""

    num_folds: int = 5
    seed: int = 0
    detection_threshold: float = 0.5

    def __post_init__(self):
        if self.num_folds < 2:
            raise ValueError("num_folds must be >= 2")
        if not 0.0 <= self.detection_threshold < 1.0:
            raise ValueError("detection_threshold must be in [0, 1)")


def _candidate_probabilities(
    model: TrainedModel, decision: Decision, lexicon: Lexicon
) -> tuple[list[int], np.ndarray]:
    candidates = filter_candidates(decision, lexicon)
    if not candidates:
        return [], np.empty(0)
    X = featurize_candidates(candidates, decision, lexicon, model.token_count_scale)
    return [s.index for s in candidates], model.predict_proba(X)


def sentences_above_threshold(
    model: TrainedModel, decision: Decision, lexicon: Lexicon, threshold: float
) -> list[int]:
    """Candidate sentence indices whose punishment probability >= threshold."""
    indices, probs = _candidate_probabilities(model, decision, lexicon)
    return [idx for idx, p in zip(indices, probs) if p >= threshold]


def select_sentence_supervised(
    model: TrainedModel, decision: Decision, lexicon: Lexicon
) -> int | None:
    """Most probable candidate sentence; ties go to the later sentence."""
    indices, probs = _candidate_probabilities(model, decision, lexicon)
    if not indices:
        return None
    best = max(zip(probs, indices))
    return best[1]


def _gold_maps(
    annotations: list[AnnotationRecord],
) -> tuple[dict[str, set[int]], dict[str, int]]:
    gold_indices: dict[str, set[int]] = {}
    months_by_case: dict[str, dict[int, int]] = {}
    for record in annotations:
        if record.is_punishment:
            gold_indices.setdefault(record.case_id, set()).add(record.sentence_index)
            months_by_case.setdefault(record.case_id, {})[record.sentence_index] = (
                record.months or 0
            )
    gold_months = {
        case_id: months[min(months)] for case_id, months in months_by_case.items()
    }
    return gold_indices, gold_months


def _label_lookup(annotations: list[AnnotationRecord]) -> dict[tuple[str, int], bool]:
    return {(r.case_id, r.sentence_index): r.is_punishment for r in annotations}


def max_token_count(decisions: list[Decision]) -> int:
    return max(
        (s.token_count for d in decisions for s in d.sentences),
        default=1,
    )


def build_training_records(
    decisions: list[Decision],
    annotations: list[AnnotationRecord],
    lexicon: Lexicon,
    token_scale: int | None = None,
) -> list[tuple[np.ndarray, bool]]:
    """(feature vector, label) pairs over all candidate sentences.

    Candidates without an annotation record are automatic negatives, which
    is how the keyword pre-labeling constructs the training set.
    """
    labels = _label_lookup(annotations)
    if token_scale is None:
        token_scale = max_token_count(decisions)
    records = []
    for decision in decisions:
        candidates = filter_candidates(decision, lexicon)
        if not candidates:
            continue
        X = featurize_candidates(candidates, decision, lexicon, token_scale)
        for row, sentence in zip(X, candidates):
            records.append((row, labels.get((decision.case_id, sentence.index), False)))
    return records


def train_on_decisions(
    decisions: list[Decision],
    annotations: list[AnnotationRecord],
    lexicon: Lexicon,
    kind: str,
    seed: int = 0,
    **hyperparams,
) -> TrainedModel:
    token_scale = max_token_count(decisions)
    records = build_training_records(decisions, annotations, lexicon, token_scale)
    model = train(records, kind, seed=seed, **hyperparams)
    model.token_count_scale = token_scale
    return model


def assemble_report(
    decisions: list[Decision],
    annotations: list[AnnotationRecord],
    lexicon: Lexicon,
    selections: dict[str, int | None],
    detected: set[tuple[str, int]],
    months: dict[str, int | None],
) -> EvaluationReport:
    """Pool per-case predictions into the full evaluation report."""
    gold_indices, gold_months = _gold_maps(annotations)
    by_id = {d.case_id: d for d in decisions}
    gold_pairs = {
        (case_id, idx)
        for case_id, indices in gold_indices.items()
        if case_id in by_id
        for idx in indices
    }
    detection = detection_prf(detected, gold_pairs)

    full_gold_months = {d.case_id: gold_months.get(d.case_id, 0) for d in decisions}
    sel_f1 = selection_f1(selections, gold_indices)
    score = extraction_f1_and_error(months, full_gold_months)

    correct_sel = [
        case_id
        for case_id, idx in selections.items()
        if idx is not None and idx in gold_indices.get(case_id, set())
    ]
    if correct_sel:
        acc_given_correct = sum(
            months.get(c) == full_gold_months[c] for c in correct_sel
        ) / len(correct_sel)
    else:
        acc_given_correct = None

    wrong = [
        (case_id, idx)
        for case_id, idx in selections.items()
        if idx is not None and idx not in gold_indices.get(case_id, set())
    ]
    breakdown = {category.value: 0.0 for category in ErrorCategory}
    per_case_categories: dict[str, str] = {}
    for case_id, idx in wrong:
        category = categorize_error(by_id[case_id].sentences[idx], lexicon)
        per_case_categories[case_id] = category.value
        breakdown[category.value] += 1
    if wrong:
        breakdown = {k: v / len(wrong) for k, v in breakdown.items()}

    per_case = tuple(
        PerCaseResult(
            case_id=d.case_id,
            predicted_index=selections.get(d.case_id),
            gold_indices=tuple(sorted(gold_indices.get(d.case_id, set()))),
            predicted_months=months.get(d.case_id),
            gold_months=full_gold_months[d.case_id],
            error_category=per_case_categories.get(d.case_id),
        )
        for d in decisions
    )
    return EvaluationReport(
        detection=detection,
        sentence_selection_f1=sel_f1,
        extraction_f1=score.extraction_f1,
        avg_month_error=score.avg_month_error,
        duration_accuracy_given_correct_sentence=acc_given_correct,
        error_breakdown=breakdown,
        per_case=per_case,
    )


def evaluate_predictions(
    decisions: list[Decision],
    annotations: list[AnnotationRecord],
    lexicon: Lexicon,
    results: list[ExtractionResult],
    detected: set[tuple[str, int]] | None = None,
) -> EvaluationReport:
    """Score a batch of extraction results against annotations."""
    selections = {r.case_id: r.sentence_index for r in results}
    months = {r.case_id: r.months for r in results}
    if detected is None:
        detected = {
            (r.case_id, r.sentence_index) for r in results if r.sentence_index is not None
        }
    return assemble_report(decisions, annotations, lexicon, selections, detected, months)


def evaluate_rule_based(
    decisions: list[Decision],
    annotations: list[AnnotationRecord],
    lexicon: Lexicon,
    scoring: DurationScoringConfig = DurationScoringConfig(),
) -> EvaluationReport:
    """Score the rule-based pipeline; detection = candidates above threshold."""
    detected: set[tuple[str, int]] = set()
    results = []
    for decision in decisions:
        for scored in score_candidates(decision, lexicon):
            if scored.score >= lexicon.threshold:
                detected.add((decision.case_id, scored.sentence_index))
        chosen = select_sentence_rule_based(decision, lexicon)
        results.append(extract(decision, chosen, lexicon, scoring))
    return evaluate_predictions(decisions, annotations, lexicon, results, detected)


def make_folds(case_ids: list[str], num_folds: int, seed: int) -> list[list[str]]:
    """Seeded partition of case ids into contiguous folds."""
    ordered = sorted(case_ids)
    rng = np.random.default_rng(seed)
    permuted = [ordered[i] for i in rng.permutation(len(ordered))]
    return [list(fold) for fold in np.array_split(permuted, num_folds)]


def cross_validate(
    decisions: list[Decision],
    annotations: list[AnnotationRecord],
    lexicon: Lexicon,
    kind: str,
    config: CrossValConfig = CrossValConfig(),
    scoring: DurationScoringConfig = DurationScoringConfig(),
    **hyperparams,
) -> EvaluationReport:
    """Document-level k-fold evaluation; every decision is tested once."""
    if len(decisions) < config.num_folds:
        raise ValueError(
            f"fewer decisions than folds ({len(decisions)} < {config.num_folds})"
        )
    folds = make_folds([d.case_id for d in decisions], config.num_folds, config.seed)
    by_id = {d.case_id: d for d in decisions}
    anns_by_case: dict[str, list[AnnotationRecord]] = {}
    for record in annotations:
        anns_by_case.setdefault(record.case_id, []).append(record)

    selections: dict[str, int | None] = {}
    months: dict[str, int | None] = {}
    detected: set[tuple[str, int]] = set()
    for fold in folds:
        test_ids = set(fold)
        train_decisions = [d for d in decisions if d.case_id not in test_ids]
        train_annotations = [
            r for r in annotations if r.case_id not in test_ids
        ]
        assert test_ids.isdisjoint(d.case_id for d in train_decisions)
        model = train_on_decisions(
            train_decisions, train_annotations, lexicon, kind, seed=config.seed, **hyperparams
        )
        for case_id in fold:
            decision = by_id[case_id]
            for idx in sentences_above_threshold(
                model, decision, lexicon, config.detection_threshold
            ):
                detected.add((case_id, idx))
            chosen = select_sentence_supervised(model, decision, lexicon)
            selections[case_id] = chosen
            months[case_id] = extract(decision, chosen, lexicon, scoring).months

    return assemble_report(decisions, annotations, lexicon, selections, detected, months)


class PunishmentExtractor(ParamsMixin):
    """End-to-end estimator: select the punishment sentence, extract months.

    ``method`` is one of rule_based / svm / rf. Supervised methods need
    ``fit`` with decisions and annotation records; the rule-based method is
    ready as soon as it has a lexicon.
    """

    def __init__(
        self,
        method: str = "rule_based",
        lexicon: Lexicon | None = None,
        seed: int = 0,
        detection_threshold: float = 0.5,
        scoring: DurationScoringConfig = DurationScoringConfig(),
    ):
        self.method = method
        self.lexicon = lexicon
        self.seed = seed
        self.detection_threshold = detection_threshold
        self.scoring = scoring

    def _require_lexicon(self) -> Lexicon:
        if self.lexicon is None:
            raise ValueError("lexicon is required; pass one to the constructor")
        return self.lexicon

    def fit(self, decisions: list[Decision], annotations: list[AnnotationRecord] | None = None):
        lexicon = self._require_lexicon()
        if self.method == "rule_based":
            self.model_ = None
            return self
        if annotations is None:
            raise ValueError(f"method {self.method!r} requires annotations to fit")
        self.model_ = train_on_decisions(
            decisions, annotations, lexicon, self.method, seed=self.seed
        )
        return self

    def select(self, decision: Decision) -> int | None:
        lexicon = self._require_lexicon()
        if self.method == "rule_based":
            return select_sentence_rule_based(decision, lexicon)
        if getattr(self, "model_", None) is None:
            raise ValueError("supervised extractor is not fitted")
        return select_sentence_supervised(self.model_, decision, lexicon)

    def predict(self, decisions: list[Decision]) -> list[ExtractionResult]:
        lexicon = self._require_lexicon()
        return [
            extract(d, self.select(d), lexicon, self.scoring) for d in decisions
        ]
