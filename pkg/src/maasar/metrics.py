"""Evaluation metrics: detection P/R/F1, per-case selection and duration
accuracy, agreement coefficients, error taxonomy, and duration histograms.

Selecting exactly one sentence per case makes every false positive pair up
with a false negative, so the per-case selection and duration scores have
precision = recall and are reported as a single F1 number.
"""

from __future__ import annotations

import statistics
import warnings
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .corpus import Sentence
from .features import DOCKET_RE
from .lexicon import Lexicon, match_tiers
from .numbers import detect_spans


@dataclass(frozen=True)
class PRF:
    precision: float
    recall: float
    f1: float
    flags: tuple[str, ...] = ()

    def to_dict(self) -> dict:
        return {
            "precision": self.precision,
            "recall": self.recall,
            "f1": self.f1,
            "flags": list(self.flags),
        }


class ErrorCategory(str, Enum):
    PROBATION = "probation"
    PRIOR_CASE_REFERENCE = "prior_case_reference"
    FINE = "fine"
    PROCEDURAL = "procedural"
    MISC = "misc"


@dataclass(frozen=True)
class PerCaseResult:
    case_id: str
    predicted_index: int | None
    gold_indices: tuple[int, ...]
    predicted_months: int | None
    gold_months: int
    error_category: str | None = None

    def to_dict(self) -> dict:
        return {
            "case_id": self.case_id,
            "predicted_index": self.predicted_index,
            "gold_indices": list(self.gold_indices),
            "predicted_months": self.predicted_months,
            "gold_months": self.gold_months,
            "error_category": self.error_category,
        }


@dataclass(frozen=True)
class EvaluationReport:
    detection: PRF
    sentence_selection_f1: float
    extraction_f1: float
    avg_month_error: float
    duration_accuracy_given_correct_sentence: float | None
    error_breakdown: Mapping[str, float]
    per_case: tuple[PerCaseResult, ...] = ()

    def to_dict(self) -> dict:
        return {
            "detection": self.detection.to_dict(),
            "sentence_selection_f1": self.sentence_selection_f1,
            "extraction_f1": self.extraction_f1,
            "avg_month_error": self.avg_month_error,
            "duration_accuracy_given_correct_sentence": (
                self.duration_accuracy_given_correct_sentence
            ),
            "error_breakdown": dict(self.error_breakdown),
            "per_case": [c.to_dict() for c in self.per_case],
        }


def _f1(precision: float, recall: float) -> float:
    if precision + recall == 0:
        return 0.0
    return 2 * precision * recall / (precision + recall)


def detection_prf(predicted: Iterable[tuple], gold: Iterable[tuple]) -> PRF:
    """Micro-averaged set precision/recall/F1 over (case_id, index) pairs.

    Undefined ratios (empty predictions or empty gold) are reported as 0
    with an explanatory flag.
    """
    predicted = set(predicted)
    gold = set(gold)
    tp = len(predicted & gold)
    flags = []
    if predicted:
        precision = tp / len(predicted)
    else:
        precision = 0.0
        flags.append("precision_undefined_empty_predictions")
    if gold:
        recall = tp / len(gold)
    else:
        recall = 0.0
        flags.append("recall_undefined_empty_gold")
    return PRF(precision, recall, _f1(precision, recall), tuple(flags))


def selection_f1(
    predictions: Mapping[str, int | None], gold: Mapping[str, set[int] | frozenset[int]]
) -> float:
    """Fraction of cases whose single predicted sentence is in the gold set.

    One prediction per case makes precision equal recall, so the fraction
    itself is the F1. A case with no gold sentence counts as a hit only for
    a None prediction.
    """
    if not predictions:
        return 0.0
    hits = 0
    for case_id, predicted in predictions.items():
        gold_set = gold.get(case_id, set())
        if predicted is None:
            hits += not gold_set
        else:
            hits += predicted in gold_set
    return hits / len(predictions)


@dataclass(frozen=True)
class ExtractionScore:
    extraction_f1: float
    avg_month_error: float


def extraction_f1_and_error(
    predicted_months: Mapping[str, int | None], gold_months: Mapping[str, int]
) -> ExtractionScore:
    """Exact-month-match rate and mean absolute error in months.

    A missing prediction counts as a miss and contributes |0 - gold| to the
    error; per-case data lets callers recompute other conventions.
    """
    if not gold_months:
        return ExtractionScore(0.0, 0.0)
    exact = 0
    errors = []
    for case_id, gold in gold_months.items():
        predicted = predicted_months.get(case_id)
        if predicted is not None and predicted == gold:
            exact += 1
        errors.append(abs((predicted or 0) - gold))
    n = len(gold_months)
    return ExtractionScore(exact / n, sum(errors) / n)


def cohen_kappa(ratings_a: Sequence, ratings_b: Sequence) -> float:
    """Cohen's kappa between two raters: (p_o - p_e) / (1 - p_e)."""
    if len(ratings_a) != len(ratings_b):
        raise ValueError("rating vectors must have equal length")
    if not ratings_a:
        raise ValueError("rating vectors must be non-empty")
    n = len(ratings_a)
    observed = sum(a == b for a, b in zip(ratings_a, ratings_b)) / n
    labels = set(ratings_a) | set(ratings_b)
    expected = 0.0
    for label in labels:
        pa = sum(a == label for a in ratings_a) / n
        pb = sum(b == label for b in ratings_b) / n
        expected += pa * pb
    if expected == 1.0:
        warnings.warn("degenerate agreement: expected agreement is 1", stacklevel=2)
        return 1.0 if observed == 1.0 else 0.0
    return (observed - expected) / (1.0 - expected)


def fleiss_kappa(ratings: Sequence[Sequence], num_classes: int) -> float:
    """Fleiss' kappa over an item x rater matrix of categorical labels."""
    if not ratings:
        raise ValueError("rating matrix must be non-empty")
    n_raters = len(ratings[0])
    if n_raters < 2:
        raise ValueError("need at least two raters")
    for row in ratings:
        if len(row) != n_raters:
            raise ValueError("every item must be rated by all raters")
        if any(label is None for label in row):
            raise ValueError("missing ratings are not allowed")
    labels = sorted({label for row in ratings for label in row}, key=str)
    if len(labels) > num_classes:
        raise ValueError(
            f"found {len(labels)} distinct labels, more than num_classes={num_classes}"
        )
    column = {label: j for j, label in enumerate(labels)}

    n_items = len(ratings)
    counts = [[0] * num_classes for _ in range(n_items)]
    for i, row in enumerate(ratings):
        for label in row:
            counts[i][column[label]] += 1

    total = n_items * n_raters
    proportions = [sum(counts[i][j] for i in range(n_items)) / total for j in range(num_classes)]
    expected = sum(p * p for p in proportions)
    per_item = [
        (sum(c * c for c in counts[i]) - n_raters) / (n_raters * (n_raters - 1))
        for i in range(n_items)
    ]
    observed = sum(per_item) / n_items
    if expected == 1.0:
        warnings.warn("degenerate agreement: expected agreement is 1", stacklevel=2)
        return 1.0
    return (observed - expected) / (1.0 - expected)


def categorize_error(predicted_sentence: Sentence, lexicon: Lexicon) -> ErrorCategory:
    """Why a wrongly selected sentence fooled the model.

    Precedence: probation, then prior-case reference (docket pattern or a
    past-tense sentencing verb), then fine, then procedural (number present
    without a time unit), else misc.
    """
    text = predicted_sentence.text
    if lexicon.marker_positions(text, lexicon.probation_markers):
        return ErrorCategory.PROBATION
    if DOCKET_RE.search(text):
        return ErrorCategory.PRIOR_CASE_REFERENCE
    hits = match_tiers(predicted_sentence, lexicon)
    if any(
        h.tier == "moderate_negative" and len(h.surface) > 1
        for h in hits.hits
    ):
        return ErrorCategory.PRIOR_CASE_REFERENCE
    if lexicon.marker_positions(text, lexicon.fine_markers):
        return ErrorCategory.FINE
    spans = detect_spans(predicted_sentence, lexicon.numerals)
    if spans and all(s.attached_unit is None for s in spans):
        return ErrorCategory.PROCEDURAL
    return ErrorCategory.MISC


@dataclass(frozen=True)
class Histogram:
    bucket_months: int
    buckets: tuple[tuple[int, int, int], ...]  # (start, end inclusive, count)
    median: float | None
    fraction_at_or_below_15: float | None

    def to_dict(self) -> dict:
        return {
            "bucket_months": self.bucket_months,
            "buckets": [list(b) for b in self.buckets],
            "median": self.median,
            "fraction_at_or_below_15": self.fraction_at_or_below_15,
        }

    def to_csv_rows(self) -> list[str]:
        return [f"{start},{end},{count}" for start, end, count in self.buckets]


def punishment_histogram(results: Iterable, bucket_months: int) -> Histogram:
    """Bucketed counts of extracted durations plus headline statistics."""
    if bucket_months < 1:
        raise ValueError("bucket_months must be >= 1")
    months = [r.months for r in results if getattr(r, "months", None) is not None]
    if not months:
        return Histogram(bucket_months, (), None, None)
    counts: dict[int, int] = {}
    for m in months:
        counts[m // bucket_months] = counts.get(m // bucket_months, 0) + 1
    buckets = tuple(
        (k * bucket_months, (k + 1) * bucket_months - 1, counts[k])
        for k in sorted(counts)
    )
    return Histogram(
        bucket_months,
        buckets,
        float(statistics.median(months)),
        sum(m <= 15 for m in months) / len(months),
    )
