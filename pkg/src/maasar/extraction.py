"""Duration extraction from a selected sentence.

Two routes, in fixed order of precedence: the decomposition heuristic for
verdicts phrased as a total term split into an actual part and a conditional
part (exactly three duration numbers with first = second + third, the second
being the served term); otherwise per-span scoring by unit proximity, nearby
actual-imprisonment markers, probation/fine adjacency penalties, and a mild
late-position bonus, taking the best span within the sentence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .corpus import Decision, Sentence
from .lexicon import Lexicon
from .numbers import NumberSpan, detect_spans, span_months


@dataclass(frozen=True)
class DecompositionCandidate:
    """Total/actual/conditional span triple satisfying total = actual + conditional."""

    total: NumberSpan
    actual: NumberSpan
    conditional: NumberSpan


@dataclass(frozen=True)
class DurationScoringConfig:
    """Weights for the per-span fallback scorer."""

    unit_proximity_weight: float = 2.0
    actual_marker_weight: float = 2.0
    probation_penalty: float = 2.5
    fine_penalty: float = 2.5
    position_bonus: float = 0.5
    marker_window: int = 3


@dataclass(frozen=True)
class ExtractionResult:
    case_id: str
    sentence_index: int | None
    months: int | None
    method: str  # decomposition | scored | none
    candidates: tuple[NumberSpan, ...] = field(default_factory=tuple)
    error_category: str | None = None

    def to_dict(self) -> dict:
        return {
            "case_id": self.case_id,
            "sentence_index": self.sentence_index,
            "months": self.months,
            "method": self.method,
            "candidates": [c.to_dict() for c in self.candidates],
            "error_category": self.error_category,
        }


def decomposition_candidate(spans: list[NumberSpan]) -> DecompositionCandidate | None:
    """The total/actual/conditional triple, when the sentence has that shape.

    Requires exactly three duration spans (spans with no resolvable unit,
    e.g. docket fragments or dates, do not count) whose first equals the sum
    of the latter two once normalized to months.
    """
    durations = [s for s in spans if s.attached_unit is not None]
    if len(durations) != 3:
        return None
    total, actual, conditional = durations
    if span_months(total) == span_months(actual) + span_months(conditional):
        return DecompositionCandidate(total, actual, conditional)
    return None


def try_decomposition(spans: list[NumberSpan]) -> int | None:
    """Served months via the decomposition rule, or None when it does not apply."""
    candidate = decomposition_candidate(spans)
    return span_months(candidate.actual) if candidate else None


def _distance_to_markers(span: NumberSpan, positions: list[int]) -> int | None:
    if not positions:
        return None

    def dist(p: int) -> int:
        if p > span.end_token:
            return p - span.end_token
        if p < span.start_token:
            return span.start_token - p
        return 0

    return min(dist(p) for p in positions)


def score_duration_candidates(
    sentence: Sentence,
    spans: list[NumberSpan],
    lexicon: Lexicon,
    config: DurationScoringConfig = DurationScoringConfig(),
) -> int | None:
    """Best-scoring duration span within the sentence; no absolute threshold.

    None when no span has a resolvable unit. Ties go to the later span.
    """
    candidates = [s for s in spans if s.attached_unit is not None]
    if not candidates:
        return None

    text = sentence.text
    actual_pos = lexicon.marker_positions(text, lexicon.actual_markers)
    probation_pos = lexicon.marker_positions(text, lexicon.probation_markers)
    fine_pos = lexicon.marker_positions(text, lexicon.fine_markers)
    n_tokens = max(sentence.token_count, 1)

    def score(span: NumberSpan) -> float:
        value = config.unit_proximity_weight / (1.0 + span.unit_distance)
        d_actual = _distance_to_markers(span, actual_pos)
        if d_actual is not None:
            value += config.actual_marker_weight / (1.0 + d_actual)
        d_prob = _distance_to_markers(span, probation_pos)
        if d_prob is not None and d_prob <= config.marker_window:
            value -= config.probation_penalty
        d_fine = _distance_to_markers(span, fine_pos)
        if d_fine is not None and d_fine <= config.marker_window:
            value -= config.fine_penalty
        value += config.position_bonus * (span.start_token / max(n_tokens - 1, 1))
        return value

    best = max(candidates, key=lambda s: (score(s), s.start_token))
    return span_months(best)


def extract(
    decision: Decision,
    sentence_index: int | None,
    lexicon: Lexicon,
    config: DurationScoringConfig = DurationScoringConfig(),
    include_half: bool = True,
) -> ExtractionResult:
    """Full duration extraction for one decision, given the chosen sentence."""
    if sentence_index is None:
        return ExtractionResult(decision.case_id, None, None, "none")
    sentence = decision.sentences[sentence_index]
    spans = detect_spans(sentence, lexicon.numerals, include_half)
    months = try_decomposition(spans)
    if months is not None:
        return ExtractionResult(
            decision.case_id, sentence_index, months, "decomposition", tuple(spans)
        )
    months = score_duration_candidates(sentence, spans, lexicon, config)
    if months is not None:
        return ExtractionResult(
            decision.case_id, sentence_index, months, "scored", tuple(spans)
        )
    return ExtractionResult(decision.case_id, sentence_index, None, "none", tuple(spans))
