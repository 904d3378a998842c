"""Rule-based identification of the actual-imprisonment sentence.

Candidates are the sentences containing a filter keyword; each is scored
from its tier hits plus structural cues (a number with a time unit is a
good sign, a bare number or a fine marker is not), and the best candidate
above the threshold wins, ties going to the sentence closest to the end
of the decision.
"""

from __future__ import annotations

from dataclasses import dataclass

from .base import ParamsMixin
from .corpus import Decision, Sentence
from .lexicon import Lexicon, TierHits, match_tiers
from .numbers import detect_spans


@dataclass(frozen=True)
class ScoredSentence:
    sentence_index: int
    score: float
    tier_hits: TierHits
    has_number: bool
    has_time_unit: bool


def filter_candidates(decision: Decision, lexicon: Lexicon) -> list[Sentence]:
    """Sentences containing at least one filter keyword, in document order."""
    return [
        s
        for s in decision.sentences
        if s.token_count > 0 and lexicon.contains_filter_keyword(s.text)
    ]


def rule_score(sentence: Sentence, lexicon: Lexicon) -> ScoredSentence:
    """Tier-weighted score with structural adjustments."""
    hits = match_tiers(sentence, lexicon)
    spans = detect_spans(sentence, lexicon.numerals)
    has_number = bool(spans)
    has_time_unit = any(s.attached_unit is not None for s in spans)

    score = hits.weighted_sum()
    structural = lexicon.structural
    if has_number and has_time_unit:
        score += structural.number_with_unit_bonus
    elif has_number:
        score += structural.number_without_unit_penalty
    fine_hits = len(lexicon.marker_positions(sentence.text, lexicon.fine_markers))
    score += structural.fine_marker_penalty * fine_hits

    return ScoredSentence(
        sentence_index=sentence.index,
        score=score,
        tier_hits=hits,
        has_number=has_number,
        has_time_unit=has_time_unit,
    )


def score_candidates(decision: Decision, lexicon: Lexicon) -> list[ScoredSentence]:
    return [rule_score(s, lexicon) for s in filter_candidates(decision, lexicon)]


def select_sentence_rule_based(decision: Decision, lexicon: Lexicon) -> int | None:
    """Highest-scoring candidate at or above the threshold; ties go late."""
    best: ScoredSentence | None = None
    for scored in score_candidates(decision, lexicon):
        if scored.score < lexicon.threshold:
            continue
        if best is None or (scored.score, scored.sentence_index) > (
            best.score,
            best.sentence_index,
        ):
            best = scored
    return best.sentence_index if best else None


class RuleBasedSelector(ParamsMixin):
    """Estimator-style wrapper around the rule-based sentence selector."""

    def __init__(self, lexicon: Lexicon | None = None):
        self.lexicon = lexicon

    def _lexicon(self) -> Lexicon:
        if self.lexicon is None:
            raise ValueError("lexicon is required; pass one to the constructor")
        return self.lexicon

    def fit(self, decisions=None, y=None):
        self._lexicon()
        return self

    def predict(self, decisions: list[Decision]) -> list[int | None]:
        lexicon = self._lexicon()
        return [select_sentence_rule_based(d, lexicon) for d in decisions]
