"""Fixed-order feature vectors for candidate sentences.

The schema mirrors the signals the rule-based scorer uses (tier hit counts,
number/unit structure, marker counts) plus document-position features. Its
order is versioned; models refuse vectors from a different schema version.
"""

from __future__ import annotations

import re

import numpy as np

from .corpus import Decision, Sentence
from .lexicon import Lexicon, match_tiers
from .numbers import detect_spans

FEATURE_SCHEMA_VERSION = 1

FEATURE_NAMES = (
    "strong_positive_count",
    "moderate_positive_count",
    "moderate_negative_count",
    "strong_negative_count",
    "has_number",
    "has_time_unit",
    "number_count",
    "fine_marker_count",
    "probation_marker_count",
    "docket_marker_count",
    "relative_position",
    "token_count_norm",
    "distance_to_document_end",
)

NUM_FEATURES = len(FEATURE_NAMES)

DOCKET_RE = re.compile(r"\d+/\d+")


def featurize(
    sentence: Sentence,
    decision: Decision,
    lexicon: Lexicon,
    max_token_count: int | None = None,
) -> np.ndarray:
    """Feature vector for one sentence in its decision context.

    ``max_token_count`` is the normalization constant for sentence length;
    when omitted, the longest sentence of the decision is used.
    """
    hits = match_tiers(sentence, lexicon)
    spans = detect_spans(sentence, lexicon.numerals)
    has_unit = any(s.attached_unit is not None for s in spans)
    if max_token_count is None:
        max_token_count = max((s.token_count for s in decision.sentences), default=1)
    max_token_count = max(max_token_count, 1)

    values = (
        float(hits.strong_positive),
        float(hits.moderate_positive),
        float(hits.moderate_negative),
        float(hits.strong_negative),
        1.0 if spans else 0.0,
        1.0 if has_unit else 0.0,
        float(len(spans)),
        float(len(lexicon.marker_positions(sentence.text, lexicon.fine_markers))),
        float(len(lexicon.marker_positions(sentence.text, lexicon.probation_markers))),
        float(len(DOCKET_RE.findall(sentence.text))),
        sentence.relative_position,
        sentence.token_count / max_token_count,
        1.0 - sentence.relative_position,
    )
    return np.array(values, dtype=float)


def featurize_candidates(
    candidates: list[Sentence],
    decision: Decision,
    lexicon: Lexicon,
    max_token_count: int | None = None,
) -> np.ndarray:
    if not candidates:
        return np.empty((0, NUM_FEATURES), dtype=float)
    return np.vstack(
        [featurize(s, decision, lexicon, max_token_count) for s in candidates]
    )
