"""Tiered keyword lists and the numeral lexicon.

The lexicon is data, not code: a JSON document with one array per scored
tier (entries ``{"surface": ..., "weight": optional}``), the filter/marker
lists, the time-unit surface forms, and a sibling ``numerals`` section.
A default Hebrew lexicon ships with the package and is meant to be edited.
"""

from __future__ import annotations

import dataclasses
import json
import os
from dataclasses import dataclass, field
from importlib import resources
from pathlib import Path
from typing import Iterable, Mapping

from .numbers import TimeUnit
from .tokens import strip_token

LEXICON_ENV_VAR = "MAASAR_LEXICON"

TIER_NAMES = ("strong_positive", "moderate_positive", "moderate_negative", "strong_negative")

_DEFAULT_TIER_WEIGHTS = {
    "strong_positive": 3.0,
    "moderate_positive": 1.0,
    "moderate_negative": -1.0,
    "strong_negative": -3.0,
}


class LexiconError(ValueError):
    """Raised when a lexicon file is missing sections or violates invariants."""


@dataclass(frozen=True)
class StructuralWeights:
    """Score adjustments applied on top of tier hits."""

    number_with_unit_bonus: float = 1.0
    number_without_unit_penalty: float = -1.0
    fine_marker_penalty: float = -1.0


@dataclass(frozen=True)
class TierHit:
    tier: str
    surface: str
    position: int  # token index for words, character offset for marker chars
    weight: float


@dataclass(frozen=True)
class TierHits:
    strong_positive: int = 0
    moderate_positive: int = 0
    moderate_negative: int = 0
    strong_negative: int = 0
    hits: tuple[TierHit, ...] = ()

    def count(self, tier: str) -> int:
        return getattr(self, tier)

    def weighted_sum(self) -> float:
        return sum(h.weight for h in self.hits)


@dataclass(frozen=True)
class NumeralLexicon:
    """Hebrew number words, grouped by grammatical role.

    ``vocabulary`` holds every single word that may appear inside a number
    sequence; canonical maps drive generation (first listed variant wins).
    """

    zero_words: Mapping[str, int]
    units_words: Mapping[str, int]
    teens_words: Mapping[str, int]
    tens_words: Mapping[str, int]
    hundreds_words: Mapping[str, int]
    hundreds_single: Mapping[str, int]
    hundred_plural_markers: frozenset[str]
    conjunction_forms: tuple[str, ...]
    unit_only_words: Mapping[str, TimeUnit]
    dual_unit_words: Mapping[str, TimeUnit]
    half_words: frozenset[str]
    time_unit_words: Mapping[str, TimeUnit]
    vocabulary: frozenset[str]
    canonical_zero: str
    canonical_units: Mapping[str, Mapping[int, str]]
    canonical_teens: Mapping[str, Mapping[int, str]]
    canonical_tens: Mapping[int, str]
    canonical_hundreds: Mapping[int, str]

    @property
    def canonical_conjunction(self) -> str:
        return self.conjunction_forms[0]


@dataclass(frozen=True)
class Lexicon:
    """Keyword tiers, marker lists, weights and the numeral lexicon."""

    filter_keywords: frozenset[str]
    strong_positive: Mapping[str, float]
    moderate_positive: Mapping[str, float]
    moderate_negative: Mapping[str, float]
    strong_negative: Mapping[str, float]
    time_units: Mapping[str, TimeUnit]
    fine_markers: frozenset[str]
    probation_markers: frozenset[str]
    actual_markers: frozenset[str]
    threshold: float
    tier_weights: Mapping[str, float]
    structural: StructuralWeights = field(default_factory=StructuralWeights)
    numerals: NumeralLexicon | None = None

    def tier(self, name: str) -> Mapping[str, float]:
        return getattr(self, name)

    def contains_filter_keyword(self, text: str) -> bool:
        return any(keyword in text for keyword in self.filter_keywords)

    def marker_positions(self, text: str, markers: Iterable[str]) -> list[int]:
        """Start token index of every marker occurrence (phrases supported)."""
        stripped = [strip_token(t) for t in text.split()]
        positions: list[int] = []
        for marker in markers:
            words = marker.split()
            span = len(words)
            for i in range(0, len(stripped) - span + 1):
                if stripped[i : i + span] == words:
                    positions.append(i)
        positions.sort()
        return positions


def default_lexicon_path() -> Path:
    env = os.environ.get(LEXICON_ENV_VAR)
    if env:
        return Path(env)
    return Path(str(resources.files("maasar").joinpath("data/default_lexicon.json")))


def _require(doc: dict, key: str) -> object:
    if key not in doc:
        raise LexiconError(f"lexicon file is missing required section {key!r}")
    return doc[key]


def _load_tier(doc: dict, name: str, default_weight: float) -> dict[str, float]:
    entries = _require(doc, name)
    tier: dict[str, float] = {}
    for entry in entries:
        if isinstance(entry, str):
            surface, weight = entry, default_weight
        else:
            surface = entry["surface"]
            weight = float(entry.get("weight", default_weight))
        tier[surface] = weight
    return tier


def _unit_map(section: Mapping[str, list[str]]) -> dict[str, TimeUnit]:
    out: dict[str, TimeUnit] = {}
    for unit_name, surfaces in section.items():
        unit = TimeUnit(unit_name)
        for surface in surfaces:
            out[surface] = unit
    return out


def _value_map(
    section: Mapping[str, list[str]], lo: int, hi: int, what: str, step: int = 1
) -> dict[str, int]:
    out: dict[str, int] = {}
    for key, variants in section.items():
        value = int(key)
        if not (lo <= value <= hi and (value - lo) % step == 0):
            raise LexiconError(f"{what} value {value} outside its declared range")
        for variant in variants:
            out[variant] = value
    return out


def _canonical(section: Mapping[str, list[str]]) -> dict[int, str]:
    return {int(k): v[0] for k, v in section.items()}


def load_numerals(section: Mapping) -> NumeralLexicon:
    required = (
        "zero", "units_feminine", "units_masculine", "teens_feminine",
        "teens_masculine", "tens", "hundreds", "conjunctions",
    )
    for key in required:
        if key not in section:
            raise LexiconError(f"numerals section is missing {key!r}")
    zero = {w: 0 for w in section["zero"]}
    units_f = _value_map(section["units_feminine"], 1, 10, "units")
    units_m = _value_map(section["units_masculine"], 1, 10, "units")
    teens_f = _value_map(section["teens_feminine"], 11, 19, "teens")
    teens_m = _value_map(section["teens_masculine"], 11, 19, "teens")
    tens = _value_map(section["tens"], 20, 90, "tens", step=10)
    hundreds = _value_map(section["hundreds"], 100, 900, "hundreds", step=100)
    conjunctions = tuple(section["conjunctions"])
    if not conjunctions:
        raise LexiconError("numerals.conjunctions must not be empty")
    half = frozenset(section.get("half", []))

    units = {**units_f, **units_m}
    teens = {**teens_f, **teens_m}
    hundreds_single = {w: v for w, v in hundreds.items() if " " not in w}
    plural_markers = frozenset(
        w.split()[1] for w in hundreds if " " in w
    )
    vocab = set(zero) | set(units) | set(tens) | set(hundreds_single) | plural_markers
    for phrase in teens:
        vocab.update(phrase.split())
    return NumeralLexicon(
        zero_words=zero,
        units_words=units,
        teens_words=teens,
        tens_words=tens,
        hundreds_words=hundreds,
        hundreds_single=hundreds_single,
        hundred_plural_markers=plural_markers,
        conjunction_forms=conjunctions,
        unit_only_words={},
        dual_unit_words={},
        half_words=half,
        time_unit_words={},
        vocabulary=frozenset(vocab),
        canonical_zero=section["zero"][0],
        canonical_units={
            "feminine": _canonical(section["units_feminine"]),
            "masculine": _canonical(section["units_masculine"]),
        },
        canonical_teens={
            "feminine": _canonical(section["teens_feminine"]),
            "masculine": _canonical(section["teens_masculine"]),
        },
        canonical_tens=_canonical(section["tens"]),
        canonical_hundreds=_canonical(section["hundreds"]),
    )


def load_lexicon(
    path: str | Path | None = None,
    *,
    threshold: float | None = None,
    tier_weights: Mapping[str, float] | None = None,
    structural: Mapping[str, float] | None = None,
) -> Lexicon:
    """Load and validate a lexicon file; None loads the bundled default.

    Keyword overrides replace the file's threshold, tier default weights or
    structural adjustments, which is how CLI flags tune the scorer without
    editing the lexicon.
    """
    path = Path(path) if path is not None else default_lexicon_path()
    doc = json.loads(Path(path).read_text(encoding="utf-8"))

    weights = dict(_DEFAULT_TIER_WEIGHTS)
    weights.update(doc.get("tier_weights", {}))
    if tier_weights:
        weights.update(tier_weights)
    if not (
        weights["strong_positive"]
        > weights["moderate_positive"]
        > 0
        > weights["moderate_negative"]
        > weights["strong_negative"]
    ):
        raise LexiconError(
            "tier weights must satisfy strong_positive > moderate_positive > 0 "
            "> moderate_negative > strong_negative"
        )
    tiers = {name: _load_tier(doc, name, weights[name]) for name in TIER_NAMES}

    overlaps = []
    names = list(tiers)
    for i, a in enumerate(names):
        for b in names[i + 1 :]:
            shared = set(tiers[a]) & set(tiers[b])
            if shared:
                overlaps.append(f"{a}/{b}: {sorted(shared)}")
    if overlaps:
        raise LexiconError("tier lists must be disjoint; overlapping entries: " + "; ".join(overlaps))

    time_units = _unit_map(_require(doc, "time_units"))
    numerals = load_numerals(_require(doc, "numerals"))
    unit_only = _unit_map(doc.get("unit_only", {}))
    duals = _unit_map(doc.get("dual_units", {}))
    numerals = dataclasses.replace(
        numerals,
        unit_only_words=unit_only,
        dual_unit_words=duals,
        time_unit_words=time_units,
    )

    structural_doc = dict(doc.get("structural", {}))
    if structural:
        structural_doc.update(structural)
    structural_weights = StructuralWeights(
        number_with_unit_bonus=float(structural_doc.get("number_with_unit_bonus", 1.0)),
        number_without_unit_penalty=float(
            structural_doc.get("number_without_unit_penalty", -1.0)
        ),
        fine_marker_penalty=float(structural_doc.get("fine_marker_penalty", -1.0)),
    )

    return Lexicon(
        filter_keywords=frozenset(_require(doc, "filter_keywords")),
        strong_positive=tiers["strong_positive"],
        moderate_positive=tiers["moderate_positive"],
        moderate_negative=tiers["moderate_negative"],
        strong_negative=tiers["strong_negative"],
        time_units=time_units,
        fine_markers=frozenset(doc.get("fine_markers", [])),
        probation_markers=frozenset(doc.get("probation_markers", [])),
        actual_markers=frozenset(doc.get("actual_markers", [])),
        threshold=float(threshold if threshold is not None else doc.get("threshold", 2.0)),
        tier_weights=weights,
        structural=structural_weights,
        numerals=numerals,
    )


def _is_marker_entry(surface: str) -> bool:
    return len(surface) == 1 and not surface.isalnum()


def match_tiers(sentence, lexicon: Lexicon) -> TierHits:
    """Count tier hits in a sentence.

    Word entries match whole (punctuation-stripped) tokens, phrases match
    consecutive tokens; single-character marker entries (docket slash,
    brackets) match anywhere in the raw text.
    """
    text = sentence.text if hasattr(sentence, "text") else str(sentence)
    stripped = [strip_token(t) for t in text.split()]
    hits: list[TierHit] = []
    counts = dict.fromkeys(TIER_NAMES, 0)
    for tier_name in TIER_NAMES:
        for surface, weight in lexicon.tier(tier_name).items():
            if _is_marker_entry(surface):
                start = 0
                while True:
                    pos = text.find(surface, start)
                    if pos < 0:
                        break
                    hits.append(TierHit(tier_name, surface, pos, weight))
                    counts[tier_name] += 1
                    start = pos + 1
            else:
                words = surface.split()
                span = len(words)
                for i in range(0, len(stripped) - span + 1):
                    if stripped[i : i + span] == words:
                        hits.append(TierHit(tier_name, surface, i, weight))
                        counts[tier_name] += 1
    hits.sort(key=lambda h: (h.tier, h.position, h.surface))
    return TierHits(
        strong_positive=counts["strong_positive"],
        moderate_positive=counts["moderate_positive"],
        moderate_negative=counts["moderate_negative"],
        strong_negative=counts["strong_negative"],
        hits=tuple(hits),
    )
