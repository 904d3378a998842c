"""Data model and ingestion for court sentencing decisions.

A corpus is a directory of UTF-8 ``.txt`` files (one decision each) plus a
``metadata.json`` sidecar: an array of ``{filename, case_id, year, court}``
objects. Annotations are line-delimited JSON records with keys ``case_id``,
``sentence_index``, ``is_punishment`` and (for positives) ``months``.
"""

from __future__ import annotations

import json
import logging
import math
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, NamedTuple

logger = logging.getLogger(__name__)

# Legal abbreviations whose trailing period must not end a sentence.
# Entries are compared against the whole whitespace-delimited word that
# precedes the period, after stripping opening brackets/quotes.
DEFAULT_ABBREVIATIONS = frozenset(
    ["ת.פ", "ע.פ", "ת.א", "בג.ץ", "מ.י", "ד.נ", "פרופ", "עמ", "מס", "טל"]
)

_TERMINALS = ".?!"
_OPENERS = "([{\"'"


@dataclass(frozen=True)
class Sentence:
    """One segmented sentence with its position inside the decision."""

    index: int
    text: str
    token_count: int
    relative_position: float

    def tokens(self) -> list[str]:
        return self.text.split()


@dataclass(frozen=True)
class Decision:
    """A single sentencing decision: raw text plus segmented sentences."""

    case_id: str
    year: int
    court: str
    raw_text: str
    sentences: tuple[Sentence, ...] = field(default_factory=tuple)

    @classmethod
    def from_text(
        cls,
        case_id: str,
        raw_text: str,
        year: int = 0,
        court: str = "",
        abbreviations: Iterable[str] = DEFAULT_ABBREVIATIONS,
    ) -> "Decision":
        return cls(
            case_id=case_id,
            year=year,
            court=court,
            raw_text=raw_text,
            sentences=tuple(segment_sentences(raw_text, abbreviations)),
        )


@dataclass(frozen=True)
class AnnotationRecord:
    """Gold label for one sentence: punishment flag and months when positive."""

    case_id: str
    sentence_index: int
    is_punishment: bool
    months: int | None = None

    MONTHS_CAP = 1200

    def validate(self) -> None:
        if self.is_punishment:
            if self.months is None:
                raise ValueError("punishment record must carry months")
            if not 0 <= self.months <= self.MONTHS_CAP:
                raise ValueError(f"months {self.months} outside [0, {self.MONTHS_CAP}]")
        elif self.months is not None:
            raise ValueError("non-punishment record must not carry months")


@dataclass(frozen=True)
class CorpusStats:
    num_cases: int
    num_sentences: int
    num_words: int
    sentence_length_mean: float
    sentence_length_std: float
    sentence_length_min: int
    sentence_length_max: int

    def to_dict(self) -> dict:
        return {
            "num_cases": self.num_cases,
            "num_sentences": self.num_sentences,
            "num_words": self.num_words,
            "sentence_length_mean": self.sentence_length_mean,
            "sentence_length_std": self.sentence_length_std,
            "sentence_length_min": self.sentence_length_min,
            "sentence_length_max": self.sentence_length_max,
        }


class LoadError(NamedTuple):
    """One recoverable ingestion problem, attributed to its source."""

    source: str
    message: str


class CorpusLoadResult(NamedTuple):
    decisions: list[Decision]
    errors: list[LoadError]


class AnnotationLoadResult(NamedTuple):
    records: list[AnnotationRecord]
    errors: list[LoadError]


def _is_abbreviation(word: str, abbreviations: frozenset) -> bool:
    word = word.lstrip(_OPENERS)
    if not word:
        return False
    return word in abbreviations or word.rstrip(".") in abbreviations


def segment_sentences(
    raw_text: str, abbreviations: Iterable[str] = DEFAULT_ABBREVIATIONS
) -> list[Sentence]:
    """Split text into sentences on terminal punctuation (. ? !).

    A terminal run only splits when followed by whitespace or end of text,
    which keeps decimal numbers, dates (31.5.12) and docket tokens (1124/04)
    intact; a period preceded by a configured abbreviation or a single-letter
    initial never splits.
    """
    abbrev = frozenset(abbreviations)
    chunks: list[str] = []
    start = 0
    i = 0
    n = len(raw_text)
    while i < n:
        ch = raw_text[i]
        if ch in _TERMINALS:
            j = i
            while j + 1 < n and raw_text[j + 1] in _TERMINALS:
                j += 1
            followed_ok = j + 1 >= n or raw_text[j + 1].isspace()
            if followed_ok:
                word_start = i
                while word_start > start and not raw_text[word_start - 1].isspace():
                    word_start -= 1
                word = raw_text[word_start:i]
                if not (raw_text[i] == "." and i == j and _is_abbreviation(word, abbrev)):
                    chunks.append(raw_text[start : j + 1])
                    start = j + 1
            i = j + 1
        else:
            i += 1
    if start < n:
        chunks.append(raw_text[start:])

    texts = [c.strip() for c in chunks]
    texts = [t for t in texts if t]
    total = len(texts)
    sentences = []
    for idx, text in enumerate(texts):
        rel = idx / (total - 1) if total > 1 else 0.0
        sentences.append(
            Sentence(
                index=idx,
                text=text,
                token_count=len(text.split()),
                relative_position=rel,
            )
        )
    return sentences


def load_corpus(
    directory_path: str | Path,
    metadata_path: str | Path | None = None,
    abbreviations: Iterable[str] = DEFAULT_ABBREVIATIONS,
) -> CorpusLoadResult:
    """Load every ``.txt`` decision in a directory, sorted by case_id.

    ``metadata_path`` defaults to ``metadata.json`` inside the directory.
    Problems are collected per file (unreadable file, bad encoding, missing
    metadata, duplicate case_id) and loading continues past them.
    """
    directory = Path(directory_path)
    if metadata_path is None:
        metadata_path = directory / "metadata.json"
    errors: list[LoadError] = []
    if not Path(metadata_path).exists() and not any(directory.glob("*.txt")):
        return CorpusLoadResult([], [])
    try:
        raw_meta = json.loads(Path(metadata_path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        return CorpusLoadResult([], [LoadError(str(metadata_path), str(exc))])

    by_filename: dict[str, dict] = {}
    for entry in raw_meta:
        by_filename[entry["filename"]] = entry

    decisions = []
    seen_ids: set[str] = set()
    seen_files: set[str] = set()
    for path in sorted(directory.glob("*.txt")):
        seen_files.add(path.name)
        meta = by_filename.get(path.name)
        if meta is None:
            errors.append(LoadError(path.name, "file has no metadata entry"))
            continue
        try:
            data = path.read_bytes()
            text = data.decode("utf-8")
        except OSError as exc:
            errors.append(LoadError(path.name, f"unreadable: {exc}"))
            continue
        except UnicodeDecodeError as exc:
            errors.append(
                LoadError(path.name, f"not valid UTF-8 at byte offset {exc.start}")
            )
            continue
        case_id = str(meta["case_id"])
        if not case_id:
            errors.append(LoadError(path.name, "empty case_id"))
            continue
        if case_id in seen_ids:
            errors.append(LoadError(path.name, f"duplicate case_id {case_id!r}"))
            continue
        seen_ids.add(case_id)
        decisions.append(
            Decision.from_text(
                case_id=case_id,
                raw_text=text,
                year=int(meta.get("year", 0)),
                court=str(meta.get("court", "")),
                abbreviations=abbreviations,
            )
        )
    for filename in sorted(set(by_filename) - seen_files):
        errors.append(LoadError(filename, "listed in metadata but file not found"))

    decisions.sort(key=lambda d: d.case_id)
    return CorpusLoadResult(decisions, errors)


def load_annotations(path: str | Path) -> AnnotationLoadResult:
    """Parse line-delimited annotation records.

    Malformed records are rejected with a per-line error; duplicate
    (case_id, sentence_index) pairs resolve last-wins with a warning.
    """
    errors: list[LoadError] = []
    by_key: dict[tuple[str, int], AnnotationRecord] = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            source = f"{path}:{lineno}"
            try:
                obj = json.loads(line)
            except json.JSONDecodeError as exc:
                errors.append(LoadError(source, f"bad JSON: {exc}"))
                continue
            try:
                record = AnnotationRecord(
                    case_id=str(obj["case_id"]),
                    sentence_index=int(obj["sentence_index"]),
                    is_punishment=bool(obj["is_punishment"]),
                    months=int(obj["months"]) if "months" in obj else None,
                )
                record.validate()
            except (KeyError, TypeError, ValueError) as exc:
                errors.append(LoadError(source, f"rejected: {exc}"))
                continue
            key = (record.case_id, record.sentence_index)
            if key in by_key:
                logger.warning("duplicate annotation for %s; keeping the later record", key)
            by_key[key] = record
    return AnnotationLoadResult(list(by_key.values()), errors)


def corpus_stats(decisions: Iterable[Decision]) -> CorpusStats:
    """Population statistics over sentence lengths (in whitespace tokens)."""
    decisions = list(decisions)
    lengths = [s.token_count for d in decisions for s in d.sentences]
    num_cases = len(decisions)
    if not lengths:
        return CorpusStats(num_cases, 0, 0, 0.0, 0.0, 0, 0)
    total = sum(lengths)
    mean = total / len(lengths)
    var = sum((x - mean) ** 2 for x in lengths) / len(lengths)
    return CorpusStats(
        num_cases=num_cases,
        num_sentences=len(lengths),
        num_words=total,
        sentence_length_mean=mean,
        sentence_length_std=math.sqrt(var),
        sentence_length_min=min(lengths),
        sentence_length_max=max(lengths),
    )


def prelabel_negatives(decision: Decision, lexicon) -> list[tuple[int, bool]]:
    """Mark sentences with no filter keyword as automatic negatives."""
    return [
        (s.index, not lexicon.contains_filter_keyword(s.text))
        for s in decision.sentences
    ]
