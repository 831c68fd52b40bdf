"""Normalized review-corpus schema and ingestion adapters.

Everything downstream consumes one JSON-Lines schema, one paper per line:

    {"paper_id": str, "venue": str, "gold_decision": "accept"|"reject",
     "source": "PRA"|"PeerRead"|"MOPRD"|"Synthetic",
     "reviews": [{"review_id": str, "text": str,
                  "sentence_annotations": [{"sentence": str,
                                            "aspects": [label...],
                                            "sentiment": str,
                                            "confidence": number?}]?,
                  "aspect_scores": {label: number in [0,1]}?}]}

Thin adapters translate the three corpus shapes into this schema; raw
corpus download stays out of scope, the adapters consume user-provided
files.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Mapping, Sequence

from .core import CLASSIFIER_LABELS, AspectLabel
from .extraction import SENTIMENTS

SOURCES = ("PRA", "PeerRead", "MOPRD", "Synthetic")
DECISIONS = ("accept", "reject")

_ASPECT_NAMES = {a.value for a in AspectLabel}


class DatasetError(ValueError):
    """Schema or layout violation, with enough context to find the line."""


@dataclass(frozen=True)
class SentenceAnnotation:
    sentence: str
    aspects: tuple[str, ...]
    sentiment: str
    confidence: float | None = None

    def __post_init__(self) -> None:
        object.__setattr__(self, "aspects", tuple(self.aspects))


@dataclass(frozen=True)
class ReviewRecord:
    review_id: str
    text: str
    sentence_annotations: tuple[SentenceAnnotation, ...] | None = None
    aspect_scores: Mapping[str, float] | None = None

    def __post_init__(self) -> None:
        if self.sentence_annotations is not None:
            object.__setattr__(self, "sentence_annotations", tuple(self.sentence_annotations))
        if self.aspect_scores is not None:
            object.__setattr__(self, "aspect_scores", dict(self.aspect_scores))


@dataclass(frozen=True)
class PaperRecord:
    paper_id: str
    venue: str
    reviews: tuple[ReviewRecord, ...]
    gold_decision: str
    source: str = "Synthetic"

    def __post_init__(self) -> None:
        object.__setattr__(self, "reviews", tuple(self.reviews))


def _fail(where: str, message: str) -> DatasetError:
    return DatasetError(f"{where}: {message}" if where else message)


def _annotation_from_dict(data: Mapping, where: str) -> SentenceAnnotation:
    if not isinstance(data, Mapping):
        raise _fail(where, "annotation must be an object")
    if "sentence" not in data:
        raise _fail(where, "missing field 'sentence'")
    sentiment = data.get("sentiment")
    if sentiment not in SENTIMENTS:
        raise _fail(where, f"bad sentiment {sentiment!r}")
    aspects = data.get("aspects", [])
    for aspect in aspects:
        if aspect not in CLASSIFIER_LABELS:
            raise _fail(where, f"unknown aspect label {aspect!r}")
    confidence = data.get("confidence")
    if confidence is not None and not 0.0 <= float(confidence) <= 1.0:
        raise _fail(where, f"confidence out of [0, 1]: {confidence}")
    return SentenceAnnotation(
        sentence=str(data["sentence"]),
        aspects=tuple(str(a) for a in aspects),
        sentiment=str(sentiment),
        confidence=None if confidence is None else float(confidence),
    )


def _review_from_dict(data: Mapping, where: str) -> ReviewRecord:
    if not isinstance(data, Mapping):
        raise _fail(where, "review must be an object")
    if "text" not in data:
        raise _fail(where, "missing field 'text'")
    annotations = None
    if data.get("sentence_annotations") is not None:
        annotations = tuple(
            _annotation_from_dict(a, f"{where}.sentence_annotations[{i}]")
            for i, a in enumerate(data["sentence_annotations"])
        )
    scores = None
    if data.get("aspect_scores") is not None:
        scores = {}
        for key, value in data["aspect_scores"].items():
            if key not in _ASPECT_NAMES:
                raise _fail(where, f"unknown aspect in aspect_scores: {key!r}")
            value = float(value)
            if not 0.0 <= value <= 1.0:
                raise _fail(where, f"aspect score out of [0, 1]: {key}={value}")
            scores[key] = value
    return ReviewRecord(
        review_id=str(data.get("review_id", "")),
        text=str(data["text"]),
        sentence_annotations=annotations,
        aspect_scores=scores,
    )


def paper_from_dict(data: Mapping, where: str = "") -> PaperRecord:
    if not isinstance(data, Mapping):
        raise _fail(where, "paper must be an object")
    if "paper_id" not in data:
        raise _fail(where, "missing field 'paper_id'")
    if "gold_decision" not in data:
        raise _fail(where, "missing field 'gold_decision'")
    if data["gold_decision"] not in DECISIONS:
        raise _fail(where, f"bad gold_decision {data['gold_decision']!r}")
    source = data.get("source", "Synthetic")
    if source not in SOURCES:
        raise _fail(where, f"unknown source {source!r}")
    reviews_raw = data.get("reviews") or []
    if not reviews_raw:
        raise _fail(where, "paper needs at least one review")
    reviews = tuple(
        _review_from_dict(r, f"{where}.reviews[{i}]" if where else f"reviews[{i}]")
        for i, r in enumerate(reviews_raw)
    )
    return PaperRecord(
        paper_id=str(data["paper_id"]),
        venue=str(data.get("venue", "")),
        reviews=reviews,
        gold_decision=str(data["gold_decision"]),
        source=str(source),
    )


def paper_to_dict(paper: PaperRecord) -> dict:
    reviews = []
    for review in paper.reviews:
        entry: dict = {"review_id": review.review_id, "text": review.text}
        if review.sentence_annotations is not None:
            entry["sentence_annotations"] = [
                {
                    "sentence": ann.sentence,
                    "aspects": list(ann.aspects),
                    "sentiment": ann.sentiment,
                    **({"confidence": ann.confidence} if ann.confidence is not None else {}),
                }
                for ann in review.sentence_annotations
            ]
        if review.aspect_scores is not None:
            entry["aspect_scores"] = dict(review.aspect_scores)
        reviews.append(entry)
    return {
        "paper_id": paper.paper_id,
        "venue": paper.venue,
        "reviews": reviews,
        "gold_decision": paper.gold_decision,
        "source": paper.source,
    }


def load_jsonl(path) -> list[PaperRecord]:
    """One paper per line; every error carries its line number."""
    papers: list[PaperRecord] = []
    with open(path, encoding="utf-8") as handle:
        for line_number, line in enumerate(handle, start=1):
            line = line.strip()
            if not line:
                continue
            try:
                data = json.loads(line)
            except json.JSONDecodeError as exc:
                raise DatasetError(f"line {line_number}: malformed JSON ({exc.msg})") from exc
            papers.append(paper_from_dict(data, where=f"line {line_number}"))
    return papers


def write_jsonl(papers: Iterable[PaperRecord], path) -> None:
    with open(path, "w", encoding="utf-8") as handle:
        for paper in papers:
            handle.write(json.dumps(paper_to_dict(paper)) + "\n")


def normalize_aspect_score(raw: float, scale_min: float, scale_max: float) -> float:
    """Linear min-max normalization onto [0, 1]."""
    if scale_min >= scale_max:
        raise ValueError(f"bad scale: [{scale_min}, {scale_max}]")
    if not scale_min <= raw <= scale_max:
        raise ValueError(f"score {raw} outside declared scale [{scale_min}, {scale_max}]")
    return (raw - scale_min) / (scale_max - scale_min)


def _load_source_papers(path) -> list[Mapping]:
    with open(path, encoding="utf-8") as handle:
        data = json.load(handle)
    if isinstance(data, Mapping) and "papers" in data:
        data = data["papers"]
    if not isinstance(data, list):
        raise DatasetError(f"{path}: expected a list of papers or an object with 'papers'")
    return data


def _decision_of(entry: Mapping, where: str) -> str:
    if "decision" in entry:
        decision = entry["decision"]
    elif "accepted" in entry:
        decision = "accept" if entry["accepted"] else "reject"
    else:
        raise _fail(where, "missing field 'decision' (or boolean 'accepted')")
    if decision not in DECISIONS:
        raise _fail(where, f"bad decision {decision!r}")
    return decision


def _adapt_pra(entries: list[Mapping]) -> list[PaperRecord]:
    """Papers whose reviews carry per-sentence (aspects, sentiment) labels."""
    papers = []
    for i, entry in enumerate(entries):
        where = f"paper[{i}]"
        if "reviews" not in entry:
            raise _fail(where, "missing field 'reviews'")
        reviews = []
        for j, review in enumerate(entry["reviews"]):
            rwhere = f"{where}.reviews[{j}]"
            if "sentences" not in review:
                raise _fail(rwhere, "missing field 'sentences'")
            annotations = tuple(
                _annotation_from_dict(
                    {
                        "sentence": s.get("text"),
                        "aspects": s.get("aspects", []),
                        "sentiment": s.get("sentiment"),
                        "confidence": s.get("confidence"),
                    },
                    f"{rwhere}.sentences[{k}]",
                )
                for k, s in enumerate(review["sentences"])
            )
            text = review.get("text") or " ".join(a.sentence for a in annotations)
            reviews.append(
                ReviewRecord(
                    review_id=str(review.get("id", f"r{j}")),
                    text=text,
                    sentence_annotations=annotations,
                )
            )
        papers.append(
            PaperRecord(
                paper_id=str(entry.get("id", f"p{i}")),
                venue=str(entry.get("venue", "")),
                reviews=tuple(reviews),
                gold_decision=_decision_of(entry, where),
                source="PRA",
            )
        )
    return papers


# PeerRead review objects key aspect ratings by these field names.
_PEERREAD_SCORE_FIELDS = {
    "APPROPRIATENESS": "APR",
    "CLARITY": "CLA",
    "ORIGINALITY": "NOV",
    "SOUNDNESS_CORRECTNESS": "EMP",
    "MEANINGFUL_COMPARISON": "CMP",
    "SUBSTANCE": "SUB",
    "IMPACT": "IMP",
}


def _adapt_peerread(
    entries: list[Mapping], scale_min: float, scale_max: float
) -> list[PaperRecord]:
    """Papers whose reviews carry free text plus per-aspect ratings."""
    papers = []
    for i, entry in enumerate(entries):
        where = f"paper[{i}]"
        if "reviews" not in entry:
            raise _fail(where, "missing field 'reviews'")
        reviews = []
        for j, review in enumerate(entry["reviews"]):
            rwhere = f"{where}.reviews[{j}]"
            text = review.get("comments", review.get("text"))
            if text is None:
                raise _fail(rwhere, "missing field 'comments'")
            scores: dict[str, float] = {}
            for key, label in _PEERREAD_SCORE_FIELDS.items():
                if review.get(key) is None:
                    continue
                try:
                    raw = float(review[key])
                except (TypeError, ValueError):
                    raise _fail(rwhere, f"non-numeric score for {key!r}: {review[key]!r}")
                scores[label] = normalize_aspect_score(raw, scale_min, scale_max)
            reviews.append(
                ReviewRecord(
                    review_id=str(review.get("review_id", f"r{j}")),
                    text=str(text),
                    aspect_scores=scores or None,
                )
            )
        papers.append(
            PaperRecord(
                paper_id=str(entry.get("id", f"p{i}")),
                venue=str(entry.get("venue", "")),
                reviews=tuple(reviews),
                gold_decision=_decision_of(entry, where),
                source="PeerRead",
            )
        )
    return papers


def _adapt_moprd(entries: list[Mapping]) -> list[PaperRecord]:
    """Papers with plain review texts and a decision, nothing else."""
    papers = []
    for i, entry in enumerate(entries):
        where = f"paper[{i}]"
        if "reviews" not in entry:
            raise _fail(where, "missing field 'reviews'")
        reviews = []
        for j, review in enumerate(entry["reviews"]):
            text = review.get("text") if isinstance(review, Mapping) else review
            if not isinstance(text, str):
                raise _fail(f"{where}.reviews[{j}]", "missing field 'text'")
            reviews.append(ReviewRecord(review_id=f"r{j}", text=text))
        papers.append(
            PaperRecord(
                paper_id=str(entry.get("id", f"p{i}")),
                venue=str(entry.get("venue", "")),
                reviews=tuple(reviews),
                gold_decision=_decision_of(entry, where),
                source="MOPRD",
            )
        )
    return papers


def adapt_source(
    path, kind: str, *, scale_min: float = 1.0, scale_max: float = 5.0
) -> list[PaperRecord]:
    """Translate a source-shaped JSON file into normalized records.

    kind 'pra' expects per-sentence annotation objects, 'peerread' expects
    aspect ratings on the given scale, 'moprd' expects bare review texts.
    """
    entries = _load_source_papers(Path(path))
    kind = kind.lower()
    if kind == "pra":
        return _adapt_pra(entries)
    if kind == "peerread":
        return _adapt_peerread(entries, scale_min, scale_max)
    if kind == "moprd":
        return _adapt_moprd(entries)
    raise DatasetError(f"unknown source kind {kind!r} (expected pra, peerread, or moprd)")
