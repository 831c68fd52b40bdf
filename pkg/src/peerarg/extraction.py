"""Turn one raw review into a three-level review framework.

Pipeline per review: sentence splitting and cleaning, aspect
classification and sentiment analysis through pluggable ports, base score
setting, then a two-stage strength computation. Stage one evaluates the
text-to-aspect subgraph; each aspect's strength then fixes its relation to
the decision argument (attack below 0.5, support otherwise) and a
recentred base score 2*|strength - 0.5|; stage two evaluates the reduced
aspect-to-decision graph where aspects are leaves carrying the recentred
bases. Re-propagating from the text arguments in stage two would count the
same evidence twice, so the reduced graph is used instead.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Protocol, Sequence

from .core import (
    ASPECT_LABELS,
    CLASSIFIER_LABELS,
    DECISION_ID,
    OTHER,
    AspectLabel,
    QBAF,
    aspect_argument,
    decision_argument,
    make_qbaf,
    text_argument,
)
from .semantics import SemanticsConfig, StrengthAssignment, evaluate

SENTIMENTS = ("positive", "neutral", "negative")


@dataclass(frozen=True)
class ReviewSentence:
    """A cleaned sentence: no newlines, no backslashes, no leading dash."""

    index: int
    text: str


@dataclass(frozen=True)
class ClassifiedSentence:
    sentence: ReviewSentence
    aspects: frozenset[str]
    sentiment: str
    confidence: float

    def __post_init__(self) -> None:
        object.__setattr__(self, "aspects", frozenset(self.aspects))
        if not self.aspects:
            raise ValueError("aspect set must be non-empty")
        unknown = self.aspects - CLASSIFIER_LABELS
        if unknown:
            raise ValueError(f"unknown aspect labels: {sorted(unknown)}")
        if OTHER in self.aspects and len(self.aspects) > 1:
            raise ValueError("OTHER must be the only aspect when present")
        if self.sentiment not in SENTIMENTS:
            raise ValueError(f"unknown sentiment: {self.sentiment!r}")
        if not 0.0 <= self.confidence <= 1.0:
            raise ValueError(f"confidence out of [0, 1]: {self.confidence}")


class AspectClassifierPort(Protocol):
    def classify(self, sentence: str) -> set[str]:
        """Aspect labels for one cleaned sentence; at least one label."""
        ...


class SentimentAnalyzerPort(Protocol):
    def analyze(self, sentence: str) -> tuple[str, float]:
        """(sentiment label, confidence in [0, 1]) for one sentence."""
        ...


class ClassificationError(RuntimeError):
    """A port failed on a specific sentence."""

    def __init__(self, sentence_index: int, message: str):
        super().__init__(f"sentence {sentence_index}: {message}")
        self.sentence_index = sentence_index


class BaseScoreMode(str, Enum):
    DEFAULT = "default"
    SENTIMENT = "sentiment"


@dataclass(frozen=True)
class ExtractionConfig:
    base_score_mode: BaseScoreMode = BaseScoreMode.DEFAULT
    semantics: SemanticsConfig = field(default_factory=SemanticsConfig)
    aspect_base_scores: Mapping[str, float] | None = None
    decision_base_score: float = 0.5

    def __post_init__(self) -> None:
        if not 0.0 <= self.decision_base_score <= 1.0:
            raise ValueError(f"decision base score out of [0, 1]: {self.decision_base_score}")
        if self.aspect_base_scores is not None:
            object.__setattr__(self, "aspect_base_scores", dict(self.aspect_base_scores))
            for key, value in self.aspect_base_scores.items():
                if key not in {a.value for a in ASPECT_LABELS}:
                    raise ValueError(f"unknown aspect in base scores: {key!r}")
                if not 0.0 <= value <= 1.0:
                    raise ValueError(f"aspect base score out of [0, 1]: {key}={value}")


_SENTENCE_BOUNDARY = re.compile(r"(?<=[.!?])\s+")
_WHITESPACE_RUN = re.compile(r"\s+")


def _clean_sentence(raw: str) -> str:
    # Newlines collapse to spaces, backslashes vanish, leading dashes drop.
    text = raw.replace("\\", "")
    text = _WHITESPACE_RUN.sub(" ", text).strip()
    text = text.lstrip("-").lstrip()
    return text


def split_and_clean(review_text: str) -> list[ReviewSentence]:
    """Split into sentences in document order and clean each one; empty
    sentences are dropped and survivors are renumbered from 0."""
    sentences: list[ReviewSentence] = []
    for raw in _SENTENCE_BOUNDARY.split(review_text):
        cleaned = _clean_sentence(raw)
        if cleaned:
            sentences.append(ReviewSentence(index=len(sentences), text=cleaned))
    return sentences


def normalize_aspect_set(labels: set[str] | frozenset[str]) -> frozenset[str]:
    """Drop OTHER when real aspects are present; empty sets become {OTHER}."""
    known = {str(lbl) for lbl in labels} & CLASSIFIER_LABELS
    real = known - {OTHER}
    if real:
        return frozenset(real)
    return frozenset({OTHER})


def classify_review(
    sentences: Sequence[ReviewSentence],
    classifier: AspectClassifierPort,
    sentiment: SentimentAnalyzerPort,
) -> list[ClassifiedSentence]:
    """Run both ports over every sentence, in order.

    Port failures are re-raised as ClassificationError tagged with the
    sentence index.
    """
    classified: list[ClassifiedSentence] = []
    for s in sentences:
        try:
            aspects = normalize_aspect_set(set(classifier.classify(s.text)))
            label, confidence = sentiment.analyze(s.text)
        except Exception as exc:
            raise ClassificationError(s.index, str(exc)) from exc
        classified.append(
            ClassifiedSentence(sentence=s, aspects=aspects, sentiment=label, confidence=confidence)
        )
    return classified


class Relation(str, Enum):
    ATTACK = "attack"
    SUPPORT = "support"


def resolve_aspect_relation(strength: float) -> tuple[Relation, float]:
    """Polarity and recentred base for an aspect of the given strength.

    Attack below the 0.5 midpoint, support at or above it; the recentred
    base 2*|strength - 0.5| grows with distance from the midpoint.
    """
    if not 0.0 <= strength <= 1.0:
        raise ValueError(f"strength out of [0, 1]: {strength}")
    relation = Relation.ATTACK if strength < 0.5 else Relation.SUPPORT
    return relation, 2.0 * abs(strength - 0.5)


def build_review_qbaf(
    classified: Sequence[ClassifiedSentence],
    cfg: ExtractionConfig,
) -> tuple[QBAF, StrengthAssignment]:
    """Assemble and evaluate the review framework.

    Sentences classified only as OTHER or with neutral sentiment produce
    no text argument. A sentence with several aspects becomes one text
    argument with one edge per aspect: support when positive, attack when
    negative. Returns the full three-level framework (bases as originally
    set) and the strength map: text and aspect strengths from stage one,
    decision strength from the reduced stage-two graph.

    A review with no usable sentences still yields a valid framework whose
    aspects all recentre to 0, leaving the decision at its base score.
    """
    usable = [
        c for c in classified
        if c.sentiment != "neutral" and c.aspects != frozenset({OTHER})
    ]

    text_args = []
    text_bases: dict[str, float] = {}
    text_edges: dict[Relation, list[tuple[str, str]]] = {Relation.ATTACK: [], Relation.SUPPORT: []}
    for c in usable:
        arg_id = f"t{c.sentence.index}"
        text_args.append(text_argument(arg_id, label=c.sentence.text))
        if cfg.base_score_mode is BaseScoreMode.SENTIMENT:
            text_bases[arg_id] = c.confidence
        else:
            text_bases[arg_id] = 0.5
        polarity = Relation.SUPPORT if c.sentiment == "positive" else Relation.ATTACK
        for aspect in sorted(c.aspects):
            text_edges[polarity].append((arg_id, aspect))

    aspect_bases = {
        lbl.value: (cfg.aspect_base_scores or {}).get(lbl.value, 0.5) for lbl in ASPECT_LABELS
    }
    aspect_args = [aspect_argument(lbl) for lbl in ASPECT_LABELS]

    stage_one = make_qbaf(
        text_args + aspect_args,
        attacks=text_edges[Relation.ATTACK],
        supports=text_edges[Relation.SUPPORT],
        base_scores={**text_bases, **aspect_bases},
    )
    stage_one_strengths = evaluate(stage_one, cfg.semantics)

    decision_edges: dict[Relation, list[tuple[str, str]]] = {Relation.ATTACK: [], Relation.SUPPORT: []}
    recentred: dict[str, float] = {}
    for lbl in ASPECT_LABELS:
        relation, base = resolve_aspect_relation(stage_one_strengths[lbl.value])
        recentred[lbl.value] = base
        decision_edges[relation].append((lbl.value, DECISION_ID))

    stage_two = make_qbaf(
        aspect_args + [decision_argument()],
        attacks=decision_edges[Relation.ATTACK],
        supports=decision_edges[Relation.SUPPORT],
        base_scores={**recentred, DECISION_ID: cfg.decision_base_score},
    )
    stage_two_strengths = evaluate(stage_two, cfg.semantics)

    framework = make_qbaf(
        text_args + aspect_args + [decision_argument()],
        attacks=text_edges[Relation.ATTACK] + decision_edges[Relation.ATTACK],
        supports=text_edges[Relation.SUPPORT] + decision_edges[Relation.SUPPORT],
        base_scores={**text_bases, **aspect_bases, DECISION_ID: cfg.decision_base_score},
    )
    strengths = dict(stage_one_strengths)
    strengths[DECISION_ID] = stage_two_strengths[DECISION_ID]
    return framework, strengths
