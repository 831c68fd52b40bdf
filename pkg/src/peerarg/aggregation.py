"""Combine per-review frameworks and produce the accept/reject decision.

Text arguments are trimmed off each review framework; the trimmed
frameworks merge into a shared structure holding, per argument, the vector
of strengths across reviews and the polarity-forgetting union of the
aspect-to-decision relations. Two routes lead from there to a verdict:

* path 1 averages each strength vector, reassigns relation polarity and
  bases from the averages, and evaluates the resulting framework;
* path 2 interprets the decision argument's strength vector entry by entry
  (binary or five-level) and aggregates the votes (majority or
  all-accept).

Either way the final strength is thresholded at 0.5, accepting only
strictly above.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Mapping, Sequence

from .core import (
    DECISION_ID,
    Argument,
    ArgumentKind,
    AspectLabel,
    QBAF,
    aspect_argument,
    decision_argument,
    make_qbaf,
)
from .semantics import SemanticsConfig, StrengthAssignment, evaluate


@dataclass(frozen=True)
class TrimmedReviewQBAF:
    """A review framework reduced to the aspects and the decision."""

    qbaf: QBAF
    strengths: dict[str, float]

    def __post_init__(self) -> None:
        object.__setattr__(self, "strengths", dict(self.strengths))


def trim(review_qbaf: QBAF, strengths: Mapping[str, float]) -> TrimmedReviewQBAF:
    """Drop text arguments, keeping aspect-to-decision structure, the
    restricted base scores and the restricted strengths."""
    kept = [a for a in review_qbaf.arguments if a.kind is not ArgumentKind.TEXT]
    kept_ids = {a.id for a in kept}
    missing = kept_ids - set(strengths)
    if missing:
        raise ValueError(f"strengths missing for: {sorted(missing)}")
    qbaf = make_qbaf(
        kept,
        attacks=[e for e in review_qbaf.attacks if e[0] in kept_ids and e[1] in kept_ids],
        supports=[e for e in review_qbaf.supports if e[0] in kept_ids and e[1] in kept_ids],
        base_scores={aid: review_qbaf.base_scores[aid] for aid in kept_ids},
    )
    return TrimmedReviewQBAF(qbaf=qbaf, strengths={aid: strengths[aid] for aid in kept_ids})


@dataclass(frozen=True)
class PreMPAF:
    """Shared argument set, polarity-forgotten relation union, and one
    strength vector per argument (entry i = review i's strength)."""

    argument_ids: tuple[str, ...]
    undecided: frozenset[tuple[str, str]]
    strength_vectors: dict[str, tuple[float, ...]]
    n: int

    def __post_init__(self) -> None:
        object.__setattr__(self, "strength_vectors", dict(self.strength_vectors))

    def decision_vector(self) -> tuple[float, ...]:
        return self.strength_vectors[DECISION_ID]


def combine(trimmed: Sequence[TrimmedReviewQBAF]) -> PreMPAF:
    """Merge trimmed review frameworks, in review order.

    All inputs must share one argument set; a paper with no reviews is
    undecidable and rejected outright.
    """
    if not trimmed:
        raise ValueError("cannot combine zero reviews")
    first_ids = sorted(trimmed[0].qbaf.ids)
    for i, t in enumerate(trimmed[1:], start=1):
        if sorted(t.qbaf.ids) != first_ids:
            raise ValueError(f"review {i} has a different argument set")
    undecided = frozenset().union(*(t.qbaf.relations() for t in trimmed))
    vectors = {
        aid: tuple(t.strengths[aid] for t in trimmed) for aid in first_ids
    }
    return PreMPAF(
        argument_ids=tuple(first_ids),
        undecided=undecided,
        strength_vectors=vectors,
        n=len(trimmed),
    )


def mean_strength(pre: PreMPAF, arg_id: str) -> float:
    """Arithmetic mean of an argument's strength vector."""
    if arg_id not in pre.strength_vectors:
        raise KeyError(f"unknown argument: {arg_id!r}")
    vec = pre.strength_vectors[arg_id]
    return sum(vec) / len(vec)


def build_mpaf(pre: PreMPAF) -> QBAF:
    """Collapse the combined structure into a single framework.

    Each undecided pair becomes an attack when the source's mean strength
    is below 0.5 and a support otherwise. The decision keeps its mean as
    base score; every other argument gets the recentred 2*|mean - 0.5|.
    """
    arguments: list[Argument] = []
    base_scores: dict[str, float] = {}
    for aid in pre.argument_ids:
        mean = mean_strength(pre, aid)
        if aid == DECISION_ID:
            arguments.append(decision_argument())
            base_scores[aid] = mean
        else:
            arguments.append(aspect_argument(AspectLabel(aid)))
            base_scores[aid] = 2.0 * abs(mean - 0.5)
    attacks = [e for e in pre.undecided if mean_strength(pre, e[0]) < 0.5]
    supports = [e for e in pre.undecided if mean_strength(pre, e[0]) >= 0.5]
    return make_qbaf(arguments, attacks=attacks, supports=supports, base_scores=base_scores)


class DecisionLevel(str, Enum):
    STRONG_REJECT = "strong reject"
    WEAK_REJECT = "weak reject"
    BORDERLINE = "borderline"
    WEAK_ACCEPT = "weak accept"
    STRONG_ACCEPT = "strong accept"


LEVEL_WEIGHTS: dict[DecisionLevel, int] = {
    DecisionLevel.STRONG_REJECT: -2,
    DecisionLevel.WEAK_REJECT: -1,
    DecisionLevel.BORDERLINE: 0,
    DecisionLevel.WEAK_ACCEPT: 1,
    DecisionLevel.STRONG_ACCEPT: 2,
}


def interpret_binary(strength: float) -> str:
    """'reject' at or below 0.5, 'accept' strictly above."""
    if not 0.0 <= strength <= 1.0:
        raise ValueError(f"strength out of [0, 1]: {strength}")
    return "accept" if strength > 0.5 else "reject"


def interpret_five_level(strength: float) -> DecisionLevel:
    """Uniform five-level reading of [0, 1]; only the top band is
    right-closed."""
    if not 0.0 <= strength <= 1.0:
        raise ValueError(f"strength out of [0, 1]: {strength}")
    if strength < 0.2:
        return DecisionLevel.STRONG_REJECT
    if strength < 0.4:
        return DecisionLevel.WEAK_REJECT
    if strength < 0.6:
        return DecisionLevel.BORDERLINE
    if strength < 0.8:
        return DecisionLevel.WEAK_ACCEPT
    return DecisionLevel.STRONG_ACCEPT


def _require_votes(votes: Sequence) -> None:
    if not votes:
        raise ValueError("empty decision vector")


def aggregate_binary_majority(votes: Sequence[str]) -> float:
    """1.0 on a strict accept majority; ties favour reject."""
    _require_votes(votes)
    accepts = sum(1 for v in votes if v == "accept")
    return 1.0 if accepts > len(votes) - accepts else 0.0


def aggregate_binary_all_accept(votes: Sequence[str]) -> float:
    """1.0 only when no reject is present."""
    _require_votes(votes)
    return 1.0 if all(v == "accept" for v in votes) else 0.0


def aggregate_five_level_majority(levels: Sequence[DecisionLevel]) -> float:
    """1.0 when the level weights sum strictly positive."""
    _require_votes(levels)
    return 1.0 if sum(LEVEL_WEIGHTS[lv] for lv in levels) > 0 else 0.0


def aggregate_five_level_all_accept(levels: Sequence[DecisionLevel]) -> float:
    """1.0 only when every level is weak or strong accept."""
    _require_votes(levels)
    return 1.0 if all(LEVEL_WEIGHTS[lv] > 0 for lv in levels) else 0.0


class Interpretation(str, Enum):
    BINARY = "binary"
    FIVE_LEVEL = "5-level"


class Aggregator(str, Enum):
    MAJORITY = "majority"
    ALL_ACCEPT = "all-accept"


@dataclass(frozen=True)
class FinalDecision:
    """Verdict with its strength and an auditable trace of how it was
    reached."""

    verdict: str
    decision_strength: float
    path: str
    trace: dict = field(default_factory=dict)

    def __post_init__(self) -> None:
        expected = verdict_from_strength(self.decision_strength)
        if self.verdict != expected:
            raise ValueError(
                f"verdict {self.verdict!r} inconsistent with strength {self.decision_strength}"
            )

    def to_dict(self, paper_id: str) -> dict:
        return {
            "paper_id": paper_id,
            "verdict": self.verdict,
            "decision_strength": self.decision_strength,
            "path": self.path,
            "trace": self.trace,
        }


def verdict_from_strength(strength: float) -> str:
    return "accept" if strength > 0.5 else "reject"


def decide_path1(pre: PreMPAF, sem: SemanticsConfig) -> FinalDecision:
    """Build the averaged framework, evaluate it, threshold the decision."""
    mpaf = build_mpaf(pre)
    strengths = evaluate(mpaf, sem)
    strength = strengths[DECISION_ID]
    trace = {
        "means": {aid: mean_strength(pre, aid) for aid in pre.argument_ids},
        "mpaf_base_scores": dict(mpaf.base_scores),
        "mpaf_attacks": sorted(list(e) for e in mpaf.attacks),
        "mpaf_supports": sorted(list(e) for e in mpaf.supports),
        "mpaf_strengths": strengths,
        "semantics": sem.kind.value,
    }
    return FinalDecision(
        verdict=verdict_from_strength(strength),
        decision_strength=strength,
        path=f"mpaf-{sem.kind.value}",
        trace=trace,
    )


def decide_path2(pre: PreMPAF, interp: Interpretation, agg: Aggregator) -> FinalDecision:
    """Interpret the decision strength vector entrywise and vote."""
    vector = pre.decision_vector()
    trace: dict = {"decision_vector": list(vector), "interpretation": interp.value, "aggregator": agg.value}
    if interp is Interpretation.BINARY:
        votes = [interpret_binary(s) for s in vector]
        trace["votes"] = votes
        if agg is Aggregator.MAJORITY:
            strength = aggregate_binary_majority(votes)
        else:
            strength = aggregate_binary_all_accept(votes)
    else:
        levels = [interpret_five_level(s) for s in vector]
        trace["votes"] = [lv.value for lv in levels]
        trace["weights"] = [LEVEL_WEIGHTS[lv] for lv in levels]
        if agg is Aggregator.MAJORITY:
            strength = aggregate_five_level_majority(levels)
        else:
            strength = aggregate_five_level_all_accept(levels)
    return FinalDecision(
        verdict=verdict_from_strength(strength),
        decision_strength=strength,
        path=f"votes-{interp.value}-{agg.value}",
        trace=trace,
    )
