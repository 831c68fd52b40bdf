"""Metrics, the hyperparameter grid, and report emission.

A grid combination fixes the text base-score mode, the semantics used
during review extraction, and one of the two aggregation routes (path 1
with its own semantics, or path 2 with an interpretation and a vote
aggregator), optionally injecting per-review aspect ratings as aspect
base scores. The grid runner scores every combination against the gold
decisions with accuracy and macro F1 over {accept, reject}.
"""

from __future__ import annotations

import csv
import hashlib
import json
import threading
from concurrent.futures import ThreadPoolExecutor
from contextlib import nullcontext
from dataclasses import dataclass, field
from datetime import datetime, timezone
from pathlib import Path
from typing import Protocol, Sequence

from .aggregation import (
    Aggregator,
    FinalDecision,
    Interpretation,
    combine,
    decide_path1,
    decide_path2,
    trim,
)
from .datasets import PaperRecord, ReviewRecord
from .extraction import (
    AspectClassifierPort,
    BaseScoreMode,
    ClassifiedSentence,
    ExtractionConfig,
    SentimentAnalyzerPort,
    build_review_qbaf,
    classify_review,
    split_and_clean,
)
from .semantics import SemanticsConfig, SemanticsKind

VERDICTS = ("accept", "reject")


def _check_verdicts(values: Sequence[str], what: str) -> None:
    for v in values:
        if v not in VERDICTS:
            raise ValueError(f"{what} contains unknown verdict {v!r}")


def accuracy(pred: Sequence[str], gold: Sequence[str]) -> float:
    if len(pred) != len(gold):
        raise ValueError(f"length mismatch: {len(pred)} vs {len(gold)}")
    if not pred:
        raise ValueError("empty input")
    _check_verdicts(pred, "pred")
    _check_verdicts(gold, "gold")
    return sum(1 for p, g in zip(pred, gold) if p == g) / len(pred)


def _class_f1(pred: Sequence[str], gold: Sequence[str], cls: str) -> float:
    tp = sum(1 for p, g in zip(pred, gold) if p == cls and g == cls)
    fp = sum(1 for p, g in zip(pred, gold) if p == cls and g != cls)
    fn = sum(1 for p, g in zip(pred, gold) if p != cls and g == cls)
    denominator = 2 * tp + fp + fn
    # A class absent from both pred and gold contributes 0 by convention.
    return 0.0 if denominator == 0 else (2 * tp) / denominator


def macro_f1(pred: Sequence[str], gold: Sequence[str]) -> float:
    """Unweighted mean of the per-class F1 scores over accept/reject."""
    if len(pred) != len(gold):
        raise ValueError(f"length mismatch: {len(pred)} vs {len(gold)}")
    if not pred:
        raise ValueError("empty input")
    _check_verdicts(pred, "pred")
    _check_verdicts(gold, "gold")
    return sum(_class_f1(pred, gold, cls) for cls in VERDICTS) / len(VERDICTS)


@dataclass(frozen=True)
class HyperparamCombo:
    """One grid cell. Exactly one route is populated: `agg_semantics` for
    path 1, `interpretation` plus `aggregator` for path 2."""

    base_score_mode: BaseScoreMode
    qbaf_semantics: SemanticsKind
    agg_semantics: SemanticsKind | None = None
    interpretation: Interpretation | None = None
    aggregator: Aggregator | None = None
    use_review_aspect_scores: bool = False

    def __post_init__(self) -> None:
        path1 = self.agg_semantics is not None
        path2 = self.interpretation is not None and self.aggregator is not None
        half_path2 = (self.interpretation is None) != (self.aggregator is None)
        if path1 == path2 or half_path2:
            raise ValueError("combo must populate exactly one aggregation route")

    @property
    def path(self) -> int:
        return 1 if self.agg_semantics is not None else 2

    @property
    def columns(self) -> dict[str, str]:
        """Report columns; path 1 has no decision-strength interpretation."""
        if self.path == 1:
            decision_strength = "-"
            aggregation = self.agg_semantics.value
        else:
            decision_strength = self.interpretation.value
            aggregation = self.aggregator.value
        return {
            "base_score": self.base_score_mode.value,
            "qbaf_semantics": self.qbaf_semantics.value,
            "decision_strength": decision_strength,
            "aggregation_semantics": aggregation,
            "use_review_aspect_scores": str(self.use_review_aspect_scores).lower(),
        }

    @property
    def combo_id(self) -> str:
        cols = self.columns
        parts = [
            cols["base_score"],
            cols["qbaf_semantics"],
            cols["decision_strength"],
            cols["aggregation_semantics"],
        ]
        if self.use_review_aspect_scores:
            parts.append("scores")
        return "+".join(parts)


NAMED_COMBOS: dict[str, HyperparamCombo] = {
    "best-pra": HyperparamCombo(
        BaseScoreMode.SENTIMENT,
        SemanticsKind.MLP,
        interpretation=Interpretation.BINARY,
        aggregator=Aggregator.MAJORITY,
    ),
    "best-peerread-default": HyperparamCombo(
        BaseScoreMode.SENTIMENT,
        SemanticsKind.DF_QUAD,
        agg_semantics=SemanticsKind.DF_QUAD,
    ),
    "best-peerread-scores": HyperparamCombo(
        BaseScoreMode.DEFAULT,
        SemanticsKind.DF_QUAD,
        interpretation=Interpretation.FIVE_LEVEL,
        aggregator=Aggregator.ALL_ACCEPT,
        use_review_aspect_scores=True,
    ),
    "best-overall": HyperparamCombo(
        BaseScoreMode.SENTIMENT,
        SemanticsKind.DF_QUAD,
        interpretation=Interpretation.FIVE_LEVEL,
        aggregator=Aggregator.MAJORITY,
    ),
}


def enumerate_combos(include_aspect_scores: bool = False) -> list[HyperparamCombo]:
    """The full grid: 2 base-score modes x 2 semantics x (2 path-1 + 4
    path-2 variants) = 24 combos, doubled when aspect-score injection is
    toggled on."""
    combos: list[HyperparamCombo] = []
    flags = (False, True) if include_aspect_scores else (False,)
    for use_scores in flags:
        for base in BaseScoreMode:
            for sem in SemanticsKind:
                for agg_sem in SemanticsKind:
                    combos.append(
                        HyperparamCombo(base, sem, agg_semantics=agg_sem,
                                        use_review_aspect_scores=use_scores)
                    )
                for interp in Interpretation:
                    for agg in Aggregator:
                        combos.append(
                            HyperparamCombo(base, sem, interpretation=interp, aggregator=agg,
                                            use_review_aspect_scores=use_scores)
                        )
    return combos


class PortProvider(Protocol):
    cache_key: str

    def ports_for(
        self, paper: PaperRecord, review: ReviewRecord
    ) -> tuple[AspectClassifierPort, SentimentAnalyzerPort]: ...


ExtractionCache = dict[tuple, list[ClassifiedSentence]]


def _classified(
    paper: PaperRecord,
    review: ReviewRecord,
    ports: PortProvider,
    cache: ExtractionCache | None,
    lock: threading.Lock | None,
) -> list[ClassifiedSentence]:
    """Classification depends only on the review text and the port
    configuration, so the grid reuses it across combos."""
    if cache is None:
        classifier, sentiment = ports.ports_for(paper, review)
        return classify_review(split_and_clean(review.text), classifier, sentiment)
    key = (
        ports.cache_key,
        paper.paper_id,
        review.review_id,
        hashlib.sha256(review.text.encode("utf-8")).hexdigest(),
    )
    guard = lock if lock is not None else nullcontext()
    with guard:
        if key in cache:
            return cache[key]
    classifier, sentiment = ports.ports_for(paper, review)
    classified = classify_review(split_and_clean(review.text), classifier, sentiment)
    with guard:
        cache[key] = classified
    return classified


def predict_paper(
    paper: PaperRecord,
    combo: HyperparamCombo,
    ports: PortProvider,
    cache: ExtractionCache | None = None,
    lock: threading.Lock | None = None,
) -> FinalDecision:
    """Full pipeline for one paper: extract per review, combine, decide."""
    trimmed = []
    for review in paper.reviews:
        classified = _classified(paper, review, ports, cache, lock)
        cfg = ExtractionConfig(
            base_score_mode=combo.base_score_mode,
            semantics=SemanticsConfig(kind=combo.qbaf_semantics),
            aspect_base_scores=review.aspect_scores if combo.use_review_aspect_scores else None,
        )
        framework, strengths = build_review_qbaf(classified, cfg)
        trimmed.append(trim(framework, strengths))
    pre = combine(trimmed)
    if combo.path == 1:
        return decide_path1(pre, SemanticsConfig(kind=combo.agg_semantics))
    return decide_path2(pre, combo.interpretation, combo.aggregator)


# A combination is flagged degraded when more than this share of papers
# failed; partial outages should not silently bias the metrics.
DEGRADED_FAILURE_SHARE = 0.10


@dataclass
class ComboResult:
    combo: HyperparamCombo
    tp: int
    fp: int
    tn: int
    fn: int
    accuracy: float
    macro_f1: float
    n_papers: int
    n_failed: int
    degraded: bool
    decisions: list[dict] = field(default_factory=list)
    failures: list[dict] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "combo": {**self.combo.columns, "id": self.combo.combo_id},
            "counts": {"tp": self.tp, "fp": self.fp, "tn": self.tn, "fn": self.fn},
            "accuracy": self.accuracy,
            "macro_f1": self.macro_f1,
            "n_papers": self.n_papers,
            "n_failed": self.n_failed,
            "degraded": self.degraded,
            "decisions": self.decisions,
            "failures": self.failures,
        }


@dataclass
class RunReport:
    dataset_id: str
    created_at: str
    config_hash: str
    results: list[ComboResult]

    def to_dict(self) -> dict:
        return {
            "dataset_id": self.dataset_id,
            "created_at": self.created_at,
            "config_hash": self.config_hash,
            "results": [r.to_dict() for r in self.results],
        }


def _confusion(pred: Sequence[str], gold: Sequence[str]) -> tuple[int, int, int, int]:
    tp = sum(1 for p, g in zip(pred, gold) if p == "accept" and g == "accept")
    fp = sum(1 for p, g in zip(pred, gold) if p == "accept" and g == "reject")
    tn = sum(1 for p, g in zip(pred, gold) if p == "reject" and g == "reject")
    fn = sum(1 for p, g in zip(pred, gold) if p == "reject" and g == "accept")
    return tp, fp, tn, fn


def run_grid(
    papers: Sequence[PaperRecord],
    combos: Sequence[HyperparamCombo],
    ports: PortProvider,
    *,
    jobs: int = 1,
    dataset_id: str = "",
) -> RunReport:
    """Run every combination over every paper and score against gold.

    Per-paper failures are recorded, not fatal; confusion counts cover the
    papers that produced a prediction. A combination with more than 10%
    failed papers is marked degraded.
    """
    if not papers:
        raise ValueError("no papers to evaluate")
    if not combos:
        raise ValueError("no combos to evaluate")
    cache: ExtractionCache = {}
    lock = threading.Lock()

    def evaluate_one(combo: HyperparamCombo, paper: PaperRecord):
        try:
            return paper, predict_paper(paper, combo, ports, cache, lock), None
        except Exception as exc:  # recorded per paper, run continues
            return paper, None, f"{type(exc).__name__}: {exc}"

    results: list[ComboResult] = []
    for combo in combos:
        if jobs > 1:
            with ThreadPoolExecutor(max_workers=jobs) as pool:
                outcomes = list(pool.map(lambda p: evaluate_one(combo, p), papers))
        else:
            outcomes = [evaluate_one(combo, p) for p in papers]
        decisions, failures, pred, gold = [], [], [], []
        for paper, decision, error in outcomes:
            if error is not None:
                failures.append({"paper_id": paper.paper_id, "error": error})
                continue
            record = decision.to_dict(paper.paper_id)
            record["gold"] = paper.gold_decision
            decisions.append(record)
            pred.append(decision.verdict)
            gold.append(paper.gold_decision)
        tp, fp, tn, fn = _confusion(pred, gold)
        results.append(
            ComboResult(
                combo=combo,
                tp=tp, fp=fp, tn=tn, fn=fn,
                accuracy=accuracy(pred, gold) if pred else 0.0,
                macro_f1=macro_f1(pred, gold) if pred else 0.0,
                n_papers=len(papers),
                n_failed=len(failures),
                degraded=len(failures) > DEGRADED_FAILURE_SHARE * len(papers),
                decisions=decisions,
                failures=failures,
            )
        )
    fingerprint = json.dumps(
        {"dataset": dataset_id, "ports": ports.cache_key, "combos": [c.combo_id for c in combos]},
        sort_keys=True,
    )
    return RunReport(
        dataset_id=dataset_id,
        created_at=datetime.now(timezone.utc).isoformat(),
        config_hash=hashlib.sha256(fingerprint.encode("utf-8")).hexdigest(),
        results=results,
    )


CSV_COLUMNS = [
    "base_score",
    "qbaf_semantics",
    "decision_strength",
    "aggregation_semantics",
    "use_review_aspect_scores",
    "accuracy",
    "macro_f1",
]


def _sorted_results(report: RunReport) -> list[ComboResult]:
    return sorted(report.results, key=lambda r: tuple(r.combo.columns.values()))


def emit_report(report: RunReport, fmt: str, path) -> Path:
    """Write the report as JSON (full) or CSV (combo fields plus the two
    metrics), rows in lexicographic combo order."""
    path = Path(path)
    if fmt == "json":
        ordered = RunReport(
            dataset_id=report.dataset_id,
            created_at=report.created_at,
            config_hash=report.config_hash,
            results=_sorted_results(report),
        )
        path.write_text(json.dumps(ordered.to_dict(), indent=2) + "\n", encoding="utf-8")
    elif fmt == "csv":
        with path.open("w", encoding="utf-8", newline="") as handle:
            writer = csv.DictWriter(handle, fieldnames=CSV_COLUMNS)
            writer.writeheader()
            for result in _sorted_results(report):
                writer.writerow(
                    {**result.combo.columns,
                     "accuracy": repr(result.accuracy),
                     "macro_f1": repr(result.macro_f1)}
                )
    else:
        raise ValueError(f"unknown report format {fmt!r} (expected json or csv)")
    return path
