"""Command-line surface: extract | predict | grid | e2e | validate-dataset.

Settings resolve in three layers: environment variables (PEERARG_ENDPOINT,
PEERARG_API_KEY) are the base, command-line flags override them, and a
--config JSON file overrides both. Exit codes: 0 success, 1 degraded run
(per-paper failures were logged), 2 usage or configuration error.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from pathlib import Path

from .adapters import (
    CompletionEndpoint,
    CompletionPortProvider,
    FixturePortProvider,
    OraclePortProvider,
)
from .aggregation import Aggregator, Interpretation
from .core import export_dot, qbaf_to_dict
from .datasets import DatasetError, load_jsonl
from .e2e import E2EPrimer, packaged_primer_path, predict_e2e
from .evaluation import (
    NAMED_COMBOS,
    HyperparamCombo,
    accuracy,
    emit_report,
    enumerate_combos,
    macro_f1,
    predict_paper,
    run_grid,
)
from .extraction import BaseScoreMode, ExtractionConfig, build_review_qbaf, classify_review, split_and_clean
from .semantics import SemanticsConfig, SemanticsKind

log = logging.getLogger("peerarg")


class UsageError(Exception):
    """Bad flags, bad config, missing files; maps to exit code 2."""


def _load_config(args) -> dict:
    if not getattr(args, "config", None):
        return {}
    path = Path(args.config)
    if not path.exists():
        raise UsageError(f"config file not found: {path}")
    try:
        config = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise UsageError(f"config file is not valid JSON: {exc}")
    if not isinstance(config, dict):
        raise UsageError("config file must hold a JSON object")
    return config


def _resolve(args, config: dict, key: str, env: str | None = None, default=None):
    # env < flag < config file
    value = default
    if env is not None and os.environ.get(env):
        value = os.environ[env]
    flag = getattr(args, key.replace("-", "_"), None)
    if flag is not None:
        value = flag
    if key in config:
        value = config[key]
    return value


def _endpoint(args, config: dict) -> CompletionEndpoint | None:
    url = _resolve(args, config, "endpoint", env="PEERARG_ENDPOINT")
    if not url:
        return None
    return CompletionEndpoint(
        base_url=str(url),
        model=str(_resolve(args, config, "model", default="default")),
        timeout=float(_resolve(args, config, "timeout", default=30.0)),
        max_retries=int(_resolve(args, config, "max_retries", default=2)),
        temperature=float(_resolve(args, config, "temperature", default=0.0)),
        api_key=_resolve(args, config, "api_key", env="PEERARG_API_KEY"),
    )


def _ports(args, config: dict):
    choice = _resolve(args, config, "ports", default="oracle")
    if choice == "oracle":
        return OraclePortProvider()
    if choice == "fixture":
        return FixturePortProvider()
    if choice == "completion":
        endpoint = _endpoint(args, config)
        if endpoint is None:
            raise UsageError("completion ports need an endpoint (flag, config, or PEERARG_ENDPOINT)")
        return CompletionPortProvider(endpoint)
    raise UsageError(f"unknown port choice {choice!r} (expected oracle, fixture, or completion)")


def _dataset(args, config: dict):
    path = _resolve(args, config, "dataset")
    if not path:
        raise UsageError("no dataset given")
    path = Path(path)
    if not path.exists():
        raise UsageError(f"dataset not found: {path}")
    try:
        papers = load_jsonl(path)
    except DatasetError as exc:
        raise UsageError(f"invalid dataset: {exc}")
    if not papers:
        raise UsageError(f"dataset is empty: {path}")
    return path, papers


def _out_dir(args, config: dict) -> Path:
    out = Path(_resolve(args, config, "out", default="out"))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _parse_combo(token: str) -> HyperparamCombo:
    """A combo by name (best-overall etc.) or by id, e.g.
    sentiment+dfquad+5-level+majority or sentiment+dfquad+-+dfquad[+scores]."""
    if token in NAMED_COMBOS:
        return NAMED_COMBOS[token]
    parts = token.split("+")
    use_scores = False
    if parts and parts[-1] == "scores":
        use_scores = True
        parts = parts[:-1]
    if len(parts) != 4:
        raise UsageError(f"unknown combo {token!r}")
    base, sem, decision_strength, aggregation = parts
    try:
        base_mode = BaseScoreMode(base)
        sem_kind = SemanticsKind(sem)
        if decision_strength == "-":
            return HyperparamCombo(base_mode, sem_kind,
                                   agg_semantics=SemanticsKind(aggregation),
                                   use_review_aspect_scores=use_scores)
        return HyperparamCombo(base_mode, sem_kind,
                               interpretation=Interpretation(decision_strength),
                               aggregator=Aggregator(aggregation),
                               use_review_aspect_scores=use_scores)
    except ValueError as exc:
        raise UsageError(f"unknown combo {token!r}: {exc}")


def _jobs(args, config: dict) -> int:
    jobs = _resolve(args, config, "jobs")
    if jobs is None:
        return os.cpu_count() or 1
    jobs = int(jobs)
    if jobs < 1:
        raise UsageError(f"--jobs must be >= 1: {jobs}")
    return jobs


def cmd_extract(args) -> int:
    config = _load_config(args)
    out = _out_dir(args, config)
    ports = _ports(args, config)
    semantics = SemanticsConfig(kind=SemanticsKind(_resolve(args, config, "semantics", default="dfquad")))
    base_mode = BaseScoreMode(_resolve(args, config, "base_score", default="default"))
    use_scores = bool(_resolve(args, config, "with_aspect_scores", default=False))
    _, papers = _dataset(args, config)
    written = 0
    for paper in papers:
        for review in paper.reviews:
            classifier, sentiment = ports.ports_for(paper, review)
            classified = classify_review(split_and_clean(review.text), classifier, sentiment)
            cfg = ExtractionConfig(
                base_score_mode=base_mode,
                semantics=semantics,
                aspect_base_scores=review.aspect_scores if use_scores else None,
            )
            framework, strengths = build_review_qbaf(classified, cfg)
            stem = f"{paper.paper_id}_{review.review_id or written}"
            payload = {
                "paper_id": paper.paper_id,
                "review_id": review.review_id,
                "framework": qbaf_to_dict(framework),
                "strengths": strengths,
            }
            (out / f"{stem}.json").write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
            if args.dot:
                (out / f"{stem}.dot").write_text(export_dot(framework, strengths), encoding="utf-8")
            written += 1
    log.info("wrote %d review frameworks to %s", written, out)
    return 0


def cmd_predict(args) -> int:
    config = _load_config(args)
    out = _out_dir(args, config)
    ports = _ports(args, config)
    combo = _parse_combo(_resolve(args, config, "combo", default="best-overall"))
    _, papers = _dataset(args, config)
    failed = 0
    lines = []
    for paper in papers:
        try:
            decision = predict_paper(paper, combo, ports)
        except Exception as exc:
            failed += 1
            log.error("paper %s failed: %s", paper.paper_id, exc)
            continue
        record = decision.to_dict(paper.paper_id)
        record["gold"] = paper.gold_decision
        lines.append(json.dumps(record))
    (out / "decisions.jsonl").write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
    log.info("predicted %d papers (%d failed) with combo %s", len(lines), failed, combo.combo_id)
    return 1 if failed else 0


def cmd_grid(args) -> int:
    config = _load_config(args)
    out = _out_dir(args, config)
    ports = _ports(args, config)
    dataset_path, papers = _dataset(args, config)
    selection = _resolve(args, config, "combos", default="all")
    if selection == "all":
        combos = enumerate_combos(
            include_aspect_scores=bool(_resolve(args, config, "with_aspect_scores", default=False))
        )
    else:
        tokens = selection.split(",") if isinstance(selection, str) else list(selection)
        combos = [_parse_combo(token.strip()) for token in tokens]
        if not combos:
            raise UsageError("empty combo selection")
    report = run_grid(papers, combos, ports, jobs=_jobs(args, config), dataset_id=str(dataset_path))
    emit_report(report, "json", out / "report.json")
    emit_report(report, "csv", out / "report.csv")
    failures = sum(r.n_failed for r in report.results)
    log.info("grid over %d combos x %d papers done, %d failures", len(combos), len(papers), failures)
    return 1 if failures else 0


def cmd_e2e(args) -> int:
    config = _load_config(args)
    out = _out_dir(args, config)
    endpoint = _endpoint(args, config)
    if endpoint is None:
        raise UsageError("e2e needs an endpoint (flag, config, or PEERARG_ENDPOINT)")
    primer_path = _resolve(args, config, "primer")
    if primer_path is None:
        primer_path = packaged_primer_path()
    elif not Path(primer_path).exists():
        raise UsageError(f"primer file not found: {primer_path}")
    try:
        primer = E2EPrimer.from_file(primer_path)
    except (OSError, ValueError, KeyError) as exc:
        raise UsageError(f"bad primer file {primer_path}: {exc}")
    _, papers = _dataset(args, config)
    lines, pred, gold, unparseable, failed = [], [], [], 0, 0
    for paper in papers:
        try:
            decision = predict_e2e([r.text for r in paper.reviews], primer, endpoint)
        except Exception as exc:
            failed += 1
            log.error("paper %s failed: %s", paper.paper_id, exc)
            continue
        if decision.trace.get("parse") == "unparseable":
            unparseable += 1
        record = decision.to_dict(paper.paper_id)
        record["gold"] = paper.gold_decision
        lines.append(json.dumps(record))
        pred.append(decision.verdict)
        gold.append(paper.gold_decision)
    (out / "decisions.jsonl").write_text("\n".join(lines) + ("\n" if lines else ""), encoding="utf-8")
    summary = {
        "n_papers": len(papers),
        "n_scored": len(pred),
        "n_failed": failed,
        "n_unparseable": unparseable,
        "accuracy": accuracy(pred, gold) if pred else 0.0,
        "macro_f1": macro_f1(pred, gold) if pred else 0.0,
    }
    (out / "summary.json").write_text(json.dumps(summary, indent=2) + "\n", encoding="utf-8")
    log.info("e2e summary: %s", summary)
    return 1 if failed else 0


def cmd_validate_dataset(args) -> int:
    config = _load_config(args)
    _, papers = _dataset(args, config)
    print(f"ok: {len(papers)} papers")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="peerarg",
                                     description="Review aggregation via bipolar argumentation")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, ports: bool = True) -> None:
        p.add_argument("--dataset", help="normalized JSON-Lines dataset")
        p.add_argument("--config", help="JSON config file (overrides flags)")
        p.add_argument("--out", help="output directory (default: out)")
        if ports:
            p.add_argument("--ports", choices=["oracle", "fixture", "completion"],
                           help="classification/sentiment ports (default: oracle)")
            p.add_argument("--endpoint", help="completion endpoint URL")
            p.add_argument("--model", help="completion model identifier")
            p.add_argument("--timeout", type=float, help="endpoint timeout in seconds")
            p.add_argument("--max-retries", type=int, help="endpoint retry count")
            p.add_argument("--temperature", type=float, help="endpoint temperature")

    p = sub.add_parser("extract", help="write per-review frameworks and strengths")
    common(p)
    p.add_argument("--base-score", choices=[m.value for m in BaseScoreMode])
    p.add_argument("--semantics", choices=[k.value for k in SemanticsKind])
    p.add_argument("--with-aspect-scores", action="store_const", const=True, default=None)
    p.add_argument("--dot", action="store_true", help="also write DOT files")
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("predict", help="one decision per paper for one combo")
    common(p)
    p.add_argument("--combo", help="combo name (e.g. best-overall) or id")
    p.add_argument("--jobs", type=int)
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("grid", help="run the hyperparameter grid and emit reports")
    common(p)
    p.add_argument("--combos", help="'all' or comma-separated combo names/ids")
    p.add_argument("--with-aspect-scores", action="store_const", const=True, default=None,
                   help="also enumerate aspect-score-injection variants")
    p.add_argument("--jobs", type=int)
    p.set_defaults(func=cmd_grid)

    p = sub.add_parser("e2e", help="few-shot baseline over the completion endpoint")
    common(p)
    p.add_argument("--primer", help="primer JSON file (default: packaged synthetic primer)")
    p.set_defaults(func=cmd_e2e)

    p = sub.add_parser("validate-dataset", help="schema-check a JSON-Lines dataset")
    common(p, ports=False)
    p.set_defaults(func=cmd_validate_dataset)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
