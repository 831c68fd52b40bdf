"""Peer-review acceptance prediction via quantitative bipolar argumentation."""

from .core import (
    ASPECT_LABELS,
    DECISION_ID,
    OTHER,
    Argument,
    ArgumentKind,
    AspectLabel,
    QBAF,
    export_dot,
    make_qbaf,
    qbaf_from_dict,
    qbaf_from_json,
    qbaf_to_dict,
    qbaf_to_json,
    validate_review_qbaf,
)
from .semantics import (
    CyclicFrameworkError,
    NonConvergentError,
    SemanticsConfig,
    SemanticsKind,
    df_quad_aggregate,
    df_quad_influence,
    evaluate,
    evaluate_df_quad,
    evaluate_mlp,
    mlp_influence,
)
from .extraction import (
    BaseScoreMode,
    ClassifiedSentence,
    ExtractionConfig,
    Relation,
    ReviewSentence,
    build_review_qbaf,
    classify_review,
    resolve_aspect_relation,
    split_and_clean,
)
from .aggregation import (
    Aggregator,
    DecisionLevel,
    FinalDecision,
    Interpretation,
    PreMPAF,
    TrimmedReviewQBAF,
    aggregate_binary_all_accept,
    aggregate_binary_majority,
    aggregate_five_level_all_accept,
    aggregate_five_level_majority,
    build_mpaf,
    combine,
    decide_path1,
    decide_path2,
    interpret_binary,
    interpret_five_level,
    mean_strength,
    trim,
)
from .datasets import PaperRecord, ReviewRecord, SentenceAnnotation, load_jsonl, write_jsonl
from .evaluation import (
    HyperparamCombo,
    NAMED_COMBOS,
    RunReport,
    accuracy,
    emit_report,
    enumerate_combos,
    macro_f1,
    predict_paper,
    run_grid,
)

__version__ = "0.1.0"
