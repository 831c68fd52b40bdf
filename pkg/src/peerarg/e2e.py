"""Few-shot baseline: predict acceptance straight from concatenated reviews.

The prompt shows a handful of worked papers (reviews plus final decision)
and then the target paper's reviews with the decision left blank for the
completion model to fill in.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from importlib import resources
from typing import Sequence

from .adapters import CompletionEndpoint, completion_call
from .aggregation import FinalDecision

VERDICTS = ("accept", "reject")


@dataclass(frozen=True)
class PrimerExample:
    reviews: tuple[str, ...]
    decision: str

    def __post_init__(self) -> None:
        object.__setattr__(self, "reviews", tuple(self.reviews))
        if not self.reviews:
            raise ValueError("primer example needs at least one review")
        if self.decision not in VERDICTS:
            raise ValueError(f"primer decision must be accept/reject: {self.decision!r}")


@dataclass(frozen=True)
class E2EPrimer:
    examples: tuple[PrimerExample, ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "examples", tuple(self.examples))
        if len(self.examples) < 2:
            raise ValueError("primer needs at least two examples")
        decisions = {ex.decision for ex in self.examples}
        if decisions != set(VERDICTS):
            raise ValueError("primer needs at least one accept and one reject example")

    @classmethod
    def from_file(cls, path) -> "E2EPrimer":
        """Load from a JSON list of {reviews: [text], decision: accept|reject}."""
        with open(path, encoding="utf-8") as handle:
            entries = json.load(handle)
        return cls(
            examples=tuple(
                PrimerExample(reviews=tuple(e["reviews"]), decision=e["decision"])
                for e in entries
            )
        )


def packaged_primer_path():
    """Editable default primer shipped with the package (synthetic reviews)."""
    return resources.files("peerarg").joinpath("data/e2e_primer.json")


def _paper_block(reviews: Sequence[str], decision: str | None) -> str:
    lines = [f'Review==> "{review}"' for review in reviews]
    lines.append("Decision==> " + (decision if decision is not None else ""))
    return "\n".join(lines)


def build_e2e_prompt(
    primer: E2EPrimer | Sequence[PrimerExample], reviews: Sequence[str]
) -> str:
    """Primer blocks, then the target reviews with an open decision slot.

    The prompt ends exactly with "Decision==> " so the completion starts
    at the verdict. Accepts a full primer or any sequence of examples
    (the structural rule is one decision line per block).
    """
    if not reviews:
        raise ValueError("no reviews to predict from")
    examples = primer.examples if isinstance(primer, E2EPrimer) else tuple(primer)
    blocks = [_paper_block(ex.reviews, ex.decision) for ex in examples]
    blocks.append(_paper_block(reviews, None))
    return "\n\n".join(blocks)


def parse_e2e_decision(raw: str) -> str | None:
    """First occurrence of accept/reject in the first non-blank line wins;
    None when neither appears (unparseable, not an error)."""
    first_line = raw.lstrip().split("\n", 1)[0].lower()
    accept_at = first_line.find("accept")
    reject_at = first_line.find("reject")
    if accept_at < 0 and reject_at < 0:
        return None
    if accept_at < 0:
        return "reject"
    if reject_at < 0:
        return "accept"
    return "accept" if accept_at < reject_at else "reject"


def predict_e2e(
    reviews: Sequence[str], primer: E2EPrimer, endpoint: CompletionEndpoint
) -> FinalDecision:
    """Build the prompt, call the endpoint, parse the verdict.

    Unparseable completions count as reject and are flagged in the trace
    so parse failures stay visible in any downstream metric.
    """
    prompt = build_e2e_prompt(primer, reviews)
    completion = completion_call(endpoint, prompt)
    parsed = parse_e2e_decision(completion)
    verdict = parsed if parsed is not None else "reject"
    return FinalDecision(
        verdict=verdict,
        decision_strength=1.0 if verdict == "accept" else 0.0,
        path="e2e-llm",
        trace={
            "prompt_sha256": hashlib.sha256(prompt.encode("utf-8")).hexdigest(),
            "completion": completion,
            "parse": parsed if parsed is not None else "unparseable",
        },
    )
