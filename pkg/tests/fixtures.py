"""Shared fixture data as plain dicts/lists.

No package imports here: the golden-file generator and the oracle-based
tests read the same raw data without touching the code under test.
"""

import random

# Worked four-argument framework: attacks b->c and c->d, support a->c.
EXAMPLE_QBAF = {
    "base_scores": {"a": 0.5, "b": 0.4, "c": 0.2, "d": 0.7},
    "attacks": [("b", "c"), ("c", "d")],
    "supports": [("a", "c")],
}
EXAMPLE_DFQUAD_STRENGTHS = {"a": 0.5, "b": 0.4, "c": 0.28, "d": 0.504}
EXAMPLE_MLP_STRENGTHS = {"a": 0.5, "b": 0.4, "c": 0.216, "d": 0.653}  # within 1e-3

# Worked three-review combination: per-argument strength vectors.
COMBINED_VECTORS = {
    "APR": [0.6, 0.5, 0.9],
    "CLA": [0.7, 0.2, 0.8],
    "NOV": [0.4, 0.4, 0.4],
    "EMP": [0.6, 0.1, 0.7],
    "CMP": [0.3, 0.8, 0.1],
    "SUB": [0.7, 0.5, 0.9],
    "IMP": [0.6, 0.5, 0.9],
    "decision": [0.61, 0.53, 0.85],
}

ASPECTS = ("APR", "CLA", "NOV", "EMP", "CMP", "SUB", "IMP")

# Three annotated reviews exercising multi-aspect sentences, neutral
# sentences, OTHER sentences, and non-trivial confidences.
GOLDEN_PAPER = {
    "paper_id": "golden-1",
    "venue": "synthetic",
    "gold_decision": "accept",
    "source": "Synthetic",
    "reviews": [
        {
            "review_id": "r1",
            "sentences": [
                {"text": "The approach is novel and elegant.",
                 "aspects": ["NOV"], "sentiment": "positive", "confidence": 0.9},
                {"text": "Experiments support the main claims.",
                 "aspects": ["EMP"], "sentiment": "positive", "confidence": 0.7},
                {"text": "The related work section lists prior approaches.",
                 "aspects": ["CMP"], "sentiment": "neutral", "confidence": 0.6},
                {"text": "Some sections are hard to follow.",
                 "aspects": ["CLA"], "sentiment": "negative", "confidence": 0.6},
            ],
            "aspect_scores": {"APR": 0.75, "CLA": 0.5, "NOV": 1.0, "EMP": 0.75,
                              "CMP": 0.5, "SUB": 0.75, "IMP": 0.75},
        },
        {
            "review_id": "r2",
            "sentences": [
                {"text": "The novelty is limited compared to existing approaches.",
                 "aspects": ["NOV", "CMP"], "sentiment": "negative", "confidence": 0.8},
                {"text": "The paper is clearly written.",
                 "aspects": ["CLA"], "sentiment": "positive", "confidence": 0.9},
                {"text": "The evaluation misses an obvious baseline.",
                 "aspects": ["EMP", "CMP"], "sentiment": "negative", "confidence": 0.7},
                {"text": "Equation numbering follows the venue style.",
                 "aspects": ["OTHER"], "sentiment": "positive", "confidence": 0.8},
            ],
            "aspect_scores": {"APR": 0.5, "CLA": 0.75, "NOV": 0.25, "EMP": 0.25,
                              "CMP": 0.25, "SUB": 0.5, "IMP": 0.5},
        },
        {
            "review_id": "r3",
            "sentences": [
                {"text": "Strong results with careful analysis.",
                 "aspects": ["EMP", "SUB"], "sentiment": "positive", "confidence": 0.8},
                {"text": "The problem fits the venue well.",
                 "aspects": ["APR"], "sentiment": "positive", "confidence": 0.6},
                {"text": "The impact could be substantial.",
                 "aspects": ["IMP"], "sentiment": "positive", "confidence": 0.5},
            ],
            "aspect_scores": {"APR": 0.75, "CLA": 0.75, "NOV": 0.75, "EMP": 1.0,
                              "CMP": 0.5, "SUB": 0.75, "IMP": 0.75},
        },
    ],
}

# Engineered so the per-review decision strengths under sentiment base
# scores and product-sum semantics are exactly [0.55, 0.55, 0.1]: binary
# majority accepts 2-1, the five-level weights sum to -2 and reject.
FLIP_PAPER = {
    "paper_id": "flip-1",
    "venue": "synthetic",
    "gold_decision": "accept",
    "source": "Synthetic",
    "reviews": [
        {
            "review_id": "f1",
            "sentences": [
                {"text": "Mildly novel contribution.",
                 "aspects": ["NOV"], "sentiment": "positive", "confidence": 0.1},
            ],
        },
        {
            "review_id": "f2",
            "sentences": [
                {"text": "Somewhat novel contribution.",
                 "aspects": ["NOV"], "sentiment": "positive", "confidence": 0.1},
            ],
        },
        {
            "review_id": "f3",
            "sentences": [
                {"text": "The contribution is not novel.",
                 "aspects": ["NOV"], "sentiment": "negative", "confidence": 0.8},
            ],
        },
    ],
}

_SENTENCE_BANK = [
    ("The paper fits the scope of the venue.", ["APR"]),
    ("The writing is mostly clear.", ["CLA"]),
    ("Several passages are hard to parse.", ["CLA"]),
    ("The core idea is original.", ["NOV"]),
    ("The contribution feels incremental.", ["NOV"]),
    ("The experiments are convincing.", ["EMP"]),
    ("The empirical study is too small.", ["EMP"]),
    ("Baselines from recent work are compared.", ["CMP"]),
    ("Important baselines are missing.", ["CMP", "EMP"]),
    ("There is plenty of substance here.", ["SUB"]),
    ("The paper would benefit from more results.", ["SUB"]),
    ("The results could influence the community.", ["IMP"]),
    ("The practical impact seems narrow.", ["IMP"]),
    ("Formatting follows the template.", ["OTHER"]),
]


def make_grid_papers(n_papers=20, seed=20240917):
    """Deterministic annotated corpus for grid bookkeeping tests."""
    rng = random.Random(seed)
    papers = []
    for p in range(n_papers):
        lean_accept = p % 2 == 0
        reviews = []
        for r in range(rng.randint(2, 4)):
            sentences = []
            for k in range(rng.randint(2, 5)):
                text, aspects = rng.choice(_SENTENCE_BANK)
                if aspects == ["OTHER"]:
                    sentiment = rng.choice(["positive", "neutral", "negative"])
                elif lean_accept:
                    sentiment = rng.choice(["positive", "positive", "positive", "negative", "neutral"])
                else:
                    sentiment = rng.choice(["negative", "negative", "negative", "positive", "neutral"])
                sentences.append({
                    # Unique prefix keeps one annotation per sentence text.
                    "text": f"Point {k + 1}: {text}",
                    "aspects": list(aspects),
                    "sentiment": sentiment,
                    "confidence": round(rng.uniform(0.3, 1.0), 2),
                })
            scores = {a: round(rng.uniform(0.0, 1.0), 2) for a in ASPECTS}
            reviews.append({"review_id": f"p{p}r{r}", "sentences": sentences,
                            "aspect_scores": scores})
        papers.append({
            "paper_id": f"synthetic-{p}",
            "venue": "synthetic",
            "gold_decision": "accept" if lean_accept else "reject",
            "source": "Synthetic",
            "reviews": reviews,
        })
    return papers
