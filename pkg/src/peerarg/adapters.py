"""Concrete classification and sentiment ports.

Three flavours: a generic text-completion HTTP client driving a few-shot
aspect prompt, an oracle that replays gold per-sentence annotations, and
deterministic offline doubles (keyword aspects, lexicon sentiment) for
tests and fixtures. The completion wire contract is a minimal JSON POST
{model, prompt, max_tokens, temperature} answered by {text}; any server
honouring it works, the concrete model is configuration.
"""

from __future__ import annotations

import re
import threading
import time
from dataclasses import dataclass
from importlib import resources
from typing import Iterable, Sequence

import requests

from .core import CLASSIFIER_LABELS, OTHER
from .extraction import normalize_aspect_set


class CompletionError(RuntimeError):
    """Base class for completion-endpoint failures."""


class CompletionTimeout(CompletionError):
    """The request timed out, including on every retry."""


class ServiceUnavailable(CompletionError):
    """The endpoint was unreachable or kept answering with errors."""


class MalformedResponse(CompletionError):
    """The endpoint answered, but not with the agreed JSON shape."""


@dataclass(frozen=True)
class CompletionEndpoint:
    base_url: str
    model: str
    timeout: float = 30.0
    max_retries: int = 2
    temperature: float = 0.0  # deterministic decoding by default
    max_tokens: int = 16
    backoff_seconds: float = 0.5
    max_concurrency: int = 4
    api_key: str | None = None

    def __post_init__(self) -> None:
        if self.timeout <= 0:
            raise ValueError(f"timeout must be positive: {self.timeout}")
        if self.max_retries < 0:
            raise ValueError(f"max retries must be >= 0: {self.max_retries}")
        if self.max_concurrency < 1:
            raise ValueError(f"max concurrency must be >= 1: {self.max_concurrency}")


def _post_completion(endpoint: CompletionEndpoint, prompt: str, session: requests.Session) -> str:
    payload = {
        "model": endpoint.model,
        "prompt": prompt,
        "max_tokens": endpoint.max_tokens,
        "temperature": endpoint.temperature,
    }
    headers = {}
    if endpoint.api_key:
        headers["Authorization"] = f"Bearer {endpoint.api_key}"
    last_error: CompletionError | None = None
    for attempt in range(endpoint.max_retries + 1):
        if attempt > 0 and endpoint.backoff_seconds > 0:
            time.sleep(endpoint.backoff_seconds * 2 ** (attempt - 1))
        try:
            response = session.post(
                endpoint.base_url, json=payload, timeout=endpoint.timeout, headers=headers
            )
        except requests.Timeout as exc:
            last_error = CompletionTimeout(f"timed out after {endpoint.timeout}s: {exc}")
            continue
        except requests.RequestException as exc:
            last_error = ServiceUnavailable(f"endpoint unreachable: {exc}")
            continue
        if response.status_code >= 500:
            last_error = ServiceUnavailable(f"server error {response.status_code}")
            continue
        if response.status_code != 200:
            raise ServiceUnavailable(f"unexpected status {response.status_code}")
        try:
            body = response.json()
        except ValueError as exc:
            raise MalformedResponse(f"response is not JSON: {exc}") from exc
        if not isinstance(body, dict) or not isinstance(body.get("text"), str):
            raise MalformedResponse("response JSON has no 'text' field")
        return body["text"]
    assert last_error is not None
    raise last_error


def completion_call(endpoint: CompletionEndpoint, prompt: str) -> str:
    """One-shot completion request with retry and backoff."""
    with requests.Session() as session:
        return _post_completion(endpoint, prompt, session)


class CompletionClient:
    """Shared session plus a semaphore bounding in-flight requests, so a
    batch run never exceeds the endpoint's concurrency cap."""

    def __init__(self, endpoint: CompletionEndpoint):
        self.endpoint = endpoint
        self._session = requests.Session()
        self._gate = threading.BoundedSemaphore(endpoint.max_concurrency)

    def complete(self, prompt: str) -> str:
        with self._gate:
            return _post_completion(self.endpoint, prompt, self._session)

    def close(self) -> None:
        self._session.close()


DEFAULT_ASPECT_CRITERIA = """\
7 aspect criteria for paper review:
- Appropriateness (APR): Does the paper fit with this conference?
- Clarity (CLA): Is the paper well-written and well structured? Is it clear what was done and why?
- Novelty (NOV): How original is the approach? Does the paper break new ground in topic, methodology, or content?
- Empirical and Theoretical Soundness (EMP): Is the approach sound and well-chosen? Are the empirical claims supported by proper experiments? Are the results of the experiments correctly interpreted? Are the arguments in the paper cogent and well-supported?
- Meaningful Comparison (CMP): Is the work adequately compared against existing literature? Are the references adequate?
- Substance (SUB): Does this paper have enough substance, or would it benefit from more ideas or results?
- Impact (IMP): Is the work significant? Does it inspire new ideas or insights which can be impactful to the community?
N.B. Other comments not belonging to any aspect should be classified as OTHER."""

# Two real classification samples ship by default; extend the primer with
# samples from your own annotated data for better accuracy (around ten
# total works well).
DEFAULT_PRIMER_SAMPLES: tuple[tuple[str, tuple[str, ...]], ...] = (
    (
        "Deep Generative Replay section and description of DGDMN are written poorly "
        "and is very incomprehensible.",
        ("CLA",),
    ),
    (
        "One observation not discussed by the authors is that the performance of the "
        "student network under each low precision regime doesn't improve with deeper "
        "teacher networks (see Table 1, 2 & 3).",
        ("SUB", "EMP"),
    ),
)

SENTENCE_MARKER = "{SENTENCE}"


@dataclass(frozen=True)
class AspectPromptTemplate:
    """Few-shot aspect prompt: criteria preamble, primer samples, and a
    trailing slot for the sentence to classify.

    The canonical form is the full prompt text with a {SENTENCE} marker;
    rendering substitutes the marker and leaves nothing after the final
    "Aspects: ".
    """

    text: str

    def __post_init__(self) -> None:
        if SENTENCE_MARKER not in self.text:
            raise ValueError(f"template has no {SENTENCE_MARKER} marker")
        if f"Sentence: {SENTENCE_MARKER}" not in self.text:
            raise ValueError("marker must follow a 'Sentence: ' placeholder")
        if not self.text.endswith("Aspects: "):
            raise ValueError("template must end with 'Aspects: '")

    @classmethod
    def from_parts(
        cls,
        preamble: str,
        primer: Sequence[tuple[str, Iterable[str]]],
    ) -> "AspectPromptTemplate":
        if not primer:
            raise ValueError("primer must contain at least one sample")
        blocks = [preamble.rstrip()]
        for sentence, aspects in primer:
            labels = ", ".join(aspects)
            blocks.append(f"Sentence: {sentence}\nAspects: {labels}")
        blocks.append(f"Sentence: {SENTENCE_MARKER}\nAspects: ")
        return cls(text="\n\n".join(blocks))

    @classmethod
    def from_file(cls, path) -> "AspectPromptTemplate":
        with open(path, encoding="utf-8") as handle:
            return cls(text=handle.read())

    def render(self, sentence: str) -> str:
        return self.text.replace(SENTENCE_MARKER, sentence)


def default_aspect_template() -> AspectPromptTemplate:
    return AspectPromptTemplate.from_parts(DEFAULT_ASPECT_CRITERIA, DEFAULT_PRIMER_SAMPLES)


def packaged_aspect_template_path():
    """Path to the editable plain-text copy of the default template."""
    return resources.files("peerarg").joinpath("data/aspect_prompt.txt")


def build_aspect_prompt(template: AspectPromptTemplate, sentence: str) -> str:
    return template.render(sentence)


_TOKEN_SPLIT = re.compile(r"[,\s]+")


def parse_aspect_response(raw: str) -> frozenset[str]:
    """Read aspect labels out of a completion; total on any byte string.

    Only the first non-blank line counts (few-shot completions tend to
    keep generating further fake samples). Known tokens are collected
    case-insensitively, everything else is ignored; no token at all
    degrades to {OTHER}.
    """
    first_line = raw.lstrip().split("\n", 1)[0]
    found = {
        token.upper()
        for token in _TOKEN_SPLIT.split(first_line)
        if token.upper() in CLASSIFIER_LABELS
    }
    return normalize_aspect_set(found)


class MissingAnnotationError(LookupError):
    """A gold-annotation lookup failed for a sentence."""


class OracleAnnotationPorts:
    """Classifier and sentiment ports backed by gold annotations.

    Keyed by exact (cleaned) sentence text; an unannotated sentence is an
    error rather than a guess, keeping oracle runs fully deterministic.
    """

    def __init__(self, annotations: Sequence):
        self._by_text = {}
        for ann in annotations:
            self._by_text[ann.sentence] = ann

    def _lookup(self, sentence: str):
        if sentence not in self._by_text:
            raise MissingAnnotationError(f"no annotation for sentence: {sentence!r}")
        return self._by_text[sentence]

    def classify(self, sentence: str) -> set[str]:
        return set(normalize_aspect_set(set(self._lookup(sentence).aspects)))

    def analyze(self, sentence: str) -> tuple[str, float]:
        ann = self._lookup(sentence)
        confidence = 1.0 if getattr(ann, "confidence", None) is None else ann.confidence
        return ann.sentiment, confidence


def oracle_ports(annotations: Sequence) -> OracleAnnotationPorts:
    """Both ports from per-sentence gold annotations; confidence defaults
    to 1.0 when the dataset gives none."""
    return OracleAnnotationPorts(annotations)


class CompletionAspectClassifier:
    """Aspect port over the completion endpoint with a few-shot prompt."""

    def __init__(self, client: CompletionClient, template: AspectPromptTemplate | None = None):
        self._client = client
        self._template = template or default_aspect_template()

    def classify(self, sentence: str) -> set[str]:
        completion = self._client.complete(build_aspect_prompt(self._template, sentence))
        return set(parse_aspect_response(completion))


# Offline doubles. Word lists are test fixtures for deterministic runs,
# not a serious sentiment or aspect model.

_POSITIVE_TERMS = frozenset(
    """good great excellent clear strong novel interesting solid convincing
    thorough important significant impressive sound useful elegant careful
    comprehensive insightful""".split()
)
_NEGATIVE_TERMS = frozenset(
    """bad poor poorly weak unclear confusing incremental trivial lacks
    lacking missing wrong incorrect insufficient limited flawed vague
    incomprehensible overstated""".split()
)

_WORD = re.compile(r"[a-z']+")


class LexiconSentimentAnalyzer:
    """Word-list sentiment: label by the dominant polarity, confidence by
    the matched-term ratio; no hits or a tie reads as neutral."""

    def analyze(self, sentence: str) -> tuple[str, float]:
        tokens = _WORD.findall(sentence.lower())
        pos = sum(1 for t in tokens if t in _POSITIVE_TERMS)
        neg = sum(1 for t in tokens if t in _NEGATIVE_TERMS)
        if pos == neg:
            return "neutral", 0.0
        label = "positive" if pos > neg else "negative"
        return label, max(pos, neg) / (pos + neg)


_ASPECT_KEYWORDS: dict[str, str] = {
    "fit": "APR", "scope": "APR", "appropriate": "APR", "venue": "APR", "conference": "APR",
    "clear": "CLA", "unclear": "CLA", "written": "CLA", "writing": "CLA", "structured": "CLA",
    "structure": "CLA", "presentation": "CLA", "readable": "CLA", "confusing": "CLA",
    "incomprehensible": "CLA",
    "novel": "NOV", "novelty": "NOV", "original": "NOV", "originality": "NOV", "incremental": "NOV",
    "experiment": "EMP", "experiments": "EMP", "empirical": "EMP", "evaluation": "EMP",
    "proof": "EMP", "proofs": "EMP", "sound": "EMP", "soundness": "EMP", "theoretical": "EMP",
    "baseline": "CMP", "baselines": "CMP", "comparison": "CMP", "compared": "CMP",
    "literature": "CMP", "references": "CMP", "related": "CMP",
    "substance": "SUB", "thorough": "SUB", "depth": "SUB", "content": "SUB", "ideas": "SUB",
    "impact": "IMP", "significant": "IMP", "significance": "IMP", "important": "IMP",
    "community": "IMP",
}


class KeywordAspectClassifier:
    """Keyword-lookup aspect double; sentences matching nothing are OTHER."""

    def classify(self, sentence: str) -> set[str]:
        hits = {
            _ASPECT_KEYWORDS[t] for t in _WORD.findall(sentence.lower()) if t in _ASPECT_KEYWORDS
        }
        return hits or {OTHER}


class OraclePortProvider:
    """Per-review ports that replay the review's gold annotations."""

    cache_key = "oracle"

    def ports_for(self, paper, review):
        if review.sentence_annotations is None:
            raise MissingAnnotationError(
                f"review {review.review_id!r} of paper {paper.paper_id!r} has no annotations"
            )
        ports = oracle_ports(review.sentence_annotations)
        return ports, ports


class FixturePortProvider:
    """Deterministic offline ports (keyword aspects, lexicon sentiment)."""

    cache_key = "fixture"

    def __init__(self) -> None:
        self._classifier = KeywordAspectClassifier()
        self._sentiment = LexiconSentimentAnalyzer()

    def ports_for(self, paper, review):
        return self._classifier, self._sentiment


class CompletionPortProvider:
    """Aspect classification through the completion endpoint; sentiment
    stays on the offline double unless another analyzer is supplied (the
    wire contract covers completions only)."""

    def __init__(
        self,
        endpoint: CompletionEndpoint,
        template: AspectPromptTemplate | None = None,
        sentiment=None,
    ):
        self.cache_key = f"completion:{endpoint.model}@{endpoint.base_url}"
        self._classifier = CompletionAspectClassifier(CompletionClient(endpoint), template)
        self._sentiment = sentiment or LexiconSentimentAnalyzer()

    def ports_for(self, paper, review):
        return self._classifier, self._sentiment
