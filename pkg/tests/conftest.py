import json
import random
import threading
from http.server import BaseHTTPRequestHandler, ThreadingHTTPServer

import pytest

from peerarg.aggregation import TrimmedReviewQBAF
from peerarg.core import (
    ASPECT_LABELS,
    DECISION_ID,
    Argument,
    aspect_argument,
    decision_argument,
    make_qbaf,
)
from peerarg.datasets import PaperRecord, ReviewRecord, SentenceAnnotation

from fixtures import COMBINED_VECTORS, EXAMPLE_QBAF, FLIP_PAPER, GOLDEN_PAPER, make_grid_papers


@pytest.fixture
def example_qbaf():
    return make_qbaf(
        [Argument(i) for i in "abcd"],
        attacks=EXAMPLE_QBAF["attacks"],
        supports=EXAMPLE_QBAF["supports"],
        base_scores=EXAMPLE_QBAF["base_scores"],
    )


def random_acyclic_qbaf(rng: random.Random, max_nodes: int = 30, edge_rate: float = 0.3):
    """Random DAG framework: edges only run from lower to higher index."""
    n = rng.randint(1, max_nodes)
    ids = [f"n{i}" for i in range(n)]
    attacks, supports = [], []
    for j in range(n):
        for i in range(j):
            roll = rng.random()
            if roll < edge_rate / 2:
                attacks.append((ids[i], ids[j]))
            elif roll < edge_rate:
                supports.append((ids[i], ids[j]))
    return make_qbaf(
        [Argument(i) for i in ids],
        attacks=attacks,
        supports=supports,
        base_scores={i: rng.random() for i in ids},
    )


def dag_depth(q) -> int:
    """Longest relation path, in edges."""
    incoming = {a.id: [] for a in q.arguments}
    for src, dst in q.relations():
        incoming[dst].append(src)
    memo: dict[str, int] = {}

    def depth(arg_id: str) -> int:
        if arg_id not in memo:
            memo[arg_id] = (
                0 if not incoming[arg_id] else 1 + max(depth(b) for b in incoming[arg_id])
            )
        return memo[arg_id]

    return max(depth(a.id) for a in q.arguments)


def trimmed_from_strengths(strengths: dict[str, float]) -> TrimmedReviewQBAF:
    """A trimmed review framework whose aspect polarity follows the
    strengths (attack below 0.5), as the extractor would produce."""
    arguments = [aspect_argument(lbl) for lbl in ASPECT_LABELS] + [decision_argument()]
    attacks, supports = [], []
    for lbl in ASPECT_LABELS:
        edge = (lbl.value, DECISION_ID)
        (attacks if strengths[lbl.value] < 0.5 else supports).append(edge)
    qbaf = make_qbaf(
        arguments,
        attacks=attacks,
        supports=supports,
        base_scores={a.id: 0.5 for a in arguments},
    )
    return TrimmedReviewQBAF(qbaf=qbaf, strengths=dict(strengths))


@pytest.fixture
def combined_trimmed():
    """Three trimmed frameworks reproducing the worked strength vectors."""
    per_review = []
    for i in range(3):
        per_review.append(
            trimmed_from_strengths({arg: vec[i] for arg, vec in COMBINED_VECTORS.items()})
        )
    return per_review


def paper_record_from_fixture(raw: dict) -> PaperRecord:
    reviews = []
    for review in raw["reviews"]:
        annotations = tuple(
            SentenceAnnotation(
                sentence=s["text"],
                aspects=tuple(s["aspects"]),
                sentiment=s["sentiment"],
                confidence=s.get("confidence"),
            )
            for s in review["sentences"]
        )
        reviews.append(
            ReviewRecord(
                review_id=review["review_id"],
                text=" ".join(s["text"] for s in review["sentences"]),
                sentence_annotations=annotations,
                aspect_scores=review.get("aspect_scores"),
            )
        )
    return PaperRecord(
        paper_id=raw["paper_id"],
        venue=raw["venue"],
        reviews=tuple(reviews),
        gold_decision=raw["gold_decision"],
        source=raw["source"],
    )


@pytest.fixture
def golden_paper():
    return paper_record_from_fixture(GOLDEN_PAPER)


@pytest.fixture
def flip_paper():
    return paper_record_from_fixture(FLIP_PAPER)


@pytest.fixture(scope="session")
def grid_papers():
    return [paper_record_from_fixture(raw) for raw in make_grid_papers()]


class _StubHandler(BaseHTTPRequestHandler):
    def do_POST(self):
        length = int(self.headers.get("Content-Length", 0))
        body = json.loads(self.rfile.read(length) or b"{}")
        self.server.requests.append(body)
        status, payload = self.server.behavior(body)
        data = payload if isinstance(payload, bytes) else json.dumps(payload).encode("utf-8")
        try:
            self.send_response(status)
            self.send_header("Content-Type", "application/json")
            self.send_header("Content-Length", str(len(data)))
            self.end_headers()
            self.wfile.write(data)
        except (BrokenPipeError, ConnectionResetError):
            pass  # client gave up (timeout tests)

    def log_message(self, *args):
        pass


class StubCompletionServer:
    """Tiny completion endpoint whose behavior tests can reprogram."""

    def __init__(self):
        self._server = ThreadingHTTPServer(("127.0.0.1", 0), _StubHandler)
        self._server.requests = []
        self._server.behavior = lambda body: (200, {"text": ""})
        self._thread = threading.Thread(target=self._server.serve_forever, daemon=True)
        self._thread.start()

    @property
    def url(self) -> str:
        host, port = self._server.server_address
        return f"http://{host}:{port}/"

    @property
    def requests(self) -> list:
        return self._server.requests

    def respond_text(self, text: str):
        self._server.behavior = lambda body: (200, {"text": text})

    def respond_with(self, fn):
        """fn(request_body) -> (status, payload)."""
        self._server.behavior = fn

    def close(self):
        self._server.shutdown()
        self._server.server_close()


@pytest.fixture
def stub_server():
    server = StubCompletionServer()
    yield server
    server.close()
