"""Core argumentation data model: bipolar frameworks with base scores.

A framework holds a finite set of arguments, disjoint attack and support
relations between them, and a base score in [0, 1] per argument. Review
frameworks specialize this into three levels: text arguments feeding seven
fixed aspect arguments feeding a single decision argument.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping


class AspectLabel(str, Enum):
    """The seven review aspects used as argument identities."""

    APR = "APR"  # appropriateness
    CLA = "CLA"  # clarity
    NOV = "NOV"  # novelty
    EMP = "EMP"  # empirical and theoretical soundness
    CMP = "CMP"  # meaningful comparison
    SUB = "SUB"  # substance
    IMP = "IMP"  # impact


ASPECT_LABELS: tuple[AspectLabel, ...] = tuple(AspectLabel)

# Classifier-only bucket for sentences that fit no aspect. Never an argument.
OTHER = "OTHER"

CLASSIFIER_LABELS: frozenset[str] = frozenset(a.value for a in AspectLabel) | {OTHER}

DECISION_ID = "decision"


class ArgumentKind(str, Enum):
    TEXT = "text"
    ASPECT = "aspect"
    DECISION = "decision"


@dataclass(frozen=True)
class Argument:
    """One argument: opaque id, structural kind, optional display label."""

    id: str
    kind: ArgumentKind = ArgumentKind.TEXT
    aspect: AspectLabel | None = None  # set iff kind == ASPECT
    label: str | None = None

    @property
    def display(self) -> str:
        return self.label if self.label is not None else self.id


def aspect_argument(aspect: AspectLabel) -> Argument:
    return Argument(id=aspect.value, kind=ArgumentKind.ASPECT, aspect=aspect)


def decision_argument() -> Argument:
    return Argument(id=DECISION_ID, kind=ArgumentKind.DECISION)


def text_argument(arg_id: str, label: str | None = None) -> Argument:
    return Argument(id=arg_id, kind=ArgumentKind.TEXT, label=label)


Edge = tuple[str, str]


@dataclass(frozen=True)
class QBAF:
    """Arguments plus disjoint attack/support relations and base scores.

    Values are immutable after construction; builders assemble the pieces
    and `validate` reports structural violations as data rather than
    raising. Relations are sparse edge sets since frameworks here stay
    small (a few hundred nodes at most).
    """

    arguments: tuple[Argument, ...]
    attacks: frozenset[Edge]
    supports: frozenset[Edge]
    base_scores: Mapping[str, float]

    def __post_init__(self) -> None:
        object.__setattr__(self, "arguments", tuple(self.arguments))
        object.__setattr__(self, "attacks", frozenset((a, b) for a, b in self.attacks))
        object.__setattr__(self, "supports", frozenset((a, b) for a, b in self.supports))
        object.__setattr__(self, "base_scores", dict(self.base_scores))

    @property
    def ids(self) -> frozenset[str]:
        return frozenset(a.id for a in self.arguments)

    def argument(self, arg_id: str) -> Argument:
        for a in self.arguments:
            if a.id == arg_id:
                return a
        raise KeyError(f"unknown argument: {arg_id!r}")

    def _require(self, arg_id: str) -> None:
        if arg_id not in self.ids:
            raise KeyError(f"unknown argument: {arg_id!r}")

    def attackers(self, arg_id: str) -> set[str]:
        """Arguments with an attack edge into `arg_id`."""
        self._require(arg_id)
        return {b for (b, a) in self.attacks if a == arg_id}

    def supporters(self, arg_id: str) -> set[str]:
        """Arguments with a support edge into `arg_id`."""
        self._require(arg_id)
        return {b for (b, a) in self.supports if a == arg_id}

    def relations(self) -> frozenset[Edge]:
        return self.attacks | self.supports

    def validate(self) -> list[str]:
        """Return every violated structural invariant (empty list = ok)."""
        violations: list[str] = []
        seen: set[str] = set()
        for a in self.arguments:
            if a.id in seen:
                violations.append(f"duplicate argument id: {a.id!r}")
            seen.add(a.id)
            if (a.kind is ArgumentKind.ASPECT) != (a.aspect is not None):
                violations.append(f"aspect field inconsistent for {a.id!r}")
        ids = self.ids
        for name, edges in (("attack", self.attacks), ("support", self.supports)):
            for src, dst in edges:
                if src not in ids or dst not in ids:
                    violations.append(f"{name} edge ({src!r}, {dst!r}) touches undeclared argument")
                if src == dst:
                    violations.append(f"self-relation on {src!r}")
        for edge in self.attacks & self.supports:
            violations.append(f"relations not disjoint: {edge!r} is both attack and support")
        for arg_id in sorted(ids):
            if arg_id not in self.base_scores:
                violations.append(f"missing base score for {arg_id!r}")
        for arg_id, score in self.base_scores.items():
            if arg_id not in ids:
                violations.append(f"base score for unknown argument {arg_id!r}")
            elif not 0.0 <= score <= 1.0:
                violations.append(f"base score out of range for {arg_id!r}: {score}")
        return violations


def make_qbaf(
    arguments: Iterable[Argument],
    attacks: Iterable[Edge] = (),
    supports: Iterable[Edge] = (),
    base_scores: Mapping[str, float] | None = None,
) -> QBAF:
    return QBAF(
        arguments=tuple(arguments),
        attacks=frozenset(attacks),
        supports=frozenset(supports),
        base_scores=dict(base_scores or {}),
    )


# A review QBAF is a QBAF whose arguments partition into text arguments,
# the seven aspects, and one decision argument; `validate_review_qbaf`
# enforces the extra shape on top of `QBAF.validate`.
ReviewQBAF = QBAF


def validate_review_qbaf(q: QBAF) -> list[str]:
    """Structural violations of the three-level review shape."""
    violations = q.validate()
    decisions = [a for a in q.arguments if a.kind is ArgumentKind.DECISION]
    if len(decisions) != 1:
        violations.append(f"expected exactly one decision argument, found {len(decisions)}")
    aspects = {a.aspect for a in q.arguments if a.kind is ArgumentKind.ASPECT}
    missing = [lbl.value for lbl in ASPECT_LABELS if lbl not in aspects]
    if missing:
        violations.append(f"missing aspect arguments: {', '.join(missing)}")
    if len([a for a in q.arguments if a.kind is ArgumentKind.ASPECT]) > len(ASPECT_LABELS):
        violations.append("duplicate aspect arguments")
    kinds = {a.id: a.kind for a in q.arguments}
    for src, dst in q.relations():
        if src not in kinds or dst not in kinds:
            continue  # already reported by validate()
        text_to_aspect = kinds[src] is ArgumentKind.TEXT and kinds[dst] is ArgumentKind.ASPECT
        aspect_to_decision = kinds[src] is ArgumentKind.ASPECT and kinds[dst] is ArgumentKind.DECISION
        if not (text_to_aspect or aspect_to_decision):
            violations.append(f"relation ({src!r}, {dst!r}) breaks the text->aspect->decision typing")
    return violations


def _dot_quote(s: str) -> str:
    return '"' + s.replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(q: QBAF, strengths: Mapping[str, float] | None = None) -> str:
    """Render a framework as a DOT digraph.

    Attack edges carry label "-", support edges "+". Node labels show the
    base score, and "id (base: strength)" when a strength map is given.
    """
    lines = ["digraph qbaf {"]
    for a in q.arguments:
        beta = q.base_scores.get(a.id)
        if beta is None:
            text = a.id
        elif strengths is not None and a.id in strengths:
            text = f"{a.id} ({beta:g}: {strengths[a.id]:g})"
        else:
            text = f"{a.id} ({beta:g})"
        lines.append(f"  {_dot_quote(a.id)} [label={_dot_quote(text)}];")
    for src, dst in sorted(q.attacks):
        lines.append(f"  {_dot_quote(src)} -> {_dot_quote(dst)} [label=\"-\"];")
    for src, dst in sorted(q.supports):
        lines.append(f"  {_dot_quote(src)} -> {_dot_quote(dst)} [label=\"+\"];")
    lines.append("}")
    return "\n".join(lines) + "\n"


def qbaf_to_dict(q: QBAF) -> dict:
    """JSON-ready mapping with the fixture-file field names."""
    arguments = []
    for a in q.arguments:
        entry: dict = {"id": a.id, "kind": a.kind.value}
        if a.aspect is not None:
            entry["aspect"] = a.aspect.value
        arguments.append(entry)
    return {
        "arguments": arguments,
        "attacks": sorted([list(e) for e in q.attacks]),
        "supports": sorted([list(e) for e in q.supports]),
        "base_scores": {k: q.base_scores[k] for k in sorted(q.base_scores)},
    }


def qbaf_from_dict(data: Mapping) -> QBAF:
    arguments = []
    for entry in data["arguments"]:
        kind = ArgumentKind(entry["kind"])
        aspect = AspectLabel(entry["aspect"]) if "aspect" in entry else None
        arguments.append(Argument(id=entry["id"], kind=kind, aspect=aspect))
    return make_qbaf(
        arguments,
        attacks=[(src, dst) for src, dst in data.get("attacks", [])],
        supports=[(src, dst) for src, dst in data.get("supports", [])],
        base_scores=data.get("base_scores", {}),
    )


def qbaf_to_json(q: QBAF) -> str:
    return json.dumps(qbaf_to_dict(q), indent=2)


def qbaf_from_json(text: str) -> QBAF:
    return qbaf_from_dict(json.loads(text))
