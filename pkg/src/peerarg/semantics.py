"""Gradual semantics: map a framework to a final strength per argument.

Two evaluators ship. The product-sum evaluator folds attacker and
supporter strengths with f(x, y) = x + y - x*y and moves the base score
toward 0 or 1 by the difference of the two aggregates; it requires an
acyclic relation graph. The perceptron-style evaluator iterates a
sum-of-supporters-minus-attackers aggregation through a logistic squashing
around the base score's logit until a fixed point is reached.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Iterable, Mapping, Sequence

from .core import QBAF


class SemanticsKind(str, Enum):
    DF_QUAD = "dfquad"
    MLP = "mlp"


@dataclass(frozen=True)
class SemanticsConfig:
    """Numeric knobs for the fixed-point evaluator; the fold evaluator
    ignores everything but `kind`."""

    kind: SemanticsKind = SemanticsKind.DF_QUAD
    convergence_epsilon: float = 1e-8
    max_iterations: int = 1000
    logit_clamp_epsilon: float = 1e-6

    def __post_init__(self) -> None:
        if not 0.0 < self.convergence_epsilon < 1.0:
            raise ValueError(f"convergence_epsilon must be in (0, 1): {self.convergence_epsilon}")
        if self.max_iterations < 1:
            raise ValueError(f"max_iterations must be >= 1: {self.max_iterations}")
        if not 0.0 < self.logit_clamp_epsilon < 0.5:
            raise ValueError(f"logit_clamp_epsilon must be in (0, 0.5): {self.logit_clamp_epsilon}")


class CyclicFrameworkError(ValueError):
    """The fold evaluator is well-founded only on acyclic relation graphs."""


class NonConvergentError(RuntimeError):
    """Fixed-point iteration exhausted max_iterations without settling."""


StrengthAssignment = dict[str, float]


def _check_unit(value: float, what: str) -> float:
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"{what} out of [0, 1]: {value}")
    return value


def df_quad_aggregate(values: Iterable[float]) -> float:
    """Fold f(x, y) = x + y - x*y over the sequence; empty folds to 0.

    f is commutative and associative, so the result is permutation
    invariant up to float rounding.
    """
    acc: float | None = None
    for v in values:
        _check_unit(v, "aggregate input")
        acc = v if acc is None else acc + v - acc * v
    return 0.0 if acc is None else acc


def df_quad_influence(v0: float, va: float, vs: float) -> float:
    """Move base score v0 by |vs - va|: toward 0 when attackers dominate
    (va >= vs), toward 1 otherwise."""
    _check_unit(v0, "base score")
    _check_unit(va, "attack aggregate")
    _check_unit(vs, "support aggregate")
    if va >= vs:
        return v0 - v0 * (va - vs)
    return v0 + (1.0 - v0) * (vs - va)


def _influencers(q: QBAF) -> dict[str, tuple[list[str], list[str]]]:
    """Per argument: (sorted attackers, sorted supporters)."""
    att: dict[str, list[str]] = {a.id: [] for a in q.arguments}
    supp: dict[str, list[str]] = {a.id: [] for a in q.arguments}
    for src, dst in q.attacks:
        att[dst].append(src)
    for src, dst in q.supports:
        supp[dst].append(src)
    return {aid: (sorted(att[aid]), sorted(supp[aid])) for aid in att}


def topological_order(q: QBAF) -> list[str]:
    """Kahn's algorithm over the relation graph; raises on cycles."""
    ids = sorted(a.id for a in q.arguments)
    indegree = {aid: 0 for aid in ids}
    out: dict[str, list[str]] = {aid: [] for aid in ids}
    for src, dst in q.relations():
        out[src].append(dst)
        indegree[dst] += 1
    ready = [aid for aid in ids if indegree[aid] == 0]
    order: list[str] = []
    while ready:
        node = ready.pop()
        order.append(node)
        for nxt in sorted(out[node]):
            indegree[nxt] -= 1
            if indegree[nxt] == 0:
                ready.append(nxt)
    if len(order) != len(ids):
        cyclic = sorted(aid for aid in ids if indegree[aid] > 0)
        raise CyclicFrameworkError(f"relation graph has a cycle through: {', '.join(cyclic)}")
    return order


def evaluate_df_quad(q: QBAF, order: Sequence[str] | None = None) -> StrengthAssignment:
    """Evaluate in topological order; leaves keep their base score.

    An explicit `order` may be supplied (any valid topological order gives
    the same assignment); by default one is computed.
    """
    if order is None:
        order = topological_order(q)
    incoming = _influencers(q)
    strengths: StrengthAssignment = {}
    for arg_id in order:
        attackers, supporters = incoming[arg_id]
        missing = [b for b in attackers + supporters if b not in strengths]
        if missing:
            raise CyclicFrameworkError(f"not a topological order: {arg_id!r} before {missing[0]!r}")
        va = df_quad_aggregate(strengths[b] for b in attackers)
        vs = df_quad_aggregate(strengths[b] for b in supporters)
        strengths[arg_id] = df_quad_influence(q.base_scores[arg_id], va, vs)
    return strengths


def _logistic(x: float) -> float:
    if x >= 0.0:
        return 1.0 / (1.0 + math.exp(-x))
    z = math.exp(x)
    return z / (1.0 + z)


def mlp_influence(beta: float, alpha: float, clamp: float = 1e-6) -> float:
    """logistic(logit(beta) + alpha), with beta clipped into
    [clamp, 1 - clamp] so the logit is defined at 0 and 1."""
    _check_unit(beta, "base score")
    clipped = min(max(beta, clamp), 1.0 - clamp)
    return _logistic(math.log(clipped / (1.0 - clipped)) + alpha)


_MLP_DEFAULT = SemanticsConfig(kind=SemanticsKind.MLP)


def evaluate_mlp(q: QBAF, cfg: SemanticsConfig = _MLP_DEFAULT) -> StrengthAssignment:
    """Synchronous fixed-point iteration from the base scores.

    Each step recomputes every related argument from the previous sweep's
    strengths; convergence is max-norm change below the configured
    epsilon. Arguments with no attackers and no supporters keep their base
    score exactly (their aggregate is always 0, so the fixed point is the
    base score itself and no logit round trip is needed). Raises
    NonConvergentError when max_iterations sweeps do not settle.
    """
    incoming = _influencers(q)
    strengths: StrengthAssignment = dict(q.base_scores)
    touched = [aid for aid, (att, supp) in incoming.items() if att or supp]
    if not touched:
        return strengths
    clamp = cfg.logit_clamp_epsilon
    for _ in range(cfg.max_iterations):
        updates: StrengthAssignment = {}
        delta = 0.0
        for arg_id in touched:
            attackers, supporters = incoming[arg_id]
            alpha = sum(strengths[b] for b in supporters) - sum(strengths[b] for b in attackers)
            new = mlp_influence(q.base_scores[arg_id], alpha, clamp)
            delta = max(delta, abs(new - strengths[arg_id]))
            updates[arg_id] = new
        strengths.update(updates)
        if delta < cfg.convergence_epsilon:
            return strengths
    raise NonConvergentError(
        f"no fixed point within {cfg.max_iterations} iterations (last change {delta:g})"
    )


def evaluate(q: QBAF, cfg: SemanticsConfig) -> StrengthAssignment:
    """Dispatch on cfg.kind."""
    if cfg.kind is SemanticsKind.DF_QUAD:
        return evaluate_df_quad(q)
    return evaluate_mlp(q, cfg)
