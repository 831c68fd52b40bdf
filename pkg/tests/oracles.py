"""Independent reference implementations used as test oracles.

Everything here is written straight from the definitions (recursion,
case splits, literal counting) and deliberately imports nothing from the
package under test. Keep it that way: these functions are the second
route in every dual-route check.
"""

import math

ASPECTS = ("APR", "CLA", "NOV", "EMP", "CMP", "SUB", "IMP")
DECISION = "decision"


# --- product-sum semantics, by recursion -------------------------------

def ref_aggregate(values):
    values = list(values)
    n = len(values)
    if n == 0:
        return 0.0
    if n == 1:
        return values[0]
    if n == 2:
        return values[0] + values[1] - values[0] * values[1]
    head = ref_aggregate(values[:-1])
    return head + values[-1] - head * values[-1]


def ref_influence(v0, va, vs):
    if va >= vs:
        return v0 - v0 * abs(vs - va)
    return v0 + (1.0 - v0) * abs(vs - va)


def ref_dfquad(base, attacks, supports):
    """Memoized recursion over the framework; assumes acyclic relations.

    attacks/supports are iterables of (source, target) pairs; base maps
    argument id to base score.
    """
    memo = {}

    def strength(arg):
        if arg not in memo:
            att = sorted(src for (src, dst) in attacks if dst == arg)
            sup = sorted(src for (src, dst) in supports if dst == arg)
            va = ref_aggregate([strength(b) for b in att])
            vs = ref_aggregate([strength(b) for b in sup])
            memo[arg] = ref_influence(base[arg], va, vs)
        return memo[arg]

    return {arg: strength(arg) for arg in base}


# --- logistic fixed point, closed form on DAGs -------------------------

def ref_sigmoid(x):
    if x >= 0:
        return 1.0 / (1.0 + math.exp(-x))
    z = math.exp(x)
    return z / (1.0 + z)


def ref_logit(p, clamp=1e-6):
    p = min(max(p, clamp), 1.0 - clamp)
    return math.log(p / (1.0 - p))


def ref_mlp_dag(base, attacks, supports, clamp=1e-6):
    """On an acyclic graph the fixed point unrolls layer by layer, so it
    can be computed by recursion instead of iteration. Arguments without
    relations keep their base score."""
    memo = {}

    def strength(arg):
        if arg not in memo:
            att = sorted(src for (src, dst) in attacks if dst == arg)
            sup = sorted(src for (src, dst) in supports if dst == arg)
            if not att and not sup:
                memo[arg] = base[arg]
            else:
                total = sum(strength(b) for b in sup) - sum(strength(b) for b in att)
                memo[arg] = ref_sigmoid(ref_logit(base[arg], clamp) + total)
        return memo[arg]

    return {arg: strength(arg) for arg in base}


# --- decision interpretations and vote aggregation, literal ------------

def ref_binary(s):
    return "reject" if s <= 0.5 else "accept"


def ref_five_level(s):
    if 0.0 <= s < 0.2:
        return "strong reject"
    if 0.2 <= s < 0.4:
        return "weak reject"
    if 0.4 <= s < 0.6:
        return "borderline"
    if 0.6 <= s < 0.8:
        return "weak accept"
    if 0.8 <= s <= 1.0:
        return "strong accept"
    raise ValueError(s)


REF_WEIGHTS = {
    "strong reject": -2,
    "weak reject": -1,
    "borderline": 0,
    "weak accept": 1,
    "strong accept": 2,
}


def ref_binary_majority(strengths):
    votes = [ref_binary(s) for s in strengths]
    acc = len([v for v in votes if v == "accept"])
    rej = len([v for v in votes if v == "reject"])
    return 1.0 if acc > rej else 0.0


def ref_binary_all_accept(strengths):
    votes = [ref_binary(s) for s in strengths]
    rej = len([v for v in votes if v == "reject"])
    return 1.0 if rej == 0 else 0.0


def ref_five_level_majority(strengths):
    total = sum(REF_WEIGHTS[ref_five_level(s)] for s in strengths)
    return 1.0 if total > 0 else 0.0


def ref_five_level_all_accept(strengths):
    return 1.0 if all(REF_WEIGHTS[ref_five_level(s)] > 0 for s in strengths) else 0.0


# --- combined-framework route, literal ----------------------------------

def ref_mean(values):
    return sum(values) / len(values)


def ref_mpaf(vectors, undecided):
    """Averaged framework from per-argument strength vectors: polarity and
    recentred bases from the means, decision keeps its mean."""
    base = {}
    attacks = []
    supports = []
    for arg, vec in vectors.items():
        mean = ref_mean(vec)
        base[arg] = mean if arg == DECISION else 2.0 * abs(mean - 0.5)
    for (src, dst) in undecided:
        if ref_mean(vectors[src]) < 0.5:
            attacks.append((src, dst))
        else:
            supports.append((src, dst))
    return base, attacks, supports


def ref_path1(vectors, undecided, semantics):
    base, attacks, supports = ref_mpaf(vectors, undecided)
    if semantics == "dfquad":
        return ref_dfquad(base, attacks, supports)[DECISION]
    return ref_mlp_dag(base, attacks, supports)[DECISION]


def ref_verdict(strength):
    return "accept" if strength > 0.5 else "reject"


# --- review pipeline, literal -------------------------------------------

def ref_review_strengths(sentences, mode, semantics, aspect_bases=None, decision_base=0.5):
    """Decision strength for one review given (aspects, sentiment,
    confidence) triples, by direct application of the two-stage scheme."""
    aspect_bases = dict(aspect_bases or {})
    att, sup, text_base = [], [], {}
    for i, (aspects, sentiment, confidence) in enumerate(sentences):
        if sentiment == "neutral" or set(aspects) == {"OTHER"}:
            continue
        tid = f"t{i}"
        text_base[tid] = confidence if mode == "sentiment" else 0.5
        for aspect in aspects:
            (sup if sentiment == "positive" else att).append((tid, aspect))
    stage_base = {**{a: aspect_bases.get(a, 0.5) for a in ASPECTS}, **text_base}
    if semantics == "dfquad":
        stage1 = ref_dfquad(stage_base, att, sup)
    else:
        stage1 = ref_mlp_dag(stage_base, att, sup)
    att2, sup2, base2 = [], [], {DECISION: decision_base}
    for aspect in ASPECTS:
        s = stage1[aspect]
        base2[aspect] = 2.0 * abs(s - 0.5)
        (att2 if s < 0.5 else sup2).append((aspect, DECISION))
    if semantics == "dfquad":
        stage2 = ref_dfquad(base2, att2, sup2)
    else:
        stage2 = ref_mlp_dag(base2, att2, sup2)
    return {**{a: stage1[a] for a in ASPECTS}, DECISION: stage2[DECISION]}
