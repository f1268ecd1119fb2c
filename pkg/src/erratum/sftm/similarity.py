"""Token statistics and the initial similarity table.

A token's weight is 1 / (count_T(t) * count_T2(t)) ** exponent, counting
the nodes whose label contains it (presence, not multiplicity).  Tokens
whose count product exceeds the prune threshold are dropped before any
pair is enumerated, which is what keeps the candidate set sparse on
repetitive markup.  s0(e, e') sums the weights of the distinct tokens
the two labels share; only pairs sharing at least one surviving token
exist in the table.
"""

from __future__ import annotations

from dataclasses import dataclass

from erratum.dom.tokenize import tokenize
from erratum.dom.tree import DomTree
from erratum.sftm.config import SftmConfig


@dataclass(frozen=True)
class TokenIndex:
    counts_left: dict[str, int]
    counts_right: dict[str, int]
    weights: dict[str, float]
    pruned: frozenset[str]


@dataclass(frozen=True)
class SimilarityTable:
    scores: dict[tuple[int, int], float]
    stage: str  # "initial" | "propagated"
    left_digest: str
    right_digest: str


def _node_tokens(tree: DomTree, config: SftmConfig) -> list[set[str]]:
    return [set(tokenize(node, config.tokenizer).tokens) for node in tree.nodes]


def initial_similarity(
    left: DomTree, right: DomTree, config: SftmConfig | None = None
) -> tuple[TokenIndex, SimilarityTable]:
    config = config or SftmConfig()
    if len(left) == 0 or len(right) == 0:
        raise ValueError("cannot score an empty tree")

    left_tokens = _node_tokens(left, config)
    right_tokens = _node_tokens(right, config)

    postings_left: dict[str, list[int]] = {}
    for node_id, tokens in enumerate(left_tokens):
        for token in tokens:
            postings_left.setdefault(token, []).append(node_id)
    postings_right: dict[str, list[int]] = {}
    for node_id, tokens in enumerate(right_tokens):
        for token in tokens:
            postings_right.setdefault(token, []).append(node_id)

    counts_left = {token: len(ids) for token, ids in postings_left.items()}
    counts_right = {token: len(ids) for token, ids in postings_right.items()}

    threshold = config.resolve_prune_threshold(len(left), len(right))
    weights: dict[str, float] = {}
    pruned: set[str] = set()
    scores: dict[tuple[int, int], float] = {}
    for token, lefts in postings_left.items():
        rights = postings_right.get(token)
        if rights is None:
            continue
        product = len(lefts) * len(rights)
        if product > threshold:
            pruned.add(token)
            continue
        weight = float(product) ** -config.weight_exponent
        weights[token] = weight
        for l in lefts:
            for r in rights:
                key = (l, r)
                scores[key] = scores.get(key, 0.0) + weight

    index = TokenIndex(
        counts_left=counts_left,
        counts_right=counts_right,
        weights=weights,
        pruned=frozenset(pruned),
    )
    table = SimilarityTable(
        scores=scores,
        stage="initial",
        left_digest=left.digest(),
        right_digest=right.digest(),
    )
    return index, table
