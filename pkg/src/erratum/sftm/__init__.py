"""Similarity-based flexible tree matching.

``match_trees`` composes the three stages: token similarity over pruned
rare tokens, one topological propagation pass blending parent and child
evidence, and a Metropolis walk over injective partial matchings.  A
final structural completion pass aligns same-tag children under matched
parents so token-less nodes (a bare div among hundreds) still relocate.
"""

from __future__ import annotations

from erratum.dom.tree import DomTree
from erratum.sftm.config import SftmConfig
from erratum.sftm.metropolis import Matching, optimize
from erratum.sftm.propagation import propagate
from erratum.sftm.similarity import SimilarityTable, TokenIndex, initial_similarity

__all__ = [
    "Matching",
    "SftmConfig",
    "SimilarityTable",
    "TokenIndex",
    "initial_similarity",
    "match_trees",
    "optimize",
    "propagate",
]


def _complete(matching: Matching, left: DomTree, right: DomTree) -> Matching:
    """Align same-tag unmatched children under matched pairs, top-down.

    Added pairs carry score 0.0: they contribute structure, not token
    evidence.  Pre-order ids make parents sort before children, so one
    pass over a growing worklist reaches any depth.
    """

    matched_left = {pair[0] for pair in matching.pairs}
    matched_right = {pair[1] for pair in matching.pairs}
    worklist: list[tuple[int, int]] = [(pair[0], pair[1]) for pair in matching.pairs]
    worklist.sort()
    added: list[tuple[int, int, float]] = []

    def adopt(l: int, r: int) -> None:
        matched_left.add(l)
        matched_right.add(r)
        added.append((l, r, 0.0))
        worklist.append((l, r))

    if left.root not in matched_left and right.root not in matched_right:
        if left.node(left.root).tag == right.node(right.root).tag:
            adopt(left.root, right.root)

    cursor = 0
    while cursor < len(worklist):
        l, r = worklist[cursor]
        cursor += 1
        free_left: dict[str, list[int]] = {}
        for child in left.children_of(l):
            if child not in matched_left:
                free_left.setdefault(left.node(child).tag, []).append(child)
        if not free_left:
            continue
        free_right: dict[str, list[int]] = {}
        for child in right.children_of(r):
            if child not in matched_right:
                free_right.setdefault(right.node(child).tag, []).append(child)
        for tag, lefts in free_left.items():
            for lc, rc in zip(lefts, free_right.get(tag, [])):
                adopt(lc, rc)

    if not added:
        return matching
    pairs = tuple(sorted(tuple(matching.pairs) + tuple(added)))
    return Matching(
        pairs=pairs,
        unmatched_left=frozenset(range(len(left))) - {p[0] for p in pairs},
        unmatched_right=frozenset(range(len(right))) - {p[1] for p in pairs},
        total_score=matching.total_score,
    )


def match_trees(left: DomTree, right: DomTree, config: SftmConfig | None = None) -> Matching:
    config = config or SftmConfig()
    _, table = initial_similarity(left, right, config)
    table = propagate(table, left, right, config)
    matching = optimize(table, left, right, config)
    if config.structural_completion:
        matching = _complete(matching, left, right)
    return matching
