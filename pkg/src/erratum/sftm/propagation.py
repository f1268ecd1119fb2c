"""Topological propagation: blend each pair's score with its neighbors'.

One pass (by default) over the candidate pairs.  With s-hat the table
normalized to [0, 1]:

    s(e, e') = s0(e, e')
             + w_p * s_hat(parent(e), parent(e'))
             + w_p * mean of s_hat over candidate child pairs of (e, e')

Parent pairs that were not candidates themselves enter the table through
their children (base score 0), so structural evidence flows upward even
where tokens were pruned.  The pass is O(candidate pairs): each pair
contributes to exactly one parent pair and reads one mean.
"""

from __future__ import annotations

from erratum.dom.tree import DomTree
from erratum.sftm.config import SftmConfig
from erratum.sftm.similarity import SimilarityTable


def propagate(
    table: SimilarityTable,
    left: DomTree,
    right: DomTree,
    config: SftmConfig | None = None,
) -> SimilarityTable:
    config = config or SftmConfig()
    if table.left_digest != left.digest() or table.right_digest != right.digest():
        raise ValueError("similarity table does not belong to these trees")
    if table.stage != "initial":
        raise ValueError(f"expected an initial table, got stage {table.stage!r}")

    scores = table.scores
    for _ in range(config.propagation_rounds):
        scores = _one_pass(scores, left, right, config.propagation_weight)
    return SimilarityTable(
        scores=scores,
        stage="propagated",
        left_digest=table.left_digest,
        right_digest=table.right_digest,
    )


def _one_pass(
    scores: dict[tuple[int, int], float],
    left: DomTree,
    right: DomTree,
    weight: float,
) -> dict[tuple[int, int], float]:
    if not scores:
        return {}
    peak = max(scores.values())
    normalized = {pair: value / peak for pair, value in scores.items()} if peak > 0 else dict.fromkeys(scores, 0.0)

    child_sum: dict[tuple[int, int], float] = {}
    child_count: dict[tuple[int, int], int] = {}
    for (l, r), value in normalized.items():
        lp = left.parent_of(l)
        rp = right.parent_of(r)
        if lp is None or rp is None:
            continue
        parent_pair = (lp, rp)
        child_sum[parent_pair] = child_sum.get(parent_pair, 0.0) + value
        child_count[parent_pair] = child_count.get(parent_pair, 0) + 1

    result: dict[tuple[int, int], float] = {}
    for pair in scores.keys() | child_sum.keys():
        l, r = pair
        value = scores.get(pair, 0.0)
        lp = left.parent_of(l)
        rp = right.parent_of(r)
        if lp is not None and rp is not None:
            parent_hat = normalized.get((lp, rp))
            if parent_hat is not None:
                value += weight * parent_hat
        count = child_count.get(pair)
        if count:
            value += weight * (child_sum[pair] / count)
        result[pair] = value
    return result
