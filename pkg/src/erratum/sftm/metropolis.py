"""Metropolis optimization over injective partial matchings.

The walk maximizes J(M) = sum over matched pairs of (score - penalty).
The penalty is the no-match price: a pair worth less than it lowers J,
so weakly similar nodes end up unmatched rather than mismatched.  Each
step samples a candidate pair with probability proportional to its
score, proposes toggling it (adding displaces up to two conflicting
pairs), and accepts with min(1, exp(delta / T)) under geometric cooling.
The best configuration seen is returned, updated on strict improvement
only, which keeps equal-score plateaus pinned to the greedy,
document-ordered start.
"""

from __future__ import annotations

import math
import random
import statistics
from bisect import bisect_right
from dataclasses import dataclass
from itertools import accumulate

from erratum.dom.tree import DomTree
from erratum.sftm.config import SftmConfig
from erratum.sftm.similarity import SimilarityTable

_LN2 = math.log(2.0)


@dataclass(frozen=True)
class Matching:
    """Injective partial matching; pairs are (left, right, score) by left id."""

    pairs: tuple[tuple[int, int, float], ...]
    unmatched_left: frozenset[int]
    unmatched_right: frozenset[int]
    total_score: float

    def pair_map(self) -> dict[int, int]:
        return {left: right for left, right, _ in self.pairs}

    def to_json(self, config: SftmConfig | None = None, seed: int | None = None) -> dict:
        payload: dict = {
            "pairs": [
                {"left": left, "right": right, "score": score}
                for left, right, score in self.pairs
            ],
            "unmatchedLeft": sorted(self.unmatched_left),
            "unmatchedRight": sorted(self.unmatched_right),
            "totalScore": self.total_score,
        }
        if config is not None:
            payload["config"] = config.to_json()
            payload["seed"] = seed if seed is not None else config.seed
        return payload


def _result(
    selected: set[int],
    entries: list[tuple[int, int, float]],
    left: DomTree,
    right: DomTree,
) -> Matching:
    pairs = tuple(sorted(entries[k] for k in selected))
    return Matching(
        pairs=pairs,
        unmatched_left=frozenset(range(len(left))) - {p[0] for p in pairs},
        unmatched_right=frozenset(range(len(right))) - {p[1] for p in pairs},
        total_score=sum(p[2] for p in pairs),
    )


def optimize(
    table: SimilarityTable,
    left: DomTree,
    right: DomTree,
    config: SftmConfig | None = None,
) -> Matching:
    config = config or SftmConfig()
    if table.stage != "propagated":
        raise ValueError(f"expected a propagated table, got stage {table.stage!r}")
    if table.left_digest != left.digest() or table.right_digest != right.digest():
        raise ValueError("similarity table does not belong to these trees")

    entries = sorted((l, r, s) for (l, r), s in table.scores.items())
    if not entries:
        return _result(set(), entries, left, right)

    scores = [s for _, _, s in entries]
    median_score = statistics.median(scores)
    penalty = config.no_match_penalty
    if penalty is None:
        penalty = 0.25 * median_score
    gains = [s - penalty for s in scores]

    # greedy start: best score first, document order on ties
    by_left: dict[int, int] = {}
    by_right: dict[int, int] = {}
    order = sorted(range(len(entries)), key=lambda k: (-entries[k][2], entries[k][0], entries[k][1]))
    selected: set[int] = set()
    for k in order:
        l, r, _ = entries[k]
        if gains[k] > 0 and l not in by_left and r not in by_right:
            selected.add(k)
            by_left[l] = k
            by_right[r] = k

    objective = sum(gains[k] for k in selected)
    best = set(selected)
    best_objective = objective

    budget = min(config.iteration_factor * len(entries), config.iteration_cap)
    if budget:
        rng = random.Random(config.seed)
        cumulative = list(accumulate(scores))
        total_weight = cumulative[-1]
        temperature = config.initial_temperature
        if temperature is None:
            temperature = max(median_score / _LN2, 1e-9)
        for _ in range(budget):
            k = bisect_right(cumulative, rng.random() * total_weight)
            if k >= len(entries):
                k = len(entries) - 1
            if k in selected:
                delta = -gains[k]
                if delta > 0 or rng.random() < math.exp(max(delta / temperature, -60.0)):
                    selected.remove(k)
                    l, r, _ = entries[k]
                    del by_left[l]
                    del by_right[r]
                    objective += delta
            else:
                l, r, _ = entries[k]
                displaced = {by_left.get(l), by_right.get(r)} - {None}
                delta = gains[k] - sum(gains[d] for d in displaced)
                if delta > 0 or rng.random() < math.exp(max(delta / temperature, -60.0)):
                    for d in displaced:
                        selected.remove(d)
                        dl, dr, _ = entries[d]
                        del by_left[dl]
                        del by_right[dr]
                    selected.add(k)
                    by_left[l] = k
                    by_right[r] = k
                    objective += delta
            if objective > best_objective + 1e-9:
                best_objective = objective
                best = set(selected)
            temperature = max(temperature * config.cooling, 1e-12)

    return _result(best, entries, left, right)
