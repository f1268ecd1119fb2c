"""Optimizer quality against an exhaustive oracle.

Both routes score the same objective, sum over matched pairs of
(score - penalty): the optimizer walks, the oracle enumerates.  On trees
this small the oracle is exact, so it both bounds the optimizer from
above and certifies its near-optimality rate.
"""

import random
import statistics

from conftest import oracle_best, random_tree
from erratum.sftm import SftmConfig, initial_similarity, optimize, propagate

CASES = 60


def objective(matching, penalty: float) -> float:
    return matching.total_score - penalty * len(matching.pairs)


def test_optimizer_near_exhaustive_optimum():
    config = SftmConfig()
    wins = 0
    for case in range(CASES):
        rng = random.Random(case)
        left = random_tree(rng)
        right = random_tree(rng)
        _, initial = initial_similarity(left, right, config)
        table = propagate(initial, left, right, config)
        if not table.scores:
            wins += 1
            continue
        penalty = 0.25 * statistics.median(table.scores.values())
        matching = optimize(table, left, right, config)
        attained = objective(matching, penalty)
        optimal = oracle_best(table.scores, penalty)
        assert attained <= optimal + 1e-9, f"case {case}: beat the exhaustive optimum"
        if attained >= 0.9 * optimal - 1e-9:
            wins += 1
    assert wins >= 0.95 * CASES


def test_explicit_penalty_respected():
    rng = random.Random(7)
    left = random_tree(rng)
    right = random_tree(rng)
    config = SftmConfig(no_match_penalty=1000.0)
    _, initial = initial_similarity(left, right, config)
    table = propagate(initial, left, right, config)
    matching = optimize(table, left, right, config)
    # a penalty above every score makes any pair a loss
    assert matching.pairs == ()
