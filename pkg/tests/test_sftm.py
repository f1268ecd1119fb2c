"""Matcher stages on hand-checked inputs.

The card pair from conftest is small enough to derive every weight by
hand: "a" and "href" appear once left and twice right (weight 1/2),
"item__title" once on each side (weight 1), "div" three times left and
five times right (weight 1/15).
"""

import random

import pytest

from conftest import (
    NEW_CARD,
    NEW_EXTRA_LINK,
    NEW_LINK,
    NEW_SUBTITLE,
    NEW_TITLE,
    NEW_WRAP,
    OLD_CARD,
    OLD_LINK,
    OLD_SUBTITLE,
    OLD_TITLE,
    random_tree,
)
from erratum.dom.parse import parse_html
from erratum.dom.tree import DomTree
from erratum.sftm import SftmConfig, initial_similarity, match_trees, optimize, propagate


def pipeline(left, right, config=None):
    config = config or SftmConfig()
    _, table = initial_similarity(left, right, config)
    return propagate(table, left, right, config)


def test_singleton_self_similarity():
    left = parse_html("<p>x</p>")
    right = parse_html("<p>y</p>")
    _, table = initial_similarity(left, right, SftmConfig())
    assert table.scores == {(0, 0): pytest.approx(1.0)}


def test_disjoint_tokens_empty_table():
    left = parse_html("<p>x</p>")
    right = parse_html("<div>y</div>")
    _, table = initial_similarity(left, right, SftmConfig())
    assert table.scores == {}


def test_card_weights_by_hand(card_pair):
    index, table = initial_similarity(*card_pair, SftmConfig())
    assert index.weights["a"] == pytest.approx(0.5)
    assert index.weights["href"] == pytest.approx(0.5)
    assert index.weights["item__title"] == pytest.approx(1.0)
    assert index.weights["div"] == pytest.approx(1 / 15)
    assert table.scores[(OLD_LINK, NEW_LINK)] == pytest.approx(1.0)
    assert table.scores[(OLD_LINK, NEW_EXTRA_LINK)] == pytest.approx(1.0)
    assert table.scores[(OLD_TITLE, NEW_TITLE)] == pytest.approx(1.0 + 1 / 15 + 1 / 12)


def test_weight_decreases_with_occurrence_count(card_pair):
    index, _ = initial_similarity(*card_pair, SftmConfig())
    # rare tokens outweigh common ones
    assert index.weights["item__title"] > index.weights["a"] > index.weights["div"]


def test_common_tokens_pruned():
    left = parse_html("<div><div></div></div>")
    right = parse_html("<div><div></div></div>")
    index, table = initial_similarity(left, right, SftmConfig(prune_threshold=2.0))
    assert "div" in index.pruned
    assert "div" not in index.weights
    assert table.scores == {}


def test_prune_threshold_default_floor():
    config = SftmConfig()
    assert config.resolve_prune_threshold(4, 4) == 64.0
    assert config.resolve_prune_threshold(100, 100) == 100.0


def test_empty_tree_rejected():
    empty = DomTree((), None)
    with pytest.raises(ValueError):
        initial_similarity(empty, parse_html("<p>x</p>"), SftmConfig())


def test_propagation_identity_on_singletons():
    left = parse_html("<p>x</p>")
    right = parse_html("<p>y</p>")
    config = SftmConfig()
    _, initial = initial_similarity(left, right, config)
    table = propagate(initial, left, right, config)
    assert table.stage == "propagated"
    assert table.scores == initial.scores


def test_propagation_boosts_supported_pairs():
    left = parse_html("<div><p><a href='/x'>x</a></p></div>")
    right = parse_html("<div><p><a href='/x'>x</a></p></div>")
    config = SftmConfig()
    _, initial = initial_similarity(left, right, config)
    table = propagate(initial, left, right, config)
    assert table.scores[(1, 1)] > initial.scores[(1, 1)]


def test_card_link_score_after_propagation(card_pair):
    table = pipeline(*card_pair)
    # parent subtitle pair is a normalization peak, so the true link gets
    # the full parent bonus on top of its token score of 1
    assert table.scores[(OLD_LINK, NEW_LINK)] == pytest.approx(1.4)
    assert table.scores[(OLD_LINK, NEW_LINK)] > table.scores[(OLD_LINK, NEW_EXTRA_LINK)]


def test_propagate_rejects_wrong_stage(card_pair):
    table = pipeline(*card_pair)
    with pytest.raises(ValueError):
        propagate(table, *card_pair, SftmConfig())


def test_optimize_rejects_initial_table(card_pair):
    _, initial = initial_similarity(*card_pair, SftmConfig())
    with pytest.raises(ValueError):
        optimize(initial, *card_pair, SftmConfig())


def test_table_provenance_checked(card_pair):
    old, new = card_pair
    _, initial = initial_similarity(old, new, SftmConfig())
    other = parse_html("<p>x</p>")
    with pytest.raises(ValueError):
        propagate(initial, old, other, SftmConfig())


def test_no_shared_tokens_all_unmatched():
    left = parse_html("<p>x</p>")
    right = parse_html("<div>y</div>")
    matching = match_trees(left, right)
    assert matching.pairs == ()
    assert matching.unmatched_left == {0}
    assert matching.unmatched_right == {0}


def test_identity_matching(card_pair):
    old, _ = card_pair
    matching = match_trees(old, old)
    assert matching.pair_map() == {i: i for i in range(len(old))}
    assert matching.unmatched_left == frozenset()
    assert matching.unmatched_right == frozenset()
    assert matching.total_score == pytest.approx(sum(s for _, _, s in matching.pairs))


def test_card_matching_relocates_through_the_wrapper(card_pair):
    matching = match_trees(*card_pair)
    assert [(l, r) for l, r, _ in matching.pairs] == [
        (OLD_CARD, NEW_CARD),
        (OLD_TITLE, NEW_TITLE),
        (OLD_SUBTITLE, NEW_SUBTITLE),
        (OLD_LINK, NEW_LINK),
    ]
    assert matching.unmatched_left == frozenset()
    assert matching.unmatched_right == {NEW_WRAP, 5, NEW_EXTRA_LINK}


def test_matching_deterministic_under_seed(card_pair):
    config = SftmConfig(seed=5)
    first = match_trees(*card_pair, config)
    second = match_trees(*card_pair, config)
    assert first == second


def test_structural_completion_aligns_pruned_children():
    html = "<section class='s'><div></div><div></div><div></div></section>"
    left = parse_html(html)
    right = parse_html(html)
    config = SftmConfig(prune_threshold=2.0)
    with_completion = match_trees(left, right, config)
    assert with_completion.pair_map() == {0: 0, 1: 1, 2: 2, 3: 3}
    assert [s for _, _, s in with_completion.pairs if s == 0.0] == [0.0, 0.0, 0.0]

    bare = match_trees(left, right, SftmConfig(prune_threshold=2.0, structural_completion=False))
    assert bare.pair_map() == {0: 0}


def test_structural_completion_adopts_same_tag_roots():
    html = "<div><a href='/x'>x</a></div>"
    left = parse_html(html)
    right = parse_html(html)
    # threshold below any count product prunes every token
    matching = match_trees(left, right, SftmConfig(prune_threshold=0.5))
    assert matching.pair_map() == {0: 0, 1: 1}
    assert matching.total_score == 0.0


def test_matching_json_shape(card_pair):
    config = SftmConfig(seed=3)
    payload = match_trees(*card_pair, config).to_json(config)
    assert set(payload) == {"pairs", "unmatchedLeft", "unmatchedRight", "totalScore", "config", "seed"}
    assert payload["seed"] == 3
    assert payload["config"]["propagationWeight"] == pytest.approx(0.4)
    assert payload["unmatchedRight"] == sorted(payload["unmatchedRight"])
    assert all(set(p) == {"left", "right", "score"} for p in payload["pairs"])


def test_config_validation():
    with pytest.raises(ValueError):
        SftmConfig(cooling=0.0)
    with pytest.raises(ValueError):
        SftmConfig(propagation_rounds=0)
    with pytest.raises(ValueError):
        SftmConfig(no_match_penalty=-1.0)
    with pytest.raises(ValueError):
        SftmConfig(weight_exponent=0.0)


def test_random_pairs_stay_injective_partitions():
    for case in range(25):
        rng = random.Random(case)
        left = random_tree(rng)
        right = random_tree(rng)
        matching = match_trees(left, right)
        lefts = [l for l, _, _ in matching.pairs]
        rights = [r for _, r, _ in matching.pairs]
        assert len(set(lefts)) == len(lefts)
        assert len(set(rights)) == len(rights)
        assert set(lefts) | matching.unmatched_left == set(range(len(left)))
        assert set(rights) | matching.unmatched_right == set(range(len(right)))
