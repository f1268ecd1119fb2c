"""Per-element relocation baseline.

For one element of the old tree, scan every same-tag element of the new
tree and score the pair on three features: similarity of the absolute
XPaths (character Levenshtein, normalized), Jaccard overlap of attribute
tokens, and normalized edit similarity of own text.  The weighted score
must clear a threshold or the element stays unrelocated.  There is no
shared matching: every element pays the full scan, which is exactly the
cost shape the benchmark measures.  The Levenshtein stays pure Python on
purpose, keeping both algorithms in the same runtime so timing
comparisons mean something.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from erratum.dom.tree import DomNode, DomTree
from erratum.dom.xpath import absolute_xpath, eval_xpath
from erratum.repair import (
    NO_MATCH,
    RELOCATED,
    ElementRepair,
    LocatorError,
    RepairOutcome,
)


@dataclass(frozen=True)
class WaterConfig:
    xpath_weight: float = 0.6
    attribute_weight: float = 0.25
    text_weight: float = 0.15
    threshold: float = 0.4
    max_candidates: int | None = None

    def __post_init__(self) -> None:
        weights = (self.xpath_weight, self.attribute_weight, self.text_weight)
        if any(w < 0 for w in weights):
            raise ValueError("feature weights must be non-negative")
        if not math.isclose(sum(weights), 1.0, abs_tol=1e-9):
            raise ValueError("feature weights must sum to 1")
        if not 0 <= self.threshold <= 1:
            raise ValueError("threshold must be in [0, 1]")
        if self.max_candidates is not None and self.max_candidates < 1:
            raise ValueError("max_candidates must be positive when given")


def levenshtein(a: str, b: str) -> int:
    """Edit distance, two-row dynamic program."""

    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    if len(a) < len(b):
        a, b = b, a
    previous = list(range(len(b) + 1))
    for i, ca in enumerate(a, start=1):
        current = [i]
        for j, cb in enumerate(b, start=1):
            current.append(
                min(
                    previous[j] + 1,
                    current[j - 1] + 1,
                    previous[j - 1] + (ca != cb),
                )
            )
        previous = current
    return previous[-1]


def _edit_similarity(a: str, b: str) -> float:
    if not a and not b:
        return 1.0
    longest = max(len(a), len(b))
    return 1.0 - levenshtein(a, b) / longest


def _attribute_tokens(node: DomNode) -> frozenset[str]:
    tokens: set[str] = set()
    for name, value in node.attributes.items():
        tokens.add(name)
        tokens.update(value.split())
    return frozenset(tokens)


def _jaccard(a: frozenset[str], b: frozenset[str]) -> float:
    if not a and not b:
        return 1.0
    union = a | b
    return len(a & b) / len(union)


def candidates(new_tree: DomTree, tag: str) -> list[int]:
    """Same-tag elements in document order; the scan WATER pays per element."""

    return [node.id for node in new_tree.nodes if node.tag == tag]


def score_pair(
    old_tree: DomTree,
    new_tree: DomTree,
    old_id: int,
    new_id: int,
    config: WaterConfig,
) -> float:
    old_node = old_tree.node(old_id)
    new_node = new_tree.node(new_id)
    xpath_sim = _edit_similarity(
        absolute_xpath(old_tree, old_id), absolute_xpath(new_tree, new_id)
    )
    attr_sim = _jaccard(_attribute_tokens(old_node), _attribute_tokens(new_node))
    text_sim = _edit_similarity(old_node.own_text, new_node.own_text)
    return (
        config.xpath_weight * xpath_sim
        + config.attribute_weight * attr_sim
        + config.text_weight * text_sim
    )


def relocate_scored(
    old_tree: DomTree,
    new_tree: DomTree,
    element: int,
    config: WaterConfig | None = None,
) -> tuple[int | None, float | None]:
    config = config or WaterConfig()
    pool = candidates(new_tree, old_tree.node(element).tag)
    if config.max_candidates is not None:
        pool = pool[: config.max_candidates]
    best_id: int | None = None
    best_score = -1.0
    for new_id in pool:  # document order, so ties keep the earliest
        score = score_pair(old_tree, new_tree, element, new_id, config)
        if score > best_score + 1e-12:
            best_id = new_id
            best_score = score
    if best_id is None or best_score < config.threshold:
        return None, None
    return best_id, best_score


def water_relocate(
    old_tree: DomTree,
    new_tree: DomTree,
    element: int,
    config: WaterConfig | None = None,
) -> int | None:
    node_id, _ = relocate_scored(old_tree, new_tree, element, config)
    return node_id


def water_repair(
    old_tree: DomTree,
    new_tree: DomTree,
    locators: Sequence[str],
    config: WaterConfig | None = None,
) -> list[RepairOutcome]:
    """Repair report in the same shape the matcher-based path produces."""

    config = config or WaterConfig()
    outcomes: list[RepairOutcome] = []
    for locator in locators:
        nodes = eval_xpath(old_tree, locator)
        if not nodes:
            raise LocatorError(locator, "matches no element on the old tree")
        elements: list[ElementRepair] = []
        for node_id in nodes:
            target, score = relocate_scored(old_tree, new_tree, node_id, config)
            if target is None:
                elements.append(
                    ElementRepair(
                        old_node=node_id,
                        old_xpath=absolute_xpath(old_tree, node_id),
                        status=NO_MATCH,
                    )
                )
            else:
                elements.append(
                    ElementRepair(
                        old_node=node_id,
                        old_xpath=absolute_xpath(old_tree, node_id),
                        status=RELOCATED,
                        new_node=target,
                        new_xpath=absolute_xpath(new_tree, target),
                        score=score,
                    )
                )
        outcomes.append(RepairOutcome(locator=locator, elements=tuple(elements)))
    return outcomes
