"""Locator repair on top of tree matching.

One matching per (old tree, new tree, config) serves every locator and
element in a request; the engine caches matchings by tree digest and
counts how many it actually computed, so the single-matching behavior is
observable.  Elements whose node is matched get the new tree's absolute
XPath; unmatched elements report no-match.  A locator that matches
nothing on the old tree is a caller bug and raises :class:`LocatorError`
rather than producing an outcome.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Sequence

from erratum.dom.tree import DomTree
from erratum.dom.xpath import absolute_xpath, eval_xpath
from erratum.sftm import Matching, SftmConfig, match_trees

RELOCATED = "relocated"
NO_MATCH = "no-match"


class LocatorError(Exception):
    """A locator that selects nothing on the old tree."""

    def __init__(self, locator: str, reason: str):
        super().__init__(f"{locator}: {reason}")
        self.locator = locator
        self.reason = reason


@dataclass(frozen=True)
class RepairRequest:
    old_tree: DomTree
    new_tree: DomTree
    locators: tuple[str, ...]

    def __post_init__(self) -> None:
        if not self.locators:
            raise ValueError("request has no locators")


@dataclass(frozen=True)
class ElementRepair:
    old_node: int
    old_xpath: str
    status: str  # "relocated" | "no-match"
    new_node: int | None = None
    new_xpath: str | None = None
    score: float | None = None


@dataclass(frozen=True)
class RepairOutcome:
    locator: str
    elements: tuple[ElementRepair, ...]


@dataclass
class RepairEngine:
    config: SftmConfig = field(default_factory=SftmConfig)

    def __post_init__(self) -> None:
        self._cache: dict[tuple[str, str, SftmConfig], Matching] = {}
        self._lock = threading.Lock()
        self.match_count = 0

    def matching_for(self, old_tree: DomTree, new_tree: DomTree) -> Matching:
        key = (old_tree.digest(), new_tree.digest(), self.config)
        with self._lock:
            cached = self._cache.get(key)
            if cached is not None:
                return cached
            matching = match_trees(old_tree, new_tree, self.config)
            self._cache[key] = matching
            self.match_count += 1
            return matching

    def repair(self, request: RepairRequest) -> list[RepairOutcome]:
        old_tree, new_tree = request.old_tree, request.new_tree
        resolved: list[tuple[str, list[int]]] = []
        for locator in request.locators:
            nodes = eval_xpath(old_tree, locator)
            if not nodes:
                raise LocatorError(locator, "matches no element on the old tree")
            resolved.append((locator, nodes))

        matching = self.matching_for(old_tree, new_tree)
        pair_map = matching.pair_map()
        scores = {left: score for left, _, score in matching.pairs}

        outcomes: list[RepairOutcome] = []
        for locator, nodes in resolved:
            elements: list[ElementRepair] = []
            for node_id in nodes:
                target = pair_map.get(node_id)
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
                            score=scores[node_id],
                        )
                    )
            outcomes.append(RepairOutcome(locator=locator, elements=tuple(elements)))
        return outcomes


def repair(
    old_tree: DomTree,
    new_tree: DomTree,
    locators: Sequence[str],
    config: SftmConfig | None = None,
) -> list[RepairOutcome]:
    engine = RepairEngine(config=config or SftmConfig())
    return engine.repair(RepairRequest(old_tree, new_tree, tuple(locators)))


def report_to_json(outcomes: Sequence[RepairOutcome], algorithm: str) -> dict:
    """The repair report interchange format, tagged with its algorithm."""

    return {
        "algorithm": algorithm,
        "locators": [
            {
                "descriptor": outcome.locator,
                "elements": [
                    {
                        "oldXPath": element.old_xpath,
                        "status": element.status,
                        **(
                            {"newXPath": element.new_xpath, "score": element.score}
                            if element.status == RELOCATED
                            else {}
                        ),
                    }
                    for element in outcome.elements
                ],
            }
            for outcome in outcomes
        ],
    }
