"""Shared fixtures: two small reference documents and brute-force helpers.

The login form and the card snippet are the hand-checked examples most
unit suites anchor on; the oracle here is the exhaustive counterpart the
optimizer is measured against.
"""

from __future__ import annotations

import random

import pytest

from erratum.dom.parse import parse_html
from erratum.dom.tree import DomTree, MutableNode, freeze

LOGIN_FORM_HTML = (
    '<form method="post" action="index.php">'
    ' <input type="text" name="username"/>'
    ' <input type="submit" value="send"/>'
    "</form>"
)

# One card, before and after a redesign that renamed its class, wrapped
# it in a container and added a sibling card.  The interesting target is
# the link: its href and text changed, only its neighborhood survives.
CARD_OLD_HTML = """
<div class="content-info__item">
  <div class="item__title">...</div>
  <div class="item__subtitle">
    ...
    <a href="/plugins">Plugins</a>
  </div>
</div>
"""

CARD_NEW_HTML = """
<div class="items-wrap">
  <div class="item">
    <div class="item__title">...</div>
    <div class="item__subtitle">
      ...
      <a href="/extensions">Extensions</a>
    </div>
  </div>
  <div>
    ...
    <a href="/newsletter">Newsletter</a>
  </div>
</div>
"""

# node ids in the card pair, pre-order
OLD_CARD, OLD_TITLE, OLD_SUBTITLE, OLD_LINK = 0, 1, 2, 3
NEW_WRAP, NEW_CARD, NEW_TITLE, NEW_SUBTITLE, NEW_LINK, NEW_EXTRA, NEW_EXTRA_LINK = range(7)


@pytest.fixture
def form_tree() -> DomTree:
    return parse_html(LOGIN_FORM_HTML)


@pytest.fixture
def card_pair() -> tuple[DomTree, DomTree]:
    return parse_html(CARD_OLD_HTML), parse_html(CARD_NEW_HTML)


_TAGS = ("div", "p", "a", "span", "ul")
_CLASS_WORDS = ("alpha", "beta", "gamma", "delta", "nav", "card", "hero")


def random_tree(rng: random.Random) -> DomTree:
    """Random labeled tree with 2 to 8 nodes, attributes optional."""

    size = rng.randint(2, 8)
    nodes = [MutableNode(tag=rng.choice(_TAGS))]
    for _ in range(size - 1):
        child = MutableNode(tag=rng.choice(_TAGS))
        if rng.random() < 0.6:
            child.attributes["class"] = rng.choice(_CLASS_WORDS)
        if rng.random() < 0.3:
            child.attributes["id"] = f"{rng.choice(_CLASS_WORDS)}-{rng.randint(1, 9)}"
        rng.choice(nodes).append(child)
        nodes.append(child)
    return freeze(nodes[0])


def oracle_best(scores: dict[tuple[int, int], float], penalty: float) -> float:
    """Exhaustive optimum of sum(score - penalty) over injective pair sets.

    Depth-first over left nodes with a suffix upper bound for pruning;
    exact on the tree sizes the property suites use.
    """

    lefts = sorted({l for l, _ in scores})
    by_left = {
        l: sorted(
            ((s - penalty, r) for (ll, r), s in scores.items() if ll == l),
            reverse=True,
        )
        for l in lefts
    }
    best_gain = [max((g for g, _ in by_left[l] if g > 0), default=0.0) for l in lefts]
    suffix = [0.0] * (len(lefts) + 1)
    for i in range(len(lefts) - 1, -1, -1):
        suffix[i] = suffix[i + 1] + best_gain[i]
    best = [0.0]

    def walk(i: int, used: set[int], total: float) -> None:
        if total + suffix[i] <= best[0] + 1e-12:
            return
        if i == len(lefts):
            best[0] = max(best[0], total)
            return
        for gain, r in by_left[lefts[i]]:
            if gain <= 0:
                break
            if r not in used:
                used.add(r)
                walk(i + 1, used, total + gain)
                used.discard(r)
        walk(i + 1, used, total)  # leave this left node unmatched

    walk(0, set(), 0.0)
    return best[0]
