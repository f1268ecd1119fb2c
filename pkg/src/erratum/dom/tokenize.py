"""Node labels: the token multisets similarity scoring works on.

A node's label is its tag, every attribute name, and every attribute
value.  Values are kept whole after trimming ("content-info__item",
"/plugins") except for attributes that are whitespace-separated lists
(class and friends), whose values contribute one token per entry.  The
signature attribute never appears here: the parser already moved it out
of ``attributes``.  Own text joins in, whitespace-split, only when
``include_text`` is set.
"""

from __future__ import annotations

from dataclasses import dataclass

from erratum.dom.tree import DomNode


@dataclass(frozen=True)
class TokenizerConfig:
    include_text: bool = False
    split_attrs: frozenset[str] = frozenset({"class", "rel"})


@dataclass(frozen=True)
class Label:
    tokens: tuple[str, ...]

    def __iter__(self):
        return iter(self.tokens)

    def __len__(self) -> int:
        return len(self.tokens)


def tokenize(node: DomNode, config: TokenizerConfig | None = None) -> Label:
    config = config or TokenizerConfig()
    tokens: list[str] = [node.tag]
    for name, value in node.attributes.items():
        tokens.append(name)
        value = value.strip()
        if not value:
            continue
        if name in config.split_attrs:
            tokens.extend(value.split())
        else:
            tokens.append(value)
    if config.include_text and node.own_text:
        tokens.extend(node.own_text.split())
    return Label(tuple(tokens))
