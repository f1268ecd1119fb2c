"""Tree types shared by the parser, the mutators and the serializers.

A :class:`DomTree` is immutable after construction: node ids are dense,
assigned in pre-order, so iterating ids in increasing order *is* document
order.  :class:`MutableNode` is the editable form used while building or
mutating a tree; :func:`freeze` / :func:`thaw` convert between the two.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field


@dataclass(frozen=True)
class DomNode:
    """One element of a frozen tree.

    ``attributes`` never contains the tree's signature attribute; that
    value, when present, lives in ``signature``.  ``sibling_index`` is
    1-based among same-tag siblings, i.e. the positional predicate of the
    node's absolute XPath step.
    """

    id: int
    tag: str
    attributes: dict[str, str]
    own_text: str
    signature: str | None
    parent: int | None
    children: tuple[int, ...]
    sibling_index: int


@dataclass
class MutableNode:
    tag: str
    attributes: dict[str, str] = field(default_factory=dict)
    text_parts: list[str] = field(default_factory=list)
    signature: str | None = None
    children: list["MutableNode"] = field(default_factory=list)

    def append(self, child: "MutableNode") -> "MutableNode":
        self.children.append(child)
        return child

    def own_text(self) -> str:
        parts = [p.strip() for p in self.text_parts]
        return " ".join(p for p in parts if p)

    def clone(self) -> "MutableNode":
        return MutableNode(
            tag=self.tag,
            attributes=dict(self.attributes),
            text_parts=list(self.text_parts),
            signature=self.signature,
            children=[c.clone() for c in self.children],
        )


class DomTree:
    """Frozen ordered labeled tree with dense pre-order node ids."""

    def __init__(self, nodes: tuple[DomNode, ...], signature_attr: str | None):
        self.nodes = nodes
        self.signature_attr = signature_attr
        self._digest: str | None = None
        self._xpaths: dict[int, str] = {}
        self._signature_index: dict[str, int] | None = None

    @property
    def root(self) -> int:
        return 0

    def __len__(self) -> int:
        return len(self.nodes)

    def node(self, node_id: int) -> DomNode:
        if not 0 <= node_id < len(self.nodes):
            raise KeyError(f"no node {node_id} in tree of size {len(self.nodes)}")
        return self.nodes[node_id]

    def children_of(self, node_id: int) -> tuple[int, ...]:
        return self.node(node_id).children

    def parent_of(self, node_id: int) -> int | None:
        return self.node(node_id).parent

    def signature_index(self) -> dict[str, int]:
        if self._signature_index is None:
            index: dict[str, int] = {}
            for node in self.nodes:
                if node.signature is not None:
                    index[node.signature] = node.id
            self._signature_index = index
        return self._signature_index

    def digest(self) -> str:
        if self._digest is None:
            from erratum.dom.serialize import tree_to_json

            payload = json.dumps(tree_to_json(self), sort_keys=True, separators=(",", ":"))
            self._digest = hashlib.sha256(payload.encode("utf-8")).hexdigest()
        return self._digest


def freeze(root: MutableNode, signature_attr: str | None = None) -> DomTree:
    """Assign pre-order ids and produce an immutable tree.

    Signatures must be unique when present; duplicates are a caller bug.
    """

    nodes: list[DomNode] = []
    seen_signatures: set[str] = set()

    def visit(mutable: MutableNode, parent: int | None, sibling_index: int) -> int:
        node_id = len(nodes)
        nodes.append(None)  # type: ignore[arg-type]  # placeholder until children known
        child_ids: list[int] = []
        tag_counts: dict[str, int] = {}
        for child in mutable.children:
            tag_counts[child.tag] = tag_counts.get(child.tag, 0) + 1
            child_ids.append(visit(child, node_id, tag_counts[child.tag]))
        signature = mutable.signature
        if signature is not None:
            if signature in seen_signatures:
                raise ValueError(f"duplicate signature {signature!r}")
            seen_signatures.add(signature)
        nodes[node_id] = DomNode(
            id=node_id,
            tag=mutable.tag,
            attributes=dict(mutable.attributes),
            own_text=mutable.own_text(),
            signature=signature,
            parent=parent,
            children=tuple(child_ids),
            sibling_index=sibling_index,
        )
        return node_id

    visit(root, None, 1)
    return DomTree(tuple(nodes), signature_attr)


def thaw(tree: DomTree) -> MutableNode:
    """Rebuild an editable copy of ``tree`` (inverse of :func:`freeze`)."""

    def rebuild(node_id: int) -> MutableNode:
        node = tree.node(node_id)
        mutable = MutableNode(
            tag=node.tag,
            attributes=dict(node.attributes),
            text_parts=[node.own_text] if node.own_text else [],
            signature=node.signature,
        )
        for child_id in node.children:
            mutable.append(rebuild(child_id))
        return mutable

    return rebuild(tree.root)
