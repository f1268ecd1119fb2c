"""Canonical JSON and HTML renderings of a tree.

The JSON form is the interchange format: one object per node
({id, tag, attrs, text, children}) plus {root, signatureAttr?}.  The
HTML form re-emits the signature attribute so a serialized tree parses
back to an equivalent tree (same tags, attributes, signatures, text).
"""

from __future__ import annotations

import html as html_escape

from erratum.dom.tree import DomNode, DomTree
from erratum.dom.parse import VOID_ELEMENTS


def tree_to_json(tree: DomTree) -> dict:
    payload: dict = {
        "root": tree.root,
        "nodes": [
            {
                "id": node.id,
                "tag": node.tag,
                "attrs": dict(node.attributes),
                "text": node.own_text,
                "children": list(node.children),
                **({"signature": node.signature} if node.signature is not None else {}),
            }
            for node in tree.nodes
        ],
    }
    # the attr name is tree config; it only matters once signatures exist,
    # and including it unconditionally would fork digests of equal documents
    if tree.signature_attr is not None and any(
        node.signature is not None for node in tree.nodes
    ):
        payload["signatureAttr"] = tree.signature_attr
    return payload


def tree_from_json(payload: dict) -> DomTree:
    raw_nodes = payload["nodes"]
    if not raw_nodes:
        raise ValueError("tree JSON has no nodes")
    ids = sorted(raw["id"] for raw in raw_nodes)
    if ids != list(range(len(raw_nodes))) or payload.get("root", 0) != 0:
        raise ValueError("tree JSON ids must be dense pre-order with root 0")
    parents: dict[int, int] = {}
    for raw in raw_nodes:
        for child in raw["children"]:
            parents[child] = raw["id"]
    by_id = {raw["id"]: raw for raw in raw_nodes}
    sibling_indices: dict[int, int] = {}
    for raw in raw_nodes:
        counts: dict[str, int] = {}
        for child in raw["children"]:
            tag = by_id[child]["tag"]
            counts[tag] = counts.get(tag, 0) + 1
            sibling_indices[child] = counts[tag]
    nodes = tuple(
        DomNode(
            id=raw["id"],
            tag=raw["tag"],
            attributes=dict(raw["attrs"]),
            own_text=raw.get("text", ""),
            signature=raw.get("signature"),
            parent=parents.get(raw["id"]),
            children=tuple(raw["children"]),
            sibling_index=sibling_indices.get(raw["id"], 1),
        )
        for raw in sorted(raw_nodes, key=lambda r: r["id"])
    )
    return DomTree(nodes, payload.get("signatureAttr"))


def _render(tree: DomTree, node_id: int, out: list[str]) -> None:
    node = tree.node(node_id)
    out.append(f"<{node.tag}")
    attrs = dict(node.attributes)
    if node.signature is not None and tree.signature_attr is not None:
        attrs[tree.signature_attr] = node.signature
    for name, value in attrs.items():
        out.append(f' {name}="{html_escape.escape(value, quote=True)}"')
    out.append(">")
    if node.tag in VOID_ELEMENTS:
        return
    if node.own_text:
        out.append(html_escape.escape(node.own_text))
    for child in node.children:
        _render(tree, child, out)
    out.append(f"</{node.tag}>")


def tree_to_html(tree: DomTree) -> str:
    out: list[str] = []
    _render(tree, tree.root, out)
    return "".join(out)
