"""Absolute positional XPaths and a small evaluator.

The evaluator covers exactly the locator grammar repair needs: child
steps with optional positional predicates ("/html[1]/body[1]/div[2]")
and single-attribute equality predicates ('input[@type="submit"]').  An
absolute path anchors its first step at the root; a relative path starts
from every node in the tree that matches its first step.  Anything else
(axes, //, functions, text()) is rejected as a syntax error.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from erratum.dom.tree import DomNode, DomTree


class XPathSyntaxError(Exception):
    """Raised for locators outside the supported grammar."""


_STEP_RE = re.compile(r"^([a-zA-Z][a-zA-Z0-9_-]*)((?:\[[^\]]*\])*)$")
_PREDICATE_RE = re.compile(r"\[([^\]]*)\]")
_ATTR_EQ_RE = re.compile(r"^@([a-zA-Z_][a-zA-Z0-9_:.-]*)\s*=\s*(\"[^\"]*\"|'[^']*')$")


@dataclass(frozen=True)
class _Step:
    tag: str
    position: int | None
    attr: tuple[str, str] | None


def _parse_step(raw: str, path: str) -> _Step:
    match = _STEP_RE.match(raw)
    if not match:
        raise XPathSyntaxError(f"unsupported step {raw!r} in {path!r}")
    tag = match.group(1).lower()
    position: int | None = None
    attr: tuple[str, str] | None = None
    for predicate in _PREDICATE_RE.findall(match.group(2)):
        predicate = predicate.strip()
        if predicate.isdigit():
            value = int(predicate)
            if value < 1 or position is not None:
                raise XPathSyntaxError(f"bad positional predicate in {path!r}")
            position = value
            continue
        attr_match = _ATTR_EQ_RE.match(predicate)
        if not attr_match or attr is not None:
            raise XPathSyntaxError(f"unsupported predicate [{predicate}] in {path!r}")
        attr = (attr_match.group(1).lower(), attr_match.group(2)[1:-1])
    return _Step(tag=tag, position=position, attr=attr)


def _parse(path: str) -> tuple[bool, list[_Step]]:
    if not path or not path.strip():
        raise XPathSyntaxError("empty locator")
    path = path.strip()
    if "//" in path:
        raise XPathSyntaxError(f"descendant axis not supported: {path!r}")
    absolute = path.startswith("/")
    raw_steps = path[1:].split("/") if absolute else path.split("/")
    if any(not raw for raw in raw_steps):
        raise XPathSyntaxError(f"empty step in {path!r}")
    return absolute, [_parse_step(raw, path) for raw in raw_steps]


def _matches(node: DomNode, step: _Step) -> bool:
    if node.tag != step.tag:
        return False
    if step.position is not None and node.sibling_index != step.position:
        return False
    if step.attr is not None:
        name, value = step.attr
        if node.attributes.get(name) != value:
            return False
    return True


def absolute_xpath(tree: DomTree, node_id: int) -> str:
    """Positional path from the root, e.g. ``/html[1]/body[1]/div[2]/a[1]``."""

    cached = tree._xpaths.get(node_id)
    if cached is not None:
        return cached
    steps: list[str] = []
    current: int | None = node_id
    while current is not None:
        node = tree.node(current)
        steps.append(f"{node.tag}[{node.sibling_index}]")
        current = node.parent
    path = "/" + "/".join(reversed(steps))
    tree._xpaths[node_id] = path
    return path


def eval_xpath(tree: DomTree, path: str) -> list[int]:
    """Node ids matching ``path``, in document order."""

    absolute, steps = _parse(path)
    if absolute:
        context = [tree.root] if _matches(tree.node(tree.root), steps[0]) else []
    else:
        context = [node.id for node in tree.nodes if _matches(node, steps[0])]
    for step in steps[1:]:
        context = [
            child
            for node_id in context
            for child in tree.children_of(node_id)
            if _matches(tree.node(child), step)
        ]
    ordered = sorted(set(context))
    return ordered
