"""Seeded page mutations with signature-based ground truth.

Every node of the page to mutate must carry a signature attribute; the
operators preserve signatures on surviving nodes and mint fresh ones for
nodes they create (duplicated subtrees, wrappers), so re-parsing the
mutated HTML and indexing signatures yields the ground-truth map
old-signature -> new node id (or None for nodes that are gone).  The
algorithms under test never see signatures: the parser keeps them out of
node attributes, hence out of labels, XPaths and attribute features.

Structure operators never target the root or the html/head/body
envelope; an op kind with no eligible node is redrawn, and mutation only
fails if no requested kind has any eligible node left.
"""

from __future__ import annotations

import hashlib
import json
import logging
import random
import string
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from erratum.dom.parse import ParseConfig, parse_html
from erratum.dom.serialize import tree_to_html
from erratum.dom.tree import DomTree, MutableNode, freeze, thaw

log = logging.getLogger(__name__)

STRUCTURE_KINDS = (
    "structure:remove",
    "structure:duplicate",
    "structure:wrap",
    "structure:unwrap",
    "structure:swap",
)
ATTRIBUTE_KINDS = ("attribute:remove", "attribute:remove-words")
CONTENT_KINDS = (
    "content:replace-random",
    "content:change-letters",
    "content:remove",
    "content:remove-words",
)
ALL_KINDS = STRUCTURE_KINDS + ATTRIBUTE_KINDS + CONTENT_KINDS

KIND_GROUPS = {
    "structure": STRUCTURE_KINDS,
    "attribute": ATTRIBUTE_KINDS,
    "content": CONTENT_KINDS,
}

_PROTECTED_TAGS = frozenset({"html", "head", "body"})


class MutationError(Exception):
    """No requested operator has an eligible node."""


@dataclass(frozen=True)
class MutationOp:
    kind: str
    target: str  # signature of the node the op was applied to
    payload: dict = field(default_factory=dict)


@dataclass(frozen=True)
class MutantRecord:
    original: DomTree
    mutant: DomTree
    ops: tuple[MutationOp, ...]
    ground_truth: dict[str, int | None]
    mutation_ratio: float
    seed: int
    site: str = ""
    index: int = 0

    def categories(self) -> tuple[str, ...]:
        return tuple(sorted({op.kind.split(":", 1)[0] for op in self.ops}))


def assign_signatures(tree: DomTree, prefix: str = "n") -> DomTree:
    """Copy of ``tree`` with signature ``<prefix><id>`` on every node."""

    root = thaw(tree)
    counter = 0

    def walk(node: MutableNode) -> None:
        nonlocal counter
        node.signature = f"{prefix}{counter}"
        counter += 1
        for child in node.children:
            walk(child)

    walk(root)
    return freeze(root, tree.signature_attr or ParseConfig().signature_attr)


def _walk_with_parents(
    root: MutableNode,
) -> list[tuple[MutableNode | None, int, MutableNode]]:
    """Pre-order (parent, index-in-parent, node) triples, root first."""

    out: list[tuple[MutableNode | None, int, MutableNode]] = [(None, 0, root)]
    stack: list[tuple[MutableNode, int]] = [(root, 0)]
    while stack:
        node, cursor = stack.pop()
        if cursor < len(node.children):
            stack.append((node, cursor + 1))
            child = node.children[cursor]
            out.append((node, cursor, child))
            stack.append((child, 0))
    return out


def _structure_targets(root: MutableNode) -> list[tuple[MutableNode, int, MutableNode]]:
    return [
        (parent, idx, node)
        for parent, idx, node in _walk_with_parents(root)
        if parent is not None and node.tag not in _PROTECTED_TAGS
    ]


def _eligible(kind: str, root: MutableNode) -> list[tuple[MutableNode | None, int, MutableNode]]:
    if kind.startswith("structure:"):
        targets = _structure_targets(root)
        if kind == "structure:swap":
            return [t for t in targets if len(t[0].children) >= 2]
        return targets
    everything = _walk_with_parents(root)
    if kind == "attribute:remove":
        return [t for t in everything if t[2].attributes]
    if kind == "attribute:remove-words":
        return [t for t in everything if any(v.split() for v in t[2].attributes.values())]
    if kind in ("content:replace-random", "content:remove"):
        return [t for t in everything if t[2].own_text()]
    if kind == "content:change-letters":
        return [t for t in everything if any(c.isalpha() for c in t[2].own_text())]
    if kind == "content:remove-words":
        return [t for t in everything if t[2].own_text().split()]
    raise ValueError(f"unknown mutation kind {kind!r}")


def _random_word(rng: random.Random) -> str:
    return "".join(rng.choice(string.ascii_lowercase) for _ in range(rng.randint(3, 9)))


def _apply(
    kind: str,
    parent: MutableNode | None,
    idx: int,
    node: MutableNode,
    rng: random.Random,
    fresh: "_FreshSignatures",
) -> dict:
    if kind == "structure:remove":
        assert parent is not None
        del parent.children[idx]
        return {}
    if kind == "structure:duplicate":
        assert parent is not None
        clone = node.clone()
        for _, _, cloned in _walk_with_parents(clone):
            cloned.signature = fresh.next()
        parent.children.insert(idx + 1, clone)
        return {"clone": clone.signature}
    if kind == "structure:wrap":
        assert parent is not None
        wrapper = MutableNode(tag="div", signature=fresh.next())
        wrapper.children.append(node)
        parent.children[idx] = wrapper
        return {"wrapper": wrapper.signature}
    if kind == "structure:unwrap":
        assert parent is not None
        parent.children[idx : idx + 1] = node.children
        return {"spliced": len(node.children)}
    if kind == "structure:swap":
        assert parent is not None
        others = [i for i in range(len(parent.children)) if i != idx]
        other = rng.choice(others)
        parent.children[idx], parent.children[other] = (
            parent.children[other],
            parent.children[idx],
        )
        return {"with": parent.children[idx].signature}
    if kind == "attribute:remove":
        name = rng.choice(list(node.attributes))
        removed = node.attributes.pop(name)
        return {"attr": name, "value": removed}
    if kind == "attribute:remove-words":
        name = rng.choice([n for n, v in node.attributes.items() if v.split()])
        words = node.attributes[name].split()
        keep = set(range(len(words))) - set(
            rng.sample(range(len(words)), rng.randint(1, len(words)))
        )
        node.attributes[name] = " ".join(words[i] for i in sorted(keep))
        return {"attr": name, "removed": len(words) - len(keep)}
    if kind == "content:replace-random":
        node.text_parts = [" ".join(_random_word(rng) for _ in range(rng.randint(1, 6)))]
        return {}
    if kind == "content:change-letters":
        text = list(node.own_text())
        alpha = [i for i, c in enumerate(text) if c.isalpha()]
        chosen = rng.sample(alpha, max(1, round(0.3 * len(alpha))))
        for i in chosen:
            replacement = rng.choice(string.ascii_lowercase)
            while replacement == text[i].lower():
                replacement = rng.choice(string.ascii_lowercase)
            text[i] = replacement
        node.text_parts = ["".join(text)]
        return {"changed": len(chosen)}
    if kind == "content:remove":
        node.text_parts = []
        return {}
    if kind == "content:remove-words":
        words = node.own_text().split()
        keep = set(range(len(words))) - set(
            rng.sample(range(len(words)), rng.randint(1, len(words)))
        )
        node.text_parts = [" ".join(words[i] for i in sorted(keep))] if keep else []
        return {"removed": len(words) - len(keep)}
    raise ValueError(f"unknown mutation kind {kind!r}")


class _FreshSignatures:
    def __init__(self, taken: set[str]):
        self.taken = taken
        self.counter = 0

    def next(self) -> str:
        while True:
            candidate = f"m{self.counter}"
            self.counter += 1
            if candidate not in self.taken:
                self.taken.add(candidate)
                return candidate


def mutate(
    tree: DomTree,
    ratio: float,
    kinds: Sequence[str] = ALL_KINDS,
    seed: int = 0,
) -> MutantRecord:
    """Apply ``round(ratio * size)`` seeded ops and re-derive ground truth."""

    if not 0 < ratio <= 1:
        raise ValueError(f"mutation ratio must be in (0, 1], got {ratio}")
    if not kinds:
        raise ValueError("no mutation kinds requested")
    unknown = [k for k in kinds if k not in ALL_KINDS]
    if unknown:
        raise ValueError(f"unknown mutation kinds: {unknown}")
    if tree.signature_attr is None:
        raise ValueError("tree has no signature attribute; assign signatures first")
    unsigned = [node.id for node in tree.nodes if node.signature is None]
    if unsigned:
        raise ValueError(f"nodes without signatures: {unsigned[:5]}")

    rng = random.Random(seed)
    root = thaw(tree)
    fresh = _FreshSignatures({node.signature for node in tree.nodes if node.signature})
    n_ops = round(ratio * len(tree))
    ops: list[MutationOp] = []
    for _ in range(n_ops):
        pool = list(kinds)
        while pool:
            kind = rng.choice(pool)
            eligible = _eligible(kind, root)
            if eligible:
                break
            pool.remove(kind)
        else:
            raise MutationError(f"no eligible node for any of {list(kinds)}")
        parent, idx, node = rng.choice(eligible)
        target = node.signature
        assert target is not None
        payload = _apply(kind, parent, idx, node, rng, fresh)
        ops.append(MutationOp(kind=kind, target=target, payload=payload))

    html = tree_to_html(freeze(root, tree.signature_attr))
    mutant = parse_html(html, ParseConfig(signature_attr=tree.signature_attr))
    mutant_index = mutant.signature_index()
    ground_truth = {
        node.signature: mutant_index.get(node.signature)
        for node in tree.nodes
        if node.signature is not None
    }
    return MutantRecord(
        original=tree,
        mutant=mutant,
        ops=tuple(ops),
        ground_truth=ground_truth,
        mutation_ratio=n_ops / len(tree),
        seed=seed,
    )


def _derive_seed(seed: int, site: str, index: int) -> int:
    digest = hashlib.sha256(f"{seed}:{site}:{index}".encode("utf-8")).digest()
    return int.from_bytes(digest[:8], "big") >> 1


def generate_dataset(
    pages: Sequence[tuple[str, DomTree]],
    mutants_per_page: int = 10,
    seed: int = 0,
    ratio_range: tuple[float, float] = (0.0, 0.25),
    kinds: Sequence[str] = ALL_KINDS,
    single_kind: bool = False,
) -> list[MutantRecord]:
    """Mutants for every (name, signed page); ratios drawn in (lo, hi].

    ``single_kind`` restricts each mutant to one operator kind drawn from
    ``kinds``, the shape sensitivity analyses want.
    """

    if not pages:
        raise ValueError("no pages to mutate")
    lo, hi = ratio_range
    if not 0 <= lo < hi <= 1:
        raise ValueError(f"bad ratio range {ratio_range}")
    records: list[MutantRecord] = []
    for site, tree in pages:
        for index in range(mutants_per_page):
            sub_seed = _derive_seed(seed, site, index)
            rng = random.Random(sub_seed)
            ratio = rng.uniform(lo, hi)
            if ratio == lo:
                ratio = hi
            mutant_kinds = [rng.choice(list(kinds))] if single_kind else kinds
            try:
                record = mutate(tree, ratio, kinds=mutant_kinds, seed=sub_seed)
            except MutationError as error:
                log.warning("skipping %s mutant %d: %s", site, index, error)
                continue
            records.append(
                MutantRecord(
                    original=record.original,
                    mutant=record.mutant,
                    ops=record.ops,
                    ground_truth=record.ground_truth,
                    mutation_ratio=record.mutation_ratio,
                    seed=sub_seed,
                    site=site,
                    index=index,
                )
            )
    return records


def record_to_json(record: MutantRecord) -> dict:
    return {
        "ops": [
            {"kind": op.kind, "target": op.target, "payload": op.payload}
            for op in record.ops
        ],
        "groundTruth": dict(record.ground_truth),
        "ratio": record.mutation_ratio,
        "seed": record.seed,
    }


def write_dataset(records: Sequence[MutantRecord], out_dir: str | Path) -> Path:
    """Materialize corpus/<site>/original.html + mutants/<i>.{html,record.json}."""

    out = Path(out_dir)
    seen_sites: set[str] = set()
    for record in records:
        site_dir = out / record.site
        mutants_dir = site_dir / "mutants"
        mutants_dir.mkdir(parents=True, exist_ok=True)
        if record.site not in seen_sites:
            (site_dir / "original.html").write_text(
                tree_to_html(record.original), encoding="utf-8"
            )
            seen_sites.add(record.site)
        (mutants_dir / f"{record.index}.html").write_text(
            tree_to_html(record.mutant), encoding="utf-8"
        )
        (mutants_dir / f"{record.index}.record.json").write_text(
            json.dumps(record_to_json(record), indent=2, sort_keys=True),
            encoding="utf-8",
        )
    return out


def load_dataset(
    corpus_dir: str | Path, parse_config: ParseConfig | None = None
) -> list[MutantRecord]:
    """Read a materialized corpus back into records."""

    corpus = Path(corpus_dir)
    config = parse_config or ParseConfig()
    records: list[MutantRecord] = []
    site_dirs = sorted(d for d in corpus.iterdir() if (d / "original.html").is_file())
    if not site_dirs:
        raise ValueError(f"no corpus sites under {corpus}")
    for site_dir in site_dirs:
        original_html = (site_dir / "original.html").read_text(encoding="utf-8")
        original = parse_html(original_html, config)
        for record_path in sorted(
            (site_dir / "mutants").glob("*.record.json"),
            key=lambda p: int(p.name.split(".")[0]),
        ):
            index = int(record_path.name.split(".")[0])
            raw = json.loads(record_path.read_text(encoding="utf-8"))
            mutant_html = (site_dir / "mutants" / f"{index}.html").read_text(encoding="utf-8")
            records.append(
                MutantRecord(
                    original=original,
                    mutant=parse_html(mutant_html, config),
                    ops=tuple(
                        MutationOp(kind=op["kind"], target=op["target"], payload=op.get("payload", {}))
                        for op in raw["ops"]
                    ),
                    ground_truth={k: v for k, v in raw["groundTruth"].items()},
                    mutation_ratio=raw["ratio"],
                    seed=raw["seed"],
                    site=site_dir.name,
                    index=index,
                )
            )
    return records
