"""Mutation operators, ground truth, dataset round trips."""

import random

import pytest

from erratum.corpus import build_page
from erratum.dom.parse import parse_html
from erratum.mutagen import (
    ALL_KINDS,
    KIND_GROUPS,
    MutationError,
    assign_signatures,
    generate_dataset,
    load_dataset,
    mutate,
    record_to_json,
    write_dataset,
)

PAGE_HTML = """
<html><body>
  <nav><a href="/home">Home</a><a href="/docs">Docs</a><a href="/blog">Blog</a></nav>
  <main>
    <div class="card"><h2>First</h2><p>Some words to edit here</p><a href="/one">one</a></div>
    <div class="card"><h2>Second</h2><p>More prose for the operators</p><a href="/two">two</a></div>
    <form action="/send"><input type="text" name="q"><input type="submit" value="Go"></form>
  </main>
</body></html>
"""


@pytest.fixture
def signed_page():
    return assign_signatures(parse_html(PAGE_HTML))


def test_assign_signatures_covers_every_node(signed_page):
    assert [n.signature for n in signed_page.nodes] == [
        f"n{i}" for i in range(len(signed_page))
    ]
    assert signed_page.signature_attr == "data-erratum-sig"


def test_assign_signatures_prefix():
    tree = assign_signatures(parse_html("<p>x</p>"), prefix="q")
    assert tree.node(0).signature == "q0"


def test_signatures_survive_serialization(signed_page):
    from erratum.dom.serialize import tree_to_html

    reparsed = parse_html(tree_to_html(signed_page))
    assert [n.signature for n in reparsed.nodes] == [
        n.signature for n in signed_page.nodes
    ]
    assert all("data-erratum-sig" not in n.attributes for n in reparsed.nodes)


def test_mutate_validates_inputs(signed_page):
    with pytest.raises(ValueError):
        mutate(signed_page, ratio=0.0)
    with pytest.raises(ValueError):
        mutate(signed_page, ratio=1.5)
    with pytest.raises(ValueError):
        mutate(signed_page, ratio=0.1, kinds=["content"])  # categories are CLI sugar
    with pytest.raises(ValueError):
        mutate(signed_page, ratio=0.1, kinds=[])
    with pytest.raises(ValueError):
        mutate(parse_html(PAGE_HTML), ratio=0.1)  # no signatures assigned


def test_op_count_follows_ratio(signed_page):
    record = mutate(signed_page, ratio=0.2, seed=1)
    assert len(record.ops) == round(0.2 * len(signed_page))
    assert record.mutation_ratio == pytest.approx(len(record.ops) / len(signed_page))


def test_ground_truth_soundness(signed_page):
    for seed in range(8):
        record = mutate(signed_page, ratio=0.2, seed=seed)
        index = record.mutant.signature_index()
        assert record.ground_truth == {
            node.signature: index.get(node.signature) for node in signed_page.nodes
        }
        for signature, new_id in record.ground_truth.items():
            if new_id is not None:
                assert record.mutant.node(new_id).signature == signature


def test_created_nodes_get_fresh_signatures(signed_page):
    record = mutate(signed_page, ratio=0.3, kinds=["structure:duplicate", "structure:wrap"], seed=2)
    original = {n.signature for n in signed_page.nodes}
    minted = {n.signature for n in record.mutant.nodes} - original
    assert minted  # duplicate and wrap both create nodes
    assert all(s.startswith("m") for s in minted)


def test_mutation_deterministic_under_seed(signed_page):
    first = mutate(signed_page, ratio=0.2, seed=9)
    second = mutate(signed_page, ratio=0.2, seed=9)
    assert first.ops == second.ops
    assert first.mutant.digest() == second.mutant.digest()


def test_seeds_change_the_outcome(signed_page):
    digests = {mutate(signed_page, ratio=0.2, seed=s).mutant.digest() for s in range(5)}
    assert len(digests) > 1


def test_kind_groups_partition_all_kinds():
    assert set(KIND_GROUPS) == {"structure", "attribute", "content"}
    grouped = [k for kinds in KIND_GROUPS.values() for k in kinds]
    assert sorted(grouped) == sorted(ALL_KINDS)
    assert len(grouped) == len(set(grouped))


def test_exhausted_kinds_raise():
    tree = assign_signatures(parse_html("<html><body></body></html>"))
    with pytest.raises(MutationError):
        mutate(tree, ratio=0.5, kinds=list(KIND_GROUPS["structure"]))


def test_content_ops_leave_structure_alone(signed_page):
    record = mutate(signed_page, ratio=0.25, kinds=list(KIND_GROUPS["content"]), seed=4)
    assert len(record.mutant) == len(signed_page)
    assert [n.tag for n in record.mutant.nodes] == [n.tag for n in signed_page.nodes]


def test_generate_dataset_counts_and_stamps():
    pages = [(name, assign_signatures(tree)) for name, tree in _tiny_corpus()]
    records = generate_dataset(pages, mutants_per_page=3, seed=5)
    assert len(records) == len(pages) * 3
    assert {r.site for r in records} == {name for name, _ in pages}
    assert all(0 < r.mutation_ratio <= 0.25 for r in records)
    assert [r.index for r in records if r.site == records[0].site] == [0, 1, 2]


def test_generate_dataset_deterministic():
    pages = [(name, assign_signatures(tree)) for name, tree in _tiny_corpus()]
    first = generate_dataset(pages, mutants_per_page=2, seed=5)
    second = generate_dataset(pages, mutants_per_page=2, seed=5)
    assert [r.mutant.digest() for r in first] == [r.mutant.digest() for r in second]
    assert [r.seed for r in first] == [r.seed for r in second]


def test_generate_dataset_single_kind():
    pages = [(name, assign_signatures(tree)) for name, tree in _tiny_corpus()]
    records = generate_dataset(pages, mutants_per_page=2, seed=5, single_kind=True)
    for record in records:
        assert len({op.kind for op in record.ops}) <= 1


def test_generate_dataset_validates_arguments():
    with pytest.raises(ValueError):
        generate_dataset([])
    pages = [(name, assign_signatures(tree)) for name, tree in _tiny_corpus()]
    with pytest.raises(ValueError):
        generate_dataset(pages, ratio_range=(0.3, 0.2))


def test_dataset_round_trip(tmp_path):
    pages = [(name, assign_signatures(tree)) for name, tree in _tiny_corpus()]
    records = generate_dataset(pages, mutants_per_page=2, seed=3)
    out = write_dataset(records, tmp_path / "corpus")
    loaded = load_dataset(out)
    assert len(loaded) == len(records)
    for before, after in zip(records, loaded):
        assert after.site == before.site
        assert after.index == before.index
        assert after.seed == before.seed
        assert after.ops == before.ops
        assert after.ground_truth == before.ground_truth
        assert after.mutation_ratio == pytest.approx(before.mutation_ratio)
        assert after.original.digest() == before.original.digest()
        assert after.mutant.digest() == before.mutant.digest()


def test_load_dataset_rejects_empty_directory(tmp_path):
    with pytest.raises(ValueError):
        load_dataset(tmp_path)


def test_record_json_keys(signed_page):
    payload = record_to_json(mutate(signed_page, ratio=0.1, seed=0))
    assert set(payload) == {"ops", "groundTruth", "ratio", "seed"}
    assert all(set(op) == {"kind", "target", "payload"} for op in payload["ops"])


def _tiny_corpus():
    return [(f"page{i}", build_page(f"page{i}", seed=i, sections=2)) for i in range(2)]
