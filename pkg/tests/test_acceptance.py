"""End-to-end quality gate.

Every test prints one ``criterion N: PASS/FAIL (...)`` line with the
measured numbers before asserting, so a full run reads as a checklist.
All inputs are seeded generators or committed fixtures; the module is
deterministic and needs no network.
"""

import random
import statistics
import subprocess
import sys
import time
from pathlib import Path

import pytest

from conftest import oracle_best, random_tree
from erratum.bench import (
    BenchConfig,
    TimingConfig,
    measure_timing,
    run_benchmark,
    select_targets,
)
from erratum.bench.harness import RATIO_BINS
from erratum.corpus import builtin_corpus, timing_page
from erratum.dom.xpath import absolute_xpath
from erratum.mutagen import KIND_GROUPS, assign_signatures, generate_dataset, mutate
from erratum.repair import RepairEngine, RepairRequest
from erratum.sftm import (
    SftmConfig,
    initial_similarity,
    match_trees,
    optimize,
    propagate,
)
from erratum.wayback import (
    GAP_TOLERANCE,
    FixtureTransport,
    build_wayback_dataset,
    parse_timestamp,
)

WAYBACK_FIXTURES = Path(__file__).parent / "fixtures" / "wayback"


def _verdict(capsys, number: int, ok: bool, detail: str) -> None:
    with capsys.disabled():
        print(f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"criterion {number}: {detail}"


def test_criterion_1_oracle_equivalence(capsys):
    started = time.perf_counter()
    config = SftmConfig()
    cases = 200
    wins = 0
    worst = 1.0
    sound = True
    for case in range(cases):
        rng = random.Random(case)
        left = random_tree(rng)
        right = random_tree(rng)
        _, initial = initial_similarity(left, right, config)
        table = propagate(initial, left, right, config)
        if not table.scores:
            wins += 1
            continue
        penalty = 0.25 * statistics.median(table.scores.values())
        matching = optimize(table, left, right, config)
        attained = matching.total_score - penalty * len(matching.pairs)
        optimal = oracle_best(table.scores, penalty)
        sound = sound and attained <= optimal + 1e-9
        if optimal > 1e-12:
            worst = min(worst, attained / optimal)
        if attained >= 0.9 * optimal - 1e-9:
            wins += 1
    elapsed = time.perf_counter() - started
    ok = sound and wins >= 0.95 * cases and elapsed < 30.0
    _verdict(
        capsys,
        1,
        ok,
        f"{wins}/{cases} cases within 0.9x of the exhaustive optimum,"
        f" worst ratio {worst:.3f}, oracle bound sound: {sound}, {elapsed:.1f}s",
    )


def test_criterion_2_identity_suite(capsys):
    started = time.perf_counter()
    pages = builtin_corpus(25)
    config = SftmConfig()
    identity_failure = ""
    repaired = 0
    locators_total = 0
    for index, (name, tree) in enumerate(pages):
        matching = match_trees(tree, tree, config)
        expected = {node.id: node.id for node in tree.nodes}
        if (
            matching.pair_map() != expected
            or matching.unmatched_left
            or matching.unmatched_right
        ):
            identity_failure = name
            break
        targets = select_targets(tree, 15, seed=index)
        locators = tuple(absolute_xpath(tree, target) for target in targets)
        engine = RepairEngine(config=config)
        for outcome in engine.repair(RepairRequest(tree, tree, locators)):
            for element in outcome.elements:
                locators_total += 1
                if element.status == "relocated" and element.new_xpath == element.old_xpath:
                    repaired += 1
    elapsed = time.perf_counter() - started
    ok = not identity_failure and repaired == locators_total and elapsed < 60.0
    _verdict(
        capsys,
        2,
        ok,
        f"identity matching on all 25 pages"
        + (f" (failed on {identity_failure})" if identity_failure else "")
        + f", {repaired}/{locators_total} locators relocated to themselves, {elapsed:.1f}s",
    )


@pytest.fixture(scope="module")
def benchmark_run():
    started = time.perf_counter()
    pages = [(name, assign_signatures(tree)) for name, tree in builtin_corpus(20)]
    records = generate_dataset(pages, mutants_per_page=10, seed=0)
    report = run_benchmark(
        records,
        BenchConfig(targets_per_page=15, seed=0, collect_timing=False, jobs=4),
    )
    return report, time.perf_counter() - started


def test_criterion_3_correct_rate_contrast(benchmark_run, capsys):
    report, elapsed = benchmark_run
    erratum = report.summary["algorithms"]["erratum"]["rates"]
    water = report.summary["algorithms"]["water"]["rates"]
    gap = erratum["correct"] - water["correct"]
    ok = (
        erratum["correct"] >= 0.75
        and gap >= 0.20
        and erratum["mismatch"] < water["mismatch"]
        and elapsed < 1800.0
    )
    _verdict(
        capsys,
        3,
        ok,
        f"correct-rate erratum {erratum['correct']:.3f} vs water {water['correct']:.3f}"
        f" (gap {gap:.3f} >= 0.20), mismatch {erratum['mismatch']:.3f} <"
        f" {water['mismatch']:.3f}, benchmark took {elapsed:.0f}s",
    )


def test_criterion_4_mutation_kind_sensitivity(capsys):
    pages = [(name, assign_signatures(tree)) for name, tree in builtin_corpus(12)]
    errors = {}
    for category in ("content", "attribute", "structure"):
        records = generate_dataset(
            pages, mutants_per_page=8, seed=11, kinds=list(KIND_GROUPS[category])
        )
        report = run_benchmark(
            records,
            BenchConfig(
                targets_per_page=15,
                seed=11,
                algorithms=("erratum",),
                collect_timing=False,
                jobs=4,
            ),
        )
        errors[category] = 1.0 - report.summary["algorithms"]["erratum"]["rates"]["correct"]
    ok = errors["content"] <= 0.01 and errors["structure"] > errors["attribute"]
    _verdict(
        capsys,
        4,
        ok,
        f"error rates: content {errors['content']:.4f} (<= 0.01),"
        f" attribute {errors['attribute']:.4f}, structure {errors['structure']:.4f}"
        f" (structure > attribute)",
    )


def test_criterion_5_ratio_degradation(benchmark_run, capsys):
    report, _ = benchmark_run
    algorithms = report.summary["algorithms"]
    erratum_bins = algorithms["erratum"]["errorByRatioBin"]
    water_bins = algorithms["water"]["errorByRatioBin"]
    complete = all(name in erratum_bins and name in water_bins for name in RATIO_BINS)
    if complete:
        rates = [erratum_bins[name]["errorRate"] for name in RATIO_BINS]
        monotone = all(a <= b + 1e-12 for a, b in zip(rates, rates[1:]))
        below = all(
            erratum_bins[name]["errorRate"] < water_bins[name]["errorRate"]
            for name in RATIO_BINS
        )
        tail = rates[-1]
        detail = (
            f"erratum error by bin {'/'.join(f'{r:.4f}' for r in rates)},"
            f" non-decreasing: {monotone}, below water in every bin: {below},"
            f" >20% bin {tail:.3f} < 0.35"
        )
        ok = monotone and below and tail < 0.35
    else:
        ok = False
        detail = f"missing ratio bins: erratum {sorted(erratum_bins)}, water {sorted(water_bins)}"
    _verdict(capsys, 5, ok, detail)


def test_criterion_6_timing_shape(capsys):
    original = assign_signatures(timing_page(seed=11))
    mutant = mutate(original, ratio=0.08, seed=0).mutant
    report = measure_timing(original, mutant, TimingConfig(seed=0))
    alpha_erratum = report.alpha["erratum"]
    alpha_water = report.alpha["water"]
    ok = (
        report.repeats >= 5
        and alpha_water > 0
        and alpha_erratum <= 0.05 * alpha_water
        and report.crossover is not None
        and report.crossover <= 10
    )
    _verdict(
        capsys,
        6,
        ok,
        f"trees {report.tree_sizes[0]}/{report.tree_sizes[1]} nodes, per-locator alpha"
        f" erratum {alpha_erratum:.2f} vs water {alpha_water:.2f} ms"
        f" (ratio {alpha_erratum / alpha_water:.4f} <= 0.05), crossover at"
        f" {report.crossover} locators, medians of {report.repeats} repeats",
    )


def test_criterion_7_invariants_standalone(capsys):
    target = Path(__file__).parent / "test_invariants.py"
    result = subprocess.run(
        [sys.executable, "-m", "pytest", "-q", "-p", "no:cacheprovider", str(target)],
        capture_output=True,
        text=True,
        cwd=str(Path(__file__).parent.parent),
    )
    ok = result.returncode == 0
    if not ok:
        with capsys.disabled():
            print(result.stdout)
            print(result.stderr)
    lines = [line for line in result.stdout.strip().splitlines() if line.strip()]
    tail = lines[-1] if lines else "no output"
    _verdict(capsys, 7, ok, f"standalone no-network run: {tail}")


def test_criterion_8_wayback_fixture_replay(tmp_path, capsys):
    urls = [
        "https://example.com/home",
        "https://news.example.org/index",
        "https://docs.example.net/start",
    ]
    manifest = build_wayback_dataset(
        urls, FixtureTransport(WAYBACK_FIXTURES), tmp_path / "out"
    )
    entries = manifest["entries"]
    ok_entries = [entry for entry in entries if entry["status"] == "ok"]
    unexplained = [
        entry
        for entry in entries
        if entry["status"] != "ok"
        and not entry["status"].removeprefix("skip:").strip(": ")
    ]
    skips = len(entries) - len(ok_entries)
    tolerance_holds = all(
        abs(
            (parse_timestamp(entry["t2"]) - parse_timestamp(entry["t1"])).total_seconds()
            / 86400.0
            - entry["gapDays"]
        )
        <= GAP_TOLERANCE * entry["gapDays"]
        for entry in ok_entries
    )
    covered = {entry["url"] for entry in ok_entries}
    ok = (
        not unexplained
        and skips == 0
        and tolerance_holds
        and covered == set(urls)
        and len(ok_entries) == 9
    )
    _verdict(
        capsys,
        8,
        ok,
        f"{len(ok_entries)} pairs across {len(covered)} URLs, {skips} skips"
        f" ({len(unexplained)} unexplained), gap tolerance holds: {tolerance_holds}",
    )
