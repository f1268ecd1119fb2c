"""Accuracy benchmark over a mutant corpus.

For every mutant, sample clickable target elements from the original
page, ask each algorithm where they went, and classify the answer
against the signature ground truth:

* correct   - predicted node carries the target's signature, or the
              target is gone and the algorithm said so;
* mismatch  - predicted some node, but the wrong one (or a deleted one);
* no-match  - said nothing although the target still exists.

Rows aggregate into label rates with normal-approximation confidence
intervals, plus error rates split by mutation-ratio bin, DOM-size
quintile and operator kind mix.  Everything except wall-clock timing is
deterministic given the dataset and seed; with timing collection off the
CSV is byte-identical across runs.
"""

from __future__ import annotations

import csv
import json
import logging
import math
import random
import statistics
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

from erratum.dom.tree import DomTree
from erratum.dom.xpath import absolute_xpath
from erratum.mutagen import MutantRecord, _derive_seed
from erratum.sftm import SftmConfig, match_trees
from erratum.water import WaterConfig, relocate_scored

log = logging.getLogger(__name__)

CORRECT = "correct"
MISMATCH = "mismatch"
NO_MATCH = "no-match"
LABELS = (CORRECT, MISMATCH, NO_MATCH)

ERRATUM = "erratum"
WATER = "water"

RATIO_BINS = ("0-5%", "5-10%", "10-20%", ">20%")

CSV_HEADER = (
    "algorithm", "site", "mutant", "element", "label",
    "score", "timeMs", "domSize", "ratio", "kinds",
)


def clickable_ids(tree: DomTree) -> list[int]:
    """Elements a user can click: links, buttons, submit inputs, onclick."""

    ids: list[int] = []
    for node in tree.nodes:
        if node.tag in ("a", "button"):
            ids.append(node.id)
        elif node.tag == "input" and node.attributes.get("type", "").lower() in ("submit", "button"):
            ids.append(node.id)
        elif "onclick" in node.attributes:
            ids.append(node.id)
    return ids


def select_targets(tree: DomTree, k: int, seed: int = 0) -> list[int]:
    """Uniform sample (without replacement) of up to ``k`` clickables."""

    pool = clickable_ids(tree)
    if len(pool) <= k:
        return pool
    return sorted(random.Random(seed).sample(pool, k))


def classify(predicted: int | None, truth: int | None) -> str:
    if predicted is None:
        return CORRECT if truth is None else NO_MATCH
    if truth is None:
        return MISMATCH
    return CORRECT if predicted == truth else MISMATCH


def ratio_bin(ratio: float) -> str:
    if ratio <= 0.05:
        return RATIO_BINS[0]
    if ratio <= 0.10:
        return RATIO_BINS[1]
    if ratio <= 0.20:
        return RATIO_BINS[2]
    return RATIO_BINS[3]


@dataclass(frozen=True)
class BenchConfig:
    targets_per_page: int = 15
    seed: int = 0
    sftm: SftmConfig = field(default_factory=SftmConfig)
    water: WaterConfig = field(default_factory=WaterConfig)
    algorithms: tuple[str, ...] = (ERRATUM, WATER)
    collect_timing: bool = True
    jobs: int = 1


@dataclass(frozen=True)
class TrialRow:
    algorithm: str
    site: str
    mutant: int
    element: str
    label: str
    score: float | None
    time_ms: float | None
    dom_size: int
    ratio: float
    kinds: str


@dataclass
class BenchReport:
    rows: list[TrialRow]
    errors: list[str]
    summary: dict


def _erratum_trials(record: MutantRecord, targets: list[int], config: BenchConfig):
    started = time.perf_counter()
    matching = match_trees(record.original, record.mutant, config.sftm)
    elapsed_ms = (time.perf_counter() - started) * 1000.0
    pair_map = matching.pair_map()
    scores = {left: score for left, _, score in matching.pairs}
    share = elapsed_ms / len(targets)
    for target in targets:
        yield target, pair_map.get(target), scores.get(target), share


def _water_trials(record: MutantRecord, targets: list[int], config: BenchConfig):
    for target in targets:
        started = time.perf_counter()
        predicted, score = relocate_scored(record.original, record.mutant, target, config.water)
        elapsed_ms = (time.perf_counter() - started) * 1000.0
        yield target, predicted, score, elapsed_ms


_TRIALS = {ERRATUM: _erratum_trials, WATER: _water_trials}


def run_record(record: MutantRecord, config: BenchConfig) -> tuple[list[TrialRow], list[str]]:
    targets = select_targets(
        record.original,
        config.targets_per_page,
        _derive_seed(config.seed, record.site, record.index),
    )
    rows: list[TrialRow] = []
    errors: list[str] = []
    if not targets:
        errors.append(f"{record.site}/{record.index}: no clickable elements")
        return rows, errors
    kinds = "+".join(record.categories()) if record.ops else "none"
    for algorithm in config.algorithms:
        try:
            trials = list(_TRIALS[algorithm](record, targets, config))
        except Exception as error:  # a crash costs that pair, not the run
            errors.append(f"{record.site}/{record.index}/{algorithm}: {error!r}")
            trials = [(target, None, None, None) for target in targets]
        for target, predicted, score, time_ms in trials:
            signature = record.original.node(target).signature
            truth = record.ground_truth.get(signature) if signature is not None else None
            rows.append(
                TrialRow(
                    algorithm=algorithm,
                    site=record.site,
                    mutant=record.index,
                    element=absolute_xpath(record.original, target),
                    label=classify(predicted, truth),
                    score=score,
                    time_ms=time_ms if config.collect_timing else None,
                    dom_size=len(record.original),
                    ratio=record.mutation_ratio,
                    kinds=kinds,
                )
            )
    return rows, errors


def _run_record_star(payload: tuple[MutantRecord, BenchConfig]):
    return run_record(*payload)


def _rate_table(rows: list[TrialRow]) -> dict:
    total = len(rows)
    counts = {label: 0 for label in LABELS}
    for row in rows:
        counts[row.label] += 1
    rates = {label: counts[label] / total for label in LABELS} if total else {}
    ci95 = {
        label: 1.96 * math.sqrt(max(rate * (1 - rate), 0.0) / total)
        for label, rate in rates.items()
    } if total else {}
    return {"trials": total, "counts": counts, "rates": rates, "ci95": ci95}


def _error_rate(rows: list[TrialRow]) -> float:
    correct = sum(1 for row in rows if row.label == CORRECT)
    return 1.0 - correct / len(rows)


def _grouped_error(rows: list[TrialRow], key) -> dict[str, dict]:
    groups: dict[str, list[TrialRow]] = {}
    for row in rows:
        groups.setdefault(key(row), []).append(row)
    return {
        name: {"trials": len(group), "errorRate": _error_rate(group)}
        for name, group in sorted(groups.items())
    }


def _size_bins(rows: list[TrialRow]) -> list[float]:
    sizes = sorted({(row.site, row.dom_size) for row in rows})
    values = [size for _, size in sizes]
    if len(set(values)) < 5:
        cuts = sorted(set(values))[:-1]
    else:
        cuts = statistics.quantiles(values, n=5)
    return list(cuts)


def _size_bin_label(size: int, cuts: list[float]) -> str:
    for position, cut in enumerate(cuts, start=1):
        if size <= cut:
            return f"q{position}"
    return f"q{len(cuts) + 1}"


def summarize(rows: list[TrialRow], errors: list[str]) -> dict:
    by_algorithm: dict[str, list[TrialRow]] = {}
    for row in rows:
        by_algorithm.setdefault(row.algorithm, []).append(row)
    cuts = _size_bins(rows) if rows else []
    summary: dict = {
        "trials": len(rows),
        "errors": list(errors),
        "sizeQuintileCuts": cuts,
        "algorithms": {},
    }
    for algorithm, algorithm_rows in sorted(by_algorithm.items()):
        summary["algorithms"][algorithm] = {
            **_rate_table(algorithm_rows),
            "errorByRatioBin": _grouped_error(algorithm_rows, lambda r: ratio_bin(r.ratio)),
            "errorBySizeQuintile": _grouped_error(
                algorithm_rows, lambda r: _size_bin_label(r.dom_size, cuts)
            ),
            "errorByKinds": _grouped_error(algorithm_rows, lambda r: r.kinds),
        }
    return summary


def run_benchmark(records: Sequence[MutantRecord], config: BenchConfig | None = None) -> BenchReport:
    config = config or BenchConfig()
    if not records:
        raise ValueError("empty dataset")
    rows: list[TrialRow] = []
    errors: list[str] = []
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            results = list(pool.map(_run_record_star, [(r, config) for r in records]))
    else:
        results = [run_record(record, config) for record in records]
    for record_rows, record_errors in results:
        rows.extend(record_rows)
        errors.extend(record_errors)
    return BenchReport(rows=rows, errors=errors, summary=summarize(rows, errors))


def write_metrics_csv(report: BenchReport, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(CSV_HEADER)
        for row in report.rows:
            writer.writerow(
                [
                    row.algorithm,
                    row.site,
                    row.mutant,
                    row.element,
                    row.label,
                    f"{row.score:.6f}" if row.score is not None else "",
                    f"{row.time_ms:.3f}" if row.time_ms is not None else "",
                    row.dom_size,
                    f"{row.ratio:.4f}",
                    row.kinds,
                ]
            )
    return path


def write_report_json(report: BenchReport, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(report.summary, indent=2, sort_keys=True), encoding="utf-8")
    return path


def write_series_csvs(report: BenchReport, out_dir: str | Path) -> list[Path]:
    """One flat CSV per figure-shaped series in the summary."""

    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written: list[Path] = []
    series = {
        "series_error_by_ratio.csv": "errorByRatioBin",
        "series_error_by_size.csv": "errorBySizeQuintile",
        "series_error_by_kinds.csv": "errorByKinds",
    }
    for filename, key in series.items():
        path = out / filename
        with path.open("w", newline="", encoding="utf-8") as handle:
            writer = csv.writer(handle)
            writer.writerow(["algorithm", "bin", "trials", "errorRate"])
            for algorithm, tables in sorted(report.summary["algorithms"].items()):
                for name, cell in tables[key].items():
                    writer.writerow(
                        [algorithm, name, cell["trials"], f"{cell['errorRate']:.6f}"]
                    )
        written.append(path)
    return written
