"""Cost shape: repair time as a function of locator count.

The matcher pays one tree matching per page pair no matter how many
locators ride on it, so its per-locator slope (alpha, ms per locator)
should be near zero; the per-element baseline pays a full scan per
locator, so its slope is its cost.  Each (algorithm, count) cell is the
median of repeated whole-repair wall-clock runs, single-threaded, fresh
engine per run so nothing is amortized across repeats.  The crossover is
the smallest measured count where the matcher's median beats the
baseline's.
"""

from __future__ import annotations

import csv
import time
from dataclasses import dataclass, field
from pathlib import Path
from statistics import median

from erratum.bench.harness import select_targets
from erratum.dom.tree import DomTree
from erratum.dom.xpath import absolute_xpath
from erratum.repair import repair
from erratum.sftm import SftmConfig
from erratum.water import WaterConfig, water_repair

ERRATUM = "erratum"
WATER = "water"


@dataclass(frozen=True)
class TimingConfig:
    locator_counts: tuple[int, ...] = (1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 15)
    repeats: int = 5
    seed: int = 0
    sftm: SftmConfig = field(default_factory=SftmConfig)
    water: WaterConfig = field(default_factory=WaterConfig)

    def __post_init__(self) -> None:
        if not self.locator_counts or min(self.locator_counts) < 1:
            raise ValueError("locator_counts must be positive")
        if self.repeats < 1:
            raise ValueError("repeats must be at least 1")


@dataclass(frozen=True)
class TimingReport:
    series: dict[str, tuple[tuple[int, float], ...]]  # algorithm -> ((count, median ms), ...)
    alpha: dict[str, float]  # least-squares slope, ms per locator
    crossover: int | None
    tree_sizes: tuple[int, int]
    repeats: int

    def to_json(self) -> dict:
        return {
            "series": {
                algorithm: [{"locators": k, "medianMs": ms} for k, ms in points]
                for algorithm, points in sorted(self.series.items())
            },
            "alphaMsPerLocator": dict(sorted(self.alpha.items())),
            "crossover": self.crossover,
            "treeSizes": list(self.tree_sizes),
            "repeats": self.repeats,
        }


def _slope(points: list[tuple[int, float]]) -> float:
    n = len(points)
    if n < 2:
        return 0.0
    mean_x = sum(k for k, _ in points) / n
    mean_y = sum(v for _, v in points) / n
    denominator = sum((k - mean_x) ** 2 for k, _ in points)
    if denominator == 0:
        return 0.0
    return sum((k - mean_x) * (v - mean_y) for k, v in points) / denominator


def measure_timing(
    old_tree: DomTree, new_tree: DomTree, config: TimingConfig | None = None
) -> TimingReport:
    config = config or TimingConfig()
    top = max(config.locator_counts)
    targets = select_targets(old_tree, top, config.seed)
    if len(targets) < top:
        raise ValueError(
            f"page has {len(targets)} clickable elements, need {top} for the largest count"
        )
    locators = [absolute_xpath(old_tree, target) for target in targets]

    series: dict[str, list[tuple[int, float]]] = {ERRATUM: [], WATER: []}
    for count in sorted(config.locator_counts):
        subset = locators[:count]
        runs: dict[str, list[float]] = {ERRATUM: [], WATER: []}
        for _ in range(config.repeats):
            started = time.perf_counter()
            repair(old_tree, new_tree, subset, config.sftm)
            runs[ERRATUM].append((time.perf_counter() - started) * 1000.0)
            started = time.perf_counter()
            water_repair(old_tree, new_tree, subset, config.water)
            runs[WATER].append((time.perf_counter() - started) * 1000.0)
        for algorithm in (ERRATUM, WATER):
            series[algorithm].append((count, median(runs[algorithm])))

    alpha = {algorithm: _slope(points) for algorithm, points in series.items()}
    crossover = None
    water_medians = dict(series[WATER])
    for count, erratum_median in series[ERRATUM]:
        if erratum_median < water_medians[count]:
            crossover = count
            break
    return TimingReport(
        series={algorithm: tuple(points) for algorithm, points in series.items()},
        alpha=alpha,
        crossover=crossover,
        tree_sizes=(len(old_tree), len(new_tree)),
        repeats=config.repeats,
    )


def write_timing_csv(report: TimingReport, path: str | Path) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with path.open("w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(["algorithm", "locators", "medianMs"])
        for algorithm, points in sorted(report.series.items()):
            for count, value in points:
                writer.writerow([algorithm, count, f"{value:.3f}"])
    return path
