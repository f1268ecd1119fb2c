"""Version-pair datasets from a web archive.

Pair selection follows the gap-bucket procedure: list the capture
timestamps of a URL, keep every ordered pair whose gap lands within
+-10% of one bucket in {7, 15, 30, 60, 120, 240, 360} days (the buckets
are checked to be non-overlapping under the tolerance, so a pair maps to
at most one), and sample up to the cap per bucket.  Transport is
pluggable: the HTTP transport talks CDX + snapshot endpoints with a
1 req/s limit and bounded retries, the fixture transport replays
recorded responses from a directory, which is what tests use.  Every
pair or URL that cannot be materialized lands in the manifest with a
skip reason; nothing silently disappears.
"""

from __future__ import annotations

import json
import logging
import re
import time
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from random import Random
from typing import Protocol, Sequence

import httpx

from erratum.dom.parse import ParseConfig, ParseError, parse_html
from erratum.dom.tree import DomTree, MutableNode, freeze, thaw

log = logging.getLogger(__name__)

GAP_BUCKETS_DAYS = (7, 15, 30, 60, 120, 240, 360)
GAP_TOLERANCE = 0.10

DEFAULT_CHROME_MARKERS = ("wm-", "wb-autocomplete", "donato")

CDX_ENDPOINT = "https://web.archive.org/cdx/search/cdx"
SNAPSHOT_ENDPOINT = "https://web.archive.org/web/{timestamp}id_/{url}"

_TIMESTAMP_RE = re.compile(r"^\d{14}$")


class ArchiveError(Exception):
    pass


class ArchiveHTTPError(ArchiveError):
    """Transport failure that survived the retry budget."""


class ArchiveFormatError(ArchiveError):
    """Response that does not parse as the endpoint's format."""


@dataclass(frozen=True)
class VersionPairSpec:
    url: str
    t1: str
    t2: str
    gap_days: int

    def __post_init__(self) -> None:
        for value in (self.t1, self.t2):
            if not _TIMESTAMP_RE.match(value):
                raise ValueError(f"bad archive timestamp {value!r}")
        if self.t1 >= self.t2:
            raise ValueError("t1 must precede t2")
        gap = (parse_timestamp(self.t2) - parse_timestamp(self.t1)).total_seconds() / 86400.0
        if abs(gap - self.gap_days) > GAP_TOLERANCE * self.gap_days:
            raise ValueError(
                f"gap {gap:.1f}d outside {self.gap_days}d +-{GAP_TOLERANCE:.0%}"
            )


def parse_timestamp(value: str) -> datetime:
    if not _TIMESTAMP_RE.match(value):
        raise ValueError(f"bad archive timestamp {value!r}")
    return datetime.strptime(value, "%Y%m%d%H%M%S")


def pad_timestamp(value: str, end: bool = False) -> str:
    """Widen YYYY / YYYYMM / ... bounds to full archive timestamps."""

    if not value.isdigit() or len(value) not in (4, 6, 8, 10, 12, 14):
        raise ValueError(f"bad timestamp bound {value!r}")
    filler = "99991231235959" if end else "00000101000000"
    return value + filler[len(value):]


def url_slug(url: str) -> str:
    return re.sub(r"[^A-Za-z0-9.-]+", "_", url).strip("_")


class ArchiveTransport(Protocol):
    def versions(self, url: str, start: str, end: str) -> list[str]: ...

    def resolve(self, url: str, timestamp: str) -> str: ...


class FixtureTransport:
    """Replays <root>/<slug>/versions.json and <root>/<slug>/<ts>.html."""

    def __init__(self, root: str | Path):
        self.root = Path(root)

    def versions(self, url: str, start: str, end: str) -> list[str]:
        path = self.root / url_slug(url) / "versions.json"
        if not path.is_file():
            raise ArchiveHTTPError(f"no recorded versions for {url}")
        try:
            listed = json.loads(path.read_text(encoding="utf-8"))
        except json.JSONDecodeError as error:
            raise ArchiveFormatError(f"{path}: {error}") from error
        if not isinstance(listed, list) or not all(isinstance(t, str) for t in listed):
            raise ArchiveFormatError(f"{path}: expected a list of timestamps")
        return [t for t in listed if start <= t <= end]

    def resolve(self, url: str, timestamp: str) -> str:
        path = self.root / url_slug(url) / f"{timestamp}.html"
        if not path.is_file():
            raise ArchiveHTTPError(f"no recorded snapshot {url} @ {timestamp}")
        return path.read_text(encoding="utf-8")


class HttpTransport:
    """Live endpoints, politely: rate-limited, retried with backoff."""

    def __init__(
        self,
        min_interval: float = 1.0,
        retries: int = 3,
        backoff: float = 2.0,
        timeout: float = 60.0,
    ):
        self.min_interval = min_interval
        self.retries = retries
        self.backoff = backoff
        self._last_request = 0.0
        self._client = httpx.Client(timeout=timeout, follow_redirects=True)

    def _get(self, url: str, params: dict | None = None) -> httpx.Response:
        error: Exception | None = None
        for attempt in range(self.retries + 1):
            wait = self.min_interval - (time.monotonic() - self._last_request)
            if wait > 0:
                time.sleep(wait)
            self._last_request = time.monotonic()
            try:
                response = self._client.get(url, params=params)
            except httpx.TransportError as transport_error:
                error = transport_error
            else:
                if response.status_code < 500:
                    return response
                error = ArchiveHTTPError(f"HTTP {response.status_code} from {url}")
            if attempt < self.retries:
                time.sleep(self.backoff**attempt)
        raise ArchiveHTTPError(f"{url}: {error}")

    def versions(self, url: str, start: str, end: str) -> list[str]:
        params = {
            "url": url,
            "output": "json",
            "fl": "timestamp",
            "filter": "statuscode:200",
            "collapse": "timestamp:8",
            "from": start,
            "to": end,
        }
        response = self._get(CDX_ENDPOINT, params)
        if response.status_code != 200:
            raise ArchiveHTTPError(f"HTTP {response.status_code} from CDX for {url}")
        try:
            rows = response.json()
        except ValueError as error:
            raise ArchiveFormatError(f"CDX response for {url}: {error}") from error
        if rows and rows[0] != ["timestamp"]:
            raise ArchiveFormatError(f"unexpected CDX header for {url}: {rows[0]!r}")
        return [row[0] for row in rows[1:]]

    def resolve(self, url: str, timestamp: str) -> str:
        response = self._get(SNAPSHOT_ENDPOINT.format(timestamp=timestamp, url=url))
        if response.status_code != 200:
            raise ArchiveHTTPError(
                f"HTTP {response.status_code} for {url} @ {timestamp}"
            )
        return response.text


def strip_chrome(tree: DomTree, markers: Sequence[str] = DEFAULT_CHROME_MARKERS) -> DomTree:
    """Drop subtrees whose id or class tokens match the denylist."""

    if not markers:
        return tree

    def is_chrome(node: MutableNode) -> bool:
        tokens = [node.attributes.get("id", "")] + node.attributes.get("class", "").split()
        return any(
            token.startswith(marker) for token in tokens if token for marker in markers
        )

    root = thaw(tree)
    if is_chrome(root):
        raise ArchiveFormatError("whole document matches the chrome denylist")

    def prune(node: MutableNode) -> None:
        node.children = [child for child in node.children if not is_chrome(child)]
        for child in node.children:
            prune(child)

    prune(root)
    return freeze(root, tree.signature_attr)


class ArchiveClient:
    def __init__(
        self,
        transport: ArchiveTransport,
        parse_config: ParseConfig | None = None,
        chrome_markers: Sequence[str] = DEFAULT_CHROME_MARKERS,
    ):
        self.transport = transport
        self.parse_config = parse_config or ParseConfig()
        self.chrome_markers = tuple(chrome_markers)

    def list_versions(self, url: str, start: str = "1996", end: str = "9999") -> list[str]:
        listed = self.transport.versions(url, pad_timestamp(start), pad_timestamp(end, end=True))
        cleaned = sorted({t for t in listed if _TIMESTAMP_RE.match(t)})
        if len(cleaned) != len(listed):
            log.debug("%s: dropped %d malformed timestamps", url, len(listed) - len(cleaned))
        return cleaned

    def parse_snapshot(self, html: str, context: str = "snapshot") -> DomTree:
        try:
            tree = parse_html(html, self.parse_config)
        except ParseError as error:
            raise ArchiveFormatError(f"{context}: {error}") from error
        return strip_chrome(tree, self.chrome_markers)

    def fetch_version(self, url: str, timestamp: str) -> DomTree:
        html = self.transport.resolve(url, timestamp)
        return self.parse_snapshot(html, f"{url} @ {timestamp}")


def check_buckets(
    buckets: Sequence[int] = GAP_BUCKETS_DAYS, tolerance: float = GAP_TOLERANCE
) -> None:
    if not buckets or min(buckets) <= 0 or not 0 <= tolerance < 1:
        raise ValueError("buckets must be positive, tolerance in [0, 1)")
    intervals = sorted((b * (1 - tolerance), b * (1 + tolerance)) for b in buckets)
    for (_, high), (low, _) in zip(intervals, intervals[1:]):
        if low <= high:
            raise ValueError(f"gap buckets overlap under tolerance {tolerance}")


def build_pairs(
    url: str,
    timestamps: Sequence[str],
    max_pairs: int = 1000,
    seed: int = 0,
    buckets: Sequence[int] = GAP_BUCKETS_DAYS,
    tolerance: float = GAP_TOLERANCE,
) -> list[VersionPairSpec]:
    """Bucketed version pairs, at most ``max_pairs`` sampled per bucket."""

    check_buckets(buckets, tolerance)
    ordered = sorted(set(timestamps))
    moments = [(t, parse_timestamp(t)) for t in ordered]
    per_bucket: dict[int, list[VersionPairSpec]] = {b: [] for b in buckets}
    for i, (t1, m1) in enumerate(moments):
        for t2, m2 in moments[i + 1:]:
            gap = (m2 - m1).total_seconds() / 86400.0
            for bucket in buckets:
                if abs(gap - bucket) <= tolerance * bucket:
                    per_bucket[bucket].append(
                        VersionPairSpec(url=url, t1=t1, t2=t2, gap_days=bucket)
                    )
                    break
    rng = Random(seed)
    chosen: list[VersionPairSpec] = []
    for bucket in sorted(per_bucket):
        candidates = per_bucket[bucket]
        if len(candidates) > max_pairs:
            candidates = rng.sample(candidates, max_pairs)
        chosen.extend(candidates)
    return sorted(chosen, key=lambda p: (p.t1, p.t2, p.gap_days))


def build_wayback_dataset(
    urls: Sequence[str],
    transport: ArchiveTransport,
    out_dir: str | Path,
    start: str = "2010",
    end: str = "9999",
    max_pairs: int = 1000,
    seed: int = 0,
    buckets: Sequence[int] = GAP_BUCKETS_DAYS,
    parse_config: ParseConfig | None = None,
    chrome_markers: Sequence[str] = DEFAULT_CHROME_MARKERS,
) -> dict:
    """Fetch bucketed pairs for every URL; write pages and a manifest.

    The manifest explains every outcome: entries are ``ok`` with the two
    stored files, or ``skip:<stage>: <reason>``.
    """

    if not urls:
        raise ValueError("no URLs requested")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    client = ArchiveClient(transport, parse_config, chrome_markers)
    entries: list[dict] = []
    for url in urls:
        try:
            timestamps = client.list_versions(url, start, end)
        except ArchiveError as error:
            entries.append({"url": url, "status": f"skip:versions: {error}"})
            continue
        pairs = build_pairs(url, timestamps, max_pairs=max_pairs, seed=seed, buckets=buckets)
        if not pairs:
            entries.append({"url": url, "status": "skip:no-pairs-in-buckets"})
            continue
        slug = url_slug(url)
        fetched: dict[str, str] = {}
        for pair in pairs:
            entry = {
                "url": url,
                "t1": pair.t1,
                "t2": pair.t2,
                "gapDays": pair.gap_days,
            }
            try:
                files = []
                for timestamp in (pair.t1, pair.t2):
                    if timestamp not in fetched:
                        raw = client.transport.resolve(url, timestamp)
                        client.parse_snapshot(raw, f"{url} @ {timestamp}")
                        page_path = out / slug / f"{timestamp}.html"
                        page_path.parent.mkdir(parents=True, exist_ok=True)
                        page_path.write_text(raw, encoding="utf-8")
                        fetched[timestamp] = str(page_path.relative_to(out))
                    files.append(fetched[timestamp])
            except ArchiveError as error:
                entry["status"] = f"skip:fetch: {error}"
            else:
                entry["files"] = files
                entry["status"] = "ok"
            entries.append(entry)
    manifest = {
        "buckets": list(buckets),
        "tolerance": GAP_TOLERANCE,
        "maxPairsPerBucket": max_pairs,
        "seed": seed,
        "range": [pad_timestamp(start), pad_timestamp(end, end=True)],
        "entries": entries,
    }
    (out / "manifest.json").write_text(
        json.dumps(manifest, indent=2, sort_keys=True), encoding="utf-8"
    )
    return manifest
