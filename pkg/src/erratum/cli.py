"""Command line interface.

The data-plane subcommands (match, repair, mutate) are thin clients of
the HTTP service: by default they mount the app in-process over an ASGI
transport, with ``--server URL`` they talk to a running instance, and
either way the bytes on the wire are the service's JSON.  The batch
subcommands (dataset gen, dataset wayback, bench, serve) drive the
library directly: they are filesystem-to-filesystem and the benchmark's
timing must measure the algorithms, not HTTP marshalling.

Exit codes: 0 success, 1 operational error (missing file, bad locator,
malformed config), 2 usage error.  ERRATUM_SEED and ERRATUM_CONFIG are
fallbacks for omitted ``--seed`` / ``--config`` flags.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

import httpx
import pydantic

from erratum.dom.parse import ParseConfig, ParseError, parse_html
from erratum.dom.xpath import XPathSyntaxError
from erratum.bench import (
    BenchConfig,
    TimingConfig,
    measure_timing,
    run_benchmark,
    write_metrics_csv,
    write_report_json,
    write_series_csvs,
    write_timing_csv,
)
from erratum.corpus import builtin_corpus, timing_page
from erratum.mutagen import (
    ALL_KINDS,
    KIND_GROUPS,
    MutationError,
    assign_signatures,
    generate_dataset,
    load_dataset,
    mutate,
    write_dataset,
)
from erratum.repair import LocatorError
from erratum.service.models import BaselineParams, MatcherParams
from erratum.wayback import (
    ArchiveError,
    FixtureTransport,
    HttpTransport,
    build_wayback_dataset,
)

_OPERATIONAL_FAULTS = (
    OSError,
    ValueError,
    ParseError,
    XPathSyntaxError,
    LocatorError,
    MutationError,
    ArchiveError,
    httpx.HTTPError,
    pydantic.ValidationError,
)


class CliError(Exception):
    pass


def _seed(args: argparse.Namespace) -> int:
    if args.seed is not None:
        return args.seed
    env = os.environ.get("ERRATUM_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as error:
            raise CliError(f"ERRATUM_SEED must be an integer, got {env!r}") from error
    return 0


def _file_params(args: argparse.Namespace) -> dict:
    path = getattr(args, "config", None) or os.environ.get("ERRATUM_CONFIG")
    if not path:
        return {}
    try:
        raw = json.loads(Path(path).read_text(encoding="utf-8"))
    except json.JSONDecodeError as error:
        raise CliError(f"config file {path}: {error}") from error
    if not isinstance(raw, dict):
        raise CliError(f"config file {path}: expected an object")
    unknown = set(raw) - {"sftm", "water", "bench"}
    if unknown:
        raise CliError(f"config file {path}: unknown sections {sorted(unknown)}")
    return raw


def _matcher_params(args: argparse.Namespace) -> MatcherParams:
    params = MatcherParams(**_file_params(args).get("sftm", {}))
    return params.model_copy(update={"seed": _seed(args)})


def _baseline_params(args: argparse.Namespace) -> BaselineParams:
    return BaselineParams(**_file_params(args).get("water", {}))


def _client(args: argparse.Namespace) -> httpx.Client:
    server = getattr(args, "server", None)
    if server:
        return httpx.Client(base_url=server, timeout=600.0)
    from fastapi.testclient import TestClient

    from erratum.service.app import create_app

    return TestClient(create_app(), raise_server_exceptions=False)


def _call(client: httpx.Client, path: str, payload: dict) -> dict:
    response = client.post(path, json=payload)
    if response.status_code != 200:
        try:
            detail = response.json().get("detail", response.text)
        except ValueError:
            detail = response.text
        raise CliError(f"{path} failed ({response.status_code}): {detail}")
    return response.json()


def _emit(payload: dict, out: str | None) -> None:
    rendered = json.dumps(payload, indent=2, sort_keys=True)
    if out:
        Path(out).write_text(rendered + "\n", encoding="utf-8")
    else:
        print(rendered)


def _read(path: str) -> str:
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as error:
        raise CliError(f"cannot read {path}: {error}") from error


def _expand_kinds(raw: str | None) -> list[str]:
    if not raw:
        return list(ALL_KINDS)
    kinds: list[str] = []
    for piece in raw.split(","):
        piece = piece.strip()
        if not piece:
            continue
        kinds.extend(KIND_GROUPS.get(piece, (piece,)))
    bad = [k for k in kinds if k not in ALL_KINDS]
    if bad:
        raise CliError(f"unknown mutation kinds {bad}; categories are {sorted(KIND_GROUPS)}")
    return kinds


def cmd_match(args: argparse.Namespace) -> int:
    payload = {
        "old_html": _read(args.old),
        "new_html": _read(args.new),
        "wrap_fragment": args.wrap_fragment,
        "config": _matcher_params(args).model_dump(),
    }
    with _client(args) as client:
        _emit(_call(client, "/match", payload), args.out)
    return 0


def cmd_repair(args: argparse.Namespace) -> int:
    payload = {
        "old_html": _read(args.old),
        "new_html": _read(args.new),
        "locators": args.locator,
        "algorithm": args.algorithm,
        "wrap_fragment": args.wrap_fragment,
        "config": _matcher_params(args).model_dump(),
        "baseline": _baseline_params(args).model_dump(),
    }
    with _client(args) as client:
        _emit(_call(client, "/repair", payload), args.out)
    return 0


def cmd_mutate(args: argparse.Namespace) -> int:
    payload = {
        "html": _read(args.page),
        "ratio": args.ratio,
        "kinds": _expand_kinds(args.kinds),
        "seed": _seed(args),
        "wrap_fragment": args.wrap_fragment,
    }
    with _client(args) as client:
        result = _call(client, "/mutate", payload)
    if args.out_html:
        Path(args.out_html).write_text(result["html"], encoding="utf-8")
    _emit(result, args.out)
    return 0


def cmd_dataset_gen(args: argparse.Namespace) -> int:
    seed = _seed(args)
    if args.pages:
        page_dir = Path(args.pages)
        files = sorted(page_dir.glob("*.html"))
        if not files:
            raise CliError(f"no .html pages under {page_dir}")
        pages = [(f.stem, parse_html(_read(str(f)), ParseConfig())) for f in files]
    else:
        pages = builtin_corpus(n_pages=args.builtin, seed=seed)
    signed = [(name, assign_signatures(tree)) for name, tree in pages]
    records = generate_dataset(
        signed,
        mutants_per_page=args.mutants,
        seed=seed,
        ratio_range=(args.ratio_lo, args.ratio_hi),
        kinds=_expand_kinds(args.kinds),
        single_kind=args.single_kind,
    )
    write_dataset(records, args.out)
    sites = len({record.site for record in records})
    print(f"wrote {len(records)} mutants across {sites} sites to {args.out}")
    return 0


def cmd_dataset_wayback(args: argparse.Namespace) -> int:
    urls: list[str] = []
    if args.urls:
        urls.extend(u.strip() for u in args.urls.split(",") if u.strip())
    if args.urls_file:
        urls.extend(
            line.strip()
            for line in _read(args.urls_file).splitlines()
            if line.strip() and not line.startswith("#")
        )
    if not urls:
        raise CliError("no URLs given (use --urls or --urls-file)")
    if args.fixtures:
        transport = FixtureTransport(args.fixtures)
    else:
        transport = HttpTransport()
    manifest = build_wayback_dataset(
        urls,
        transport,
        args.out,
        start=args.start,
        end=args.end,
        max_pairs=args.max_pairs,
        seed=_seed(args),
    )
    entries = manifest["entries"]
    ok = sum(1 for e in entries if e["status"] == "ok")
    print(f"manifest: {ok} pairs ok, {len(entries) - ok} skipped, -> {args.out}/manifest.json")
    return 0


def cmd_bench(args: argparse.Namespace) -> int:
    records = load_dataset(args.corpus)
    seed = _seed(args)
    section = _file_params(args).get("bench", {})
    if not isinstance(section, dict):
        raise CliError("config file: bench section must be an object")
    unknown = set(section) - {"targets_per_page", "algorithms", "jobs"}
    if unknown:
        raise CliError(f"config file: unknown bench keys {sorted(unknown)}")
    targets = args.targets if args.targets is not None else section.get("targets_per_page", 15)
    jobs = args.jobs if args.jobs is not None else section.get("jobs", os.cpu_count() or 1)
    algorithms = (
        args.algorithms if args.algorithms is not None else section.get("algorithms")
    ) or "erratum,water"
    if isinstance(algorithms, str):
        algorithms = tuple(a.strip() for a in algorithms.split(",") if a.strip())
    config = BenchConfig(
        targets_per_page=targets,
        seed=seed,
        sftm=_matcher_params(args).to_config(),
        water=_baseline_params(args).to_config(),
        algorithms=tuple(algorithms),
        jobs=jobs,
    )
    report = run_benchmark(records, config)
    out = Path(args.out)
    write_metrics_csv(report, out / "metrics.csv")
    write_report_json(report, out / "report.json")
    write_series_csvs(report, out)
    for algorithm, stats in sorted(report.summary["algorithms"].items()):
        rates = stats["rates"]
        print(
            f"{algorithm}: correct {rates['correct']:.3f}"
            f" mismatch {rates['mismatch']:.3f} no-match {rates['no-match']:.3f}"
            f" over {stats['trials']} trials"
        )
    if args.timing:
        original = assign_signatures(timing_page(seed=seed or 11))
        mutant = mutate(original, ratio=0.08, seed=seed).mutant
        timing_report = measure_timing(
            original,
            mutant,
            TimingConfig(
                seed=seed,
                sftm=_matcher_params(args).to_config(),
                water=_baseline_params(args).to_config(),
            ),
        )
        write_timing_csv(timing_report, out / "timing.csv")
        (out / "timing.json").write_text(
            json.dumps(timing_report.to_json(), indent=2, sort_keys=True), encoding="utf-8"
        )
        alpha = timing_report.alpha
        print(
            f"alpha erratum {alpha['erratum']:.3f} ms/locator,"
            f" water {alpha['water']:.3f} ms/locator,"
            f" crossover at {timing_report.crossover} locators"
        )
    return 0


def cmd_serve(args: argparse.Namespace) -> int:
    import uvicorn

    from erratum.service.app import create_app

    uvicorn.run(create_app(), host=args.host, port=args.port)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="erratum", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p: argparse.ArgumentParser, server: bool = True) -> None:
        p.add_argument("--seed", type=int, default=None, help="RNG seed (env ERRATUM_SEED)")
        p.add_argument("--config", default=None, help="JSON config file (env ERRATUM_CONFIG)")
        if server:
            p.add_argument("--server", default=None, help="URL of a running service")

    p = sub.add_parser("match", help="match two page versions")
    p.add_argument("old")
    p.add_argument("new")
    p.add_argument("--wrap-fragment", action="store_true")
    p.add_argument("--out", default=None)
    common(p)
    p.set_defaults(handler=cmd_match)

    p = sub.add_parser("repair", help="repair locators against a new page version")
    p.add_argument("old")
    p.add_argument("new")
    p.add_argument("--locator", action="append", required=True, help="repeatable XPath locator")
    p.add_argument("--algorithm", choices=("erratum", "water"), default="erratum")
    p.add_argument("--wrap-fragment", action="store_true")
    p.add_argument("--out", default=None)
    common(p)
    p.set_defaults(handler=cmd_repair)

    p = sub.add_parser("mutate", help="apply seeded mutations to a page")
    p.add_argument("page")
    p.add_argument("--ratio", type=float, default=0.1)
    p.add_argument("--kinds", default=None, help="comma list of kinds or categories")
    p.add_argument("--wrap-fragment", action="store_true")
    p.add_argument("--out", default=None)
    p.add_argument("--out-html", default=None, help="also write the mutant HTML here")
    common(p)
    p.set_defaults(handler=cmd_mutate)

    dataset = sub.add_parser("dataset", help="build corpora")
    dataset_sub = dataset.add_subparsers(dest="dataset_command", required=True)

    p = dataset_sub.add_parser("gen", help="mutation corpus from pages")
    p.add_argument("--out", required=True)
    p.add_argument("--pages", default=None, help="directory of .html pages")
    p.add_argument("--builtin", type=int, default=25, help="use N generated pages")
    p.add_argument("--mutants", type=int, default=10)
    p.add_argument("--ratio-lo", type=float, default=0.0)
    p.add_argument("--ratio-hi", type=float, default=0.25)
    p.add_argument("--kinds", default=None)
    p.add_argument("--single-kind", action="store_true", help="one operator kind per mutant")
    common(p, server=False)
    p.set_defaults(handler=cmd_dataset_gen)

    p = dataset_sub.add_parser("wayback", help="version pairs from a web archive")
    p.add_argument("--out", required=True)
    p.add_argument("--urls", default=None, help="comma-separated URLs")
    p.add_argument("--urls-file", default=None)
    p.add_argument("--fixtures", default=None, help="replay recorded fixtures from this directory")
    p.add_argument("--start", default="2010")
    p.add_argument("--end", default="9999")
    p.add_argument("--max-pairs", type=int, default=1000)
    common(p, server=False)
    p.set_defaults(handler=cmd_dataset_wayback)

    p = sub.add_parser("bench", help="run the benchmark over a mutation corpus")
    p.add_argument("corpus")
    p.add_argument("--out", required=True)
    p.add_argument("--timing", action="store_true", help="also measure cost vs locator count")
    p.add_argument("--targets", type=int, default=None, help="locators per mutant (default 15)")
    p.add_argument("--algorithms", default=None, help="comma list (default erratum,water)")
    p.add_argument("--jobs", type=int, default=None, help="worker processes (default: all cores)")
    common(p, server=False)
    p.set_defaults(handler=cmd_bench)

    p = sub.add_parser("serve", help="run the HTTP service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8000)
    common(p, server=False)
    p.set_defaults(handler=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.handler(args)
    except CliError as error:
        print(f"error: {error}", file=sys.stderr)
        return 1
    except _OPERATIONAL_FAULTS as error:
        print(f"error: {error}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
