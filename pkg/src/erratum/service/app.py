"""FastAPI application wrapping the library's data plane."""

from __future__ import annotations

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

import erratum
from erratum.dom.parse import ParseConfig, ParseError, parse_html
from erratum.dom.serialize import tree_to_html, tree_to_json
from erratum.dom.xpath import XPathSyntaxError
from erratum.mutagen import MutationError, assign_signatures, mutate, record_to_json
from erratum.repair import LocatorError, RepairEngine, RepairRequest, report_to_json
from erratum.sftm import match_trees
from erratum.water import water_repair
from erratum.service import models

_CLIENT_FAULTS = (ParseError, XPathSyntaxError, LocatorError, MutationError, ValueError)


def create_app() -> FastAPI:
    app = FastAPI(title="erratum", version=erratum.__version__)

    async def fault_handler(request: Request, error: Exception):
        return JSONResponse(status_code=422, content={"detail": str(error)})

    for fault in _CLIENT_FAULTS:
        app.add_exception_handler(fault, fault_handler)

    @app.get("/health", response_model=models.HealthResponse)
    def health() -> models.HealthResponse:
        return models.HealthResponse(status="ok", version=erratum.__version__)

    @app.post("/parse", response_model=models.TreeResponse)
    def parse(body: models.ParseRequest) -> dict:
        tree = parse_html(
            body.html,
            ParseConfig(signature_attr=body.signature_attr, wrap_fragment=body.wrap_fragment),
        )
        return tree_to_json(tree)

    @app.post("/match", response_model=models.MatchResponse)
    def match(body: models.MatchRequest) -> dict:
        config = body.config.to_config()
        parse_config = ParseConfig(wrap_fragment=body.wrap_fragment)
        old_tree = parse_html(body.old_html, parse_config)
        new_tree = parse_html(body.new_html, parse_config)
        matching = match_trees(old_tree, new_tree, config)
        return matching.to_json(config)

    @app.post(
        "/repair",
        response_model=models.RepairResponse,
        response_model_exclude_none=True,
    )
    def repair_endpoint(body: models.RepairRequestBody) -> dict:
        if body.algorithm not in ("erratum", "water"):
            raise ValueError(f"unknown algorithm {body.algorithm!r}")
        parse_config = ParseConfig(wrap_fragment=body.wrap_fragment)
        old_tree = parse_html(body.old_html, parse_config)
        new_tree = parse_html(body.new_html, parse_config)
        if body.algorithm == "water":
            outcomes = water_repair(old_tree, new_tree, body.locators, body.baseline.to_config())
        else:
            engine = RepairEngine(config=body.config.to_config())
            outcomes = engine.repair(RepairRequest(old_tree, new_tree, tuple(body.locators)))
        return report_to_json(outcomes, body.algorithm)

    @app.post("/mutate", response_model=models.MutateResponse)
    def mutate_endpoint(body: models.MutateRequest) -> models.MutateResponse:
        parse_config = ParseConfig(wrap_fragment=body.wrap_fragment)
        tree = assign_signatures(parse_html(body.html, parse_config))
        record = mutate(tree, body.ratio, kinds=body.expanded_kinds(), seed=body.seed)
        payload = record_to_json(record)
        return models.MutateResponse(
            html=tree_to_html(record.mutant),
            ops=payload["ops"],
            groundTruth=payload["groundTruth"],
            ratio=payload["ratio"],
            seed=payload["seed"],
        )

    return app
