"""Stateless HTTP/JSON facade over datasets and the scenario runner.

Every endpoint evaluates the same code path the CLI uses and returns the
CLI's canonical JSON bytes, so the two surfaces can never disagree.  No
request mutates server state; datasets are shared immutably.
"""

from __future__ import annotations

import json
from typing import Callable

from fastapi import FastAPI, Request, Response
from fastapi.middleware.cors import CORSMiddleware

from . import scenario as scenario_mod
from .dataset import BUILTIN_IDS, DatasetError, load_dataset, serialize_dataset
from .scenario import SpecError, emit_report, parse_scenario_spec

MAX_BODY_BYTES = 1 << 20  # 1 MiB request cap


def _error(status: int, code: str, message: str, details=None) -> Response:
    payload = {"code": code, "message": message, "details": details or []}
    return Response(
        content=json.dumps(payload, indent=2) + "\n",
        status_code=status,
        media_type="application/json",
    )


def _json_response(text: str, status: int = 200) -> Response:
    return Response(content=text, status_code=status, media_type="application/json")


def create_app() -> FastAPI:
    app = FastAPI(title="peerbargain", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],
        allow_methods=["*"],
        allow_headers=["*"],
    )
    datasets = {dataset_id: load_dataset(dataset_id) for dataset_id in BUILTIN_IDS}

    @app.exception_handler(404)
    async def not_found(request: Request, exc) -> Response:  # pragma: no cover - shape only
        return _error(404, "not_found", f"no such path: {request.url.path}")

    @app.exception_handler(Exception)
    async def internal(request: Request, exc) -> Response:
        return _error(500, "internal", str(exc))

    @app.get("/healthz")
    async def healthz() -> Response:
        return _json_response(json.dumps({"status": "ok"}) + "\n")

    @app.get("/api/v1/datasets")
    async def list_datasets() -> Response:
        return _json_response(json.dumps(sorted(datasets)) + "\n")

    @app.get("/api/v1/datasets/{dataset_id}")
    async def get_dataset(dataset_id: str) -> Response:
        if dataset_id not in datasets:
            return _error(404, "not_found", f"unknown dataset: {dataset_id!r}")
        return _json_response(serialize_dataset(datasets[dataset_id]))

    def scenario_endpoint(operation: Callable) -> Callable:
        async def endpoint(request: Request) -> Response:
            content_type = request.headers.get("content-type", "")
            if content_type and "application/json" not in content_type:
                return _error(400, "bad_request", f"expected application/json, got {content_type!r}")
            body = await request.body()
            if len(body) > MAX_BODY_BYTES:
                return _error(422, "validation_failed", "request body exceeds the 1 MiB cap")
            try:
                obj = json.loads(body)
            except json.JSONDecodeError as exc:
                return _error(400, "bad_request", f"invalid JSON: {exc}")
            try:
                spec = parse_scenario_spec(obj)
                result = operation(spec)
            except SpecError as exc:
                return _error(422, "validation_failed", "invalid scenario spec", exc.violations)
            except DatasetError as exc:
                if "not found" in str(exc):
                    return _error(404, "not_found", str(exc))
                return _error(422, "validation_failed", str(exc))
            return _json_response(emit_report(result, "json"))

        return endpoint

    app.post("/api/v1/scenarios:run")(scenario_endpoint(scenario_mod.run))
    app.post("/api/v1/sweeps")(scenario_endpoint(scenario_mod.sweep))
    app.post("/api/v1/price-tables")(scenario_endpoint(scenario_mod.price_table))
    app.post("/api/v1/timing")(scenario_endpoint(scenario_mod.timing_experiment))
    return app
