"""Stateless HTTP JSON API over the same core the CLI uses.

POST /api/parse     {source}                                -> diagnostics
POST /api/simulate  {source, maxTime, sampleEvery, odeStep} -> trace
POST /api/histogram {source, query, maxTime, ...}           -> histogram
GET  /api/health                                            -> liveness

Simulate responses are byte-identical to `hysim run` on the same inputs.
Malformed bodies and invalid programs/configs return 400 with positioned
diagnostics; batches over the run cap and requests over the time budget
return 422. No request mutates server state.
"""

from __future__ import annotations

import concurrent.futures
import os
import socket

from fastapi import FastAPI, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from . import __version__
from .analysis import build_histogram, parse_query
from .errors import BatchCapError, HysimError
from .interp import SimConfig
from .lang import parse
from .multirun import DEFAULT_MAX_RUNS, run_all
from .traceio import histogram_json_bytes, trace_json_bytes

__all__ = ["create_app", "serve"]

CORS_ENV = "HYSIM_CORS_ORIGINS"


class _BadRequest(Exception):
    def __init__(self, message: str, diagnostics: list | None = None):
        self.message = message
        self.diagnostics = diagnostics or []


class _Overloaded(Exception):
    def __init__(self, message: str):
        self.message = message


def _diagnostic(exc: HysimError) -> dict:
    line, col = exc.pos
    return {"line": line, "col": col, "message": exc.message}


def _require_source(body: dict) -> str:
    source = body.get("source")
    if not isinstance(source, str):
        raise _BadRequest("a string 'source' field is required")
    return source


def _config_from(body: dict) -> SimConfig:
    values = {}
    for key, attr in (("maxTime", "max_time"), ("sampleEvery", "sample_every"),
                      ("odeStep", "ode_step")):
        if key in body:
            value = body[key]
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise _BadRequest(f"'{key}' must be a number")
            values[attr] = float(value)
    try:
        return SimConfig(**values)
    except HysimError as exc:
        raise _BadRequest(exc.message, [_diagnostic(exc)]) from None


def create_app(*, max_runs: int = DEFAULT_MAX_RUNS, timeout: float = 30.0,
               cors_origins: list[str] | None = None,
               workers: int = 1) -> FastAPI:
    app = FastAPI(title="hysim", version=__version__)
    if cors_origins is None:
        cors_origins = os.environ.get(CORS_ENV, "*").split(",")
    app.add_middleware(
        CORSMiddleware, allow_origins=cors_origins,
        allow_methods=["GET", "POST"], allow_headers=["*"])
    pool = concurrent.futures.ThreadPoolExecutor()

    async def _body(request: Request) -> dict:
        try:
            data = await request.json()
        except Exception:
            raise _BadRequest("the request body must be a JSON object") \
                from None
        if not isinstance(data, dict):
            raise _BadRequest("the request body must be a JSON object")
        return data

    def _bounded(fn):
        """Run fn on a worker; over-budget requests answer 422."""
        future = pool.submit(fn)
        try:
            return future.result(timeout=timeout)
        except concurrent.futures.TimeoutError:
            raise _Overloaded(
                f"request exceeded the {timeout:g}s budget; "
                f"partial results are not available") from None

    @app.exception_handler(_BadRequest)
    async def _bad_request(_, exc: _BadRequest):
        return JSONResponse(
            {"error": exc.message, "diagnostics": exc.diagnostics},
            status_code=400)

    @app.exception_handler(_Overloaded)
    async def _overloaded(_, exc: _Overloaded):
        return JSONResponse({"error": exc.message}, status_code=422)

    @app.get("/api/health")
    async def health():
        return {"status": "ok", "version": __version__}

    @app.post("/api/parse")
    async def api_parse(request: Request):
        body = await _body(request)
        source = _require_source(body)
        try:
            parse(source)
        except HysimError as exc:
            return {"ok": False, "diagnostics": [_diagnostic(exc)]}
        return {"ok": True, "diagnostics": []}

    @app.post("/api/simulate")
    async def api_simulate(request: Request):
        body = await _body(request)
        source = _require_source(body)
        config = _config_from(body)
        try:
            program = parse(source)
        except HysimError as exc:
            raise _BadRequest(exc.message, [_diagnostic(exc)]) from None
        try:
            results = _bounded(lambda: run_all(program, config,
                                               workers=workers,
                                               max_runs=max_runs))
        except BatchCapError as exc:
            raise _Overloaded(exc.message) from None
        return Response(content=trace_json_bytes(config, results),
                        media_type="application/json")

    @app.post("/api/histogram")
    async def api_histogram(request: Request):
        body = await _body(request)
        source = _require_source(body)
        config = _config_from(body)
        query_text = body.get("query")
        if not isinstance(query_text, str):
            raise _BadRequest("a string 'query' field is required")
        try:
            program = parse(source)
            query = parse_query(query_text).with_horizon(config.max_time)
        except HysimError as exc:
            raise _BadRequest(exc.message, [_diagnostic(exc)]) from None
        try:
            results = _bounded(lambda: run_all(program, config,
                                               workers=workers,
                                               max_runs=max_runs))
            hist = build_histogram(results, query,
                                   sample_every=config.sample_every)
        except BatchCapError as exc:
            raise _Overloaded(exc.message) from None
        except HysimError as exc:
            raise _BadRequest(exc.message, [_diagnostic(exc)]) from None
        return Response(content=histogram_json_bytes(hist),
                        media_type="application/json")

    return app


def serve(host: str = "127.0.0.1", port: int = 8080) -> None:
    """Bind, announce the chosen port, and serve until interrupted."""
    import uvicorn

    sock = socket.socket(socket.AF_INET, socket.SOCK_STREAM)
    sock.setsockopt(socket.SOL_SOCKET, socket.SO_REUSEADDR, 1)
    sock.bind((host, port))
    actual_port = sock.getsockname()[1]
    print(f"listening on http://{host}:{actual_port}", flush=True)
    config = uvicorn.Config(create_app(), host=host, port=actual_port,
                            log_level="warning")
    uvicorn.Server(config).run(sockets=[sock])
