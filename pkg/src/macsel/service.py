"""HTTP service behind the web console: evaluation, selection, sweeps and
registry reads over JSON.

Read-only with respect to the registry: mutations go through the CLI; the
service re-reads the registry file when its mtime changes.  Every response
carries ``{"status": "ok", "data": ...}`` or ``{"status": "error",
"error": {...}}``.
"""

from __future__ import annotations

import argparse
import json
import math
import os

from fastapi import FastAPI, Request
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from .context import context_from_dict
from .cpf import Weights, evaluate_all, rank_evaluations, sweep
from .errors import ConfigError, DegenerateCPFError, MacselError, SelectionError
from .radio import profile_from_dict
from .registry import Registry, load_registry_file, save_registry, seed_registry
from .selector import select

MAX_SWEEP_ROWS = 10_000


class RegistryProvider:
    """Serves the current registry; reloads the backing file on mtime change."""

    def __init__(self, path: str | None):
        self.path = path
        self._mtime: float | None = None
        self._registry: Registry | None = None

    def get(self) -> Registry:
        if self.path is None:
            if self._registry is None:
                self._registry = seed_registry()
            return self._registry
        mtime = os.stat(self.path).st_mtime
        if self._registry is None or mtime != self._mtime:
            self._registry = load_registry_file(self.path)
            self._mtime = mtime
        return self._registry


def _ok(data) -> JSONResponse:
    return JSONResponse({"status": "ok", "data": data})


def _err(status: int, message: str, violations=None) -> JSONResponse:
    error = {"message": message}
    if violations:
        error["violations"] = violations
    return JSONResponse({"status": "error", "error": error}, status_code=status)


def _nan_safe(x):
    if isinstance(x, float) and (math.isnan(x) or math.isinf(x)):
        return None
    return x


def _parse_inputs(body: dict):
    ctx = context_from_dict(body.get("context", {}))
    prof = profile_from_dict(body.get("profile", {}))
    wdoc = body.get("weights", {})
    try:
        w = Weights(alpha=wdoc.get("alpha", 10.0 / 11.0),
                    beta=wdoc.get("beta", 1.0 / 11.0))
    except ValueError as exc:
        raise DegenerateCPFError(str(exc)) from exc
    return ctx, prof, w


def _evaluation_doc(ev) -> dict:
    return {
        "category": ev.category,
        "error": ev.error,
        "energy": None if ev.energy is None else {
            "collision": ev.energy.collision,
            "overhearing": ev.energy.overhearing,
            "idle_listening": ev.energy.idle_listening,
            "overhead": ev.energy.overhead,
            "total": ev.energy.total,
        },
        "delay": None if ev.delay is None else ev.delay.seconds,
        "cpf": ev.cpf,
    }


def create_app(registry_path: str | None = None) -> FastAPI:
    app = FastAPI(title="macsel selector service")
    app.add_middleware(
        CORSMiddleware,
        allow_origins=["*"],  # local decision tool; the console may be file-served
        allow_methods=["*"],
        allow_headers=["*"],
    )
    provider = RegistryProvider(registry_path)

    @app.exception_handler(RequestValidationError)
    async def malformed(request: Request, exc: RequestValidationError):
        if any(e.get("type") == "json_invalid" for e in exc.errors()):
            return _err(400, "malformed JSON body")
        return _err(422, "invalid request", [str(e) for e in exc.errors()])

    @app.exception_handler(json.JSONDecodeError)
    async def bad_json(request: Request, exc: json.JSONDecodeError):
        return _err(400, "malformed JSON body")

    @app.get("/api/registry")
    def get_registry():
        try:
            reg = provider.get()
        except (OSError, MacselError) as exc:
            return _err(500, f"registry unavailable: {exc}")
        return _ok(save_registry(reg))

    @app.post("/api/evaluate")
    async def post_evaluate(request: Request):
        body = await _read_json(request)
        if isinstance(body, JSONResponse):
            return body
        try:
            ctx, prof, w = _parse_inputs(body)
            evals = evaluate_all(ctx, prof, w)
        except ConfigError as exc:
            return _err(422, "validation failed", exc.violations)
        except DegenerateCPFError as exc:
            return _err(422, str(exc))
        ranked, ties = rank_evaluations(evals)
        return _ok({
            "evaluations": [_evaluation_doc(ev) for ev in evals],
            "ranking": [ev.category for ev in ranked],
            "best_category": ranked[0].category if ranked else None,
            "ties": [list(t) for t in ties],
        })

    @app.post("/api/select")
    async def post_select(request: Request):
        body = await _read_json(request)
        if isinstance(body, JSONResponse):
            return body
        try:
            ctx, prof, w = _parse_inputs(body)
            reg = provider.get()
            req = set(body.get("requirements", []))
            result = select(reg, ctx, prof, req, w)
        except ConfigError as exc:
            return _err(422, "validation failed", exc.violations)
        except DegenerateCPFError as exc:
            return _err(422, str(exc))
        except SelectionError as exc:
            status = 409 if "no satisfying" in str(exc) or "no evaluable" in str(exc) else 422
            return _err(status, str(exc))
        return _ok({
            "feasible_categories": list(result.feasible_categories),
            "best_category": result.best_category,
            "protocols": list(result.protocols),
            "evaluations": [_evaluation_doc(ev) for ev in result.evaluations],
            "warnings": list(result.warnings),
        })

    @app.post("/api/sweep")
    async def post_sweep(request: Request):
        body = await _read_json(request)
        if isinstance(body, JSONResponse):
            return body
        try:
            ctx, prof, w = _parse_inputs(body)
        except ConfigError as exc:
            return _err(422, "validation failed", exc.violations)
        except DegenerateCPFError as exc:
            return _err(422, str(exc))
        axis = body.get("axis")
        if axis not in ("pkt_rate", "n_nodes", "network_radius"):
            return _err(422, f"axis must be pkt_rate|n_nodes|network_radius, got {axis!r}")
        try:
            lo = float(body["from"])
            hi = float(body["to"])
            steps = int(body["steps"])
        except (KeyError, TypeError, ValueError):
            return _err(422, "sweep needs numeric 'from', 'to' and integer 'steps'")
        if steps < 2 or not lo < hi:
            return _err(422, "sweep needs steps >= 2 and from < to")
        if steps * 3 > MAX_SWEEP_ROWS:
            return _err(413, f"sweep capped at {MAX_SWEEP_ROWS} rows")
        values = [lo + (hi - lo) * i / (steps - 1) for i in range(steps)]
        rows = sweep(ctx, prof, w, axis, values)
        return _ok({
            "axis": axis,
            "rows": [
                {
                    "axis_value": r.axis_value,
                    "category": r.category,
                    "error": r.error,
                    "collision": None if r.energy is None else r.energy.collision,
                    "overhearing": None if r.energy is None else r.energy.overhearing,
                    "idle": None if r.energy is None else r.energy.idle_listening,
                    "overhead": None if r.energy is None else r.energy.overhead,
                    "total_energy": None if r.energy is None else r.energy.total,
                    "delay": _nan_safe(r.delay),
                    "cpf": _nan_safe(r.cpf),
                }
                for r in rows
            ],
        })

    return app


async def _read_json(request: Request):
    try:
        return json.loads(await request.body())
    except json.JSONDecodeError:
        return _err(400, "malformed JSON body")


def main(argv: list[str] | None = None) -> None:
    import uvicorn

    parser = argparse.ArgumentParser(prog="macsel-service")
    parser.add_argument("--bind", default="127.0.0.1")
    parser.add_argument("--port", type=int, default=8080)
    parser.add_argument("--registry", default=os.environ.get("MACSEL_REGISTRY"))
    args = parser.parse_args(argv)
    uvicorn.run(create_app(args.registry), host=args.bind, port=args.port)


if __name__ == "__main__":
    main()
