"""HTTP API serving the workbench to the browser UI.

JSON bodies throughout; errors come back as {code, message, details} with
conventional status codes.  State changes are durable before the response
returns (the store writes atomically and runs execute synchronously).
"""
from __future__ import annotations

import warnings
from pathlib import Path

from fastapi import FastAPI, Query, Request, Response
from fastapi.responses import JSONResponse

from . import __version__
from .compiler import Overrides, compile_model
from .datafit import (
    Dataset,
    derive_spec_inputs,
    fit_growth,
    parse_time_series_csv,
)
from .engine import Trajectory
from .errors import (
    AgentCapError,
    CompileError,
    FitError,
    FormatError,
    IntegrityError,
    NotFoundError,
    OverrideError,
    ParseError,
    VeraError,
    VersionError,
)
from .model import model_from_dict, model_to_dict, validate_model
from .store import Store
from .workbench import compare, run_scenario

_STATUS = {
    NotFoundError: 404,
    IntegrityError: 409,
    ParseError: 400,
    FormatError: 400,
    VersionError: 400,
    CompileError: 422,
    OverrideError: 422,
    FitError: 422,
    AgentCapError: 413,
}


def _error_response(exc: VeraError) -> JSONResponse:
    status = next((code for cls, code in _STATUS.items()
                   if isinstance(exc, cls)), 400)
    return JSONResponse(status_code=status, content={
        "code": exc.code, "message": exc.message, "details": exc.details})


def create_app(store: Store, ui_dir: str | Path | None = None) -> FastAPI:
    app = FastAPI(title="vera", version=__version__)

    @app.exception_handler(VeraError)
    async def _vera_error(_request: Request, exc: VeraError):
        return _error_response(exc)

    @app.get("/api/health")
    def health():
        return {"status": "ok", "version": __version__}

    # -- models ------------------------------------------------------------

    @app.post("/api/models", status_code=201)
    def create_model(doc: dict):
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            model = model_from_dict(doc)
        model_id = store.create_model(model)
        return {"id": model_id,
                "warnings": [str(w.message) for w in caught]}

    @app.get("/api/models")
    def list_models():
        return {"models": [model_to_dict(store.get_model(mid))
                           for mid in store.list_models()]}

    @app.get("/api/models/{model_id}")
    def get_model(model_id: str):
        return model_to_dict(store.get_model(model_id))

    @app.delete("/api/models/{model_id}", status_code=204)
    def delete_model(model_id: str):
        store.delete_model(model_id)
        return Response(status_code=204)

    @app.post("/api/models/{model_id}/validate")
    def validate(model_id: str):
        return validate_model(store.get_model(model_id)).to_json_dict()

    @app.post("/api/validate")
    def validate_document(doc: dict):
        # stateless check for unsaved editor models
        return validate_model(model_from_dict(doc)).to_json_dict()

    # -- datasets ------------------------------------------------------------

    @app.post("/api/datasets", status_code=201)
    async def upload_datasets(request: Request):
        body = await request.body()
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always")
            datasets = parse_time_series_csv(body, source="upload")
        ids = [store.create_dataset(ds.to_json_dict()) for ds in datasets]
        return {"ids": ids, "warnings": [str(w.message) for w in caught]}

    @app.get("/api/datasets")
    def list_datasets():
        return {"datasets": [store.get_dataset(did)
                             for did in store.list_datasets()]}

    @app.get("/api/datasets/{dataset_id}")
    def get_dataset(dataset_id: str):
        return store.get_dataset(dataset_id)

    @app.delete("/api/datasets/{dataset_id}", status_code=204)
    def delete_dataset(dataset_id: str):
        store.delete_dataset(dataset_id)
        return Response(status_code=204)

    @app.post("/api/datasets/{dataset_id}/fit")
    def fit_dataset(dataset_id: str, body: dict | None = None):
        body = body or {}
        dataset = Dataset.from_json_dict(store.get_dataset(dataset_id))
        fit = fit_growth(
            dataset,
            min_cases=int(body.get("min_cases", 50)),
            max_window=int(body.get("max_window", 30)),
            gamma_assumed=float(body.get("gamma", 1 / 14)))
        inputs = derive_spec_inputs(fit, float(body.get("contacts", 16)))
        return {"fit": fit.to_json_dict(),
                "spec_inputs": inputs.to_json_dict()}

    # -- scenarios -----------------------------------------------------------

    @app.post("/api/scenarios", status_code=201)
    def create_scenario(doc: dict):
        overrides = Overrides.from_json_dict(doc.get("overrides", {}))
        scenario_id = store.create_scenario(
            name=doc.get("name", "scenario"),
            model_id=doc["model_id"],
            overrides=overrides.to_json_dict())
        return {"id": scenario_id}

    @app.get("/api/scenarios")
    def list_scenarios():
        return {"scenarios": [store.get_scenario(sid)
                              for sid in store.list_scenarios()]}

    @app.get("/api/scenarios/{scenario_id}")
    def get_scenario(scenario_id: str):
        return store.get_scenario(scenario_id)

    @app.delete("/api/scenarios/{scenario_id}", status_code=204)
    def delete_scenario(scenario_id: str):
        store.delete_scenario(scenario_id)
        return Response(status_code=204)

    @app.post("/api/scenarios/{scenario_id}/runs", status_code=201)
    def run(scenario_id: str, engine: str = Query("abm"),
            seeds: int | None = Query(None)):
        run_id = run_scenario(store, scenario_id, n_seeds=seeds, engine=engine)
        run_doc = store.get_run(run_id)
        return {"id": run_id, "status": run_doc["status"],
                "metrics": run_doc.get("metrics")}

    @app.post("/api/scenarios/{scenario_id}/compile")
    def compile_endpoint(scenario_id: str):
        scenario = store.get_scenario(scenario_id)
        model = store.get_model(scenario["model_id"])
        overrides = Overrides.from_json_dict(scenario.get("overrides", {}))
        return compile_model(model, overrides).to_json_dict()

    # -- runs ----------------------------------------------------------------

    @app.get("/api/runs/{run_id}")
    def get_run(run_id: str):
        return store.get_run(run_id)

    @app.get("/api/runs/{run_id}/series")
    def get_series(run_id: str, format: str = Query("json")):
        run_doc = store.get_run(run_id)
        if "trajectory" not in run_doc:
            raise NotFoundError(f"run '{run_id}' has no trajectory")
        traj = Trajectory.from_json_dict(run_doc["trajectory"])
        if format == "csv":
            return Response(content=traj.to_csv_bytes(), media_type="text/csv")
        return run_doc["trajectory"]

    # -- comparison ----------------------------------------------------------

    @app.post("/api/compare")
    def compare_endpoint(doc: dict):
        report = compare(store, doc.get("scenario_ids", []))
        return report.to_json_dict()

    if ui_dir is not None and Path(ui_dir).is_dir():
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True),
                  name="ui")

    return app
