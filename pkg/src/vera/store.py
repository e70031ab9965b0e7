"""File-based persistence: one JSON document per entity.

Layout under the store root:

    models/<id>.json      serialized conceptual models
    datasets/<id>.json    ingested case-count series
    scenarios/<id>.json   scenario records (model ref + overrides + run ids)
    runs/<id>.json        run records embedding the exact compiled spec

Writes go to a temp file in the same directory followed by an atomic
rename, so an interrupted write leaves no partial document.  A single
exclusive lock file serializes writers; reads are lock-free.
"""
from __future__ import annotations

import contextlib
import os
from datetime import datetime, timezone
from pathlib import Path

try:
    import fcntl
except ImportError:  # non-POSIX; single-process discipline only
    fcntl = None

from .errors import IntegrityError, NotFoundError, StoreError
from .ids import new_id
from .jsonutil import canonical_bytes
from .model import ConceptualModel, deserialize, serialize

import json

_COLLECTIONS = ("models", "datasets", "scenarios", "runs")


def _utc_now_iso() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


class Store:
    def __init__(self, root: str | os.PathLike):
        self.root = Path(root)
        for name in _COLLECTIONS:
            (self.root / name).mkdir(parents=True, exist_ok=True)
        self._lock_path = self.root / ".lock"
        self._lock_path.touch(exist_ok=True)

    # -- plumbing ----------------------------------------------------------

    @contextlib.contextmanager
    def _writer_lock(self):
        if fcntl is None:
            yield
            return
        with open(self._lock_path) as fh:
            fcntl.flock(fh, fcntl.LOCK_EX)
            try:
                yield
            finally:
                fcntl.flock(fh, fcntl.LOCK_UN)

    def _path(self, collection: str, entity_id: str) -> Path:
        if collection not in _COLLECTIONS:
            raise StoreError(f"unknown collection '{collection}'")
        return self.root / collection / f"{entity_id}.json"

    def _write_atomic(self, path: Path, data: bytes):
        tmp = path.with_name(f".tmp-{path.name}")
        try:
            with open(tmp, "wb") as fh:
                fh.write(data)
                fh.flush()
                os.fsync(fh.fileno())
            os.replace(tmp, path)
        finally:
            with contextlib.suppress(FileNotFoundError):
                tmp.unlink()

    def _read(self, collection: str, entity_id: str) -> bytes:
        path = self._path(collection, entity_id)
        try:
            return path.read_bytes()
        except FileNotFoundError:
            raise NotFoundError(
                f"no {collection[:-1]} with id '{entity_id}'",
                {"collection": collection, "id": entity_id}) from None

    def _write_doc(self, collection: str, entity_id: str, doc: dict):
        with self._writer_lock():
            self._write_atomic(self._path(collection, entity_id),
                               canonical_bytes(doc))

    def _list_ids(self, collection: str) -> list[str]:
        ids = [p.stem for p in (self.root / collection).glob("*.json")
               if not p.name.startswith(".tmp-")]
        return sorted(ids)  # ids sort by creation time

    def _delete(self, collection: str, entity_id: str):
        path = self._path(collection, entity_id)
        with self._writer_lock():
            try:
                path.unlink()
            except FileNotFoundError:
                raise NotFoundError(
                    f"no {collection[:-1]} with id '{entity_id}'",
                    {"collection": collection, "id": entity_id}) from None

    # -- models --------------------------------------------------------------

    def create_model(self, model: ConceptualModel) -> str:
        with self._writer_lock():
            self._write_atomic(self._path("models", model.id), serialize(model))
        return model.id

    def get_model(self, model_id: str) -> ConceptualModel:
        return deserialize(self._read("models", model_id))

    def list_models(self) -> list[str]:
        return self._list_ids("models")

    def delete_model(self, model_id: str):
        self._read("models", model_id)  # not-found check first
        holders = [sid for sid in self.list_scenarios()
                   if self.get_scenario(sid)["model_id"] == model_id]
        if holders:
            raise IntegrityError(
                f"model '{model_id}' is referenced by scenario(s) "
                f"{', '.join(holders)}; delete them first",
                {"scenarios": holders})
        self._delete("models", model_id)

    # -- datasets ------------------------------------------------------------

    def create_dataset(self, doc: dict) -> str:
        dataset_id = doc.get("id") or new_id("dataset")
        doc = {**doc, "id": dataset_id, "created_at": _utc_now_iso()}
        self._write_doc("datasets", dataset_id, doc)
        return dataset_id

    def get_dataset(self, dataset_id: str) -> dict:
        return json.loads(self._read("datasets", dataset_id))

    def list_datasets(self) -> list[str]:
        return self._list_ids("datasets")

    def delete_dataset(self, dataset_id: str):
        self._delete("datasets", dataset_id)

    # -- scenarios -----------------------------------------------------------

    def create_scenario(self, name: str, model_id: str,
                        overrides: dict | None = None) -> str:
        self._read("models", model_id)  # must resolve
        scenario_id = new_id("scenario")
        self._write_doc("scenarios", scenario_id, {
            "id": scenario_id,
            "name": name,
            "model_id": model_id,
            "overrides": overrides or {"sets": {}, "horizon": None, "seed": None},
            "run_ids": [],
            "created_at": _utc_now_iso(),
        })
        return scenario_id

    def get_scenario(self, scenario_id: str) -> dict:
        return json.loads(self._read("scenarios", scenario_id))

    def list_scenarios(self) -> list[str]:
        return self._list_ids("scenarios")

    def delete_scenario(self, scenario_id: str):
        scenario = self.get_scenario(scenario_id)
        for run_id in scenario.get("run_ids", []):  # runs are owned
            with contextlib.suppress(NotFoundError):
                self._delete("runs", run_id)
        self._delete("scenarios", scenario_id)

    def attach_run(self, scenario_id: str, run_id: str):
        scenario = self.get_scenario(scenario_id)
        scenario["run_ids"] = scenario.get("run_ids", []) + [run_id]
        self._write_doc("scenarios", scenario_id, scenario)

    # -- runs ----------------------------------------------------------------

    def create_run(self, doc: dict) -> str:
        run_id = doc.get("id") or new_id("run")
        doc = {**doc, "id": run_id, "created_at": _utc_now_iso()}
        self._write_doc("runs", run_id, doc)
        return run_id

    def get_run(self, run_id: str) -> dict:
        return json.loads(self._read("runs", run_id))

    def list_runs(self) -> list[str]:
        return self._list_ids("runs")
