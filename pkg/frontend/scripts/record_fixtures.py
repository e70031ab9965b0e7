#!/usr/bin/env python3
"""Record real backend responses as contract-test fixtures.

Re-run after API changes:

    cd frontend && npm run build \
      && node scripts/make_canvas_fixture.mjs \
      && python3 scripts/record_fixtures.py
"""
import json
import tempfile
from datetime import date, timedelta
from pathlib import Path

from fastapi.testclient import TestClient

from vera.api import create_app
from vera.store import Store

HERE = Path(__file__).resolve().parent
FIXTURES = HERE.parent / "tests" / "fixtures"


def save(name: str, status: int, body):
    FIXTURES.mkdir(parents=True, exist_ok=True)
    path = FIXTURES / f"{name}.json"
    path.write_text(json.dumps({"status": status, "body": body}, indent=2,
                               sort_keys=True) + "\n")
    print(f"recorded {path.name} ({status})")


def growth_csv() -> bytes:
    start = date(2020, 1, 22)
    dates = [start + timedelta(days=i) for i in range(60)]
    header = "Province/State,Country/Region,Lat,Long," + ",".join(
        f"{d.month}/{d.day}/{d.year % 100:02d}" for d in dates)
    counts = [str(int(20 * 2.718281828 ** (0.2 * t))) for t in range(60)]
    return (header + "\n," + "Growville,1.5,-2.5," + ",".join(counts)
            + "\n").encode()


def main():
    canvas_request = json.loads(
        (FIXTURES / "canvas_model_request.json").read_text())

    with tempfile.TemporaryDirectory() as tmp:
        client = TestClient(create_app(Store(Path(tmp) / "data")))

        created = client.post("/api/models", json=canvas_request)
        save("canvas_model_created", created.status_code, created.json())
        model_id = created.json()["id"]
        fetched = client.get(f"/api/models/{model_id}")
        save("canvas_model_response", fetched.status_code, fetched.json())

        report = client.post("/api/validate", json=canvas_request)
        save("validation_ok", report.status_code, report.json())
        broken = json.loads(json.dumps(canvas_request))
        broken["components"][0]["params"]["starting_count"] = -5
        del broken["relationships"][0]["params"]["transmission_likelihood"]
        bad = client.post("/api/validate", json=broken)
        save("validation_bad", bad.status_code, bad.json())

        becomes_id = next(r["id"] for r in canvas_request["relationships"]
                          if r["kind"] == "Becomes")
        runs = {}
        for contacts in (16, 12):
            scenario = client.post("/api/scenarios", json={
                "name": f"contacts-{contacts}", "model_id": model_id,
                "overrides": {
                    "sets": {becomes_id: {"contacts_per_day": contacts}},
                    "seed": 5},
            })
            sid = scenario.json()["id"]
            started = client.post(f"/api/scenarios/{sid}/runs?engine=ode")
            run = client.get(f"/api/runs/{started.json()['id']}")
            save(f"run_c{contacts}", run.status_code, run.json())
            runs[contacts] = sid

        compare = client.post("/api/compare", json={
            "scenario_ids": [runs[16], runs[12]]})
        save("compare_c16_c12", compare.status_code, compare.json())

        upload = client.post("/api/datasets", content=growth_csv(),
                             headers={"content-type": "text/csv"})
        save("dataset_upload", upload.status_code, upload.json())
        dataset_id = upload.json()["ids"][0]
        fit = client.post(f"/api/datasets/{dataset_id}/fit",
                          json={"gamma": 1 / 14, "contacts": 16})
        save("fit_response", fit.status_code, fit.json())

        missing = client.get("/api/models/unknown")
        save("model_not_found", missing.status_code, missing.json())


if __name__ == "__main__":
    main()
