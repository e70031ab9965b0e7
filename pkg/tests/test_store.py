import os

import pytest

from conftest import make_sir_model
from vera.compiler import Overrides
from vera.errors import IntegrityError, NotFoundError
from vera.jsonutil import canonical_bytes
from vera.model import serialize, sir_template
from vera.store import Store
from vera.workbench import compare, recompile_run_spec, run_scenario


@pytest.fixture
def store(tmp_path):
    return Store(tmp_path / "data")


def _scenario(store, overrides=None, name="baseline"):
    model_id = store.create_model(make_sir_model())
    return store.create_scenario(
        name, model_id,
        overrides=(overrides or Overrides(seed=5)).to_json_dict())


def test_model_roundtrip(store):
    model = make_sir_model()
    model_id = store.create_model(model)
    assert store.get_model(model_id) == model


def test_list_in_creation_order(store):
    ids = [store.create_model(make_sir_model()) for _ in range(3)]
    assert store.list_models() == ids


def test_get_missing_raises(store):
    with pytest.raises(NotFoundError):
        store.get_model("model-missing")


def test_delete_model_referenced_by_scenario_refused(store):
    model_id = store.create_model(make_sir_model())
    scenario_id = store.create_scenario("s", model_id)
    with pytest.raises(IntegrityError) as exc_info:
        store.delete_model(model_id)
    assert scenario_id in str(exc_info.value)
    store.delete_scenario(scenario_id)
    store.delete_model(model_id)  # now allowed
    assert store.list_models() == []


def test_scenario_requires_model(store):
    with pytest.raises(NotFoundError):
        store.create_scenario("s", "model-ghost")


def test_scenario_delete_cascades_runs(store):
    scenario_id = _scenario(store)
    run_id = run_scenario(store, scenario_id, engine="ode")
    assert store.list_runs() == [run_id]
    store.delete_scenario(scenario_id)
    assert store.list_runs() == []


def test_dataset_crud(store):
    doc = {"region": {"country": "X", "province": None},
           "dates": ["2020-01-22"], "cumulative": [5], "source": "t"}
    dataset_id = store.create_dataset(doc)
    fetched = store.get_dataset(dataset_id)
    assert fetched["region"]["country"] == "X"
    store.delete_dataset(dataset_id)
    assert store.list_datasets() == []


# --- runs -----------------------------------------------------------------

def test_run_scenario_ode_stores_complete_document(store):
    scenario_id = _scenario(store)
    run_id = run_scenario(store, scenario_id, engine="ode")
    run = store.get_run(run_id)
    assert run["status"] == "completed"
    assert run["engine"] == "ode"
    assert run["spec"]["seed"] == 5
    assert run["metrics"]["peak_infected"] > 0
    assert store.get_scenario(scenario_id)["run_ids"] == [run_id]


def test_rerun_is_byte_identical(store):
    scenario_id = _scenario(store)
    runs = [store.get_run(run_scenario(store, scenario_id, engine="abm",
                                       n_seeds=4)) for _ in range(2)]
    docs = [canonical_bytes(r["trajectory"]) for r in runs]
    assert docs[0] == docs[1]


def test_run_provenance_recompiles_identically(store):
    scenario_id = _scenario(store)
    run_id = run_scenario(store, scenario_id, engine="abm", n_seeds=2)
    run = store.get_run(run_id)
    recompiled = recompile_run_spec(store, run_id)
    assert canonical_bytes(recompiled.to_json_dict()) == \
        canonical_bytes(run["spec"])


def test_unset_rates_fail_before_any_run_record(store):
    model_id = store.create_model(sir_template(100, 1, 10))
    scenario_id = store.create_scenario("unfilled", model_id)
    from vera.errors import CompileError
    with pytest.raises(CompileError):
        run_scenario(store, scenario_id, engine="ode")
    assert store.list_runs() == []
    assert store.get_scenario(scenario_id)["run_ids"] == []


def test_engine_failure_stored_as_failed_run(store):
    model_id = store.create_model(make_sir_model(n_susceptible=2_000_000))
    scenario_id = store.create_scenario("too big", model_id)
    run_id = run_scenario(store, scenario_id, engine="abm", n_seeds=1)
    run = store.get_run(run_id)
    assert run["status"] == "failed"
    assert run["error"]["code"] == "agent_cap_exceeded"
    assert "trajectory" not in run


def test_compare_orderings(store):
    model_id = store.create_model(make_sir_model())
    ids = {}
    for contacts in (16, 12):
        sid = store.create_scenario(
            f"contacts-{contacts}", model_id,
            overrides=Overrides(
                sets={"becomes": {"contacts_per_day": contacts}},
                seed=5).to_json_dict())
        run_scenario(store, sid, engine="ode")
        ids[contacts] = sid
    report = compare(store, [ids[16], ids[12]])
    assert report.by_peak == [ids[16], ids[12]]
    assert report.by_crossing_day == [ids[16], ids[12]]
    assert report.flattened  # peaks strictly decrease across the given order


def test_compare_scenario_with_itself(store):
    scenario_id = _scenario(store)
    run_scenario(store, scenario_id, engine="ode")
    report = compare(store, [scenario_id, scenario_id])
    assert not report.flattened
    assert report.by_peak == [scenario_id]


def test_compare_needs_completed_runs(store):
    a, b = _scenario(store), _scenario(store)
    from vera.errors import VeraError
    with pytest.raises(VeraError):
        compare(store, [a, b])


# --- crash consistency ---------------------------------------------------------

def test_interrupted_write_leaves_no_partial_document(store, monkeypatch):
    scenario_id = _scenario(store)

    real_replace = os.replace
    def exploding_replace(src, dst):
        if "runs" in str(dst):
            raise OSError("simulated crash during rename")
        return real_replace(src, dst)

    monkeypatch.setattr(os, "replace", exploding_replace)
    with pytest.raises(OSError):
        run_scenario(store, scenario_id, engine="ode")
    monkeypatch.undo()

    assert store.list_runs() == []  # no partial/garbage record
    assert store.get_scenario(scenario_id)["run_ids"] == []
    # the run goes through cleanly afterwards
    run_id = run_scenario(store, scenario_id, engine="ode")
    assert store.get_run(run_id)["status"] == "completed"


def test_interrupted_payload_write_leaves_no_document(store, monkeypatch):
    scenario_id = _scenario(store)

    import vera.store as store_module
    real_fsync = os.fsync
    def exploding_fsync(fd):
        raise OSError("simulated crash during write")

    monkeypatch.setattr(store_module.os, "fsync", exploding_fsync)
    with pytest.raises(OSError):
        run_scenario(store, scenario_id, engine="ode")
    monkeypatch.setattr(store_module.os, "fsync", real_fsync)

    assert store.list_runs() == []
    # temp files are not visible as documents and get cleaned up
    leftovers = [p for p in (store.root / "runs").iterdir()]
    assert leftovers == []


def test_model_document_bytes_are_canonical(store, tmp_path):
    model = make_sir_model()
    model_id = store.create_model(model)
    on_disk = (store.root / "models" / f"{model_id}.json").read_bytes()
    assert on_disk == serialize(model)
