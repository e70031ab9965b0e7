import numpy as np
import pytest

from conftest import make_sir_model
from vera.compiler import (
    DEFAULT_HORIZON,
    Overrides,
    apply_overrides,
    compile_model,
    effective_beta,
)
from vera.errors import CompileError, OverrideError
from vera.jsonutil import canonical_bytes
from vera.model import (
    Component,
    ComponentKind,
    ComponentParams,
    ConceptualModel,
    DistancingLevel,
    phenomenon_template,
    sir_template,
)


@pytest.mark.parametrize("contacts,likelihood,block,expected", [
    (16, 0.025, 0.0, 0.4),
    (12, 0.025, 0.0, 0.3),
    (16, 0.025, 1.0, 0.0),
    (7, 1.0, 1.0, 0.0),
    (0, 0.5, 0.0, 0.0),
])
def test_effective_beta_values(contacts, likelihood, block, expected):
    assert effective_beta(contacts, likelihood, block) == pytest.approx(expected)


def test_effective_beta_monotone():
    base = effective_beta(16, 0.025, 0.2)
    blocks = np.linspace(0, 1, 21)
    betas = [effective_beta(16, 0.025, q) for q in blocks]
    assert all(a >= b for a, b in zip(betas, betas[1:]))
    assert effective_beta(17, 0.025, 0.2) >= base
    assert effective_beta(16, 0.03, 0.2) >= base


def test_effective_beta_range_checks():
    with pytest.raises(CompileError):
        effective_beta(16, 1.5, 0.0)
    with pytest.raises(CompileError):
        effective_beta(16, 0.5, -0.1)


def test_compile_sir_spec():
    spec = compile_model(make_sir_model())
    assert spec.beta == pytest.approx(16 * 0.025)
    assert spec.gamma == pytest.approx(1 / 14)
    assert spec.capacity == 3000
    assert spec.horizon == DEFAULT_HORIZON
    assert spec.populations == {"susceptible": 9990, "infected": 10,
                                "recovered": 0}
    assert spec.phenomenon_rules is None


def test_compile_preserves_total_population():
    spec = compile_model(make_sir_model(n_susceptible=100, n_infected=1,
                                        capacity=50))
    assert sum(spec.populations.values()) == 101


def test_compile_phenomenon_intense():
    spec = compile_model(phenomenon_template(DistancingLevel.INTENSE))
    rules = spec.phenomenon_rules
    assert rules.interval == 28
    assert rules.block_probability == 0.84
    assert spec.populations["cases"] == 10


def test_no_relationship_model_compiles_flat():
    comps = (
        Component("s", ComponentKind.SUSCEPTIBLE, "S",
                  ComponentParams(starting_count=50)),
        Component("i", ComponentKind.INFECTED, "I",
                  ComponentParams(starting_count=5)),
        Component("r", ComponentKind.RECOVERED, "R",
                  ComponentParams(starting_count=0)),
    )
    spec = compile_model(ConceptualModel("m", "static", comps))
    assert spec.beta == 0.0 and spec.gamma == 0.0
    from vera.engine import run_abm, run_ode
    for traj in (run_ode(spec), run_abm(spec)):
        for series in traj.series.values():
            assert np.all(series == series[0])


def test_compile_unset_rate_is_error():
    with pytest.raises(CompileError) as exc_info:
        compile_model(sir_template(100, 1, 10))
    assert "unset" in str(exc_info.value)


def test_compile_invalid_model_is_error():
    with pytest.raises(CompileError):
        compile_model(ConceptualModel("m", "empty"))


def test_compile_is_deterministic():
    model = make_sir_model()
    a = compile_model(model, Overrides(seed=5))
    b = compile_model(model, Overrides(seed=5))
    assert canonical_bytes(a.to_json_dict()) == canonical_bytes(b.to_json_dict())
    c = compile_model(model, Overrides(seed=6))
    assert c.id != a.id  # seed is part of the provenance document


def test_empty_overrides_are_identity():
    model = make_sir_model()
    assert compile_model(model).to_json_dict() == \
        compile_model(model, Overrides()).to_json_dict()
    assert apply_overrides(model, None) == model
    assert apply_overrides(model, Overrides()) == model


def test_override_changes_only_addressed_parameter():
    model = make_sir_model()
    base = compile_model(model).to_json_dict()
    tweaked = compile_model(
        model, Overrides(sets={"becomes": {"contacts_per_day": 12}}))
    doc = tweaked.to_json_dict()
    assert doc["beta"] == pytest.approx(0.3)
    assert doc["contact_structure"]["contacts_per_day"] == 12
    for key in ("populations", "gamma", "capacity", "horizon", "seed",
                "dt_ode"):
        assert doc[key] == base[key]


def test_override_idempotent():
    model = make_sir_model()
    ov = Overrides(sets={"becomes": {"contacts_per_day": 12}})
    once = apply_overrides(model, ov)
    twice = apply_overrides(once, ov)
    assert once == twice


def test_override_unknown_element():
    model = make_sir_model()
    with pytest.raises(OverrideError) as exc_info:
        apply_overrides(model, Overrides(sets={"ghost": {"capacity": 1}}))
    assert "ghost" in str(exc_info.value)
    assert "becomes" in exc_info.value.details["valid_targets"]
    # the original is untouched
    assert model.component("susceptible").params.starting_count == 9990


def test_override_inapplicable_parameter():
    model = make_sir_model()
    with pytest.raises(OverrideError) as exc_info:
        apply_overrides(model, Overrides(sets={"becomes": {"capacity": 3}}))
    assert "contacts_per_day" in exc_info.value.details["valid_parameters"]


def test_overrides_horizon_and_seed_take_precedence():
    model = make_sir_model()
    spec = compile_model(model, Overrides(horizon=40, seed=9),
                         horizon=200, seed=1)
    assert spec.horizon == 40
    assert spec.seed == 9


def test_override_assignment_parsing():
    ov = Overrides.from_assignments(["becomes.contacts_per_day=12",
                                     "recovers.recovery_time=7.5"])
    assert ov.sets == {"becomes": {"contacts_per_day": 12.0},
                       "recovers": {"recovery_time": 7.5}}
    with pytest.raises(OverrideError):
        Overrides.from_assignments(["no-equals-sign"])
    with pytest.raises(OverrideError):
        Overrides.from_assignments(["becomes.contacts_per_day=abc"])


def test_compiled_beta_monotone_under_block_sweep():
    model = make_sir_model()
    betas = []
    for q in np.linspace(0, 1, 11):
        # attach an intervention blocking the Becomes flow
        from vera.model import Relationship, RelationshipKind, RelationshipParams
        comps = model.components + (
            Component("npi", ComponentKind.INTERVENTION, "Distancing",
                      ComponentParams(interaction_probability=float(q))),)
        rels = model.relationships + (
            Relationship("block", RelationshipKind.INHIBITS, "npi", "becomes",
                         RelationshipParams()),)
        spec = compile_model(ConceptualModel("m", "sir+npi", comps, rels))
        betas.append(spec.beta)
    assert all(a >= b for a, b in zip(betas, betas[1:]))
    assert betas[0] == pytest.approx(0.4)
    assert betas[-1] == pytest.approx(0.0)
