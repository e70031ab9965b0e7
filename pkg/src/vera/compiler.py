"""Translates a validated conceptual model into a fully numeric spec.

The compiled ``SimulationSpec`` is the provenance unit: it is stored next to
every run and its id is a content hash, so compiling the same (model,
overrides, horizon, seed) always yields the same document bytes.
"""
from __future__ import annotations

import hashlib
from dataclasses import dataclass, field

from .errors import CompileError, OverrideError
from .jsonutil import canonical_dumps
from .model import (
    ComponentKind,
    ConceptualModel,
    RelationshipKind,
    Unset,
    component_param_names,
    relationship_param_names,
    validate_model,
    with_param,
)
from .rng import GENERATOR_NAME

DEFAULT_HORIZON = 120
DEFAULT_DT_ODE = 0.1
DEFAULT_SEED = 0
# Finite pool the phenomenon model saturates against; the distancing table
# fixes rates but not a population, so this is an engine default.
DEFAULT_PHENOMENON_POPULATION = 10_000


@dataclass(frozen=True)
class ContactStructure:
    contacts_per_day: float = 0.0
    transmission_likelihood: float = 0.0
    block_probability: float = 0.0


@dataclass(frozen=True)
class PhenomenonRules:
    duration: int
    transmission_count: int
    onset: int
    interval: int
    block_probability: float
    population: int


@dataclass(frozen=True)
class SimulationSpec:
    id: str
    populations: dict[str, int]
    beta: float
    gamma: float
    capacity: float | None
    horizon: int
    dt_ode: float
    seed: int
    contact_structure: ContactStructure
    phenomenon_rules: PhenomenonRules | None
    rng: str = GENERATOR_NAME

    @property
    def population_total(self) -> int:
        return sum(self.populations.values())

    def to_json_dict(self) -> dict:
        doc = {
            "id": self.id,
            "populations": dict(self.populations),
            "beta": self.beta,
            "gamma": self.gamma,
            "capacity": self.capacity,
            "horizon": self.horizon,
            "dt_ode": self.dt_ode,
            "seed": self.seed,
            "rng": self.rng,
            "contact_structure": {
                "contacts_per_day": self.contact_structure.contacts_per_day,
                "transmission_likelihood":
                    self.contact_structure.transmission_likelihood,
                "block_probability": self.contact_structure.block_probability,
            },
            "phenomenon_rules": None,
        }
        if self.phenomenon_rules is not None:
            r = self.phenomenon_rules
            doc["phenomenon_rules"] = {
                "duration": r.duration,
                "transmission_count": r.transmission_count,
                "onset": r.onset,
                "interval": r.interval,
                "block_probability": r.block_probability,
                "population": r.population,
            }
        return doc


def spec_from_dict(doc: dict) -> SimulationSpec:
    rules = None
    if doc.get("phenomenon_rules") is not None:
        rd = doc["phenomenon_rules"]
        rules = PhenomenonRules(
            duration=int(rd["duration"]),
            transmission_count=int(rd["transmission_count"]),
            onset=int(rd["onset"]),
            interval=int(rd["interval"]),
            block_probability=float(rd["block_probability"]),
            population=int(rd["population"]),
        )
    cs = doc.get("contact_structure", {})
    return SimulationSpec(
        id=doc["id"],
        populations={k: int(v) for k, v in doc["populations"].items()},
        beta=float(doc["beta"]),
        gamma=float(doc["gamma"]),
        capacity=None if doc.get("capacity") is None else float(doc["capacity"]),
        horizon=int(doc["horizon"]),
        dt_ode=float(doc["dt_ode"]),
        seed=int(doc["seed"]),
        contact_structure=ContactStructure(
            contacts_per_day=float(cs.get("contacts_per_day", 0.0)),
            transmission_likelihood=float(cs.get("transmission_likelihood", 0.0)),
            block_probability=float(cs.get("block_probability", 0.0)),
        ),
        phenomenon_rules=rules,
        rng=doc.get("rng", GENERATOR_NAME),
    )


@dataclass(frozen=True)
class Overrides:
    """Sparse parameter replacements keyed by element id."""

    sets: dict[str, dict[str, float]] = field(default_factory=dict)
    horizon: int | None = None
    seed: int | None = None

    @classmethod
    def from_assignments(cls, assignments: list[str], horizon: int | None = None,
                         seed: int | None = None) -> "Overrides":
        """Parse CLI-style ``element.param=value`` strings."""
        sets: dict[str, dict[str, float]] = {}
        for text in assignments:
            try:
                path, raw = text.split("=", 1)
                element, param = path.rsplit(".", 1)
                value = float(raw)
            except ValueError:
                raise OverrideError(
                    f"cannot parse override '{text}'; expected "
                    "element.param=value") from None
            sets.setdefault(element, {})[param] = value
        return cls(sets=sets, horizon=horizon, seed=seed)

    def to_json_dict(self) -> dict:
        return {"sets": {k: dict(v) for k, v in sorted(self.sets.items())},
                "horizon": self.horizon, "seed": self.seed}

    @classmethod
    def from_json_dict(cls, doc: dict) -> "Overrides":
        return cls(sets={k: dict(v) for k, v in doc.get("sets", {}).items()},
                   horizon=doc.get("horizon"), seed=doc.get("seed"))


def effective_beta(contacts_per_day: float, transmission_likelihood: float,
                   block_probability: float) -> float:
    """Per-day transmission rate: contacts x likelihood x (1 - block)."""
    if contacts_per_day < 0:
        raise CompileError("contacts_per_day must be >= 0")
    if not 0.0 <= transmission_likelihood <= 1.0:
        raise CompileError("transmission_likelihood must be in [0, 1]")
    if not 0.0 <= block_probability <= 1.0:
        raise CompileError("block_probability must be in [0, 1]")
    return contacts_per_day * transmission_likelihood * (1.0 - block_probability)


def apply_overrides(model: ConceptualModel,
                    overrides: Overrides | None) -> ConceptualModel:
    """Return a copy of the model with the addressed parameters replaced.

    Unknown targets raise, and the original model is never touched.
    """
    if overrides is None or not overrides.sets:
        return model
    components = {c.id: c for c in model.components}
    relationships = {r.id: r for r in model.relationships}
    updated = model
    for element_id, params in sorted(overrides.sets.items()):
        if element_id in components:
            valid = component_param_names(components[element_id].kind)
        elif element_id in relationships:
            valid = relationship_param_names(relationships[element_id].kind)
        else:
            known = sorted(components) + sorted(relationships)
            raise OverrideError(
                f"override addresses unknown element '{element_id}'",
                {"valid_targets": known})
        for name, value in sorted(params.items()):
            if name not in valid:
                raise OverrideError(
                    f"parameter '{name}' is not applicable to element "
                    f"'{element_id}'", {"valid_parameters": list(valid)})
            updated = with_param(updated, element_id, name, value)
    return updated


def _numeric(value, element_id: str, name: str) -> float:
    if value is None or isinstance(value, Unset):
        raise CompileError(
            f"required rate '{name}' on '{element_id}' is unset",
            {"element_id": element_id, "parameter": name})
    return float(value)


def compile_model(model: ConceptualModel, overrides: Overrides | None = None,
                  horizon: int | None = None, seed: int | None = None,
                  dt_ode: float = DEFAULT_DT_ODE,
                  phenomenon_population: int = DEFAULT_PHENOMENON_POPULATION,
                  ) -> SimulationSpec:
    """Compile a model plus overrides into a runnable ``SimulationSpec``.

    Overrides that carry a horizon or seed win over the keyword arguments;
    both win over the package defaults.
    """
    report = validate_model(model)
    if not report.ok:
        raise CompileError(
            "model has structural errors; fix them before compiling",
            {"report": report.to_json_dict()})
    m = apply_overrides(model, overrides)

    if overrides is not None and overrides.horizon is not None:
        horizon = overrides.horizon
    if horizon is None:
        horizon = DEFAULT_HORIZON
    if horizon <= 0:
        raise CompileError(f"horizon must be positive, got {horizon}")
    if overrides is not None and overrides.seed is not None:
        seed = overrides.seed
    if seed is None:
        seed = DEFAULT_SEED

    populations: dict[str, int] = {}
    for c in m.components:
        if c.kind.is_compartment:
            key = c.kind.value.lower()
            count = int(_numeric(c.params.starting_count, c.id, "starting_count"))
            populations[key] = populations.get(key, 0) + count

    capacity = None
    for c in m.components:
        if c.kind is ComponentKind.HEALTHCARE_CAPACITY:
            capacity = _numeric(c.params.capacity, c.id, "capacity")

    interventions = {c.id: c for c in m.components
                     if c.kind is ComponentKind.INTERVENTION}

    def block_for(target_id: str) -> float:
        """Block probability from the Inhibits edge pointing at target_id."""
        for r in m.relationships:
            if r.kind is RelationshipKind.INHIBITS and r.target == target_id:
                value = r.params.block_probability
                if value is not None and not isinstance(value, Unset):
                    return float(value)
                src = interventions.get(r.source)
                if src is not None:
                    return _numeric(src.params.interaction_probability,
                                    src.id, "interaction_probability")
        return 0.0

    contact = ContactStructure()
    becomes = [r for r in m.relationships if r.kind is RelationshipKind.BECOMES]
    if becomes:
        r = becomes[0]
        contact = ContactStructure(
            contacts_per_day=_numeric(r.params.contacts_per_day, r.id,
                                      "contacts_per_day"),
            transmission_likelihood=_numeric(r.params.transmission_likelihood,
                                             r.id, "transmission_likelihood"),
            block_probability=block_for(r.id),
        )

    gamma = 0.0
    recovers = [r for r in m.relationships if r.kind is RelationshipKind.RECOVERS]
    if recovers:
        r = recovers[0]
        gamma = 1.0 / _numeric(r.params.recovery_time, r.id, "recovery_time")

    beta = effective_beta(contact.contacts_per_day,
                          contact.transmission_likelihood,
                          contact.block_probability)

    rules = None
    phenomena = [c for c in m.components if c.kind is ComponentKind.PHENOMENON]
    if phenomena:
        c = phenomena[0]
        starting = int(_numeric(c.params.starting_count, c.id, "starting_count"))
        populations["cases"] = populations.get("cases", 0) + starting
        rules = PhenomenonRules(
            duration=int(_numeric(c.params.duration, c.id, "duration")),
            transmission_count=int(_numeric(c.params.transmission_count, c.id,
                                            "transmission_count")),
            onset=int(_numeric(c.params.transmission_onset, c.id,
                               "transmission_onset")),
            interval=int(_numeric(c.params.transmission_interval, c.id,
                                  "transmission_interval")),
            block_probability=block_for(c.id),
            population=int(phenomenon_population),
        )

    body = {
        "populations": populations,
        "beta": beta,
        "gamma": gamma,
        "capacity": capacity,
        "horizon": int(horizon),
        "dt_ode": dt_ode,
        "seed": int(seed),
        "rng": GENERATOR_NAME,
        "contact_structure": contact.__dict__,
        "phenomenon_rules": None if rules is None else rules.__dict__,
    }
    digest = hashlib.sha256(canonical_dumps(body).encode("utf-8")).hexdigest()
    return SimulationSpec(
        id=f"spec-{digest[:16]}",
        populations=populations,
        beta=beta,
        gamma=gamma,
        capacity=capacity,
        horizon=int(horizon),
        dt_ode=dt_ode,
        seed=int(seed),
        contact_structure=contact,
        phenomenon_rules=rules,
    )
