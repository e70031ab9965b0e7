"""Conceptual models: typed components, typed relationships, their parameters.

A model is a small graph the user assembles in the editor; this module owns
its schema, validation, the two built-in templates, and the JSON document
format (see docs/model.schema.json).

Parameter values distinguish three states:

* a number            -- set
* ``UNSET``           -- explicitly left blank (JSON ``null``); a Warning
* ``None``            -- field absent; an Error when the kind requires it

Templates create required rate parameters as ``UNSET`` placeholders so a
freshly stamped model validates (ok=True) but warns until the rates are
filled in, either by hand, by overrides at compile time, or from a data fit.
"""
from __future__ import annotations

import enum
import json
import warnings
from dataclasses import dataclass, field, replace

from .errors import ForwardCompatWarning, ParseError, VersionError
from .ids import new_id
from .jsonutil import canonical_bytes

SCHEMA_VERSION = 1


class Unset:
    """Singleton marker for an explicitly blank parameter."""

    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "UNSET"


UNSET = Unset()

# A parameter slot: number, UNSET placeholder, or absent.
ParamValue = float | int | Unset | None


class ComponentKind(str, enum.Enum):
    SUSCEPTIBLE = "Susceptible"
    INFECTED = "Infected"
    RECOVERED = "Recovered"
    PHENOMENON = "Phenomenon"
    INTERVENTION = "Intervention"
    HEALTHCARE_CAPACITY = "HealthcareCapacity"

    @property
    def is_compartment(self) -> bool:
        return self in _COMPARTMENTS


_COMPARTMENTS = {
    ComponentKind.SUSCEPTIBLE,
    ComponentKind.INFECTED,
    ComponentKind.RECOVERED,
}


class RelationshipKind(str, enum.Enum):
    BECOMES = "Becomes"
    RECOVERS = "Recovers"
    INHIBITS = "Inhibits"
    SPREADS_TO = "SpreadsTo"


class DistancingLevel(str, enum.Enum):
    LIGHT = "Light"
    MODERATE = "Moderate"
    INTENSE = "Intense"


@dataclass(frozen=True)
class ComponentParams:
    starting_count: ParamValue = None  # Compartment, Phenomenon
    duration: ParamValue = None  # Phenomenon
    transmission_count: ParamValue = None  # Phenomenon
    transmission_onset: ParamValue = None  # Phenomenon
    transmission_interval: ParamValue = None  # Phenomenon
    capacity: ParamValue = None  # HealthcareCapacity
    interaction_probability: ParamValue = None  # Intervention


@dataclass(frozen=True)
class RelationshipParams:
    contacts_per_day: ParamValue = None  # Becomes
    transmission_likelihood: ParamValue = None  # Becomes
    recovery_time: ParamValue = None  # Recovers
    block_probability: ParamValue = None  # Inhibits


@dataclass(frozen=True)
class Component:
    id: str
    kind: ComponentKind
    name: str
    params: ComponentParams = field(default_factory=ComponentParams)
    # optional editor layout hints, semantically ignored
    x: float | None = None
    y: float | None = None


@dataclass(frozen=True)
class Relationship:
    id: str
    kind: RelationshipKind
    source: str  # component id
    target: str  # component id; for Inhibits, may be a Becomes relationship id
    params: RelationshipParams = field(default_factory=RelationshipParams)


@dataclass(frozen=True)
class ConceptualModel:
    id: str
    name: str
    components: tuple[Component, ...] = ()
    relationships: tuple[Relationship, ...] = ()
    notes: str | None = None
    schema_version: int = SCHEMA_VERSION

    def component(self, component_id: str) -> Component | None:
        for c in self.components:
            if c.id == component_id:
                return c
        return None

    def relationship(self, relationship_id: str) -> Relationship | None:
        for r in self.relationships:
            if r.id == relationship_id:
                return r
        return None


@dataclass(frozen=True)
class Issue:
    severity: str  # "Error" | "Warning"
    element_id: str | None
    message: str


@dataclass(frozen=True)
class ValidationReport:
    ok: bool
    issues: tuple[Issue, ...]

    @property
    def errors(self) -> tuple[Issue, ...]:
        return tuple(i for i in self.issues if i.severity == "Error")

    @property
    def warnings(self) -> tuple[Issue, ...]:
        return tuple(i for i in self.issues if i.severity == "Warning")

    def to_json_dict(self) -> dict:
        return {
            "ok": self.ok,
            "issues": [
                {"severity": i.severity, "element_id": i.element_id,
                 "message": i.message}
                for i in self.issues
            ],
        }


# ---------------------------------------------------------------------------
# parameter applicability

_COMPONENT_PARAMS: dict[ComponentKind, dict[str, bool]] = {
    # param name -> required?
    ComponentKind.SUSCEPTIBLE: {"starting_count": True},
    ComponentKind.INFECTED: {"starting_count": True},
    ComponentKind.RECOVERED: {"starting_count": True},
    ComponentKind.PHENOMENON: {
        "starting_count": True,
        "duration": True,
        "transmission_count": True,
        "transmission_onset": True,
        "transmission_interval": True,
    },
    ComponentKind.INTERVENTION: {"interaction_probability": True},
    ComponentKind.HEALTHCARE_CAPACITY: {"capacity": True},
}

_RELATIONSHIP_PARAMS: dict[RelationshipKind, dict[str, bool]] = {
    RelationshipKind.BECOMES: {
        "contacts_per_day": True,
        "transmission_likelihood": True,
    },
    RelationshipKind.RECOVERS: {"recovery_time": True},
    # block_probability defaults to the intervention's interaction
    # probability at compile time, so it is optional here
    RelationshipKind.INHIBITS: {"block_probability": False},
    RelationshipKind.SPREADS_TO: {},
}

# (lower bound, inclusive?) range checks; upper bound 1.0 for probabilities
_PROBABILITY_PARAMS = {
    "transmission_likelihood",
    "block_probability",
    "interaction_probability",
}
_POSITIVE_PARAMS = {
    "duration", "transmission_interval", "recovery_time", "contacts_per_day",
}
_NONNEGATIVE_PARAMS = {
    "starting_count", "transmission_count", "transmission_onset", "capacity",
}


def component_param_names(kind: ComponentKind) -> tuple[str, ...]:
    return tuple(_COMPONENT_PARAMS[kind])


def relationship_param_names(kind: RelationshipKind) -> tuple[str, ...]:
    return tuple(_RELATIONSHIP_PARAMS[kind])


def _check_value(name: str, value, element_id: str, issues: list[Issue]):
    if not isinstance(value, (int, float)) or isinstance(value, bool):
        issues.append(Issue("Error", element_id,
                            f"parameter '{name}' must be a number"))
        return
    v = float(value)
    if v != v or v in (float("inf"), float("-inf")):
        issues.append(Issue("Error", element_id,
                            f"parameter '{name}' must be finite"))
        return
    if name in _PROBABILITY_PARAMS and not 0.0 <= v <= 1.0:
        issues.append(Issue("Error", element_id,
                            f"parameter '{name}' must be in [0, 1], got {v}"))
    elif name in _POSITIVE_PARAMS and v <= 0.0:
        issues.append(Issue("Error", element_id,
                            f"parameter '{name}' must be > 0, got {v}"))
    elif name in _NONNEGATIVE_PARAMS and v < 0.0:
        issues.append(Issue("Error", element_id,
                            f"parameter '{name}' must be >= 0, got {v}"))


def _check_params(element_id: str, label: str, params, table: dict[str, bool],
                  issues: list[Issue]):
    for name in params.__dataclass_fields__:
        value = getattr(params, name)
        if name not in table:
            if value is not None:
                issues.append(Issue(
                    "Error", element_id,
                    f"parameter '{name}' is not applicable to {label}"))
            continue
        required = table[name]
        if value is None:
            if required:
                issues.append(Issue(
                    "Error", element_id,
                    f"{label} is missing required parameter '{name}'"))
        elif isinstance(value, Unset):
            issues.append(Issue(
                "Warning", element_id,
                f"parameter '{name}' is unset; fill it before running"))
        else:
            _check_value(name, value, element_id, issues)


def validate_model(model: ConceptualModel) -> ValidationReport:
    """Check every structural invariant; problems become report entries."""
    issues: list[Issue] = []

    if not model.components:
        issues.append(Issue("Error", model.id, "model has no components"))

    seen: set[str] = set()
    for c in model.components:
        if c.id in seen:
            issues.append(Issue("Error", c.id, f"duplicate component id '{c.id}'"))
        seen.add(c.id)
        _check_params(c.id, f"{c.kind.value} component", c.params,
                      _COMPONENT_PARAMS[c.kind], issues)

    rel_seen: set[str] = set()
    for r in model.relationships:
        if r.id in rel_seen or r.id in seen:
            issues.append(Issue("Error", r.id, f"duplicate element id '{r.id}'"))
        rel_seen.add(r.id)

    capacities = [c for c in model.components
                  if c.kind is ComponentKind.HEALTHCARE_CAPACITY]
    if len(capacities) > 1:
        issues.append(Issue(
            "Error", capacities[1].id,
            "at most one HealthcareCapacity component is allowed"))

    components = {c.id: c for c in model.components}
    relationships = {r.id: r for r in model.relationships}

    for r in model.relationships:
        src = components.get(r.source)
        if src is None:
            issues.append(Issue(
                "Error", r.id, f"source '{r.source}' is not a component"))
        tgt = components.get(r.target)
        tgt_rel = relationships.get(r.target)
        if tgt is None and not (r.kind is RelationshipKind.INHIBITS and tgt_rel):
            issues.append(Issue(
                "Error", r.id,
                f"target '{r.target}' does not reference an existing element"))
        if src is not None and src.kind is ComponentKind.HEALTHCARE_CAPACITY:
            issues.append(Issue(
                "Error", r.id,
                "HealthcareCapacity cannot have outgoing relationships"))
        _check_legality(r, src, tgt, tgt_rel, issues)
        _check_params(r.id, f"{r.kind.value} relationship", r.params,
                      _RELATIONSHIP_PARAMS[r.kind], issues)

    total = 0.0
    any_count = False
    for c in model.components:
        v = c.params.starting_count
        if isinstance(v, (int, float)) and not isinstance(v, bool):
            any_count = True
            total += float(v)
    if any_count and total == 0.0:
        issues.append(Issue("Warning", model.id,
                            "model population is empty (all counts are zero)"))

    ok = not any(i.severity == "Error" for i in issues)
    return ValidationReport(ok=ok, issues=tuple(issues))


def _check_legality(r: Relationship, src: Component | None,
                    tgt: Component | None, tgt_rel: Relationship | None,
                    issues: list[Issue]):
    def bad(msg: str):
        issues.append(Issue("Error", r.id, msg))

    if r.kind is RelationshipKind.BECOMES:
        if src and src.kind is not ComponentKind.SUSCEPTIBLE:
            bad("Becomes must start at a Susceptible compartment")
        if tgt and tgt.kind is not ComponentKind.INFECTED:
            bad("Becomes must end at an Infected compartment")
    elif r.kind is RelationshipKind.RECOVERS:
        if src and src.kind is not ComponentKind.INFECTED:
            bad("Recovers must start at an Infected compartment")
        if tgt and tgt.kind is not ComponentKind.RECOVERED:
            bad("Recovers must end at a Recovered compartment")
    elif r.kind is RelationshipKind.INHIBITS:
        if src and src.kind is not ComponentKind.INTERVENTION:
            bad("Inhibits must start at an Intervention")
        if tgt is not None and tgt.kind is not ComponentKind.PHENOMENON:
            bad("Inhibits must target a Phenomenon or a Becomes relationship")
        if tgt_rel is not None and tgt_rel.kind is not RelationshipKind.BECOMES:
            bad("Inhibits may only target a relationship of kind Becomes")
    elif r.kind is RelationshipKind.SPREADS_TO:
        if src and src.kind is not ComponentKind.PHENOMENON:
            bad("SpreadsTo must start at a Phenomenon")
        if r.source != r.target:
            bad("SpreadsTo must be a self-loop")


# ---------------------------------------------------------------------------
# templates

def sir_template(n_susceptible: float, n_infected: float,
                 capacity: float) -> ConceptualModel:
    """SIR skeleton: three compartments, a capacity line, Becomes + Recovers.

    The Becomes and Recovers rate parameters are UNSET placeholders and
    validate as Warnings until filled.
    """
    components = (
        Component("susceptible", ComponentKind.SUSCEPTIBLE, "Susceptible",
                  ComponentParams(starting_count=n_susceptible)),
        Component("infected", ComponentKind.INFECTED, "Infected",
                  ComponentParams(starting_count=n_infected)),
        Component("recovered", ComponentKind.RECOVERED, "Recovered",
                  ComponentParams(starting_count=0)),
        Component("capacity", ComponentKind.HEALTHCARE_CAPACITY,
                  "Healthcare Capacity", ComponentParams(capacity=capacity)),
    )
    relationships = (
        Relationship("becomes", RelationshipKind.BECOMES,
                     "susceptible", "infected",
                     RelationshipParams(contacts_per_day=UNSET,
                                        transmission_likelihood=UNSET)),
        Relationship("recovers", RelationshipKind.RECOVERS,
                     "infected", "recovered",
                     RelationshipParams(recovery_time=UNSET)),
    )
    return ConceptualModel(id=new_id("model"), name="SIR",
                           components=components, relationships=relationships)


_DISTANCING_TABLE = {
    DistancingLevel.LIGHT: (0.5, 12),
    DistancingLevel.MODERATE: (0.71, 25),
    DistancingLevel.INTENSE: (0.84, 28),
}

# Engine defaults for the phenomenon parameters the distancing table does
# not pin down; chosen so all three levels stay supercritical (cases at
# ages onset, onset+interval, ... transmit while younger than duration).
PHENOMENON_STARTING_COUNT = 10
PHENOMENON_DURATION = 30
PHENOMENON_TRANSMISSION_COUNT = 4
PHENOMENON_TRANSMISSION_ONSET = 1


def phenomenon_template(distancing_level: DistancingLevel) -> ConceptualModel:
    """Case-spread model with a social-distancing intervention attached."""
    level = DistancingLevel(distancing_level)
    interaction_probability, interval = _DISTANCING_TABLE[level]
    components = (
        Component("cases", ComponentKind.PHENOMENON, "COVID-19 Cases",
                  ComponentParams(
                      starting_count=PHENOMENON_STARTING_COUNT,
                      duration=PHENOMENON_DURATION,
                      transmission_count=PHENOMENON_TRANSMISSION_COUNT,
                      transmission_onset=PHENOMENON_TRANSMISSION_ONSET,
                      transmission_interval=interval)),
        Component("distancing", ComponentKind.INTERVENTION, "Social Distancing",
                  ComponentParams(
                      interaction_probability=interaction_probability)),
    )
    relationships = (
        Relationship("inhibits", RelationshipKind.INHIBITS,
                     "distancing", "cases"),
    )
    return ConceptualModel(
        id=new_id("model"), name=f"{level.value} Social Distancing",
        components=components, relationships=relationships)


# ---------------------------------------------------------------------------
# document format

def _params_to_dict(params) -> dict:
    out = {}
    for name in params.__dataclass_fields__:
        value = getattr(params, name)
        if value is None:
            continue
        out[name] = None if isinstance(value, Unset) else value
    return out


def model_to_dict(model: ConceptualModel) -> dict:
    doc: dict = {
        "schema_version": model.schema_version,
        "id": model.id,
        "name": model.name,
        "components": [],
        "relationships": [],
    }
    if model.notes is not None:
        doc["notes"] = model.notes
    for c in model.components:
        cd: dict = {"id": c.id, "kind": c.kind.value, "name": c.name,
                    "params": _params_to_dict(c.params)}
        if c.x is not None:
            cd["x"] = c.x
        if c.y is not None:
            cd["y"] = c.y
        doc["components"].append(cd)
    for r in model.relationships:
        doc["relationships"].append({
            "id": r.id, "kind": r.kind.value, "source": r.source,
            "target": r.target, "params": _params_to_dict(r.params),
        })
    return doc


def serialize(model: ConceptualModel) -> bytes:
    return canonical_bytes(model_to_dict(model))


def _require(doc: dict, key: str, where: str):
    if key not in doc:
        raise ParseError(f"missing required field '{key}' in {where}",
                         {"field": key, "where": where})
    return doc[key]


def _warn_unknown(doc: dict, known: set[str], where: str):
    for key in doc:
        if key not in known:
            warnings.warn(
                f"unknown field '{key}' in {where}; ignored",
                ForwardCompatWarning, stacklevel=3)


def _params_from_dict(doc: dict, cls, where: str):
    known = set(cls.__dataclass_fields__)
    _warn_unknown(doc, known, where)
    values = {}
    for name in known:
        if name in doc:
            values[name] = UNSET if doc[name] is None else doc[name]
    return cls(**values)


def _component_from_dict(doc: dict) -> Component:
    where = f"component '{doc.get('id', '?')}'"
    _warn_unknown(doc, {"id", "kind", "name", "params", "x", "y"}, where)
    kind_raw = _require(doc, "kind", where)
    try:
        kind = ComponentKind(kind_raw)
    except ValueError:
        raise ParseError(f"unknown component kind '{kind_raw}' in {where}",
                         {"kind": kind_raw}) from None
    return Component(
        id=str(_require(doc, "id", where)),
        kind=kind,
        name=str(_require(doc, "name", where)),
        params=_params_from_dict(doc.get("params", {}), ComponentParams, where),
        x=doc.get("x"),
        y=doc.get("y"),
    )


def _relationship_from_dict(doc: dict) -> Relationship:
    where = f"relationship '{doc.get('id', '?')}'"
    _warn_unknown(doc, {"id", "kind", "source", "target", "params"}, where)
    kind_raw = _require(doc, "kind", where)
    try:
        kind = RelationshipKind(kind_raw)
    except ValueError:
        raise ParseError(f"unknown relationship kind '{kind_raw}' in {where}",
                         {"kind": kind_raw}) from None
    return Relationship(
        id=str(_require(doc, "id", where)),
        kind=kind,
        source=str(_require(doc, "source", where)),
        target=str(_require(doc, "target", where)),
        params=_params_from_dict(doc.get("params", {}), RelationshipParams,
                                 where),
    )


def model_from_dict(doc: dict) -> ConceptualModel:
    if not isinstance(doc, dict):
        raise ParseError("model document must be a JSON object")
    _warn_unknown(doc, {"schema_version", "id", "name", "notes",
                        "components", "relationships"}, "model document")
    version = doc.get("schema_version", SCHEMA_VERSION)
    if not isinstance(version, int) or version > SCHEMA_VERSION:
        raise VersionError(
            f"unsupported schema_version {version!r}; this build reads <= "
            f"{SCHEMA_VERSION}", {"schema_version": version})
    return ConceptualModel(
        id=str(_require(doc, "id", "model document")),
        name=str(_require(doc, "name", "model document")),
        components=tuple(_component_from_dict(c)
                         for c in doc.get("components", [])),
        relationships=tuple(_relationship_from_dict(r)
                            for r in doc.get("relationships", [])),
        notes=doc.get("notes"),
        schema_version=version,
    )


def deserialize(data: bytes) -> ConceptualModel:
    try:
        doc = json.loads(data.decode("utf-8"))
    except UnicodeDecodeError as exc:
        raise ParseError(f"model document is not UTF-8: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ParseError(
            f"malformed model document: {exc.msg} at line {exc.lineno} "
            f"column {exc.colno}",
            {"line": exc.lineno, "column": exc.colno}) from exc
    return model_from_dict(doc)


def with_param(model: ConceptualModel, element_id: str, name: str,
               value: ParamValue) -> ConceptualModel:
    """Functional single-parameter update used by overrides and the tests."""
    for i, c in enumerate(model.components):
        if c.id == element_id:
            params = replace(c.params, **{name: value})
            comps = list(model.components)
            comps[i] = replace(c, params=params)
            return replace(model, components=tuple(comps))
    for i, r in enumerate(model.relationships):
        if r.id == element_id:
            params = replace(r.params, **{name: value})
            rels = list(model.relationships)
            rels[i] = replace(r, params=params)
            return replace(model, relationships=tuple(rels))
    raise KeyError(element_id)
