"""vera: a what-if epidemic modeling workbench.

Conceptual models (compartments, interventions, relationships) compile into
seeded stochastic simulations with a deterministic SIR oracle; parameters
can be fitted from cumulative case-count data; scenarios are compared
against a healthcare-capacity threshold.
"""
__version__ = "0.1.0"

from .compiler import (
    Overrides,
    SimulationSpec,
    apply_overrides,
    compile_model,
    effective_beta,
)
from .datafit import (
    Dataset,
    FitResult,
    derive_spec_inputs,
    fit_growth,
    parse_time_series_csv,
    to_daily,
)
from .engine import (
    RunMetrics,
    Trajectory,
    ensemble,
    metrics,
    run_abm,
    run_ode,
    run_phenomenon,
)
from .model import (
    UNSET,
    ComponentKind,
    ConceptualModel,
    DistancingLevel,
    RelationshipKind,
    ValidationReport,
    deserialize,
    phenomenon_template,
    serialize,
    sir_template,
    validate_model,
)

__all__ = [
    "UNSET",
    "ComponentKind",
    "ConceptualModel",
    "Dataset",
    "DistancingLevel",
    "FitResult",
    "Overrides",
    "RelationshipKind",
    "RunMetrics",
    "SimulationSpec",
    "Trajectory",
    "ValidationReport",
    "apply_overrides",
    "compile_model",
    "derive_spec_inputs",
    "deserialize",
    "effective_beta",
    "ensemble",
    "fit_growth",
    "metrics",
    "parse_time_series_csv",
    "phenomenon_template",
    "run_abm",
    "run_ode",
    "run_phenomenon",
    "serialize",
    "sir_template",
    "to_daily",
    "validate_model",
]
