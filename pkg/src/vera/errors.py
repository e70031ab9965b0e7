"""Exception and warning hierarchy shared across the workbench."""


class VeraError(Exception):
    """Base class for all workbench errors."""

    code = "error"

    def __init__(self, message: str, details: dict | None = None):
        super().__init__(message)
        self.message = message
        self.details = details or {}


class ParseError(VeraError):
    """A document could not be parsed; details carry the location."""

    code = "parse_error"


class FormatError(VeraError):
    """A file does not have the expected overall shape (e.g. CSV header)."""

    code = "format_error"


class VersionError(VeraError):
    """A document declares a schema version newer than this build."""

    code = "version_error"


class CompileError(VeraError):
    """A model cannot be compiled into a runnable simulation spec."""

    code = "compile_error"


class OverrideError(VeraError):
    """An override addresses a missing element or inapplicable parameter."""

    code = "override_error"


class IntegrationError(VeraError):
    """The ODE integrator produced a non-finite state."""

    code = "integration_error"


class AgentCapError(VeraError):
    """The requested population exceeds the agent-based engine's cap."""

    code = "agent_cap_exceeded"


class FitError(VeraError):
    """Parameter fitting had too little usable data."""

    code = "fit_error"


class NotFoundError(VeraError):
    """A referenced entity does not exist in the store."""

    code = "not_found"


class IntegrityError(VeraError):
    """A store operation would break referential integrity."""

    code = "integrity_error"


class StoreError(VeraError):
    """Low-level persistence failure."""

    code = "store_error"


class ForwardCompatWarning(UserWarning):
    """Unknown field in a document; accepted and ignored."""


class DataWarning(UserWarning):
    """Recoverable data-quality issue (clamped values, skipped rows)."""
