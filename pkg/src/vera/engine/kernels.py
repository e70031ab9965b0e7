"""Kernel backend selection.

Prefers the compiled extension; falls back to the NumPy implementation when
the extension is missing or VERA_PURE_PYTHON is set.  Both backends produce
bit-identical output (tests enforce this), so the choice only affects speed.
"""
import os

if os.environ.get("VERA_PURE_PYTHON", "").lower() in ("1", "true", "yes"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

sir_chain = _impl.sir_chain
phenomenon_chain = _impl.phenomenon_chain


def backend_name() -> str:
    return _impl.BACKEND
