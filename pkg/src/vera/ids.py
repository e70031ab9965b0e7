"""Generated identifiers: unique and lexicographically sortable by creation time.

Format: ``<prefix>-<16 hex digits of ns timestamp>-<6 hex random>``.  The
fixed-width timestamp makes plain string sort equal to creation order, which
is what the file store relies on for chronological listings.
"""
import secrets
import threading
import time

_lock = threading.Lock()
_last_ns = 0


def new_id(prefix: str) -> str:
    global _last_ns
    with _lock:
        ns = time.time_ns()
        if ns <= _last_ns:  # same-tick collision: force monotonicity
            ns = _last_ns + 1
        _last_ns = ns
    return f"{prefix}-{ns:016x}-{secrets.token_hex(3)}"
