"""Backend selection for the batch event walk.

The compiled extension is preferred when its build succeeded; the
pure-Python twin keeps every feature working without a compiler.  Both
expose the same ``run_events`` contract (see _pykernel) and the bench
module can time them side by side through ``available_backends``.
"""

from __future__ import annotations

from . import _pykernel

try:
    from . import _ckernel
except ImportError:
    _ckernel = None

if _ckernel is not None:
    BACKEND = "c"
    run_events = _ckernel.run_events
else:
    BACKEND = "python"
    run_events = _pykernel.run_events


def available_backends() -> dict:
    """Name -> run_events callable, for benchmark comparison."""
    backends = {"python": _pykernel.run_events}
    if _ckernel is not None:
        backends["c"] = _ckernel.run_events
    return backends
