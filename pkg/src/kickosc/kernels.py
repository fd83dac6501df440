"""Backend selection for the hot kernels.

The compiled Cython module is used when it imports; otherwise the numpy
fallback. Set ``KICKOSC_BACKEND=python`` to force the fallback.
"""

import os

from kickosc import _fallback

if os.environ.get("KICKOSC_BACKEND", "").lower() == "python":
    _impl = _fallback
else:
    try:
        from kickosc import _native as _impl
    except ImportError:
        _impl = _fallback

BACKEND = "native" if _impl is not _fallback else "python"

u_recurrence = _impl.u_recurrence
direct_product = _impl.direct_product
log_energy_trajectory = _impl.log_energy_trajectory
probe_summary = _impl.probe_summary

__all__ = [
    "BACKEND",
    "u_recurrence",
    "direct_product",
    "log_energy_trajectory",
    "probe_summary",
]
