"""Neighbor-search kernel selection.

The compiled Cython kernel is preferred; a pure-numpy twin with the same
contract is used when the extension is not built. ``SIGBENCH_KERNEL=numpy``
or ``SIGBENCH_KERNEL=cython`` forces a backend (the latter raises if the
extension is missing), which the backend benchmark relies on.
"""

from __future__ import annotations

import os
import warnings

_requested = os.environ.get("SIGBENCH_KERNEL", "").strip().lower()

if _requested in ("", "cython"):
    try:
        from . import _neighbors_cy as _impl

        BACKEND = "cython"
    except ImportError:
        if _requested == "cython":
            raise
        warnings.warn(
            "sigbench: compiled neighbor kernel not available; "
            "using the slower numpy fallback",
            RuntimeWarning,
            stacklevel=2,
        )
        from . import _neighbors_np as _impl

        BACKEND = "numpy"
elif _requested in ("numpy", "fallback", "python"):
    from . import _neighbors_np as _impl

    BACKEND = "numpy"
else:
    raise ImportError(f"unknown SIGBENCH_KERNEL value: {_requested!r}")

region_query = _impl.region_query
distance_row = _impl.distance_row

__all__ = ["BACKEND", "region_query", "distance_row"]
