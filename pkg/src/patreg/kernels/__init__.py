"""Grouped aggregation kernels with a numba path and a pure-numpy fallback.

Set ``PATREG_DISABLE_NUMBA=1`` (or run without numba installed) to use the
numpy implementations. ``BACKEND`` names the active one.
"""

from __future__ import annotations

import os

from . import _numpy

_KERNELS = ("expand_segments", "group_distinct_count", "group_max", "group_min",
            "group_argmin2", "lookup_sorted")


def _load_numba():
    if os.environ.get("PATREG_DISABLE_NUMBA", "").strip() not in ("", "0"):
        return None
    try:
        from . import _numba
    except ImportError:
        return None
    return _numba


_impl = _load_numba() or _numpy
BACKEND = "numba" if _impl is not _numpy else "numpy"

expand_segments = _impl.expand_segments
group_distinct_count = _impl.group_distinct_count
group_max = _impl.group_max
group_min = _impl.group_min
group_argmin2 = _impl.group_argmin2
lookup_sorted = _impl.lookup_sorted


def backend(name: str):
    """Module implementing ``name`` ("numba" or "numpy"); used by parity tests and benchmarks."""
    if name == "numpy":
        return _numpy
    from . import _numba
    return _numba


def warmup() -> None:
    """Trigger JIT compilation (or cache load) of every kernel."""
    import numpy as np

    z = np.zeros(1, dtype=np.int64)
    one = np.ones(1, dtype=np.int64)
    expand_segments(z, one)
    group_distinct_count(z, z, 1)
    group_distinct_count(z, z.astype(np.uint64), 1)
    group_max(z, z, 1, 0)
    group_min(z, z, 1, 0)
    group_argmin2(z, z, z, 1)
    lookup_sorted(z, z)
