"""Kernel selection: compiled extension if available, pure fallback otherwise.

Set ``QUADMAPS_PURE_PYTHON=1`` to force the fallback (used by the kernel
benchmark and the cross-implementation tests).
"""

import os

from . import _fallback

if os.environ.get("QUADMAPS_PURE_PYTHON", "") == "1":
    _impl = _fallback
    HAVE_SPEEDUPS = False
else:
    try:
        from . import _speedups as _impl

        HAVE_SPEEDUPS = True
    except ImportError:
        _impl = _fallback
        HAVE_SPEEDUPS = False

IMPLEMENTATION = "compiled" if HAVE_SPEEDUPS else "fallback"

orbit_labels = _impl.orbit_labels
bfs_distances = _impl.bfs_distances
successor_links = _impl.successor_links
decode_forest = _impl.decode_forest
propagate_labels = _impl.propagate_labels
metric_discrepancy = _impl.metric_discrepancy
