"""Kernel backend selection.

Prefers the compiled extension, falls back to the pure-Python mirror.
Set DAORACLE_BACKEND=pure (or =compiled) to force a choice; forcing
"compiled" raises if the extension is missing rather than silently
degrading, so benchmarks cannot lie.
"""

from __future__ import annotations

import os

from . import _pure

_requested = os.environ.get("DAORACLE_BACKEND", "").strip().lower()

if _requested == "pure":
    _impl = _pure
    BACKEND = "pure"
elif _requested == "compiled":
    from . import _speedups as _impl  # type: ignore[no-redef]

    BACKEND = "compiled"
else:
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:
        _impl = _pure
        BACKEND = "pure"

find_stopping_sets = _impl.find_stopping_sets
alternating_paths = _impl.alternating_paths


def backend_name() -> str:
    return BACKEND
