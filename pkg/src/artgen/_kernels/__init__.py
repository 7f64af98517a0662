"""Kernel backend selection.

The tree-edit-distance dynamic program is the hot loop of corpus statistics
(quadratic in corpus size times roughly quadratic per pair). A compiled
Cython kernel is used when available; the pure-Python twin has the same
signature and produces identical integers. Set ARTGEN_PURE_PY=1 to force the
fallback (the benchmark uses this to compare both).
"""

import os

from . import ted_py

if os.environ.get("ARTGEN_PURE_PY"):
    _impl = ted_py
    BACKEND = "python"
else:
    try:
        from . import _ted as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = ted_py
        BACKEND = "python"

tree_distance = _impl.tree_distance


def available_backends() -> dict[str, object]:
    """Name -> module for every importable kernel implementation."""
    backends = {"python": ted_py}
    try:
        from . import _ted  # type: ignore[attr-defined]

        backends["compiled"] = _ted
    except ImportError:
        pass
    return backends
