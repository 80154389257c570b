"""Backend selection for the amplitude integrator.

The compiled extension is used when it imports; ``QDAPULSE_KERNEL=python``
forces the pure-Python mirror (handy for debugging and for the benchmark).
"""
import os

from . import _kernel_py

BACKENDS = {"python": _kernel_py.integrate}

try:
    from . import _kernel as _compiled
except ImportError:  # extension not built
    _compiled = None
else:
    BACKENDS["compiled"] = _compiled.integrate


def _default() -> str:
    wanted = os.environ.get("QDAPULSE_KERNEL", "").strip().lower()
    if wanted:
        if wanted not in BACKENDS:
            raise ImportError(f"QDAPULSE_KERNEL={wanted!r} is not available "
                              f"(have: {', '.join(sorted(BACKENDS))})")
        return wanted
    return "compiled" if "compiled" in BACKENDS else "python"


BACKEND = _default()
integrate = BACKENDS[BACKEND]


def get(name: str | None = None):
    """Return the integrate function for ``name`` (default: the active backend)."""
    return BACKENDS[name or BACKEND]
