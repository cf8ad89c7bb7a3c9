"""Backend selection for the exhaustive scan.

Two interchangeable implementations exist: a jit-compiled kernel and a
chunked vectorized numpy fallback. The environment variable
CRITICAL_MATCH_BACKEND picks one:

  auto   use the jit backend when importable, else numpy (default)
  numba  require the jit backend, fail loudly if unavailable
  numpy  force the fallback

Both return identical results; tests compare them directly.
"""

from __future__ import annotations

import os

from . import _scan_numpy

_ENV = "CRITICAL_MATCH_BACKEND"
_VALID = ("auto", "numba", "numpy")


def resolve_backend(name: str | None = None):
    """Return (backend_name, scan_callable) for the requested backend.

    `name` overrides the environment variable; None consults it.
    """
    if name is None:
        name = os.environ.get(_ENV, "auto")
    name = name.strip().lower()
    if name not in _VALID:
        raise ValueError(f"unknown backend {name!r}, expected one of {_VALID}")
    if name == "numpy":
        return "numpy", _scan_numpy.scan
    try:
        from . import _scan_numba
    except ImportError:
        if name == "numba":
            raise
        return "numpy", _scan_numpy.scan
    return "numba", _scan_numba.scan
