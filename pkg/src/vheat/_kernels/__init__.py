"""Kernel backend selection.

The hot numerical loops exist twice: a compiled Cython extension
(``_ckernels``) and a pure NumPy fallback (``py_backend``) with identical
semantics.  The compiled one is picked automatically when its build
succeeded; ``VHEAT_BACKEND=python`` or ``VHEAT_BACKEND=cython`` forces
the choice (the latter raises if the extension is missing).
"""

from __future__ import annotations

import os

from . import py_backend

try:
    from . import _ckernels
except ImportError:
    _ckernels = None


def _select():
    forced = os.environ.get("VHEAT_BACKEND", "").strip().lower()
    if forced in ("python", "numpy"):
        return py_backend
    if forced == "cython":
        if _ckernels is None:
            raise ImportError("VHEAT_BACKEND=cython but the compiled extension is not built")
        return _ckernels
    if forced:
        raise ImportError(f"unknown VHEAT_BACKEND value {forced!r} (use 'cython' or 'python')")
    return _ckernels if _ckernels is not None else py_backend


backend = _select()

BACKEND_NAME: str = backend.NAME

REGIME_ZERO = py_backend.REGIME_ZERO
REGIME_GENERIC = py_backend.REGIME_GENERIC
REGIME_NEAR_CRITICAL = py_backend.REGIME_NEAR_CRITICAL


def available_backends() -> list[str]:
    """Names of the backends importable in this environment."""
    names = ["numpy"]
    if _ckernels is not None:
        names.insert(0, "cython")
    return names


def get_backend(name: str | None = None):
    """Return a backend module by name, or the active one."""
    if name is None:
        return backend
    if name in ("python", "numpy"):
        return py_backend
    if name == "cython":
        if _ckernels is None:
            raise ImportError("compiled kernels are not built")
        return _ckernels
    raise ValueError(f"unknown backend {name!r}")
