"""Evaluation kernels.

The compiled Cython kernel is used when it was built and the model fits in
64 worlds; otherwise the pure-Python kernel runs.  Switch explicitly with
:func:`set_backend`.
"""

from __future__ import annotations

from . import _pykernel

try:
    from . import _ckernel
except ImportError:  # extension not built
    _ckernel = None

__all__ = ["backend", "set_backend", "available_backends", "compiled_available"]

_BACKENDS = {"python": _pykernel}
if _ckernel is not None:
    _BACKENDS["cython"] = _ckernel

_current = _ckernel if _ckernel is not None else _pykernel


def compiled_available() -> bool:
    return _ckernel is not None


def available_backends() -> list:
    return sorted(_BACKENDS)


def backend(n_worlds: int = 0):
    """The active backend, or the Python one when *n_worlds* exceeds its limit."""
    if n_worlds > _current.MAX_WORLDS:
        return _pykernel
    return _current


def set_backend(name: str):
    """Select ``"python"`` or ``"cython"``; returns the previous backend name."""
    global _current
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} unavailable; have {available_backends()}")
    previous = _current.NAME
    _current = _BACKENDS[name]
    return previous
