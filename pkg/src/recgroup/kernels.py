"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the numpy
fallback.  Set ``RECGROUP_PURE_PYTHON=1`` before import to force the
fallback, or call :func:`use_backend` at runtime.
"""
import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:  # extension not built
    _ckernels = None

_BACKENDS = {"python": _pykernels}
if _ckernels is not None:
    _BACKENDS["cython"] = _ckernels

_active = _pykernels if os.environ.get("RECGROUP_PURE_PYTHON") or _ckernels is None else _ckernels


def available_backends():
    return sorted(_BACKENDS)


def active_backend() -> str:
    return _active.BACKEND


def use_backend(name: str) -> str:
    """Switch backend; returns the previous backend's name."""
    global _active
    if name not in _BACKENDS:
        raise ValueError(f"backend {name!r} not available (have {available_backends()})")
    previous = _active.BACKEND
    _active = _BACKENDS[name]
    return previous


def strongly_connected(*args):
    return _active.strongly_connected(*args)


def successor_table(*args):
    return _active.successor_table(*args)


def greedy_separated(*args):
    return _active.greedy_separated(*args)


def greedy_cover(*args):
    return _active.greedy_cover(*args)
