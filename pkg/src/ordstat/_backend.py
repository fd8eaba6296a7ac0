"""Selects the kernel backend at import time.

The compiled extension (ordstat._ckernels) is preferred when it imports;
otherwise the pure-Python kernels are used. Set ORDSTAT_BACKEND=python or
ORDSTAT_BACKEND=cython to force one (forcing cython when the extension is
not built raises at import). Tests and benchmarks can switch at runtime
with set_backend().
"""

import os

from . import _pykernels

try:
    from . import _ckernels
except ImportError:
    _ckernels = None

_NAMES = {"python": _pykernels, "cython": _ckernels}


def _initial():
    forced = os.environ.get("ORDSTAT_BACKEND", "").strip().lower()
    if forced:
        if forced not in _NAMES:
            raise ValueError(f"ORDSTAT_BACKEND must be 'python' or 'cython', got {forced!r}")
        if _NAMES[forced] is None:
            raise ImportError("ORDSTAT_BACKEND=cython but the compiled kernels are not built")
        return _NAMES[forced]
    return _ckernels if _ckernels is not None else _pykernels


_active = _initial()


def active_backend() -> str:
    """Name of the backend currently answering kernel calls."""
    return "cython" if _active is _ckernels else "python"


def available_backends() -> tuple[str, ...]:
    return ("python", "cython") if _ckernels is not None else ("python",)


def kernels():
    return _active


def get_kernels(name: str):
    """Kernel module for an explicit backend name, e.g. for benchmarks."""
    if name not in _NAMES:
        raise ValueError(f"unknown backend {name!r}")
    mod = _NAMES[name]
    if mod is None:
        raise ImportError("compiled kernels are not built")
    return mod


def set_backend(name: str) -> None:
    global _active
    _active = get_kernels(name)
