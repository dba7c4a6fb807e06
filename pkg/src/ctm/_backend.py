"""Pick the simulation kernel at import time.

The compiled ``_ckernel`` is preferred; set ``CTM_PURE_PYTHON=1`` to force
the pure-Python kernel, or ask for one explicitly with :func:`get_kernel`.
"""
from __future__ import annotations

import importlib
import os
from types import ModuleType

from . import _pykernel


def get_kernel(name: str = "auto") -> ModuleType:
    if name == "python":
        return _pykernel
    if name == "cython":
        return importlib.import_module("ctm._ckernel")
    if name != "auto":
        raise ValueError(f"unknown kernel {name!r}")
    if os.environ.get("CTM_PURE_PYTHON", "") not in ("", "0"):
        return _pykernel
    try:
        return importlib.import_module("ctm._ckernel")
    except ImportError:
        return _pykernel


kernel = get_kernel()
BACKEND: str = kernel.NAME
