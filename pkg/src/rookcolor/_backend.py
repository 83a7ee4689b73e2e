"""Select the compiled kernel when available, else the pure-Python one.

Set ``ROOKCOLOR_PURE_PYTHON=1`` to force the fallback.
"""
from __future__ import annotations

import os

from . import _engine

py_engine = _engine.Engine
py_canonical = _engine.canonical

c_engine = None
c_canonical = None
if not os.environ.get("ROOKCOLOR_PURE_PYTHON"):
    try:
        from . import _ckernel
    except ImportError:
        _ckernel = None
    if _ckernel is not None:
        c_engine = _ckernel.CEngine
        c_canonical = _ckernel.canonical

COMPILED = c_engine is not None
NAME = "cython" if COMPILED else "python"


def engine_class(p: int, q: int, k: int, backend: str = "auto"):
    if backend == "python" or not COMPILED:
        return py_engine
    if backend == "cython" or backend == "auto":
        if k <= _ckernel.MAX_COLOURS and max(p, q) <= _ckernel.MAX_SIDE:
            return c_engine
        if backend == "cython":
            raise ValueError("instance exceeds compiled kernel limits")
    return py_engine


def canonical(cells, p: int, q: int, backend: str = "auto"):
    if backend != "python" and COMPILED and p * q <= 256 and max(p, q) <= _ckernel.MAX_SIDE:
        return c_canonical(cells, p, q)
    return py_canonical(cells, p, q)
