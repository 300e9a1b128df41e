"""Kernel backend selection.

The compiled extension is used when it imports; ``ISLANDDE_BACKEND=python``
forces the numpy fallback.
"""
from __future__ import annotations

import os

from . import _pykernels

python_kernels = _pykernels

try:
    from . import _kernels as compiled_kernels
except ImportError:  # extension not built
    compiled_kernels = None

if os.environ.get("ISLANDDE_BACKEND", "").lower() == "python" or compiled_kernels is None:
    kernels = _pykernels
else:
    kernels = compiled_kernels


def available() -> dict:
    out = {"python": _pykernels}
    if compiled_kernels is not None:
        out["cython"] = compiled_kernels
    return out


def get(name: str | None = None):
    if name is None:
        return kernels
    try:
        return available()[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} not available") from None
