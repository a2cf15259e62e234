"""Kernel selection: the compiled extension when built, else pure Python.

Set ``TITSGROUP_PURE=1`` to force the fallback.
"""
from __future__ import annotations

import os

BACKEND = "python"

if os.environ.get("TITSGROUP_PURE") != "1":
    try:
        from ._kernels import (act_bits, cocycle_bits, compose,  # noqa: F401
                               inversion_count, invert, mat_vec)
        BACKEND = "cython"
    except ImportError:
        pass

if BACKEND == "python":
    from ._kernels_py import (act_bits, cocycle_bits, compose,  # noqa: F401
                              inversion_count, invert, mat_vec)

__all__ = ["BACKEND", "act_bits", "cocycle_bits", "compose",
           "inversion_count", "invert", "mat_vec"]
