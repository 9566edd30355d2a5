"""Kernel selection: compiled extension if built, numpy fallback otherwise.

Set GRIG_PURE_PYTHON=1 to force the fallback (used by the benchmark and for
debugging).
"""

import os

if os.environ.get("GRIG_PURE_PYTHON"):
    from grig._kernel_py import BACKEND, compose, inverse, strip
else:
    try:
        from grig._speedups import BACKEND, compose, inverse, strip
    except ImportError:  # extension not built on this install
        from grig._kernel_py import BACKEND, compose, inverse, strip

__all__ = ["BACKEND", "compose", "inverse", "strip"]
