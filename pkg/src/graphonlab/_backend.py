"""Kernel backend selection.

The compiled extension is preferred; the pure-Python module is the drop-in
fallback.  Set GRAPHONLAB_PURE=1 to force the fallback (used by the
benchmark and the cross-backend tests).
"""

import os

from . import _kernels_py

if os.environ.get("GRAPHONLAB_PURE", "") not in ("", "0"):
    kernels = _kernels_py
else:
    try:
        from . import _speed as kernels  # type: ignore[no-redef]
    except ImportError:
        kernels = _kernels_py

BACKEND = "compiled" if kernels.IS_COMPILED else "pure"


def backend_name() -> str:
    return BACKEND
