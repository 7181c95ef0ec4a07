"""Backend selection for the hot loops.

The compiled extension is used when it imports; ``GENSQUEEZE_PURE_PYTHON=1``
forces the numpy fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py

if os.environ.get("GENSQUEEZE_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _compiled
    except ImportError:
        pass
    else:
        _impl = _compiled
        BACKEND = "compiled"

rk4_sector_chain = _impl.rk4_sector_chain
gh_log_quadratic = _impl.gh_log_quadratic

__all__ = ["BACKEND", "rk4_sector_chain", "gh_log_quadratic"]
