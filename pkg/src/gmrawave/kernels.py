"""Kernel selection: the compiled module when importable, else the NumPy fallback.

Set ``GMRAWAVE_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _kernels_py

if os.environ.get("GMRAWAVE_PURE_PYTHON") == "1":
    _impl = _kernels_py
else:
    try:
        from . import _kernels as _impl
    except ImportError:
        _impl = _kernels_py

BACKEND = "compiled" if _impl is not _kernels_py else "python"

batched_matmul = _impl.batched_matmul
exp_integrals = _impl.exp_integrals
level_energy = _impl.level_energy
