"""Backend selection for the numerical kernels.

The compiled Cython module is used when it was built at install time.
Setting ``SENSORPCA_PURE_PYTHON=1`` forces the numpy fallback.
"""

import os

from . import _kernels_py

BACKEND = "python"

if os.environ.get("SENSORPCA_PURE_PYTHON", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
else:
    _impl = _kernels_py

jacobi_eigh = _impl.jacobi_eigh
slot_sums = _impl.slot_sums

__all__ = ["BACKEND", "jacobi_eigh", "slot_sums"]
