"""Kernel-lane selection: compiled extension when available, NumPy fallback.

Set QUATFRAC_KERNELS=numpy (or =cython) to force a lane; the default picks
the compiled lane when the extension was built.  Both lanes implement the
same contracts (see _kernels_np) and are individually deterministic.
"""

import os

from . import _kernels_np

_requested = os.environ.get("QUATFRAC_KERNELS", "auto")

if _requested == "numpy":
    _impl = _kernels_np
    BACKEND = "numpy"
else:
    try:
        from . import _kernels_cy as _impl

        BACKEND = "cython"
    except ImportError:
        if _requested == "cython":
            raise
        _impl = _kernels_np
        BACKEND = "numpy"

cauchy_batch = _impl.cauchy_batch
cauchy_dbatch = _impl.cauchy_dbatch
accumulate_kernel_left = _impl.accumulate_kernel_left
accumulate_kernel_right = _impl.accumulate_kernel_right
frak_kernel_batch = _impl.frak_kernel_batch
