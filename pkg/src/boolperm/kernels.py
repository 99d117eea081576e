"""Kernel backend selection.

The compiled extension is preferred when present; the numpy backend is
the fallback. Set BOOLPERM_KERNEL_BACKEND=numpy (or =cython) to force
one, e.g. for benchmarking or debugging.
"""

from __future__ import annotations

import os

from . import _kernels_py

_forced = os.environ.get("BOOLPERM_KERNEL_BACKEND", "").strip().lower()

_impl = None
if _forced in ("", "cython"):
    try:
        from . import _kernels_cy as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = None
        if _forced == "cython":
            raise ImportError(
                "BOOLPERM_KERNEL_BACKEND=cython but the compiled kernel is not built; "
                "reinstall with a C compiler available"
            )
if _impl is None:
    _impl = _kernels_py

BACKEND: str = _impl.BACKEND
chain_product = _impl.chain_product
chain_maxabs_batch = _impl.chain_maxabs_batch
weighted_chain_sum = _impl.weighted_chain_sum
