"""Backend selection for the hot kernels.

The compiled ``_speedups`` extension is used when it imports; otherwise the
pure-Python ``_pure`` module. Set ``K3RM_PURE=1`` to force the fallback.
"""

from __future__ import annotations

import os

from . import _pure

BACKEND = "python"
_impl = _pure

if os.environ.get("K3RM_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _speedups as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pure

reorder_sign = _impl.reorder_sign
orthogonal_table = _impl.orthogonal_table
general_product = _impl.general_product
rref_rational = _impl.rref_rational
det_rational = _impl.det_rational


def backend(name: str):
    """Return the kernel module called ``name`` (``"python"`` or ``"cython"``)."""
    if name == "python":
        return _pure
    if name == "cython":
        from . import _speedups

        return _speedups
    raise ValueError(f"unknown backend {name!r}")
