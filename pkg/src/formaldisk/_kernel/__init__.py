"""Kernel selection: compiled extension if built, pure Python otherwise.

Set ``FORMALDISK_PURE=1`` to force the pure fallback (used by the benchmark
and by tests that compare the two implementations).
"""

import os

from . import _pure

if os.environ.get("FORMALDISK_PURE"):
    _impl = _pure
    BACKEND = "pure"
else:
    try:
        from . import _core as _impl  # type: ignore[attr-defined]
        BACKEND = "compiled"
    except ImportError:
        _impl = _pure
        BACKEND = "pure"

poly_mul = _impl.poly_mul
poly_axpy = _impl.poly_axpy
state_mul_sym = _impl.state_mul_sym
state_deriv_sym = _impl.state_deriv_sym
state_axpy = _impl.state_axpy

__all__ = [
    "BACKEND",
    "poly_mul",
    "poly_axpy",
    "state_mul_sym",
    "state_deriv_sym",
    "state_axpy",
]
