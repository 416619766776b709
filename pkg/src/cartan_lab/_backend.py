"""Kernel backend selection.

The compiled extension is preferred; the pure-Python module is used when the
extension is missing or ``CARTAN_LAB_PURE_PYTHON`` is set to a non-empty value.
"""
import os

from . import _kernels_py

if os.environ.get("CARTAN_LAB_PURE_PYTHON"):
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]

        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py
        BACKEND = "python"

poly_mul_mod = _impl.poly_mul_mod
jacobi_eigvalsh = _impl.jacobi_eigvalsh

__all__ = ["BACKEND", "poly_mul_mod", "jacobi_eigvalsh"]
