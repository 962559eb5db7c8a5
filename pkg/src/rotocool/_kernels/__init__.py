"""Kernel backend selection.

Prefers the compiled extension; falls back to the numpy implementation
when the extension is missing or ROTOCOOL_FORCE_FALLBACK=1 is set.
"""
import os

if os.environ.get("ROTOCOOL_FORCE_FALLBACK") == "1":
    from . import _fallback as _impl
else:
    try:
        from . import _core as _impl
    except ImportError:
        from . import _fallback as _impl

BACKEND = _impl.BACKEND_NAME
bessel_j_vec = _impl.bessel_j_vec
cross_integrand = _impl.cross_integrand
prec_integrand = _impl.prec_integrand

__all__ = ["BACKEND", "bessel_j_vec", "cross_integrand", "prec_integrand"]
