"""Kernel backend selection: compiled extension if importable, numpy otherwise.

Set MAWPCN_PURE_PYTHON=1 to force the numpy fallback (useful for benchmarking
and for debugging suspected extension issues).  Both backends implement the
identical call surface; see _kernels_py for the reference semantics.
"""

import os

if os.environ.get("MAWPCN_PURE_PYTHON", "").lower() in ("1", "true", "yes"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _kernels_py as _impl

BACKEND = _impl.BACKEND
field_response = _impl.field_response
gain4_value = _impl.gain4_value
gain4_value_gradient = _impl.gain4_value_gradient
gain4_hessian = _impl.gain4_hessian
curvature_bound = _impl.curvature_bound
