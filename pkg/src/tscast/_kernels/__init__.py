"""Hot-loop kernels with a compiled core and a pure-Python fallback.

The Cython extension ``_core`` is preferred when it was built; otherwise
(or when the TSCAST_PURE_KERNELS environment variable is set to a
non-empty value) the pure-Python twin ``_pure`` is used. Both expose the
same functions with identical semantics; ``benchmarks/bench_kernels.py``
compares their throughput.
"""

import os

from . import _pure

if os.environ.get("TSCAST_PURE_KERNELS"):
    _impl = _pure
else:
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        _impl = _pure

BACKEND = "compiled" if _impl is not _pure else "pure"

hw_sse = _impl.hw_sse
arma_residuals = _impl.arma_residuals
local_level_loglik = _impl.local_level_loglik

SEASONAL_NONE = _pure.SEASONAL_NONE
SEASONAL_ADDITIVE = _pure.SEASONAL_ADDITIVE
SEASONAL_MULTIPLICATIVE = _pure.SEASONAL_MULTIPLICATIVE

__all__ = [
    "BACKEND",
    "hw_sse",
    "arma_residuals",
    "local_level_loglik",
    "SEASONAL_NONE",
    "SEASONAL_ADDITIVE",
    "SEASONAL_MULTIPLICATIVE",
]
