"""Backend selection for the hot kernels.

The compiled ``_kernels`` extension is used when importable; otherwise, or
when ``OPTIMAL_PAC_PURE_PYTHON`` is set to a non-empty value, the numpy
fallback is used. Both produce identical results.
"""

import os
from functools import lru_cache

from . import _fallback

_impl = _fallback
BACKEND = "python"
if not os.environ.get("OPTIMAL_PAC_PURE_PYTHON"):
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        pass


def available_backends():
    out = {"python": _fallback}
    try:
        from . import _kernels

        out["cython"] = _kernels
    except ImportError:
        pass
    return out


@lru_cache(maxsize=32)
def family_matrix(m: int):
    """Cached, read-only family index matrix for ``m`` master points (empty tail)."""
    out = _impl.family_matrix(int(m))
    out.setflags(write=False)
    return out


def subsample_extrema(family, lo, hi):
    return _impl.subsample_extrema(family, lo, hi)


def box_vote_counts(lo, hi, X):
    return _impl.box_vote_counts(lo, hi, X)
