"""Backend selection for the hot loops.

The compiled module is used when it imports and the inputs fit in int64; otherwise the
pure-Python twin runs.  Set TERNCLASS_PURE=1 to force the Python path.
"""

from __future__ import annotations

import os
from math import isqrt

from . import _pykernels

_impl = None
if not os.environ.get("TERNCLASS_PURE"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]
    except ImportError:  # not built
        _impl = None

BACKEND = "cython" if _impl is not None else "python"
_LIMIT = 1 << 62


def _fits_enum(a, b, c, f, e, h, bound) -> bool:
    d2 = a * b - h * h
    det = c * d2 - a * f * f - b * e * e + 2 * f * e * h
    if det <= 0:
        return False
    zmax = isqrt(bound * d2 // det)
    p = abs(a * f - h * e) * zmax
    r = abs(a * c - e * e) * zmax * zmax + a * bound
    m = max(abs(a), abs(b), abs(c), abs(f), abs(e), abs(h))
    worst = max(bound * d2, p * p + d2 * r, 16 * m * m * (zmax + 1) ** 2 * (bound + 1) + a * bound)
    return worst < _LIMIT and m * m * 8 < _LIMIT


def enum_vectors(a, b, c, f, e, h, bound, zlo, zhi):
    if _impl is not None and _fits_enum(a, b, c, f, e, h, bound) and abs(zlo) < _LIMIT and abs(zhi) < _LIMIT:
        return _impl.enum_vectors(a, b, c, f, e, h, bound, zlo, zhi)
    return _pykernels.enum_vectors(a, b, c, f, e, h, bound, zlo, zhi)


def reduced_candidates(d: int):
    if _impl is not None and d < (1 << 40):
        return _impl.reduced_candidates(d)
    return _pykernels.reduced_candidates(d)
