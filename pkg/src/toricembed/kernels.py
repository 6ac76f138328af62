"""Kernel dispatch: the compiled core when it is built and the inputs fit in
int64, the pure-Python module otherwise.

Set ``TORICEMBED_PURE_PYTHON=1`` to force the fallback.
"""

from __future__ import annotations

import math
import os

from . import _kernels_py

_LIMIT = 1 << 62

if os.environ.get("TORICEMBED_PURE_PYTHON"):
    _fast = None
else:
    try:
        from . import _kernels as _fast
    except ImportError:  # extension not built
        _fast = None

BACKEND = "cython" if _fast is not None else "python"


def _union_fits(weights, n) -> bool:
    return (math.isqrt(2 * n) + 2) * (sum(weights) + 1) < _LIMIT


def _convex_fits(B, union, S, K) -> bool:
    d = math.isqrt(2 * len(union)) + 2
    lead = d * B + (max(union) if union else 0)
    return max(B * B * (2 * d + 3) ** 2, B * B * (9 + 8 * K), lead * lead,
               (d * d + 3 * d) * S) < _LIMIT


def ball_union(weights, n, backend=None):
    weights = [int(w) for w in weights]
    impl = _pick(backend, _union_fits(weights, n))
    return impl.ball_union(weights, n)


def convex_sequence(B, union, S, K, backend=None):
    impl = _pick(backend, _convex_fits(B, union, S, K))
    return impl.convex_sequence(B, union, S, K)


def _pick(backend, fits):
    if backend == "python" or _fast is None or not fits:
        if backend == "cython" and _fast is None:
            raise RuntimeError("compiled kernels are not built")
        return _kernels_py
    return _fast


def initial_union_size(B, S, K) -> int:
    """Union length that usually suffices; callers grow it on IndexError."""
    gap = B * B - S
    d = math.sqrt(B * B * (9 + 8 * K) / gap) / 2 + 2
    return int(1.2 * (d * d + 3 * d) / 2) + 16


def convex_capacities_scaled(B, weights, K, backend=None):
    """Integer convex-domain capacities c_0..c_K of (B; weights), all scaled."""
    S = sum(w * w for w in weights)
    n = initial_union_size(B, S, K)
    while True:
        union = ball_union(weights, n, backend)
        try:
            return convex_sequence(B, union, S, K, backend)
        except IndexError:
            n *= 2
