"""Kernel selection: compiled extension if importable, numpy fallback otherwise.

Set L1GV_PURE=1 to force the fallback.
"""
import os

import numpy as np

from . import _fallback

BACKEND = "python"
_impl = _fallback
if os.environ.get("L1GV_PURE", "") not in ("1", "true", "yes"):
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]

        BACKEND = "compiled"
    except ImportError:  # pragma: no cover - depends on the build
        _impl = _fallback

diag_accumulate = _impl.diag_accumulate
shift_accumulate = _impl.shift_accumulate

_TABLE_LIMIT = 256  # max codes per chunk; keeps the table in cache


def _chunking(base, length):
    c = 1
    while c < length and base ** (c + 1) <= _TABLE_LIMIT:
        c += 1
    return c


def _encode(X, base, c):
    n, L = X.shape
    nchunks = -(-L // c) if L else 1
    pad = nchunks * c - L
    if pad:
        X = np.concatenate([X, np.zeros((n, pad), dtype=X.dtype)], axis=1)
    weights = base ** np.arange(c - 1, -1, -1, dtype=np.int64)
    codes = X.reshape(n, nchunks, c).astype(np.int64) @ weights
    return np.ascontiguousarray(codes.T, dtype=np.int32)


def _table(base, c):
    digits = np.array(np.unravel_index(np.arange(base ** c), (base,) * c)).T
    return np.ascontiguousarray(np.abs(digits[:, None, :] - digits[None, :, :]).sum(axis=2), dtype=np.int32)


def pair_histogram(U, lu, V, lv, nlu, nlv, smax, impl=None):
    """hist[lu[i], lv[j], L1(U[i], V[j])] over every ordered pair, distances <= smax.

    Coordinates are packed into chunks so each pair costs a few table lookups.
    """
    impl = impl or _impl
    U = np.asarray(U, dtype=np.int64)
    V = np.asarray(V, dtype=np.int64)
    if U.ndim != 2 or V.ndim != 2 or U.shape[1] != V.shape[1]:
        raise ValueError("vector length mismatch")
    if min(U.size, V.size, 1) and (U.min() < 0 or V.min() < 0):
        raise ValueError("coordinates must be nonnegative")
    lu = np.ascontiguousarray(lu, dtype=np.int64)
    lv = np.ascontiguousarray(lv, dtype=np.int64)
    if len(U) == 0 or len(V) == 0:
        return np.zeros((nlu, nlv, smax + 1), dtype=np.int64)
    base = int(max(U.max(initial=0), V.max(initial=0))) + 1
    c = _chunking(base, U.shape[1])
    T = _table(base, c)
    return impl.pair_histogram_coded(_encode(U, base, c), lu, _encode(V, base, c), lv, T, nlu, nlv, smax)
