"""Pure numpy versions of the compiled kernels in _kernels.pyx."""
import numpy as np

_BLOCK = 1 << 22  # pair distances materialized per chunk of rows


def pair_histogram_coded(CU, lu, CV, lv, T, nlu, nlv, smax):
    CU = np.asarray(CU)
    CV = np.asarray(CV)
    if CU.shape[0] != CV.shape[0]:
        raise ValueError("chunk count mismatch")
    lu = np.asarray(lu, dtype=np.int64)
    lv = np.asarray(lv, dtype=np.int64)
    out = np.zeros(nlu * nlv * (smax + 1), dtype=np.int64)
    n2 = max(CV.shape[1], 1)
    rows = max(1, _BLOCK // n2)
    for i0 in range(0, CU.shape[1], rows):
        sl = slice(i0, i0 + rows)
        d = np.zeros((len(lu[sl]), CV.shape[1]), dtype=np.int64)
        for c in range(CU.shape[0]):
            d += T[CU[c, sl][:, None], CV[c][None, :]]
        keep = d <= smax
        key = (lu[sl, None] * nlv + lv[None, :]) * (smax + 1) + d
        out += np.bincount(key[keep], minlength=out.size)
    return out.reshape(nlu, nlv, smax + 1)


def diag_accumulate(Y, p):
    for a in range(1, Y.shape[0]):
        row = Y[a, 1:] + Y[a - 1, :-1]
        row[row >= p] -= p
        Y[a, 1:] = row


def shift_accumulate(X, p, axis):
    if axis not in (0, 1):
        raise ValueError("axis must be 0 or 1")
    X = np.moveaxis(X, axis, 0)
    E = np.zeros_like(X)
    for a in range(1, X.shape[0]):
        t = X[a - 1, :, :-1] + E[a - 1, :, :-1]
        t[t >= p] -= p
        E[a, :, 1:] = t
    return np.ascontiguousarray(np.moveaxis(E, 0, axis))
