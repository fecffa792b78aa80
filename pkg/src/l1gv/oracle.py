"""Exact finite-n counts: enumeration, brute-force pair counting and DP counters.

N(n1, n2, r, s[, p1, p2]) is the number of ordered pairs (u, v) with u of
weight (or max entry / length) n1, v of n2, and L1 distance s. The DP is run
modulo a few primes below 2^50 in int64 numpy arrays and the needed entries
are recovered with the CRT, so results are exact Python integers.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Dict, Optional, Tuple

import numpy as np

from . import config, kernels
from .spaces import Kind, SpaceFamily

PRIMES = (1125899906842597, 1125899906842589, 1125899906842573, 1125899906842553,
          1125899906842511, 1125899906842507, 1125899906842493, 1125899906842463)


@dataclass
class CountTable:
    kind: Kind
    n1: int
    n2: int
    r: Optional[int] = None
    q: Optional[int] = None
    p1: Optional[int] = None
    p2: Optional[int] = None
    counts: Dict[int, int] = field(default_factory=dict)

    def total(self):
        return sum(self.counts.values())


# parameter plumbing

def _params(family: SpaceFamily, n, r, p):
    dr, dp = family.dims(n)
    if not family.kind.is_hypercube:
        r = dr if r is None else r
        if r is None:
            raise ValueError(f"{family.kind.name} needs r (or rho on the family)")
    if family.kind.constrained:
        p = dp if p is None else p
        if p is None:
            raise ValueError(f"{family.kind.name} needs p (or tau on the family)")
    else:
        p = None
    return r, p


def _pair(p):
    if p is None:
        return None, None
    if isinstance(p, tuple):
        return p
    return p, p


def _comp(n, k):
    """Compositions of n into k positive parts."""
    if k == 0:
        return 1 if n == 0 else 0
    if n < k:
        return 0
    return math.comb(n - 1, k - 1)


def space_size(family: SpaceFamily, n, r=None, p=None) -> int:
    kind = family.kind
    r, p = _params(family, n, r, p)
    if n < 0 or (r is not None and r < 0):
        return 0
    if kind is Kind.StdSimplex:
        return _comp(n + r, r)
    if kind is Kind.PosSimplex:
        return _comp(n, r)
    if kind is Kind.InvSimplex:
        return math.comb(n, r)
    if kind is Kind.Hypercube:
        return family.q ** n
    if p < 0:
        return 0
    if kind is Kind.StdSimplexZeros:
        return math.comb(r, p) * _comp(n, r - p) if p <= r else 0
    if kind is Kind.PosSimplexOnes:
        if p > r:
            return 0
        return math.comb(r, p) * _comp(n - r, r - p) if n >= r else 0
    if kind is Kind.HypercubeZeros:
        return math.comb(n, p) * (family.q - 1) ** (n - p) if p <= n else 0
    raise ValueError(kind)


# enumeration

def _weak_compositions(n, r):
    if r == 0:
        if n == 0:
            yield ()
        return
    if r == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _weak_compositions(n - first, r - 1):
            yield (first,) + rest


def _special_count(kind, vec):
    return sum(1 for v in vec if v == kind.special_value)


def _base_vectors(kind, n, r, q):
    base = kind.base
    if base is Kind.StdSimplex:
        return _weak_compositions(n, r)
    if base is Kind.PosSimplex:
        return (c for c in _weak_compositions(n, r) if all(v >= 1 for v in c))
    if base is Kind.InvSimplex:
        return itertools.combinations(range(1, n + 1), r)
    return itertools.product(range(q), repeat=n)


def enumerate_space(family: SpaceFamily, n, r=None, p=None, cap=None):
    """All members of the space, lexicographically sorted."""
    cap = config.ENUM_CAP if cap is None else cap
    r, p = _params(family, n, r, p)
    size = space_size(family, n, r, p)
    if size > cap:
        raise ValueError(f"space size {size} exceeds enumeration cap {cap}")
    if size == 0:
        return []
    kind = family.kind
    out = _base_vectors(kind, n, r, family.q)
    if kind.constrained:
        out = (v for v in out if _special_count(kind, v) == p)
    # every generator above already emits in lexicographic order
    return list(out)


def _as_array(vectors, length):
    if not vectors:
        return np.zeros((0, length), dtype=np.int64)
    return np.array(vectors, dtype=np.int64).reshape(len(vectors), length)


def _diameter(kind, n1, n2, r, q):
    if kind.is_hypercube:
        return n1 * (q - 1)
    if kind.base is Kind.InvSimplex:
        return r * max(n1, n2)
    return n1 + n2


# brute force

@lru_cache(maxsize=256)
def _bruteforce_hist(kind: Kind, q, n1, n2, r, cap):
    """(labels1, labels2, s) histogram over the unconstrained base spaces.

    Labels are the count of the constrained value in each raw vector.
    """
    fam = SpaceFamily(kind.base, q=q)
    L = r if not kind.is_hypercube else n1
    if kind.is_hypercube and n1 != n2:
        return np.zeros((1, 1, 1), dtype=np.int64)
    U = enumerate_space(fam, n1, r=r, cap=cap)
    V = enumerate_space(fam, n2, r=r, cap=cap)
    smax = _diameter(kind, n1, n2, r, q)
    if kind.constrained:
        lu = [_special_count(kind, u) for u in U]
        lv = [_special_count(kind, v) for v in V]
        nl = L + 1
    else:
        lu, lv, nl = [0] * len(U), [0] * len(V), 1
    return kernels.pair_histogram(_as_array(U, L), lu, _as_array(V, L), lv, nl, nl, smax)


def count_pairs_bruteforce(family: SpaceFamily, n1, n2, s, r=None, p=None, cap=None) -> int:
    """Direct double loop over both spaces; membership of constrained families
    is decided by counting the special value in each raw vector."""
    cap = config.ENUM_CAP if cap is None else cap
    r, p = _params(family, max(n1, n2), r, p)
    kind = family.kind
    if min(n1, n2, s) < 0 or (r is not None and r < 0):
        return 0
    for n in (n1, n2):
        if space_size(SpaceFamily(kind.base, q=family.q), n, r=r) > cap:
            raise ValueError(f"space at n={n} exceeds enumeration cap {cap}")
    h = _bruteforce_hist(kind, family.q, n1, n2, r, cap)
    p1, p2 = _pair(p)
    if kind.constrained:
        if p1 < 0 or p2 < 0 or p1 >= h.shape[0] or p2 >= h.shape[1]:
            return 0
    else:
        p1 = p2 = 0
    if s >= h.shape[2]:
        return 0
    return int(h[p1, p2, s])


@lru_cache(maxsize=64)
def _hypercube_hist(q, n, cap):
    # labelled by zero count; the unconstrained histogram is its marginal
    vecs = enumerate_space(SpaceFamily(Kind.Hypercube, q=q), n, cap=cap)
    A = _as_array(vecs, n) if n else np.zeros((1, 1), dtype=np.int64)
    lab = (A == 0).sum(axis=1) if n else np.zeros(1, dtype=np.int64)
    return kernels.pair_histogram(A, lab, A, lab, n + 1, n + 1, n * (q - 1))


def bruteforce_sweep(kind: Kind, nmax, r=None, q=None, cap=None):
    """Brute-force histograms for every (n1, n2) <= nmax in one pass per length.

    Returns {(n1, n2): array[p1, p2, s]} (p axes of size 1 when unconstrained).
    Simplex families enumerate all vectors of weight <= nmax together and label
    them by (weight, special count); the inverted simplex labels by largest
    entry and accumulates, since its spaces are nested.
    """
    cap = config.ENUM_CAP if cap is None else cap
    out = {}
    if kind.is_hypercube:
        for n in range(nmax + 1):
            h = _hypercube_hist(q, n, cap)
            out[(n, n)] = h if kind.constrained else h.sum(axis=(0, 1), keepdims=True)
        return out
    base = kind.base
    fam = SpaceFamily(base)
    L = max(r, 1)
    vecs, wts = [], []
    for n in range(nmax + 1):
        if base is Kind.InvSimplex:
            if n >= 1 or r == 0:
                # only vectors whose largest entry is exactly n (new at this n)
                for v in enumerate_space(fam, n, r=r, cap=cap):
                    if (v[-1] if r else 0) == n:
                        vecs.append(v)
                        wts.append(n)
        else:
            for v in enumerate_space(fam, n, r=r, cap=cap):
                vecs.append(v)
                wts.append(n)
    A = _as_array(vecs, r) if r else np.zeros((len(vecs), 1), dtype=np.int64)
    wts = np.array(wts, dtype=np.int64)
    if kind.constrained:
        cnt = np.array([_special_count(kind, v) for v in vecs], dtype=np.int64).reshape(-1)
        P = r + 1
    else:
        cnt = np.zeros(len(vecs), dtype=np.int64)
        P = 1
    lab = wts * P + cnt
    nl = (nmax + 1) * P
    smax = r * nmax if base is Kind.InvSimplex else 2 * nmax
    h = kernels.pair_histogram(A, lab, A, lab, nl, nl, smax).reshape(nmax + 1, P, nmax + 1, P, smax + 1)
    h = h.transpose(0, 2, 1, 3, 4)
    if base is Kind.InvSimplex:
        h = h.cumsum(axis=0).cumsum(axis=1)
    for n1 in range(nmax + 1):
        for n2 in range(nmax + 1):
            out[(n1, n2)] = h[n1, n2]
    return out


# dynamic programming

def _shift(X, da=0, db=0, dp1=0, dp2=0):
    out = np.zeros_like(X)
    A, B, _, P1, P2 = X.shape
    if da >= A or db >= B or dp1 >= P1 or dp2 >= P2:
        return out
    out[da:, db:, :, dp1:, dp2:] = X[:A - da, :B - db, :, :P1 - dp1, :P2 - dp2]
    return out


def _addmod(p, *arrs):
    out = arrs[0].copy()
    for a in arrs[1:]:
        out += a
        out %= p
    return out


def _flat(X):
    A, B, S, P1, P2 = X.shape
    return np.ascontiguousarray(X).reshape(A, B, S, P1 * P2)


def _std_step(T, p):
    """One coordinate of the unconstrained simplex: any pair (u_r, v_r) >= 0."""
    shape = T.shape
    D = _flat(T).copy()
    kernels.diag_accumulate(D, p)  # u_r = v_r
    E0 = kernels.shift_accumulate(D, p, 0)  # u_r > v_r
    E1 = kernels.shift_accumulate(D, p, 1)  # u_r < v_r
    return _addmod(p, D, E0, E1).reshape(shape)


def _tail(T, p, axis):
    # sum_{j>=1} T[a - j, b, s - j] (axis 0) or T[a, b - j, s - j] (axis 1)
    return kernels.shift_accumulate(_flat(T), p, axis).reshape(T.shape)


def _step(kind, T, p):
    base = kind.base
    if kind is Kind.StdSimplex:
        return _std_step(T, p)
    if kind is Kind.PosSimplex:
        return _shift(_std_step(T, p), 1, 1)
    if kind is Kind.StdSimplexZeros:
        return _addmod(p,
                       _shift(T, dp1=1, dp2=1),                 # u_r = v_r = 0
                       _shift(_tail(T, p, 1), dp1=1),           # u_r = 0 < v_r
                       _shift(_tail(T, p, 0), dp2=1),           # v_r = 0 < u_r
                       _shift(_std_step(T, p), 1, 1))           # both >= 1
    if kind is Kind.PosSimplexOnes:
        return _addmod(p,
                       _shift(T, 1, 1, 1, 1),                   # u_r = v_r = 1
                       _shift(_tail(T, p, 1), 1, 1, dp1=1),     # u_r = 1 < v_r
                       _shift(_tail(T, p, 0), 1, 1, dp2=1),     # v_r = 1 < u_r
                       _shift(_std_step(T, p), 2, 2))           # both >= 2
    if base is Kind.InvSimplex:
        return _inv_step(T, p)
    raise ValueError(kind)


def _inv_step(T, p):
    """N(a, b, r, s) = sum_{1<=c<=a, 1<=d<=b} N(c-1, d-1, r-1, s-|c-d|), c, d the last entries."""
    A, B, S = T.shape[:3]
    U = np.zeros_like(T)
    for k in range(-(B - 1), A):
        lo, hi = max(1, 1 + k), min(A - 1, B - 1 + k)
        if lo > hi or abs(k) >= S:
            continue
        c = np.arange(lo, hi + 1)
        U[c, c - k, abs(k):] = T[c - 1, c - k - 1, :S - abs(k)]
    U = np.cumsum(U, axis=0) % p
    return np.cumsum(U, axis=1) % p


def _simplex_layers(kind, A, B, S, P, R, prime):
    """Yield the DP table after 0, 1, ..., R coordinates, shape (A+1, B+1, S+1, P+1, P+1)."""
    T = np.zeros((A + 1, B + 1, S + 1, P + 1, P + 1), dtype=np.int64)
    if kind.base is Kind.InvSimplex:
        T[:, :, 0] = 1  # the empty vector lies in every nabla_{n,0}
    else:
        T[0, 0, 0, 0, 0] = 1
    yield T
    for _ in range(R):
        T = _step(kind, T, prime)
        yield T


def _hypercube_moves(q, constrained):
    moves: Dict[Tuple[int, int, int], int] = {}
    for a in range(q):
        for b in range(q):
            key = (abs(a - b), int(constrained and a == 0), int(constrained and b == 0))
            moves[key] = moves.get(key, 0) + 1
    return moves


def _hypercube_layers(kind, q, S, P, N, prime):
    """Yield tables (S+1, P+1, P+1) for lengths 0..N: new = sum over (a, b) in Z_q^2."""
    moves = _hypercube_moves(q, kind.constrained)
    T = np.zeros((S + 1, P + 1, P + 1), dtype=np.int64)
    T[0, 0, 0] = 1
    yield T
    for _ in range(N):
        new = np.zeros_like(T)
        for (j, za, zb), mult in moves.items():
            if j > S or za > P or zb > P:
                continue
            new[j:, za:, zb:] += mult * T[:S + 1 - j, :P + 1 - za, :P + 1 - zb]
            new %= prime
        T = new
        yield T


def _nprimes(bound):
    prod, k = 1, 0
    while prod <= bound:
        if k == len(PRIMES):
            raise ValueError("count bound exceeds CRT capacity")
        prod *= PRIMES[k]
        k += 1
    return max(k, 1)


def crt(residues, primes):
    """Combine residues (one int per prime) into the unique value below prod(primes)."""
    x, m = 0, 1
    for r, p in zip(residues, primes):
        t = ((int(r) - x) * pow(m, -1, p)) % p
        x += m * t
        m *= p
    return x


def crt_array(stack, primes):
    """Elementwise CRT over stacked residue arrays (leading axis = prime)."""
    stack = np.asarray(stack)
    if len(primes) == 1:
        return stack[0].astype(object)
    flat = stack.reshape(len(primes), -1)
    vals = [crt(flat[:, i], primes) for i in range(flat.shape[1])]
    return np.array(vals, dtype=object).reshape(stack.shape[1:])


def _count_bound(kind, q, n1, n2, r):
    fam = SpaceFamily(kind.base, q=q)
    if kind.is_hypercube:
        return q ** (n1 + n2)
    return space_size(fam, max(n1, n2), r=r) ** 2


@lru_cache(maxsize=128)
def _dp_final(kind: Kind, q, n1, n2, r, smax, pm):
    """Exact object array [s, p1, p2] for the single (n1, n2[, r])."""
    primes = PRIMES[:_nprimes(_count_bound(kind, q, n1, n2, r))]
    res = []
    for prime in primes:
        if kind.is_hypercube:
            for T in _hypercube_layers(kind, q, smax, pm, n1, prime):
                pass
            res.append(T)
        else:
            for T in _simplex_layers(kind, n1, n2, smax, pm, r, prime):
                pass
            res.append(T[n1, n2])
    return crt_array(np.stack(res), primes)


def _check_cap(n1, n2, dp_cap):
    dp_cap = config.DP_CAP if dp_cap is None else dp_cap
    if max(n1, n2) > dp_cap:
        raise ValueError(f"n={max(n1, n2)} exceeds DP cap {dp_cap}")


def count_table(family: SpaceFamily, n1, n2, r=None, p=None, smax=None, dp_cap=None) -> CountTable:
    """All N(n1, n2, ..., s) for s <= smax (default: the diameter) from the DP."""
    _check_cap(n1, n2, dp_cap)
    kind = family.kind
    r, p = _params(family, max(n1, n2), r, p)
    p1, p2 = _pair(p)
    tab = CountTable(kind, n1, n2, r=r, q=family.q, p1=p1, p2=p2)
    if min(n1, n2) < 0 or (r is not None and r < 0) or (p1 is not None and min(p1, p2) < 0):
        return tab
    if kind.is_hypercube and n1 != n2:
        return tab
    diam = _diameter(kind, n1, n2, r, family.q)
    smax = diam if smax is None else min(smax, diam)
    if smax < 0:
        return tab
    pm = max(p1, p2) if kind.constrained else 0
    arr = _dp_final(kind, family.q, n1, n2, r, smax, pm)
    i1, i2 = (p1, p2) if kind.constrained else (0, 0)
    for s in range(smax + 1):
        v = int(arr[s, i1, i2])
        if v:
            tab.counts[s] = v
    return tab


def count_pairs_dp(family: SpaceFamily, n1, n2, s, r=None, p=None, dp_cap=None) -> int:
    if s < 0:
        return 0
    return count_table(family, n1, n2, r=r, p=p, smax=s, dp_cap=dp_cap).counts.get(s, 0)


def dp_tables(kind: Kind, nmax, rmax, smax, pmax=0, q=None):
    """Exact DP counts for all indices in a box, as {exponent tuple: count}.

    Keys follow the generating-function variable order: (n1, n2, r, s[, p1, p2])
    for simplex families and (n, s[, p1, p2]) for hypercube families. Only
    nonzero entries are kept.
    """
    out = {}
    pmax = pmax if kind.constrained else 0
    if kind.is_hypercube:
        bound = q ** (2 * nmax)
        primes = PRIMES[:_nprimes(bound)]
        layers = [list(_hypercube_layers(kind, q, smax, pmax, nmax, pr)) for pr in primes]
        for n in range(nmax + 1):
            arr = crt_array(np.stack([L[n] for L in layers]), primes)
            for idx in zip(*np.nonzero(arr)):
                s, a, b = (int(i) for i in idx)
                key = (n, s, a, b) if kind.constrained else (n, s)
                out[key] = int(arr[idx])
        return out
    bound = max(_count_bound(kind, q, nmax, nmax, r) for r in range(rmax + 1))
    primes = PRIMES[:_nprimes(bound)]
    layers = [list(_simplex_layers(kind, nmax, nmax, smax, pmax, rmax, pr)) for pr in primes]
    for r in range(rmax + 1):
        arr = crt_array(np.stack([L[r] for L in layers]), primes)
        for idx in zip(*np.nonzero(arr)):
            a, b, s, p1, p2 = (int(i) for i in idx)
            key = (a, b, r, s, p1, p2) if kind.constrained else (a, b, r, s)
            out[key] = int(arr[idx])
    return out


def total_ball(family: SpaceFamily, n, d, r=None, p=None, dp_cap=None) -> int:
    """|T(S_n, d)| = sum_{s<=d} N(n, n, ..., s)."""
    if d < 0:
        return 0
    return count_table(family, n, n, r=r, p=p, smax=d, dp_cap=dp_cap).total()


def empirical_exponent(family: SpaceFamily, n, d, r=None, p=None, dp_cap=None) -> float:
    if n <= 0:
        raise ValueError("n must be positive")
    t = total_ball(family, n, d, r=r, p=p, dp_cap=dp_cap)
    if t == 0:
        return float("-inf")
    return math.log2(t) / n


# three-way agreement

@dataclass
class TripleRow:
    key: Tuple[int, ...]  # dp_tables key order
    brute: Optional[int]
    dp: int
    series: Optional[int]

    @property
    def ok(self):
        return all(v is None or v == self.dp for v in (self.brute, self.series))


def _series_box(kind, q, nmax, rmax, smax):
    from .poly import series_box
    from .spaces import generating_function
    G, H = generating_function(kind, q)
    if kind.is_hypercube:
        bounds = (nmax, smax) + ((nmax, nmax) if kind.constrained else ())
    else:
        bounds = (nmax, nmax, rmax, smax) + ((rmax, rmax) if kind.constrained else ())
    return series_box(G, H, bounds)


def triple_table(kind: Kind, nmax, r=None, q=None, cap=None, brute=True):
    """Brute force, DP and series coefficient for every index up to nmax.

    Simplex families cover n1, n2 <= nmax and r <= nmax (or the single r
    given); hypercube families cover n1 = n2 <= nmax. Brute force is skipped
    (None) when brute is False; the series is None for the inverted simplex,
    which has no rational generating function.
    """
    rs = [None] if kind.is_hypercube else (list(range(nmax + 1)) if r is None else [r])
    rmax = 0 if kind.is_hypercube else max(rs)
    if kind.is_hypercube:
        smax = nmax * (q - 1)
    elif kind is Kind.InvSimplex:
        smax = rmax * nmax
    else:
        smax = 2 * nmax
    dp = dp_tables(kind, nmax, rmax, smax, nmax if kind.is_hypercube else rmax, q)
    ser = None if kind is Kind.InvSimplex else _series_box(kind, q, nmax, rmax, smax)
    rows = []
    for rr in rs:
        sweep = bruteforce_sweep(kind, nmax, r=rr, q=q, cap=cap) if brute else None
        pairs = [(n, n) for n in range(nmax + 1)] if kind.is_hypercube else \
            [(a, b) for a in range(nmax + 1) for b in range(nmax + 1)]
        P = (rr if rr is not None else nmax) + 1 if kind.constrained else 1
        for n1, n2 in pairs:
            h = sweep[(n1, n2)] if brute else None
            for p1 in range(P):
                for p2 in range(P):
                    for s in range(smax + 1):
                        if kind.is_hypercube:
                            key = (n1, s, p1, p2) if kind.constrained else (n1, s)
                        else:
                            key = (n1, n2, rr, s, p1, p2) if kind.constrained else (n1, n2, rr, s)
                        b = None
                        if h is not None:
                            b = int(h[p1, p2, s]) if (p1 < h.shape[0] and p2 < h.shape[1] and s < h.shape[2]) else 0
                        sv = None if ser is None else int(ser[key])
                        d = dp.get(key, 0)
                        if b == 0 and d == 0 and not sv:
                            continue
                        rows.append(TripleRow(key, b, d, sv))
    return rows
