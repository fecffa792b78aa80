"""Sparse multivariate polynomials with integer coefficients.

Only what the generating-function work needs: ring arithmetic, evaluation,
formal partials, exact division and power-series extraction of G/H.
"""
from __future__ import annotations

from itertools import combinations_with_replacement
from math import fsum
from typing import Dict, Iterable, Mapping, Sequence, Tuple

import numpy as np

Exp = Tuple[int, ...]


class SparsePoly:
    """Immutable polynomial stored as {exponent tuple: nonzero int}."""

    __slots__ = ("num_vars", "terms", "var_labels", "_items")

    def __init__(self, num_vars: int, terms: Mapping[Exp, int] | Iterable = (), var_labels=None):
        if num_vars < 1:
            raise ValueError("num_vars must be positive")
        clean: Dict[Exp, int] = {}
        items = terms.items() if isinstance(terms, Mapping) else terms
        for e, c in items:
            e = tuple(int(k) for k in e)
            if len(e) != num_vars:
                raise ValueError(f"exponent {e} has wrong length (want {num_vars})")
            if any(k < 0 for k in e):
                raise ValueError(f"negative exponent in {e}")
            c = int(c)
            if c:
                c += clean.get(e, 0)
                if c:
                    clean[e] = c
                else:
                    clean.pop(e, None)
        if var_labels is None:
            var_labels = [f"z{i + 1}" for i in range(num_vars)]
        var_labels = list(var_labels)
        if len(var_labels) != num_vars:
            raise ValueError("var_labels length mismatch")
        object.__setattr__(self, "num_vars", num_vars)
        object.__setattr__(self, "terms", dict(sorted(clean.items())))
        object.__setattr__(self, "var_labels", tuple(var_labels))
        object.__setattr__(self, "_items", tuple(self.terms.items()))

    def __setattr__(self, name, value):
        raise AttributeError("SparsePoly is immutable")

    # construction helpers
    @classmethod
    def constant(cls, c: int, num_vars: int, var_labels=None) -> "SparsePoly":
        return cls(num_vars, {(0,) * num_vars: c}, var_labels)

    @classmethod
    def variables(cls, labels: Sequence[str]) -> Tuple["SparsePoly", ...]:
        n = len(labels)
        out = []
        for i in range(n):
            e = [0] * n
            e[i] = 1
            out.append(cls(n, {tuple(e): 1}, labels))
        return tuple(out)

    # comparisons
    def __eq__(self, other):
        if isinstance(other, int):
            other = SparsePoly.constant(other, self.num_vars)
        if not isinstance(other, SparsePoly):
            return NotImplemented
        return self.num_vars == other.num_vars and self.terms == other.terms

    def __hash__(self):
        return hash((self.num_vars, self._items))

    def __repr__(self):
        return f"SparsePoly({self.num_vars}, {self.terms!r})"

    def __str__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0])):
            mono = "*".join(
                lab if k == 1 else f"{lab}^{k}" for lab, k in zip(self.var_labels, e) if k
            )
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append(mono)
            elif c == -1:
                parts.append("-" + mono)
            else:
                parts.append(f"{c}*{mono}")
        return " + ".join(parts).replace("+ -", "- ")

    # ring operations
    def _coerce(self, other) -> "SparsePoly":
        if isinstance(other, SparsePoly):
            if other.num_vars != self.num_vars:
                raise ValueError("variable count mismatch")
            return other
        if isinstance(other, int):
            return SparsePoly.constant(other, self.num_vars, self.var_labels)
        raise TypeError(f"cannot combine SparsePoly with {type(other).__name__}")

    def __add__(self, other):
        other = self._coerce(other)
        return SparsePoly(self.num_vars, list(self._items) + list(other._items), self.var_labels)

    __radd__ = __add__

    def __neg__(self):
        return SparsePoly(self.num_vars, {e: -c for e, c in self._items}, self.var_labels)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        other = self._coerce(other)
        acc: Dict[Exp, int] = {}
        for e1, c1 in self._items:
            for e2, c2 in other._items:
                e = tuple(a + b for a, b in zip(e1, e2))
                acc[e] = acc.get(e, 0) + c1 * c2
        return SparsePoly(self.num_vars, acc, self.var_labels)

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = SparsePoly.constant(1, self.num_vars, self.var_labels)
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    # queries
    def is_zero(self) -> bool:
        return not self.terms

    def constant_term(self) -> int:
        return self.terms.get((0,) * self.num_vars, 0)

    def degree(self) -> int:
        return max((sum(e) for e in self.terms), default=0)

    def relabel(self, labels: Sequence[str]) -> "SparsePoly":
        return SparsePoly(self.num_vars, self.terms, labels)


def poly_eval(p: SparsePoly, point: Sequence[float]) -> float:
    """Evaluate term by term, summing in lexicographic exponent order."""
    if len(point) != p.num_vars:
        raise ValueError(f"point has {len(point)} components, polynomial has {p.num_vars} variables")
    vals = []
    for e, c in p._items:
        m = float(c)
        for x, k in zip(point, e):
            if k:
                m *= x ** k
        vals.append(m)
    return fsum(vals)


def poly_partial(p: SparsePoly, var_index: int) -> SparsePoly:
    if not 0 <= var_index < p.num_vars:
        raise IndexError(f"variable index {var_index} out of range")
    terms = {}
    for e, c in p._items:
        k = e[var_index]
        if k:
            e2 = list(e)
            e2[var_index] = k - 1
            terms[tuple(e2)] = c * k
    return SparsePoly(p.num_vars, terms, p.var_labels)


def poly_theta(p: SparsePoly, var_index: int) -> SparsePoly:
    """z_i * dp/dz_i, i.e. the Euler operator; keeps the monomial support."""
    if not 0 <= var_index < p.num_vars:
        raise IndexError(f"variable index {var_index} out of range")
    return SparsePoly(p.num_vars, {e: c * e[var_index] for e, c in p._items}, p.var_labels)


def identify(p: SparsePoly, i: int, j: int) -> SparsePoly:
    """Substitute z_j := z_i and drop variable j."""
    if i == j or not (0 <= i < p.num_vars and 0 <= j < p.num_vars):
        raise IndexError("bad variable pair")
    if p.num_vars < 2:
        raise ValueError("need at least two variables")
    terms: Dict[Exp, int] = {}
    for e, c in p._items:
        e2 = list(e)
        e2[i] += e2[j]
        del e2[j]
        t = tuple(e2)
        terms[t] = terms.get(t, 0) + c
    labels = [lab for k, lab in enumerate(p.var_labels) if k != j]
    return SparsePoly(p.num_vars - 1, terms, labels)


def _lead(p: SparsePoly):
    e = max(p.terms, key=lambda t: (sum(t), t))
    return e, p.terms[e]


def exact_divide(p: SparsePoly, d: SparsePoly) -> SparsePoly:
    """Return p/d, raising ValueError when d does not divide p over the integers."""
    if d.is_zero():
        raise ZeroDivisionError("division by zero polynomial")
    if p.num_vars != d.num_vars:
        raise ValueError("variable count mismatch")
    ld, lc = _lead(d)
    quo: Dict[Exp, int] = {}
    rem = p
    while not rem.is_zero():
        lr, rc = _lead(rem)
        diff = tuple(a - b for a, b in zip(lr, ld))
        if any(k < 0 for k in diff) or rc % lc:
            raise ValueError("polynomial does not divide exactly")
        c = rc // lc
        quo[diff] = quo.get(diff, 0) + c
        rem = rem - SparsePoly(p.num_vars, {diff: c}, p.var_labels) * d
    return SparsePoly(p.num_vars, quo, p.var_labels)


class SeriesTable:
    """Power-series coefficients a_k for all k of total degree <= max_total_degree."""

    __slots__ = ("num_vars", "max_total_degree", "coeffs")

    def __init__(self, num_vars: int, max_total_degree: int, coeffs: Dict[Exp, int]):
        for e in coeffs:
            if len(e) != num_vars or sum(e) > max_total_degree:
                raise ValueError(f"exponent {e} outside table range")
        self.num_vars = num_vars
        self.max_total_degree = max_total_degree
        self.coeffs = coeffs

    def __getitem__(self, e) -> int:
        e = tuple(e)
        if len(e) != self.num_vars or any(k < 0 for k in e):
            raise KeyError(e)
        if sum(e) > self.max_total_degree:
            raise KeyError(f"{e} beyond degree {self.max_total_degree}")
        return self.coeffs.get(e, 0)

    def __len__(self):
        return len(self.coeffs)

    def items(self):
        return self.coeffs.items()


def exponents_upto(num_vars: int, max_total_degree: int):
    """All exponent vectors of total degree <= D, ordered by degree then lexicographically."""
    for deg in range(max_total_degree + 1):
        level = []
        for combo in combinations_with_replacement(range(num_vars), deg):
            e = [0] * num_vars
            for v in combo:
                e[v] += 1
            level.append(tuple(e))
        level.sort()
        yield from level


def series_coeffs(numer: SparsePoly, denom: SparsePoly, max_total_degree: int) -> SeriesTable:
    """Coefficients of numer/denom from the convolution identity sum_m h_m a_{k-m} = g_k."""
    if numer.num_vars != denom.num_vars:
        raise ValueError("variable count mismatch")
    if max_total_degree < 0:
        raise ValueError("max_total_degree must be nonnegative")
    h0 = denom.constant_term()
    if h0 == 0:
        raise ValueError("denominator has zero constant term")
    if h0 not in (1, -1):
        raise ValueError("denominator constant term must be +1 or -1")
    zero = (0,) * denom.num_vars
    hs = [(e, c) for e, c in denom._items if e != zero]
    a: Dict[Exp, int] = {}
    for k in exponents_upto(denom.num_vars, max_total_degree):
        acc = numer.terms.get(k, 0)
        for m, h in hs:
            km = tuple(x - y for x, y in zip(k, m))
            if min(km) >= 0:
                v = a.get(km)
                if v:
                    acc -= h * v
        if acc:
            a[k] = acc * h0
    return SeriesTable(denom.num_vars, max_total_degree, a)


def series_box(numer: SparsePoly, denom: SparsePoly, bounds: Sequence[int]) -> np.ndarray:
    """Dense coefficients of numer/denom for every exponent e <= bounds.

    Iterates a = h0 (g - sum_{m != 0} h_m shift_m(a)); sweep t fixes every
    exponent of total degree t. int64 arithmetic wraps mod 2^64, so entries
    are exact as long as the true coefficients fit in int64.
    """
    if numer.num_vars != denom.num_vars or len(bounds) != denom.num_vars:
        raise ValueError("variable count mismatch")
    if any(b < 0 for b in bounds):
        raise ValueError("bounds must be nonnegative")
    h0 = denom.constant_term()
    if h0 not in (1, -1):
        raise ValueError("denominator constant term must be +1 or -1")
    shape = tuple(int(b) + 1 for b in bounds)
    g = np.zeros(shape, dtype=np.int64)
    for e, c in numer.terms.items():
        if all(x < s for x, s in zip(e, shape)):
            g[e] = c
    zero = (0,) * denom.num_vars
    hs = [(e, c) for e, c in denom._items if e != zero and all(x < s for x, s in zip(e, shape))]
    a = g * h0
    with np.errstate(over="ignore"):
        for _ in range(sum(bounds)):
            acc = g.copy()
            for m, h in hs:
                dst = tuple(slice(x, None) for x in m)
                src = tuple(slice(0, s - x) for x, s in zip(m, shape))
                acc[dst] -= h * a[src]
            a = acc * h0
    return a
