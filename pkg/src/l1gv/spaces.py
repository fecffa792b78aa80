"""The seven space families and their pair-counting generating functions.

Variables for the simplex families are (x1, x2, y, z[, w1, w2]): x_i marks the
weight of vector i, y the number of coordinates, z the L1 distance and w_i the
number of constrained coordinates of vector i. Hypercube families use
(x, y[, w1, w2]) with x marking the length.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from math import floor
from typing import Optional

from .poly import SparsePoly, exact_divide, identify


class Kind(enum.Enum):
    StdSimplex = "std-simplex"
    StdSimplexZeros = "std-simplex-zeros"
    PosSimplex = "pos-simplex"
    PosSimplexOnes = "pos-simplex-ones"
    InvSimplex = "inv-simplex"
    Hypercube = "hypercube"
    HypercubeZeros = "hypercube-zeros"

    @property
    def is_hypercube(self):
        return self in (Kind.Hypercube, Kind.HypercubeZeros)

    @property
    def constrained(self):
        return self in (Kind.StdSimplexZeros, Kind.PosSimplexOnes, Kind.HypercubeZeros)

    @property
    def base(self):
        return {
            Kind.StdSimplexZeros: Kind.StdSimplex,
            Kind.PosSimplexOnes: Kind.PosSimplex,
            Kind.HypercubeZeros: Kind.Hypercube,
        }.get(self, self)

    @property
    def special_value(self):
        """Coordinate value counted by the constraint (None if unconstrained)."""
        return {Kind.StdSimplexZeros: 0, Kind.PosSimplexOnes: 1, Kind.HypercubeZeros: 0}.get(self)


def _floor(x):
    # guard against 0.1*30 = 3.0000000000000004 style noise in both directions
    return int(floor(x + 1e-9))


@dataclass(frozen=True)
class SpaceFamily:
    kind: Kind
    rho: Optional[float] = None
    q: Optional[int] = None
    tau: Optional[float] = None

    def __post_init__(self):
        k = self.kind
        if not isinstance(k, Kind):
            raise TypeError("kind must be a Kind")
        if k.is_hypercube:
            if self.q is None or int(self.q) != self.q or self.q < 2:
                raise ValueError("hypercube families need an integer q >= 2")
        elif self.rho is not None and self.rho < 0:
            raise ValueError("rho must be nonnegative")
        if k in (Kind.PosSimplex, Kind.InvSimplex, Kind.PosSimplexOnes) and self.rho is not None:
            if self.rho > 1:
                raise ValueError(f"{k.name} requires 0 <= rho <= 1")
        if k.constrained:
            t = self.tau
            if t is not None:
                if t < 0:
                    raise ValueError("tau must be nonnegative")
                if k is Kind.HypercubeZeros and t > 1:
                    raise ValueError("HypercubeZeros requires tau <= 1")
                if k is not Kind.HypercubeZeros and self.rho is not None and t > self.rho:
                    raise ValueError(f"{k.name} requires tau <= rho")
        elif self.tau is not None:
            raise ValueError(f"{k.name} takes no tau")

    def dims(self, n):
        """Finite parameters (r, p) at length/weight n."""
        r = None if self.kind.is_hypercube or self.rho is None else _floor(self.rho * n)
        p = None if self.tau is None else _floor(self.tau * n)
        return r, p

    def with_tau(self, tau):
        kind = {Kind.StdSimplex: Kind.StdSimplexZeros, Kind.PosSimplex: Kind.PosSimplexOnes,
                Kind.InvSimplex: Kind.PosSimplexOnes, Kind.Hypercube: Kind.HypercubeZeros}.get(
            self.kind, self.kind)
        return SpaceFamily(kind, rho=self.rho, q=self.q, tau=tau)

    def base(self):
        return SpaceFamily(self.kind.base, rho=self.rho, q=self.q)

    def label(self):
        parts = []
        if self.rho is not None and not self.kind.is_hypercube:
            parts.append(f"rho={self.rho:g}")
        if self.q is not None:
            parts.append(f"q={self.q}")
        if self.tau is not None:
            parts.append(f"tau={self.tau:g}")
        return ";".join(parts)


# generating functions

SIMPLEX_LABELS = ("x1", "x2", "y", "z")
SIMPLEX_MR_LABELS = ("x1", "x2", "y", "z", "w1", "w2")


def _simplex_parts(labels):
    v = SparsePoly.variables(labels)
    x1, x2, y, z = v[:4]
    Q = (1 - x1 * x2) * (1 - x1 * z) * (1 - x2 * z)
    K = 1 - x1 * x2 * z * z  # Q * (sum over a,b >= 0 of x1^a x2^b z^|a-b|)
    return v, Q, K


def _zeros_kernel(v, Q, K):
    x1, x2, y, z, w1, w2 = v
    return (w1 * w2 * Q + w1 * x2 * z * (1 - x1 * x2) * (1 - x1 * z)
            + w2 * x1 * z * (1 - x1 * x2) * (1 - x2 * z) + x1 * x2 * K)


def generating_function(kind: Kind, q: Optional[int] = None):
    """(G, H) with sum_k N_k z^k = G/H, in the unreduced variables.

    The inverted simplex has no rational generating function in these
    variables, so it raises.
    """
    if kind is Kind.StdSimplex:
        v, Q, K = _simplex_parts(SIMPLEX_LABELS)
        y = v[2]
        return Q, Q - y * K
    if kind is Kind.PosSimplex:
        v, Q, K = _simplex_parts(SIMPLEX_LABELS)
        x1, x2, y = v[:3]
        return Q, Q - y * x1 * x2 * K
    if kind is Kind.StdSimplexZeros:
        v, Q, K = _simplex_parts(SIMPLEX_MR_LABELS)
        return Q, Q - v[2] * _zeros_kernel(v, Q, K)
    if kind is Kind.PosSimplexOnes:
        v, Q, K = _simplex_parts(SIMPLEX_MR_LABELS)
        x1, x2, y = v[:3]
        return Q, Q - y * x1 * x2 * _zeros_kernel(v, Q, K)
    if kind is Kind.Hypercube:
        _check_q(q)
        x, y = SparsePoly.variables(("x", "y"))
        s = q + 2 * sum(((q - j) * y ** j for j in range(1, q)), SparsePoly.constant(0, 2))
        return SparsePoly.constant(1, 2, ("x", "y")), 1 - x * s
    if kind is Kind.HypercubeZeros:
        _check_q(q)
        x, y, w1, w2 = SparsePoly.variables(("x", "y", "w1", "w2"))
        zero = SparsePoly.constant(0, 4)
        s1 = sum((y ** j for j in range(1, q)), zero)
        s2 = sum(((q - 1 - j) * y ** j for j in range(1, q - 1)), zero)
        inner = w1 * w2 + (q - 1) + (w1 + w2) * s1 + 2 * s2
        return SparsePoly.constant(1, 4, ("x", "y", "w1", "w2")), 1 - x * inner
    if kind is Kind.InvSimplex:
        raise ValueError("the inverted simplex has no rational generating function here")
    raise ValueError(kind)


def _check_q(q):
    if q is None or q < 2:
        raise ValueError("hypercube generating function needs q >= 2")


def reduced_denominator(kind: Kind, q: Optional[int] = None) -> SparsePoly:
    """Denominator after identifying the symmetric variable pairs.

    Simplex families identify x1=x2 (and w1=w2) then divide out the spurious
    factor (1 - x z) that the identification creates; variables become
    (x, y, z[, w]). Hypercube families become (x, y[, w]).
    InvSimplex shares the positive-simplex denominator.
    """
    if kind is Kind.InvSimplex:
        kind = Kind.PosSimplex
    _, H = generating_function(kind, q)
    if kind.is_hypercube:
        if kind is Kind.Hypercube:
            return H
        return identify(H, 2, 3).relabel(("x", "y", "w"))
    R = identify(H, 0, 1)  # (x, y, z[, w1, w2])
    if kind.constrained:
        R = identify(R, 3, 4)
    labels = ("x", "y", "z", "w")[: R.num_vars]
    R = R.relabel(labels)
    x = SparsePoly.variables(labels)[0]
    z = SparsePoly.variables(labels)[2]
    return exact_divide(R, 1 - x * z)


def written_denominator(kind: Kind, q: Optional[int] = None) -> SparsePoly:
    """Reduced denominators written out directly in their published form."""
    if kind is Kind.InvSimplex:
        kind = Kind.PosSimplex
    if kind.is_hypercube:
        if kind is Kind.Hypercube:
            x, y = SparsePoly.variables(("x", "y"))
            return 1 - x * sum(((q - j) * 2 * y ** j for j in range(1, q)), SparsePoly.constant(q, 2))
        x, y, w = SparsePoly.variables(("x", "y", "w"))
        zero = SparsePoly.constant(0, 3)
        return 1 - x * (w * w + (q - 1) + 2 * w * sum((y ** j for j in range(1, q)), zero)
                        + 2 * sum(((q - 1 - j) * y ** j for j in range(1, q)), zero))
    if kind.constrained:
        x, y, z, w = SparsePoly.variables(("x", "y", "z", "w"))
        inner = w * w * (1 - x * z) * (1 - x * x) + 2 * w * x * z * (1 - x * x) + x * x * (1 + x * z)
    else:
        x, y, z = SparsePoly.variables(("x", "y", "z"))
        inner = 1 + x * z
    lead = (1 - x * x) * (1 - x * z)
    if kind in (Kind.PosSimplex, Kind.PosSimplexOnes):
        return lead - y * x * x * inner
    return lead - y * inner


def direction(family: SpaceFamily, delta: float, tau: Optional[float] = None):
    """Direction vector for the reduced denominator of the family."""
    t = family.tau if tau is None else tau
    if family.kind.is_hypercube:
        return (1.0, delta) if not family.kind.constrained else (1.0, delta, 2.0 * t)
    if family.kind.constrained:
        return (2.0, family.rho, delta, 2.0 * t)
    return (2.0, family.rho, delta)


def capacity_denominator(kind: Kind, q: Optional[int] = None) -> SparsePoly:
    """Denominator whose single-vector series counts the space (up to a polynomial factor).

    Variables: (x, y[, w]) for simplices with x marking n and y the weight,
    (x[, w]) for hypercubes.
    """
    if kind is Kind.InvSimplex:
        kind = Kind.PosSimplex
    if kind is Kind.Hypercube:
        _check_q(q)
        x, = SparsePoly.variables(("x",))
        return 1 - q * x
    if kind is Kind.HypercubeZeros:
        _check_q(q)
        x, w = SparsePoly.variables(("x", "w"))
        return 1 - x * (w + (q - 1))
    if kind.constrained:
        x, y, w = SparsePoly.variables(("x", "y", "w"))
        inner = w * (1 - x) + x
    else:
        x, y = SparsePoly.variables(("x", "y"))
        inner = SparsePoly.constant(1, 2)
    if kind in (Kind.PosSimplex, Kind.PosSimplexOnes):
        inner = x * inner
    return (1 - x) - y * inner


def capacity_direction(family: SpaceFamily, tau: Optional[float] = None):
    t = family.tau if tau is None else tau
    if family.kind.is_hypercube:
        return (1.0,) if not family.kind.constrained else (1.0, t)
    if family.kind.constrained:
        return (1.0, family.rho, t)
    return (1.0, family.rho)
