"""Capacities, total-ball exponents and rate bounds for every space family.

All logs are base 2. delta is the distance normalized by the weight (simplex
families) or the length (hypercube families).
"""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from . import config
from .acsv import NumericalFailure, RootPolicy, find_positive_root
from .config import entropy as H2
from .config import log2
from .spaces import Kind, SpaceFamily

log = config.get_logger(__name__)


class BoundKind(enum.Enum):
    GV = "gv"
    GVMR = "gvmr"
    SpherePacking = "sp"
    ConstantWeightGV = "cw"
    KolesnikKrachkovsky = "kk"
    Lee = "lee"
    Capacity = "cap"

    @classmethod
    def parse(cls, s):
        s = s.strip().lower()
        for k in cls:
            if s in (k.value, k.name.lower()):
                return k
        raise ValueError(f"unknown bound {s!r}")


_MR_BASES = (Kind.StdSimplex, Kind.PosSimplex, Kind.InvSimplex, Kind.Hypercube)


def applicable(kind: BoundKind, family: SpaceFamily) -> bool:
    k = family.kind
    if kind in (BoundKind.GV, BoundKind.Capacity):
        return True
    if kind is BoundKind.GVMR:
        return k in _MR_BASES
    if kind is BoundKind.SpherePacking:
        return k is Kind.StdSimplex
    if kind is BoundKind.ConstantWeightGV:
        return k is Kind.StdSimplex and family.rho is not None and family.rho >= 1
    if kind is BoundKind.KolesnikKrachkovsky:
        return k in (Kind.PosSimplex, Kind.InvSimplex)
    if kind is BoundKind.Lee:
        return k is Kind.Hypercube and family.q == 4
    return False


def _require(kind, family):
    if not applicable(kind, family):
        raise ValueError(f"bound {kind.name} does not apply to {family.kind.name} ({family.label()})")


def _rho(family):
    if family.rho is None:
        raise ValueError(f"{family.kind.name} needs rho")
    return float(family.rho)


def _tau(family):
    if family.tau is None:
        raise ValueError(f"{family.kind.name} needs tau")
    return float(family.tau)


def _delegate(family):
    # the inverted simplex shares every exponent with the positive simplex
    if family.kind is Kind.InvSimplex:
        return SpaceFamily(Kind.PosSimplex, rho=family.rho)
    return family


# capacity

def capacity(family: SpaceFamily) -> float:
    family = _delegate(family)
    k = family.kind
    if k is Kind.Hypercube:
        return log2(family.q)
    if k is Kind.HypercubeZeros:
        t = _tau(family)
        return (1 - t) * log2(family.q - 1) + H2(t)
    rho = _rho(family)
    if k is Kind.StdSimplex:
        return 0.0 if rho == 0 else (1 + rho) * H2(rho / (1 + rho))
    if k is Kind.PosSimplex:
        return H2(rho)
    t = _tau(family)
    head = rho * H2(t / rho) if rho > 0 else 0.0
    if k is Kind.StdSimplexZeros:
        if rho - t > 1 + 1e-15:
            raise ValueError("StdSimplexZeros is empty when rho - tau > 1")
        return head + H2(min(rho - t, 1.0))
    if k is Kind.PosSimplexOnes:
        if rho - t > 1 - rho + 1e-15:
            raise ValueError("PosSimplexOnes is empty when tau < 2 rho - 1")
        return head + ((1 - rho) * H2(min((rho - t) / (1 - rho), 1.0)) if rho < 1 else 0.0)
    raise ValueError(f"no capacity for {k}")  # pragma: no cover


def capacity_point(family: SpaceFamily, tau=None):
    """Capacity-side critical point in the capacity_denominator variables."""
    family = _delegate(family)
    k = family.kind
    if k is Kind.Hypercube:
        return (1.0 / family.q,)
    t = family.tau if tau is None else tau
    if k is Kind.HypercubeZeros:
        w = t * (family.q - 1) / (1 - t)
        return (1.0 / (family.q - 1 + w), w)
    rho = _rho(family)
    if k is Kind.StdSimplex:
        return (1 / (1 + rho), rho / (1 + rho))
    if k is Kind.PosSimplex:
        return (1 - rho, rho / (1 - rho))
    m = rho - t  # nonzero (resp. non-one) coordinates
    if k is Kind.StdSimplexZeros:
        x = 1 - m
        w = t * (1 + t - rho) / m ** 2
        y = (1 - x) / (w * (1 - x) + x)
        return (x, y, w)
    # PosSimplexOnes
    x = 1 - m / (1 - rho)
    w = t * (1 + t - 2 * rho) / m ** 2
    y = (1 - x) / (x * (w * (1 - x) + x))
    return (x, y, w)


# ball exponent: closed-form critical points

def _plain_simplex_point(rho, delta, positive):
    s = math.sqrt(rho * rho + delta * delta)
    if positive:
        x = math.sqrt(1 - 2 * rho / (2 - delta))
        y = 2 * (s - delta) / (2 - delta - 2 * rho)
    else:
        x = math.sqrt(1 - 2 * rho / (2 + 2 * rho - delta))
        y = 2 * (s - delta) / (2 - delta + 2 * rho)
    z = (s - rho) / (x * delta)
    return x, y, z


def _zeros_quintic(rho, tau, delta):
    m = rho - tau
    d2 = delta * delta
    return [
        d2 * (m - 1),
        d2 - 4 * delta * m * (m - 1),
        -d2 * (rho - 2 * tau - 2) - 2 * delta * m * (rho + tau + 2) - 4 * m * m * (1 - rho),
        -d2 * (rho + 2) + 2 * delta * m * (m - 2) + 4 * m * m * (1 + rho),
        -d2 * (1 + tau) + 4 * delta * m * (1 + rho),
        d2 * (1 + rho),
    ]


def _ones_equation(rho, tau, delta):
    m = rho - tau

    def f(l):
        a = delta * (1 - l * l) - 2 * l * m
        b = 2 * m - delta * (1 - l)
        return ((1 - l) * a * a * (2 * (1 - rho) - 2 * m * (1 + l) - delta * l * l)
                + l * l * (1 + l) * b * b * (a - 2 * tau))

    return f


def _constrained_point(rho, tau, delta, l1, positive):
    """(x, y, z, w) from lambda1 = x z, or None when not admissible."""
    m = rho - tau
    num = (1 + l1) * (2 * m - delta * (1 - l1))
    l2 = 1 - num / ((2 * (1 - rho) - delta) if positive else (2 - delta))
    if not (0 < l2 < 1 and 0 < l1 < 1):
        return None
    den_w = l1 * (1 - l2) * (2 * m - delta * (1 - l1))
    if den_w == 0:
        return None
    w = l2 * (delta * (1 - l1 * l1) - 2 * l1 * m) / den_w
    if not w > 0:
        return None
    den_y = w * w * (1 - l1) * (1 - l2) + 2 * w * l1 * (1 - l2) + l2 * (1 + l1)
    if positive:
        den_y *= l2
    y = (1 - l1) * (1 - l2) / den_y
    if not y > 0:
        return None
    x = math.sqrt(l2)
    return x, y, l1 / x, w


def _lambda_equation(rho, tau, delta, positive):
    if positive:
        return _ones_equation(rho, tau, delta)
    c = _zeros_quintic(rho, tau, delta)
    return lambda l: sum(ci * l ** i for i, ci in enumerate(c))


def _lambda_roots(rho, tau, delta, positive):
    f = _ones_equation(rho, tau, delta) if positive else _zeros_quintic(rho, tau, delta)
    return find_positive_root(f, (0.0, 1.0), RootPolicy.AllThenFilter)


def _unique(points, what):
    pts = []
    for p in points:
        if not any(max(abs(a - b) for a, b in zip(p, o)) < 1e-9 for o in pts):
            pts.append(p)
    if not pts:
        raise NumericalFailure(f"no admissible {what}")
    if len(pts) > 1:
        raise NumericalFailure(f"{len(pts)} admissible {what}: {pts}")
    return pts[0]


def _hypercube_point(q, delta):
    coeffs = [-q * delta] + [2 * (q - j) * (j - delta) for j in range(1, q)]
    y = find_positive_root(coeffs, (0.0, 1.0), RootPolicy.UniquePositive)
    x = 1 / (q + 2 * sum((q - j) * y ** j for j in range(1, q)))
    return x, y


def _hz_w(q, tau, delta, y):
    num = delta * (q - 1) + 2 * sum((delta - j * (1 - tau)) * (q - 1 - j) * y ** j for j in range(1, q))
    den = sum((2 * j * (1 - tau) - delta) * y ** j for j in range(1, q))
    return num / den


def _hz_equation(q, tau, delta):
    def f(y):
        w = _hz_w(q, tau, delta, y)
        return (delta * w * w + 2 * w * sum((delta - j) * y ** j for j in range(1, q))
                + delta * (q - 1) + 2 * sum((q - 1 - j) * (delta - j) * y ** j for j in range(1, q)))
    return f


def _hypercube_zeros_point(q, tau, delta, y0=None):
    f = _hz_equation(q, tau, delta)
    cands = []
    if y0 is not None:
        y = _newton_scalar(f, y0)
        if y is not None:
            cands = [y]
    if not cands:
        cands = find_positive_root(f, (0.0, 1.0), RootPolicy.AllThenFilter)
    pts = []
    for y in cands:
        if not 0 < y <= 1:
            continue
        try:
            w = _hz_w(q, tau, delta, y)
        except ZeroDivisionError:
            continue
        if not w > 0:
            continue
        s = (w * w + q - 1 + 2 * w * sum(y ** j for j in range(1, q))
             + 2 * sum((q - 1 - j) * y ** j for j in range(1, q)))
        pts.append((1 / s, y, w))
    return _unique(pts, "hypercube-zeros critical points")


def _newton_scalar(f, x0, tol=1e-14, iters=50):
    x = x0
    for _ in range(iters):
        fx = f(x)
        if abs(fx) < 1e-13:
            return x
        h = 1e-7 * max(1.0, abs(x))
        d = (f(x + h) - f(x - h)) / (2 * h)
        if d == 0 or not math.isfinite(d):
            return None
        step = fx / d
        x -= step
        if not 0 < x <= 1 + 1e-12:
            return None
        if abs(step) < tol * max(1.0, abs(x)):
            return min(x, 1.0) if abs(f(x)) < 1e-10 else None
    return None


def critical_point(family: SpaceFamily, delta: float, hint=None):
    """Closed-form critical point of the reduced ball denominator.

    Components follow spaces.reduced_denominator: (x, y, z[, w]) for simplices,
    (x, y[, w]) for hypercubes. Returns None on the plateau and at delta = 0,
    where the exponent is known without a critical point.
    """
    delta = float(delta)
    family = _delegate(family)
    _check_delta(family, delta)
    if delta == 0 or _on_plateau(family, delta):
        return None
    k = family.kind
    if k is Kind.Hypercube:
        return _hypercube_point(family.q, delta)
    if k is Kind.HypercubeZeros:
        t = _tau(family)
        if not 0 < t < 1:
            raise ValueError("closed form needs 0 < tau < 1")
        return _hypercube_zeros_point(family.q, t, delta, hint)
    rho = _rho(family)
    if k is Kind.StdSimplex:
        return _plain_simplex_point(rho, delta, positive=False)
    if k is Kind.PosSimplex:
        return _plain_simplex_point(rho, delta, positive=True)
    t = _tau(family)
    _check_constrained(family)
    positive = k is Kind.PosSimplexOnes
    if hint is not None:
        l = _newton_scalar(_lambda_equation(rho, t, delta, positive), hint)
        p = None if l is None else _constrained_point(rho, t, delta, l, positive)
        if p is not None:
            return p
    pts = [_constrained_point(rho, t, delta, l, positive) for l in _lambda_roots(rho, t, delta, positive)]
    return _unique([p for p in pts if p is not None], f"{k.name} critical points")


def _check_constrained(family):
    rho, t = _rho(family), _tau(family)
    m = rho - t
    top = 1 - rho if family.kind is Kind.PosSimplexOnes else 1.0
    if not (0 < m < top and t > 0):
        raise ValueError(f"closed form needs 0 < tau and 0 < rho - tau < {top:g} ({family.label()})")


def _check_delta(family, delta):
    hi = family.q - 1 if family.kind.is_hypercube else 2.0
    if not (0 <= delta <= hi) or math.isnan(delta):
        raise ValueError(f"delta={delta} outside [0, {hi}]")


def _direction(family, delta):
    k = family.kind
    if k.is_hypercube:
        return (1.0, delta) if k is Kind.Hypercube else (1.0, delta, 2 * family.tau)
    if k.constrained:
        return (2.0, family.rho, delta, 2 * family.tau)
    return (2.0, family.rho, delta)


def _on_plateau(family, delta):
    # delta_max itself can carry rounding, where the critical point sits at y = 1
    return delta >= delta_max(family, BoundKind.GV) - 1e-13


def exponent_at(point, family, delta):
    r = _direction(_delegate(family), delta)
    return -sum(ri * log2(zi) for ri, zi in zip(r, point) if ri != 0)


def ball_exponent(family: SpaceFamily, delta: float, hint=None) -> float:
    """Total-ball exponent T~(family, delta)."""
    delta = float(delta)
    family = _delegate(family)
    _check_delta(family, delta)
    if delta == 0:
        return capacity(family)
    if _on_plateau(family, delta):
        return 2 * capacity(family)
    return exponent_at(critical_point(family, delta, hint), family, delta)


def gv_rate(family: SpaceFamily, delta: float) -> float:
    if delta == 0:
        _check_delta(family, delta)
        return capacity(family)
    return 2 * capacity(family) - ball_exponent(family, delta)


# delta_max

def _constrained_delta_max(family):
    rho, t = _rho(family), _tau(family)
    _check_constrained(family)
    m = rho - t
    positive = family.kind is Kind.PosSimplexOnes
    l1 = 1 - (m / (1 - rho) if positive else m)  # z* = 1 means lambda2 = lambda1^2
    hi = 2 * (1 - rho) if positive else 2.0
    # at fixed lambda1 the equation is a polynomial in delta (degree 2 or 3)
    # that always vanishes at the diameter; fit it exactly and deflate
    deg = 3 if positive else 2
    xs = np.linspace(0.0, hi, deg + 1)
    coeffs = np.polyfit(xs, [_lambda_equation(rho, t, d, positive)(l1) for d in xs], deg)
    quot, _ = np.polydiv(coeffs, [1.0, -hi])
    roots = [r.real for r in np.roots(quot) if abs(r.imag) < 1e-12 and 0 < r.real < hi]
    good = [d for d in roots if d > 0 and _constrained_point(rho, t, d, l1, positive) is not None]
    return _unique([(d,) for d in good], f"{family.kind.name} delta_max values")[0]


def delta_max(family: SpaceFamily, kind: BoundKind = BoundKind.GV) -> float:
    family = _delegate(family)
    k = family.kind
    if kind is BoundKind.GV:
        if k is Kind.StdSimplex:
            rho = _rho(family)
            return 2 * (1 + rho) / (2 + rho)
        if k is Kind.PosSimplex:
            rho = _rho(family)
            return 2 * (1 - rho) / (2 - rho)
        if k is Kind.Hypercube:
            q = family.q
            return (q * q - 1) / (3 * q)
        if k is Kind.HypercubeZeros:
            q, t = family.q, _tau(family)
            return q * (1 - t) * (1 - (1 - t) * (2 * q - 1) / (3 * (q - 1)))
        return _constrained_delta_max(family)
    if kind is BoundKind.GVMR:
        _require(kind, family)
        if k is Kind.StdSimplex:
            return 2.0
        if k is Kind.PosSimplex:
            return 2 * (1 - _rho(family))
        q = family.q
        return 3 * q * (q - 1) / (4 * (2 * q - 1))
    if kind is BoundKind.ConstantWeightGV:
        _require(kind, family)
        rho = _rho(family)
        return 2 * (rho - 1) / rho
    if kind is BoundKind.KolesnikKrachkovsky:
        _require(kind, family)
        return 0.5
    if kind is BoundKind.Lee:
        _require(kind, family)
        return 1.0
    raise ValueError(f"no delta_max for {kind.name}")


def delta_max_optimized(kind: BoundKind) -> float:
    """delta_max of the positive-simplex bounds optimized over rho."""
    if kind is BoundKind.GV:
        return 1.0
    if kind is BoundKind.GVMR:
        return 2.0
    raise ValueError(f"no optimized-rho delta_max for {kind.name}")


# GV-MR

def _bisect(fun, target, lo=0.0, hi=1.0, iters=200):
    # fun increasing on [lo, hi]
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if fun(mid) < target:
            lo = mid
        else:
            hi = mid
        if hi - lo < 1e-16:
            break
    return 0.5 * (lo + hi)


def simplex_mr_params(kind: Kind, rho: float, l1: float):
    """(tau_opt, delta) on the lambda1 parameterization at fixed rho."""
    if kind is Kind.StdSimplex:
        return rho * rho / (1 + rho - l1), 2 * l1 * rho / (1 - l1 * l1 + l1 * rho)
    return rho * rho / (1 - l1 * (1 - rho)), 2 * l1 * rho * (1 - rho) / (rho * l1 + (1 - rho) * (1 - l1 * l1))


def tau_eq41(q: int, y: float) -> float:
    """tau solving the hypercube optimality equation at a given y.

    At y = 1 the equation vanishes identically; the value there is the limit
    y -> 1, (q+1)/(4q-2).
    """
    s0 = sum(y ** j for j in range(1, q))
    s1 = sum(j * y ** j for j in range(1, q))
    num = (q - 1) * (1 + s0) - 2 * s1
    den = (q - 1) * q - 2 * s1
    if abs(1 - y) < 1e-6:
        return (q + 1) / (4 * q - 2)
    return num / den


def _mr_result(rate, tau, aux):
    aux = dict(aux)
    aux["tau_opt"] = tau
    return rate, tau, aux


def _w_ball(point):
    return point[-1] if point is not None else 1.0


def gvmr_rate(family: SpaceFamily, delta: float):
    """(rate, tau_opt, aux) for the Marcus-Roth improvement at fixed rho or q."""
    _require(BoundKind.GVMR, family)
    delta = float(delta)
    family = _delegate(family)
    _check_delta(family, delta)
    k = family.kind
    dmax = delta_max(family, BoundKind.GVMR)
    if delta >= dmax:
        raise ValueError(f"delta={delta} at or beyond the GV-MR delta_max {dmax}")
    if k is Kind.Hypercube:
        return _hypercube_mr(family.q, delta)
    rho = _rho(family)
    l1 = _bisect(lambda l: simplex_mr_params(k, rho, l)[1], delta)
    if delta == 0:
        l1 = 0.0
    tau = simplex_mr_params(k, rho, l1)[0]
    sub = family.with_tau(tau)
    if delta == 0:
        return _mr_result(capacity(sub), tau, {"lambda1": 0.0})
    point = critical_point(sub, delta, hint=l1)
    T = exponent_at(point, sub, delta) if point is not None else 2 * capacity(sub)
    rate = 2 * capacity(sub) - T
    return _mr_result(rate, tau, {"lambda1": l1, "w_cap": capacity_point(sub)[-1], "w_ball": _w_ball(point)})


def _hypercube_mr(q, delta, damping=0.5, tol=None, max_iter=500):
    tol = config.FIXED_POINT_TOL if tol is None else tol
    if delta == 0:
        return _mr_result(log2(q), 1 / q, {"y": 0.0, "w_cap": 1.0, "w_ball": 1.0})
    tau = (q + 1) / (4 * q - 2)
    y = 0.5
    point = None
    for it in range(max_iter):
        sub = SpaceFamily(Kind.HypercubeZeros, q=q, tau=tau)
        if _on_plateau(sub, delta):
            point, y = None, 1.0
        else:
            point = _hypercube_zeros_point(q, tau, delta, y if point is not None else None)
            y = point[1]
        new = (1 - damping) * tau + damping * tau_eq41(q, y)
        if abs(new - tau) < tol:
            tau = new
            break
        tau = new
    else:
        raise NumericalFailure("hypercube GV-MR fixed point did not converge", abs(new - tau))
    sub = SpaceFamily(Kind.HypercubeZeros, q=q, tau=tau)
    point = critical_point(sub, delta)
    T = exponent_at(point, sub, delta) if point is not None else 2 * capacity(sub)
    aux = {"y": point[1] if point else 1.0, "w_cap": capacity_point(sub)[-1], "w_ball": _w_ball(point),
           "iterations": it + 1}
    return _mr_result(2 * capacity(sub) - T, tau, aux)


# optimized rho (positive / inverted simplex)

def rho_opt_gv(delta):
    return (3 * (2 - delta) - math.sqrt(9 * delta * delta - 4 * delta + 4)) / 8


def gv_rate_optimized_rho(base: SpaceFamily, delta: float):
    """(rate, rho_opt) for the positive or inverted simplex with rho optimized."""
    if base.kind not in (Kind.PosSimplex, Kind.InvSimplex):
        raise ValueError("rho optimization is defined for the positive and inverted simplex")
    if not 0 <= delta <= 2:
        raise ValueError(f"delta={delta} outside [0, 2]")
    if delta >= 1:
        # rho_opt reaches 0 at delta = 1: a single vector, rate 0
        return 0.0, 0.0
    rho = rho_opt_gv(delta)
    fam = SpaceFamily(Kind.PosSimplex, rho=rho)
    if delta > 0:
        _, y, _ = _plain_simplex_point(rho, delta, positive=True)
        gap = (rho / (1 - rho)) ** 2 - y
        if abs(gap) > 1e-8:
            raise NumericalFailure("optimality condition (rho/(1-rho))^2 = y* violated", abs(gap))
    return gv_rate(fam, delta), rho


def rho_opt_mr(l1):
    a, b = math.sqrt(1 - l1), math.sqrt(1 + 3 * l1)
    return 2 * a / (3 * a + b)


def _mr_opt_delta(l1):
    rho = rho_opt_mr(l1)
    return simplex_mr_params(Kind.PosSimplex, rho, l1)[1]


def gvmr_rate_optimized_rho(base: SpaceFamily, delta: Optional[float] = None, lambda1: Optional[float] = None):
    """(rate, rho_opt, tau_opt, aux) for the positive or inverted simplex.

    Give either delta (mapped to lambda1 by bisection) or lambda1 directly.
    """
    if base.kind not in (Kind.PosSimplex, Kind.InvSimplex):
        raise ValueError("rho optimization is defined for the positive and inverted simplex")
    if (delta is None) == (lambda1 is None):
        raise ValueError("give exactly one of delta, lambda1")
    if lambda1 is None:
        if not 0 <= delta < 2:
            raise ValueError(f"delta={delta} outside [0, 2)")
        l1 = 0.0 if delta == 0 else _bisect(_mr_opt_delta, delta)
    else:
        if not 0 <= lambda1 < 1:
            raise ValueError("lambda1 must lie in [0, 1)")
        l1 = float(lambda1)
        delta = _mr_opt_delta(l1)
    rho = rho_opt_mr(l1)
    tau, _ = simplex_mr_params(Kind.PosSimplex, rho, l1)
    sub = SpaceFamily(Kind.PosSimplexOnes, rho=rho, tau=tau)
    aux = {"lambda1": l1, "rho_opt": rho, "tau_opt": tau, "delta": delta}
    if delta == 0:
        return capacity(sub), rho, tau, aux
    point = critical_point(sub, delta, hint=l1)
    T = exponent_at(point, sub, delta) if point is not None else 2 * capacity(sub)
    aux["w_cap"] = capacity_point(sub)[-1]
    aux["w_ball"] = _w_ball(point)
    return 2 * capacity(sub) - T, rho, tau, aux


# comparison curves

def comparison_rate(kind: BoundKind, family: SpaceFamily, delta: float) -> float:
    _require(kind, family)
    if kind is BoundKind.SpherePacking:
        rho = _rho(family)
        if not 0 <= delta <= 2:
            raise ValueError(f"delta={delta} outside [0, 2]")
        a = delta / 2 + rho
        first = (1 + a) * H2(rho / (1 + a))
        return first - (a * H2(rho / a) if a > 0 else 0.0)
    if kind is BoundKind.ConstantWeightGV:
        rho = _rho(family)
        if not 0 <= delta <= 2:
            raise ValueError(f"delta={delta} outside [0, 2]")
        cap = rho * H2(1 / rho)
        t = min(delta / 2, (rho - 1) / rho)  # inner maximizer
        inner = H2(t) + ((rho - 1) * H2(t / (rho - 1)) if rho > 1 else 0.0)
        return 2 * cap - (cap + inner)
    if kind is BoundKind.KolesnikKrachkovsky:
        if not 0 <= delta <= 0.5:
            raise ValueError(f"delta={delta} outside [0, 1/2]")
        return 1 - H2(delta)
    if kind is BoundKind.Lee:
        if not 0 <= delta <= 1:
            raise ValueError(f"delta={delta} outside [0, 1]")
        return config.xlog2(2 - delta) + config.xlog2(delta)
    raise ValueError(f"{kind.name} is not a comparison bound")


# curves

@dataclass
class RateCurve:
    family: SpaceFamily
    bound: BoundKind
    samples: List[Tuple[float, float, Dict[str, float]]] = field(default_factory=list)
    gaps: List[Tuple[float, str]] = field(default_factory=list)
    optimized_rho: bool = False

    def deltas(self):
        return [s[0] for s in self.samples]

    def rates(self):
        return [s[1] for s in self.samples]


def evaluate(kind: BoundKind, family: SpaceFamily, delta: float, optimized_rho=False):
    """(rate, aux) of one bound at one delta."""
    if optimized_rho:
        if kind is BoundKind.GV:
            rate, rho = gv_rate_optimized_rho(family, delta)
            return rate, {"rho_opt": rho}
        if kind is BoundKind.GVMR:
            rate, rho, tau, aux = gvmr_rate_optimized_rho(family, delta=delta)
            aux = {k: v for k, v in aux.items() if k != "delta"}
            return rate, aux
        if kind is BoundKind.Capacity:
            return 1.0, {"rho_opt": 0.5}
    if kind is BoundKind.GV:
        return gv_rate(family, delta), {}
    if kind is BoundKind.GVMR:
        rate, _, aux = gvmr_rate(family, delta)
        return rate, aux
    if kind is BoundKind.Capacity:
        return capacity(family), {}
    return comparison_rate(kind, family, delta), {}


def rate_curve(family: SpaceFamily, kind: BoundKind, grid: Sequence[float], optimized_rho=False) -> RateCurve:
    grid = [float(d) for d in grid]
    if not grid:
        raise ValueError("empty delta grid")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("delta grid must be strictly increasing")
    if kind is not BoundKind.GV and kind is not BoundKind.Capacity and not optimized_rho:
        _require(kind, family)
    curve = RateCurve(family, kind, optimized_rho=optimized_rho)
    for d in grid:
        try:
            rate, aux = evaluate(kind, family, d, optimized_rho)
        except (ValueError, NumericalFailure, ZeroDivisionError) as err:
            log.info("gap at delta=%r for %s: %s", d, kind.name, err)
            curve.gaps.append((d, str(err)))
            continue
        if not math.isfinite(rate):
            curve.gaps.append((d, "non-finite rate"))
            continue
        curve.samples.append((d, rate, aux))
    return curve
