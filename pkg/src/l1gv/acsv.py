"""Smooth critical points of rational generating functions.

For F = G/H and a direction r, the exponential growth of the coefficients
along k = n r is governed by the positive solution z* of

    H(z) = 0,    r_l z_j dH/dz_j = r_j z_l dH/dz_l   (j < l),

with rate -sum r_i log2 z_i*. Newton runs in log coordinates so iterates stay
positive; z_j dH/dz_j and its derivatives are exact Euler-operator
polynomials, so the Jacobian is exact as well.
"""
from __future__ import annotations

import enum
import itertools
import math
from dataclasses import dataclass
from typing import Callable, List, Optional, Sequence, Tuple, Union

import numpy as np

from . import config
from .poly import SparsePoly, identify, exact_divide, poly_eval, poly_theta

log = config.get_logger(__name__)


class NumericalFailure(RuntimeError):
    def __init__(self, msg, best_residual=float("nan")):
        super().__init__(f"{msg} (best residual {best_residual:.3e})")
        self.best_residual = best_residual


@dataclass(frozen=True)
class CriticalProblem:
    H: SparsePoly
    direction: Tuple[float, ...]

    def __post_init__(self):
        d = tuple(float(v) for v in self.direction)
        object.__setattr__(self, "direction", d)
        if self.H.constant_term() == 0:
            raise ValueError("H must have a nonzero constant term")
        if len(d) != self.H.num_vars:
            raise ValueError("direction length must equal the number of variables")
        if any(v < 0 or not math.isfinite(v) for v in d) or not any(v > 0 for v in d):
            raise ValueError("direction must be nonnegative with a positive component")


@dataclass(frozen=True)
class CriticalSolution:
    point: Tuple[float, ...]
    rate: float
    residual_H: float
    residual_prop: float
    direction: Tuple[float, ...] = ()

    def __post_init__(self):
        if any(not (v > 0) or not math.isfinite(v) for v in self.point):
            raise ValueError(f"critical point must be positive, got {self.point}")
        if not (self.residual_H < config.ACCEPT_TOL and self.residual_prop < config.ACCEPT_TOL):
            raise ValueError(
                f"residuals too large: H {self.residual_H:.3e}, proportionality {self.residual_prop:.3e}")


class _Compiled:
    """Float evaluator for a polynomial: exponent matrix and coefficients."""

    def __init__(self, p: SparsePoly):
        items = list(p.terms.items())
        self.E = np.array([e for e, _ in items], dtype=float).reshape(len(items), p.num_vars)
        self.c = np.array([float(c) for _, c in items])

    def at_log(self, t):
        if not len(self.c):
            return 0.0
        return float(np.exp(self.E @ t) @ self.c)


class _System:
    """Equations of the critical system and their log-coordinate Jacobian."""

    def __init__(self, H: SparsePoly):
        self.H = H
        n = H.num_vars
        self.n = n
        self.theta = [poly_theta(H, j) for j in range(n)]
        self.h = _Compiled(H)
        self.th = [_Compiled(t) for t in self.theta]
        self.th2 = [[_Compiled(poly_theta(self.theta[j], k)) for k in range(n)] for j in range(n)]

    def parts(self, t):
        h = self.h.at_log(t)
        E = np.array([c.at_log(t) for c in self.th])
        EE = np.array([[c.at_log(t) for c in row] for row in self.th2])
        return h, E, EE


def _prop_residuals(H: SparsePoly, z, r):
    l = len(z) - 1
    Ez = [poly_eval(poly_theta(H, j), z) for j in range(len(z))]
    return [r[l] * Ez[j] - r[j] * Ez[l] for j in range(l)]


def _make_solution(H, z, r):
    z = tuple(float(v) for v in z)
    res_h = abs(poly_eval(H, z))
    props = _prop_residuals(H, z, r)
    res_p = max((abs(v) for v in props), default=0.0)
    return CriticalSolution(z, rate_exponent_raw(z, r), res_h, res_p, tuple(r))


def residuals(H: SparsePoly, z, r) -> CriticalSolution:
    """Residuals of the critical system at a given point and direction."""
    return _make_solution(H, z, r)


def rate_exponent_raw(z, r):
    return -sum(ri * math.log2(zi) for ri, zi in zip(r, z) if zi != 1.0 and ri != 0)


def rate_exponent(solution: CriticalSolution, direction=None, pairs: Sequence[int] = ()):
    """-sum r_i log2 z_i, with z_i = 1 contributing nothing.

    `pairs` lists reduced variables that stand for an identified symmetric
    pair; with the per-variable weight r given in `direction`, each such
    variable contributes -2 r log2 z.
    """
    r = list(solution.direction if direction is None else direction)
    if len(r) != len(solution.point):
        raise ValueError("direction length mismatch")
    for idx in pairs:
        r[idx] *= 2.0
    return rate_exponent_raw(solution.point, r)


def _seed_values():
    return (0.5, 0.25, 0.75, 0.1, 0.9, 0.05, 1.5, 0.02, 0.97, 3.0)


def _seed_grid(n, limit=600):
    vals = _seed_values()
    seen = 0
    # walk the product grid in order of total seed index so central seeds come first
    for total in range((len(vals) - 1) * n + 1):
        for idx in itertools.product(range(len(vals)), repeat=n):
            if sum(idx) != total:
                continue
            yield tuple(vals[i] for i in idx)
            seen += 1
            if seen >= limit:
                return


def _newton(fun, x0, tol, max_iter=100, max_step=2.0):
    """Damped Newton on fun(x) -> (F, J); returns (x, max|F|)."""
    x = np.array(x0, dtype=float)
    F, J = fun(x)
    best = float(np.max(np.abs(F)))
    polish = 0
    for _ in range(max_iter):
        if best < tol:
            # a couple of extra steps squeeze out the last digits
            polish += 1
            if polish > 3 or best == 0.0:
                break
        try:
            step = np.linalg.solve(J, -F)
        except np.linalg.LinAlgError:
            step = np.linalg.lstsq(J, -F, rcond=None)[0]
        if not np.all(np.isfinite(step)):
            break
        big = np.max(np.abs(step))
        if big > max_step:
            step *= max_step / big
        alpha = 1.0
        norm0 = float(np.linalg.norm(F))
        while alpha > 1e-8:
            xn = x + alpha * step
            Fn, Jn = fun(xn)
            if np.all(np.isfinite(Fn)) and np.linalg.norm(Fn) < (1 - 1e-4 * alpha) * norm0:
                break
            alpha *= 0.5
        else:
            break  # no decrease along the step
        x, F, J = xn, Fn, Jn
        best = float(np.max(np.abs(F)))
    return x, best


def _critical_equations(system: _System, r):
    n = system.n
    l = n - 1

    def fun(t):
        h, E, EE = system.parts(t)
        F = np.empty(n)
        J = np.empty((n, n))
        F[0] = h
        J[0] = E
        for j in range(l):
            F[j + 1] = r[l] * E[j] - r[j] * E[l]
            J[j + 1] = r[l] * EE[j] - r[j] * EE[l]
        return F, J

    return fun


def _degenerate(t):
    # Newton in log coordinates can run off to a boundary point where some
    # coordinate is numerically zero while the residuals still vanish
    return bool(np.min(t) < math.log(config.MIN_COMPONENT))


def solve_critical_point(problem: CriticalProblem, initial=None, tol=None) -> CriticalSolution:
    """Positive solution of the critical system by damped Newton with seed restarts."""
    tol = config.NEWTON_TOL if tol is None else tol
    r = problem.direction
    if any(v <= 0 for v in r):
        raise ValueError("direction components must be strictly positive")
    system = _System(problem.H)
    fun = _critical_equations(system, r)
    n = system.n
    if n == 1:
        # H(z) = 0 alone
        seeds = [initial] if initial is not None else [(v,) for v in _seed_values()]
    else:
        seeds = ([tuple(initial)] if initial is not None else []) + list(_seed_grid(n))
    best = float("inf")
    for seed in seeds:
        if len(seed) != n or any(v <= 0 for v in seed):
            raise ValueError("seed must be positive with one entry per variable")
        t, res = _newton(fun, np.log(np.array(seed, dtype=float)), tol)
        best = min(best, res)
        if res < tol:
            if _degenerate(t):
                log.debug("rejected boundary candidate %s", np.exp(t))
                continue
            try:
                return _make_solution(problem.H, np.exp(t), r)
            except ValueError as err:  # pragma: no cover - residual recheck failed
                log.debug("rejected candidate: %s", err)
    raise NumericalFailure("critical point solve did not converge", best)


def plateau_direction(problem: CriticalProblem, free_index=None, initial=None, tol=None):
    """Direction weight r_l* at which z_l* = 1, with the other weights fixed.

    Returns (r_l*, CriticalSolution at the direction with r_l = r_l*).
    """
    tol = config.NEWTON_TOL if tol is None else tol
    H = problem.H
    n = H.num_vars
    l = n - 1 if free_index is None else free_index
    if not 0 <= l < n:
        raise IndexError("free index out of range")
    if n < 2:
        raise ValueError("need at least two variables")
    # move the free variable to the last slot so the equations keep their form
    perm = [i for i in range(n) if i != l] + [l]
    Hp = SparsePoly(n, {tuple(e[i] for i in perm): c for e, c in H.terms.items()},
                    [H.var_labels[i] for i in perm])
    r_fixed = [problem.direction[i] for i in perm[:-1]]
    if any(v <= 0 for v in r_fixed):
        raise ValueError("fixed direction components must be strictly positive")
    system = _System(Hp)

    def fun(x):
        t = np.append(x[:-1], 0.0)
        rl = math.exp(x[-1])
        h, E, EE = system.parts(t)
        F = np.empty(n)
        J = np.zeros((n, n))
        F[0] = h
        J[0, :-1] = E[:-1]
        for j in range(n - 1):
            F[j + 1] = rl * E[j] - r_fixed[j] * E[-1]
            J[j + 1, :-1] = rl * EE[j][:-1] - r_fixed[j] * EE[-1][:-1]
            J[j + 1, -1] = rl * E[j]
        return F, J

    r0 = problem.direction[l] if problem.direction[l] > 0 else 1.0
    seeds = []
    if initial is not None:
        seeds.append(tuple(initial))
    for zs in _seed_grid(n - 1, limit=200):
        for rs in (r0, 0.5 * r0, 2.0 * r0):
            seeds.append(zs + (rs,))
    best = float("inf")
    for seed in seeds:
        x, res = _newton(fun, np.log(np.array(seed, dtype=float)), tol)
        best = min(best, res)
        if res < tol:
            if _degenerate(x[:-1]):
                log.debug("rejected boundary candidate %s", np.exp(x[:-1]))
                continue
            rl = math.exp(x[-1])
            zp = list(np.exp(x[:-1])) + [1.0]
            z = [0.0] * n
            for k, i in enumerate(perm):
                z[i] = zp[k]
            direction = list(problem.direction)
            direction[l] = rl
            try:
                return rl, _make_solution_any(H, z, direction, l)
            except ValueError as err:  # pragma: no cover
                log.debug("rejected plateau candidate: %s", err)
    raise NumericalFailure("plateau solve did not converge", best)


def _make_solution_any(H, z, r, l):
    # residuals relative to variable l as the reference coordinate
    z = tuple(float(v) for v in z)
    Ez = [poly_eval(poly_theta(H, j), z) for j in range(len(z))]
    props = [r[l] * Ez[j] - r[j] * Ez[l] for j in range(len(z)) if j != l]
    return CriticalSolution(z, rate_exponent_raw(z, r), abs(poly_eval(H, z)),
                            max((abs(v) for v in props), default=0.0), tuple(r))


def reduce_symmetric(H: SparsePoly, pair, spurious_factor: Optional[SparsePoly] = None,
                     hypothesis="monomial") -> SparsePoly:
    """Identify variables pair=(i, j) into one, optionally dividing out a factor.

    hypothesis="monomial" checks that every monomial has equal exponents at i
    and j. hypothesis="swap" only requires H to be invariant under swapping the
    two variables, which is what the pair-counting denominators satisfy; the
    identification then typically introduces a spurious factor that the caller
    supplies for exact division (in the reduced variables).
    """
    i, j = pair
    if i == j or not (0 <= i < H.num_vars and 0 <= j < H.num_vars):
        raise IndexError("bad variable pair")
    if hypothesis == "monomial":
        for e in H.terms:
            if e[i] != e[j]:
                raise ValueError(f"monomial {e} has unequal exponents at positions {i}, {j}")
    elif hypothesis == "swap":
        swapped = {}
        for e, c in H.terms.items():
            e2 = list(e)
            e2[i], e2[j] = e2[j], e2[i]
            swapped[tuple(e2)] = c
        if swapped != H.terms:
            raise ValueError("H is not invariant under swapping the pair")
    else:
        raise ValueError(f"unknown hypothesis {hypothesis!r}")
    R = identify(H, min(i, j), max(i, j))
    if spurious_factor is not None:
        R = exact_divide(R, spurious_factor.relabel(R.var_labels))
    return R


def mr_optimality_gap(cap_solution: CriticalSolution, ball_solution: CriticalSolution,
                      indices, ball_multiplicity=1) -> float:
    """(z_cap)^2 - (y_ball)^m at the tau coordinates.

    indices = (cap_index, ball_index). m is the factor multiplying tau in the
    ball direction: 1 when the ball keeps separate y1, y2 variables, 2 for a
    reduced ball variable w carrying direction 2 tau, where the condition reads
    w_cap = w_ball.
    """
    ci, bi = indices
    return cap_solution.point[ci] ** 2 - ball_solution.point[bi] ** ball_multiplicity


# scalar roots

class RootPolicy(enum.Enum):
    UniquePositive = "unique"
    SmallestInUnitInterval = "smallest"
    AllThenFilter = "all"


def _as_callable(f):
    if callable(f):
        return f, None
    coeffs = [float(c) for c in f]  # ascending powers

    def val(x):
        acc = 0.0
        for c in reversed(coeffs):
            acc = acc * x + c
        return acc

    def der(x):
        acc = 0.0
        for k in range(len(coeffs) - 1, 0, -1):
            acc = acc * x + k * coeffs[k]
        return acc

    return val, der


def _polish(f, df, a, b, fa, fb, tol):
    # bisection to a tight bracket, then Newton (kept inside the bracket)
    for _ in range(200):
        m = 0.5 * (a + b)
        fm = f(m)
        if fm == 0 or (b - a) < 1e-15 * max(1.0, abs(m)):
            break
        if (fa < 0) == (fm < 0):
            a, fa = m, fm
        else:
            b, fb = m, fm
        if b - a < 1e-9 and abs(fm) < tol:
            break
    x = 0.5 * (a + b) if fm != 0 else m
    fx = f(x)
    for _ in range(20):
        if abs(fx) < tol:
            break
        if df is not None:
            d = df(x)
        else:
            h = 1e-7 * max(1.0, abs(x))
            d = (f(x + h) - f(x - h)) / (2 * h)
        if d == 0 or not math.isfinite(d):
            break
        xn = x - fx / d
        if not (a <= xn <= b):
            break
        fn = f(xn)
        if abs(fn) >= abs(fx):
            break
        x, fx = xn, fn
    return x, fx


def find_positive_root(f: Union[Callable[[float], float], Sequence[float]], interval,
                       policy: RootPolicy = RootPolicy.UniquePositive, step=None, tol=None):
    """Roots of a scalar function (or ascending coefficient list) inside an interval.

    Scans at a fixed step for sign changes, then bisects and polishes with
    Newton. Sign changes across poles are discarded. Returns a float, or a
    list of floats for AllThenFilter. A root whose
    residual cannot be pushed below tol because of rounding is still returned
    once its bracket has collapsed to machine precision; the residual is logged.
    """
    step = config.ROOT_SCAN_STEP if step is None else step
    tol = config.ROOT_POLISH_TOL if tol is None else tol
    if isinstance(policy, str):
        policy = RootPolicy[policy]
    lo, hi = float(interval[0]), float(interval[1])
    if not hi > lo:
        raise ValueError("empty interval")
    if policy is RootPolicy.SmallestInUnitInterval:
        lo, hi = max(lo, 0.0), min(hi, 1.0)
    fn, df = _as_callable(f)
    npts = max(2, int(math.ceil((hi - lo) / step)) + 1)
    xs = np.linspace(lo, hi, npts)
    vals = []
    for x in xs:
        try:
            v = fn(float(x))
        except (ZeroDivisionError, ValueError, OverflowError):
            v = float("nan")
        vals.append(v)
    roots: List[float] = []
    k = 0
    while k < npts - 1:
        a, b, fa, fb = float(xs[k]), float(xs[k + 1]), vals[k], vals[k + 1]
        if not (math.isfinite(fa) and math.isfinite(fb)):
            k += 1
            continue
        if fa == 0:  # grid point landed on a root
            roots.append(a)
            k += 1
            continue
        if (fa < 0) != (fb < 0) and fb != 0:
            x, fx = _polish(fn, df, a, b, fa, fb, tol)
            if not abs(fx) <= 1e-6 * max(1.0, abs(fa), abs(fb)):
                # sign change across a pole, not a root
                log.debug("discarding sign change near %.17g (|f| = %.3e)", x, abs(fx))
                k += 1
                continue
            if abs(fx) >= tol:
                log.debug("root near %.17g polished to |f| = %.3e only", x, abs(fx))
            roots.append(x)
        k += 1
    if vals[-1] == 0:
        roots.append(float(xs[-1]))
    roots = sorted(set(roots))
    if policy is RootPolicy.AllThenFilter:
        return roots
    if not roots:
        raise ValueError(f"no root in [{lo}, {hi}]")
    if policy is RootPolicy.UniquePositive:
        if len(roots) != 1:
            raise ValueError(f"expected a unique root in [{lo}, {hi}], found {len(roots)}: {roots}")
        return roots[0]
    return roots[0]
