import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from l1gv import acsv, bounds
from l1gv.bounds import (BoundKind, ball_exponent, capacity, capacity_point, comparison_rate, critical_point,
                         delta_max, gv_rate, gv_rate_optimized_rho, gvmr_rate, gvmr_rate_optimized_rho,
                         rate_curve, tau_eq41)
from l1gv.config import entropy
from l1gv.spaces import Kind, SpaceFamily, capacity_denominator, capacity_direction, reduced_denominator

F = SpaceFamily
STD2 = F(Kind.StdSimplex, rho=2)
POS = F(Kind.PosSimplex, rho=0.3)
HC4 = F(Kind.Hypercube, q=4)
CAP_STD2 = 3 * entropy(2 / 3)


def test_capacity_examples():
    assert math.isclose(capacity(STD2), CAP_STD2, abs_tol=1e-12)
    assert math.isclose(capacity(STD2), 2.7549, abs_tol=1e-4)
    assert capacity(HC4) == 2.0
    assert capacity(F(Kind.PosSimplex, rho=0.5)) == 1.0
    assert capacity(F(Kind.InvSimplex, rho=0.5)) == 1.0
    assert math.isclose(capacity(F(Kind.StdSimplexZeros, rho=2, tau=1.5)), 2 * entropy(0.75) + entropy(0.5))
    assert math.isclose(capacity(F(Kind.HypercubeZeros, q=4, tau=0.25)), 0.75 * math.log2(3) + entropy(0.25))


def test_empty_constrained_spaces_are_rejected():
    with pytest.raises(ValueError):
        capacity(F(Kind.StdSimplexZeros, rho=3, tau=1.5))
    with pytest.raises(ValueError):
        capacity(F(Kind.PosSimplexOnes, rho=0.8, tau=0.3))


def test_ball_exponent_examples():
    assert ball_exponent(STD2, 1.5) == 2 * CAP_STD2
    assert ball_exponent(STD2, 1.9) == 2 * CAP_STD2
    assert math.isclose(ball_exponent(F(Kind.Hypercube, q=2), 0.25), 1 + entropy(0.25), abs_tol=1e-12)
    for fam in (STD2, POS, HC4, F(Kind.HypercubeZeros, q=3, tau=0.2), F(Kind.PosSimplexOnes, rho=0.4, tau=0.2)):
        assert ball_exponent(fam, 0) == capacity(fam)
        assert gv_rate(fam, 0) == capacity(fam)
    with pytest.raises(ValueError):
        ball_exponent(STD2, 2.5)
    with pytest.raises(ValueError):
        ball_exponent(HC4, -0.1)


@given(st.floats(1e-3, 0.499))
def test_binary_hypercube_is_classical(d):
    assert math.isclose(gv_rate(F(Kind.Hypercube, q=2), d), 1 - entropy(d), abs_tol=1e-9)


def test_gv_zero_at_delta_max():
    assert abs(gv_rate(STD2, 1.5)) < 1e-9
    assert abs(gv_rate(HC4, 1.25)) < 1e-9


FAMILIES = [
    STD2, F(Kind.StdSimplex, rho=0.5), POS, F(Kind.InvSimplex, rho=0.3), HC4, F(Kind.Hypercube, q=3),
    F(Kind.StdSimplexZeros, rho=2, tau=1.2), F(Kind.StdSimplexZeros, rho=0.5, tau=0.1),
    F(Kind.PosSimplexOnes, rho=0.4, tau=0.2), F(Kind.HypercubeZeros, q=4, tau=0.3),
]


@pytest.mark.parametrize("fam", FAMILIES, ids=lambda f: f"{f.kind.value}-{f.label()}")
def test_monotone_plateau(fam):
    dm = delta_max(fam)
    top = fam.q - 1 if fam.kind.is_hypercube else 2.0
    grid = np.linspace(0, top, 61)
    T = [ball_exponent(fam, d) for d in grid]
    assert np.all(np.diff(T) >= -1e-12)
    for d, t in zip(grid, T):
        if d >= dm:
            assert t == 2 * capacity(fam)
    assert abs(gv_rate(fam, dm)) < 1e-9


@pytest.mark.parametrize("fam", FAMILIES, ids=lambda f: f"{f.kind.value}-{f.label()}")
def test_closed_form_matches_newton(fam):
    delegate = F(Kind.PosSimplex, rho=fam.rho) if fam.kind is Kind.InvSimplex else fam
    H = reduced_denominator(delegate.kind, fam.q)
    dm = delta_max(fam)
    for d in np.linspace(0, dm, 9)[1:-1]:
        pt = critical_point(fam, d)
        sol = acsv.solve_critical_point(acsv.CriticalProblem(H, bounds._direction(delegate, d)), initial=pt)
        assert np.allclose(sol.point, pt, rtol=0, atol=1e-8)
        assert max(acsv.residuals(H, pt, sol.direction).residual_H, 0) < 1e-9


def test_delta_max_examples():
    assert delta_max(STD2) == 1.5
    assert math.isclose(delta_max(HC4), 1.25)
    assert math.isclose(delta_max(HC4, BoundKind.GVMR), 9 / 7)
    assert math.isclose(delta_max(F(Kind.PosSimplex, rho=0.5)), 2 / 3)
    assert math.isclose(delta_max(STD2, BoundKind.ConstantWeightGV), 1.0)
    assert delta_max(POS, BoundKind.KolesnikKrachkovsky) == 0.5
    assert delta_max(HC4, BoundKind.Lee) == 1.0
    with pytest.raises(ValueError):
        delta_max(STD2, BoundKind.Lee)
    with pytest.raises(ValueError):
        delta_max(STD2, BoundKind.SpherePacking)


@pytest.mark.parametrize("fam", [F(Kind.StdSimplexZeros, rho=2, tau=1.2), F(Kind.StdSimplexZeros, rho=0.5, tau=0.1),
                                 F(Kind.PosSimplexOnes, rho=0.4, tau=0.2), F(Kind.HypercubeZeros, q=3, tau=0.3)],
                         ids=lambda f: f"{f.kind.value}-{f.label()}")
def test_constrained_delta_max_matches_plateau(fam):
    H = reduced_denominator(fam.kind, fam.q)
    r = list(bounds._direction(fam, 0.5))
    idx = len(r) - 2 if not fam.kind.is_hypercube else 1
    d, _ = acsv.plateau_direction(acsv.CriticalProblem(H, r), free_index=idx if not fam.kind.is_hypercube else 1)
    assert math.isclose(d, delta_max(fam), abs_tol=1e-8)


# GV-MR

def test_gvmr_examples():
    rate, tau, aux = gvmr_rate(STD2, 0.0)
    assert rate == capacity(STD2)
    assert math.isclose(tau, 4 / 3)
    assert tau_eq41(4, 1.0) == 5 / 14
    assert math.isclose(tau_eq41(4, 1 - 1e-4), 5 / 14, abs_tol=1e-3)
    prev = None
    for d in (1.2, 1.25, 1.28, 1.285):
        rate = gvmr_rate(HC4, d)[0]
        assert rate > 0
        assert prev is None or rate < prev
        prev = rate
    assert prev < 1e-6
    with pytest.raises(ValueError):
        gvmr_rate(HC4, 9 / 7)
    with pytest.raises(ValueError):
        gvmr_rate(F(Kind.StdSimplexZeros, rho=2, tau=1), 0.5)


def test_lambda_roundtrip_through_quintic():
    for l1 in (0.1, 0.3, 0.5, 0.8):
        tau, d = bounds.simplex_mr_params(Kind.StdSimplex, 2.0, l1)
        roots = [r for r in bounds._lambda_roots(2.0, tau, d, False)
                 if bounds._constrained_point(2.0, tau, d, r, False) is not None]
        assert len(roots) == 1 and math.isclose(roots[0], l1, abs_tol=1e-8)


@pytest.mark.parametrize("fam,deltas", [
    (STD2, (0.3, 0.8, 1.5, 1.9)),
    (POS, (0.2, 0.6, 1.2)),
    (F(Kind.InvSimplex, rho=0.3), (0.4,)),
    (HC4, (0.3, 0.9, 1.25)),
    (F(Kind.Hypercube, q=3), (0.2, 0.6)),
])
def test_optimality_condition_at_optimum(fam, deltas):
    for d in deltas:
        _, tau, aux = gvmr_rate(fam, d)
        assert math.isclose(aux["w_cap"], aux["w_ball"], rel_tol=1e-8, abs_tol=1e-8)
        sub = bounds._delegate(fam).with_tau(tau)
        cap = acsv.residuals(capacity_denominator(sub.kind, sub.q), capacity_point(sub),
                             capacity_direction(sub))
        ball = acsv.residuals(reduced_denominator(sub.kind, sub.q), critical_point(sub, d), bounds._direction(sub, d))
        # w_cap^2 vs the ball variable squared (it carries direction 2 tau)
        scale = max(1.0, cap.point[-1] ** 2)
        assert abs(acsv.mr_optimality_gap(cap, ball, (-1, -1), ball_multiplicity=2)) < 1e-7 * scale


@pytest.mark.parametrize("q,deltas", [(3, (0.3, 0.8)), (4, (0.5, 1.0)), (5, (0.8,))])
def test_hypercube_mr_is_the_tau_maximum(q, deltas):
    fam = F(Kind.Hypercube, q=q)
    for d in deltas:
        rate, tau, _ = gvmr_rate(fam, d)
        grid = np.linspace(max(tau - 0.05, 0.01), min(tau + 0.05, 0.99), 41)
        best = max(gv_rate(fam.with_tau(t), d) for t in grid)
        assert rate >= best - 1e-9
        assert rate - best < 1e-4


def test_simplex_mr_is_the_tau_maximum():
    rate, tau, _ = gvmr_rate(STD2, 1.0)
    grid = np.linspace(tau - 0.2, tau + 0.2, 81)
    best = max(gv_rate(STD2.with_tau(t), 1.0) for t in grid)
    assert rate >= best - 1e-9 and rate - best < 1e-4


@pytest.mark.parametrize("fam", [STD2, POS, HC4, F(Kind.Hypercube, q=3), F(Kind.Hypercube, q=5)],
                         ids=lambda f: f.label())
def test_dominance(fam):
    top = min(delta_max(fam), delta_max(fam, BoundKind.GVMR))
    for d in np.linspace(0, top, 26)[:-1]:
        assert gvmr_rate(fam, d)[0] >= gv_rate(fam, d) - 1e-9


def test_sandwich_standard_simplex():
    for d in np.linspace(0, 1.5, 31):
        assert gv_rate(STD2, d) <= comparison_rate(BoundKind.SpherePacking, STD2, d) + 1e-9
    for d in np.linspace(0, 1.99, 100):
        assert comparison_rate(BoundKind.ConstantWeightGV, STD2, d) <= gvmr_rate(STD2, d)[0] + 1e-9


@pytest.mark.xfail(strict=True, reason="at tau = rho^2/(1+rho) only the capacity side has w = 1; the ball side does not")
def test_zero_constrained_gv_reduces_to_plain_gv():
    sub = STD2.with_tau(4 / 3)
    for d in (0.3, 0.7, 1.2):
        assert math.isclose(gv_rate(sub, d), gv_rate(STD2, d), abs_tol=1e-9)
        assert math.isclose(critical_point(sub, d)[-1], 1.0, abs_tol=1e-9)


def test_zero_constrained_reduction_what_holds():
    sub = STD2.with_tau(4 / 3)
    assert math.isclose(capacity(sub), capacity(STD2), abs_tol=1e-12)
    assert math.isclose(capacity_point(sub)[-1], 1.0, abs_tol=1e-12)
    for d in (0.3, 0.7, 1.2):
        assert gv_rate(sub, d) >= gv_rate(STD2, d) - 1e-12
        assert gvmr_rate(STD2, d)[0] >= gv_rate(sub, d) - 1e-12


# optimized rho

def test_optimized_rho_gv():
    rate, rho = gv_rate_optimized_rho(POS, 0.0)
    assert rho == 0.5 and rate == 1.0
    _, rho = gv_rate_optimized_rho(POS, 0.2)
    assert math.isclose(rho, (5.4 - math.sqrt(3.56)) / 8, abs_tol=1e-12)
    assert math.isclose(rho, 0.43915, abs_tol=1e-5)
    for d in np.linspace(0.01, 0.99, 50):
        rate, rho = gv_rate_optimized_rho(F(Kind.InvSimplex, rho=0.5), d)
        # rho_opt maximizes over rho
        for r in (rho - 0.01, rho + 0.01):
            if 0 < r < 1 and d < delta_max(F(Kind.PosSimplex, rho=r)):
                assert gv_rate(F(Kind.PosSimplex, rho=r), d) <= rate + 1e-12
    assert gv_rate_optimized_rho(POS, 1.5) == (0.0, 0.0)
    with pytest.raises(ValueError):
        gv_rate_optimized_rho(STD2, 0.2)


def test_optimized_rho_gvmr():
    rate, rho, tau, aux = gvmr_rate_optimized_rho(POS, lambda1=0.0)
    assert rho == 0.5 and aux["delta"] == 0 and rate == 1.0
    _, rho, _, aux = gvmr_rate_optimized_rho(POS, lambda1=0.5)
    assert math.isclose(rho, (3 - math.sqrt(5)) / 2, abs_tol=1e-12)
    ds = [gvmr_rate_optimized_rho(POS, lambda1=1 - 10.0 ** -k)[3]["delta"] for k in (1, 3, 6, 9)]
    assert all(a < b for a, b in zip(ds, ds[1:])) and 2 - ds[-1] < 1e-3
    rate, rho, tau, aux = gvmr_rate_optimized_rho(POS, delta=0.8)
    assert math.isclose(aux["delta"], 0.8, abs_tol=1e-12)
    assert math.isclose(aux["w_cap"], aux["w_ball"], abs_tol=1e-8)
    assert rate >= gv_rate_optimized_rho(POS, 0.8)[0]
    with pytest.raises(ValueError):
        gvmr_rate_optimized_rho(POS)
    with pytest.raises(ValueError):
        gvmr_rate_optimized_rho(POS, lambda1=1.0)


# comparison curves

def test_comparison_examples():
    assert comparison_rate(BoundKind.KolesnikKrachkovsky, POS, 0.5) == 0
    assert comparison_rate(BoundKind.Lee, HC4, 1.0) == 0
    assert comparison_rate(BoundKind.Lee, HC4, 0.0) == 2.0
    assert math.isclose(comparison_rate(BoundKind.SpherePacking, STD2, 0), CAP_STD2, abs_tol=1e-12)
    assert math.isclose(comparison_rate(BoundKind.ConstantWeightGV, STD2, 0), 2.0, abs_tol=1e-12)
    assert abs(comparison_rate(BoundKind.ConstantWeightGV, STD2, 1.0)) < 1e-12
    assert abs(comparison_rate(BoundKind.ConstantWeightGV, STD2, 1.7)) < 1e-12


def test_applicability():
    assert bounds.applicable(BoundKind.KolesnikKrachkovsky, F(Kind.InvSimplex, rho=0.3))
    assert not bounds.applicable(BoundKind.Lee, F(Kind.Hypercube, q=3))
    assert not bounds.applicable(BoundKind.ConstantWeightGV, F(Kind.StdSimplex, rho=0.5))
    assert not bounds.applicable(BoundKind.GVMR, F(Kind.HypercubeZeros, q=3, tau=0.2))
    with pytest.raises(ValueError):
        comparison_rate(BoundKind.SpherePacking, POS, 0.1)
    with pytest.raises(ValueError):
        comparison_rate(BoundKind.KolesnikKrachkovsky, POS, 0.6)
    with pytest.raises(ValueError):
        BoundKind.parse("nope")
    assert BoundKind.parse("gvmr") is BoundKind.GVMR


def test_rate_curve():
    curve = rate_curve(STD2, BoundKind.GV, np.arange(0, 1.61, 0.01))
    assert not curve.gaps
    i = int(np.argmin(np.abs(np.array(curve.deltas()) - 1.5)))
    assert abs(curve.rates()[i]) < 1e-9
    curve = rate_curve(HC4, BoundKind.GVMR, [0.0, 1.0, 1.3])
    assert curve.deltas() == [0.0, 1.0] and curve.gaps[0][0] == 1.3
    curve = rate_curve(POS, BoundKind.GV, [0.0], optimized_rho=True)
    assert curve.rates() == [1.0]
    with pytest.raises(ValueError):
        rate_curve(STD2, BoundKind.GV, [])
    with pytest.raises(ValueError):
        rate_curve(STD2, BoundKind.GV, [0.2, 0.1])
    with pytest.raises(ValueError):
        rate_curve(STD2, BoundKind.Lee, [0.1])
