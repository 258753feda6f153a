import numpy as np
import pytest

from ripm.errors import BoundaryPoint
from ripm.interior import (DualEstimate, IpmOptions, barrier_grad, barrier_value,
                           cauchy_step, crossover, dual_update, inner_solve,
                           kkt_residuals, outer_solve, xi_L)
from ripm.oracles import CallableOracle
from ripm.qnops import LBFGS, SpectralDiag
from ripm.regprox import Box, Regularizer
from ripm.report import CONVERGED

from helpers import bisect_root, grid_min_1d

POS = Box(0.0, np.inf)


def _oracle_quad(center):
    c = float(center)
    return CallableOracle(lambda x: 0.5 * float(np.sum((x - c) ** 2)), lambda x: x - c)


def _oracle_linear(slope=1.0):
    return CallableOracle(lambda x: slope * float(np.sum(x)),
                          lambda x: np.full_like(x, slope))


def _oracle_zero():
    return CallableOracle(lambda x: 0.0, lambda x: np.zeros_like(x))


# ---------------------------------------------------------------------------
# barrier pieces


def test_barrier_value_examples():
    ones = np.ones(3)
    assert barrier_value(1.0, ones, Box(np.zeros(3), np.full(3, np.inf))) == 0.0
    assert barrier_value(2.0, [1.0], Box(0.0, 2.0)) == 0.0
    assert barrier_value(1.0, [0.0], POS) == np.inf


def test_barrier_value_two_sided():
    v = barrier_value(1.5, [0.5], Box(0.0, 2.0))
    assert v == pytest.approx(-1.5 * (np.log(0.5) + np.log(1.5)))


def test_barrier_grad_examples():
    assert barrier_grad(1.0, [1.0], POS)[0] == pytest.approx(-1.0)
    assert barrier_grad(1.0, [1.0], Box(0.0, 2.0))[0] == pytest.approx(0.0)
    g = barrier_grad(3.0, [0.5, 2.0], Box(np.zeros(2), np.full(2, np.inf)))
    assert np.allclose(g, [-6.0, -1.5])
    with pytest.raises(BoundaryPoint):
        barrier_grad(1.0, [0.0], POS)


# ---------------------------------------------------------------------------
# first-order steps and measures


def test_cauchy_step_zero_at_barrier_stationary_point():
    # f = x^2/2: barrier stationarity x - mu/x = 0 holds at x = 1 for mu = 1
    s1, xi = cauchy_step([1.0], 1.0, 0.1, 10.0, 0.01, _oracle_quad(0.0),
                         Regularizer("zero"), POS)
    assert s1[0] == pytest.approx(0.0, abs=1e-15)
    assert xi == pytest.approx(0.0, abs=1e-15)


def test_cauchy_step_moves_away_from_bound():
    nu = 1e-3
    s1, xi = cauchy_step([1.0], 1.0, nu, 10.0, 0.01, _oracle_zero(),
                         Regularizer("zero"), POS)
    assert s1[0] == pytest.approx(nu, rel=1e-12)  # step nu * mu / x > 0
    assert xi == pytest.approx(nu, rel=1e-12)


def test_cauchy_step_grid_oracle():
    # model: g_eff s + s^2/(2 nu) over the step box, g_eff = (x-2) - mu/x
    x, mu, nu, delta = 0.8, 0.7, 0.2, 0.5
    s1, xi = cauchy_step([x], mu, nu, delta, 0.05, _oracle_quad(2.0),
                         Regularizer("zero"), POS)
    g_eff = (x - 2.0) - mu / x
    lo = max(-delta, 0.05 * x - x)
    sg, _ = grid_min_1d(lambda t: g_eff * t + t * t / (2 * nu), lo, delta, 1e-5)
    assert s1[0] == pytest.approx(sg, abs=1e-4)
    assert xi >= 0.5 / nu * s1[0] ** 2 - 1e-12


def test_xi_l_coincides_when_z_matches_barrier():
    rng = np.random.default_rng(0)
    x = rng.uniform(0.5, 2.0, size=4)
    mu = 0.3
    bounds = Box(np.zeros(4), np.full(4, np.inf))
    z = DualEstimate(mu / x, np.zeros(4))
    smooth = _oracle_quad(1.5)
    h = Regularizer("l1", 0.2)
    s_cp, xi_cp = cauchy_step(x, mu, 0.1, 1.0, 0.05, smooth, h, bounds)
    s_l, xi_l_val = xi_L(x, z, mu, 0.1, 1.0, 0.05, smooth, h, bounds)
    assert np.allclose(s_cp, s_l, atol=1e-12)
    assert xi_cp == pytest.approx(xi_l_val, abs=1e-12)


def test_xi_l_zero_at_kkt_point():
    # f = x, z = 1: Lagrangian gradient vanishes, so sL = 0 and xi = 0
    z = DualEstimate(np.array([1.0]), np.array([0.0]))
    sL, xi = xi_L([1.0], z, 0.5, 1.0, 10.0, 0.01, _oracle_linear(), Regularizer("zero"), POS)
    assert sL[0] == pytest.approx(0.0, abs=1e-15)
    assert xi == pytest.approx(0.0, abs=1e-15)


# ---------------------------------------------------------------------------
# dual update and crossover


def test_dual_update_fixed_point():
    x = np.array([1.3, 0.4])
    mu = 0.25
    bounds = Box(np.zeros(2), np.full(2, np.inf))
    z = DualEstimate(mu / x, np.zeros(2))
    out = dual_update(x, x, z, np.zeros(2), mu, bounds)
    assert np.allclose(out.zl, z.zl)


def test_dual_update_ones_fixed_point():
    x = np.ones(3)
    bounds = Box(np.zeros(3), np.full(3, np.inf))
    z = DualEstimate(np.ones(3), np.zeros(3))
    out = dual_update(x, x, z, np.zeros(3), 1.0, bounds)
    assert np.allclose(out.zl, 1.0)


def test_dual_update_clamps_to_safeguard_interval():
    # large step drives the linearized update negative; projection keeps z > 0
    mu, kzl = 1e-3, 0.5
    x_old = np.array([1.0])
    s = np.array([0.9])
    x_new = x_old + s
    z_old = DualEstimate(np.array([1.0]), np.array([0.0]))
    out = dual_update(x_new, x_old, z_old, s, mu, POS, kappa_zul=kzl)
    zhat = mu / 1.0 - 1.0 * 0.9
    assert zhat < 0
    expected_lo = kzl * min(1.0, 1.0, mu / x_new[0])
    assert out.zl[0] == pytest.approx(expected_lo)
    assert out.zl[0] > 0


def test_dual_update_upper_side():
    bounds = Box(-np.inf, 2.0)
    x_old, s = np.array([1.0]), np.array([0.5])
    z_old = DualEstimate(np.array([0.0]), np.array([0.3]))
    out = dual_update(x_old + s, x_old, z_old, s, 0.1, bounds)
    zhat = 0.1 / 1.0 + (0.3 / 1.0) * 0.5  # upper gap shrinks along +s
    assert out.zu[0] == pytest.approx(zhat)


def test_crossover_rules():
    mu = 1e-8
    bounds = Box(np.zeros(3), np.full(3, np.inf))
    x = np.array([1e-9, 1.0, 1e-3])
    zl = np.array([5.0, 1e-9, 1e-3])
    xc, zc = crossover(x, DualEstimate(zl, np.zeros(3)), mu, bounds)
    assert xc[0] == 0.0 and zc.zl[0] == 5.0   # gap < sqrt(mu): snap, keep z
    assert xc[1] == 1.0 and zc.zl[1] == 0.0   # z < sqrt(mu): zero the multiplier
    assert xc[2] == 0.0 and zc.zl[2] == 0.0   # both < mu**(1/4): zero both
    # exact complementarity on every side afterwards
    assert np.all(xc * zc.zl == 0.0)


def test_crossover_two_sided_and_cleanup():
    mu = 1e-8
    bounds = Box(np.zeros(2), np.full(2, 2.0))
    x = np.array([1.0, 2.0 - 1e-9])
    z = DualEstimate(np.array([0.7, 0.0]), np.array([0.0, 0.4]))
    xc, zc = crossover(x, z, mu, bounds)
    assert xc[1] == 2.0 and zc.zu[1] == 0.4
    # interior component with a large stale multiplier: cleanup zeroes it
    assert zc.zl[0] == 0.0
    gaps_l = xc - bounds.lo
    gaps_u = bounds.hi - xc
    assert np.all(gaps_l * zc.zl == 0.0)
    assert np.all(gaps_u * zc.zu == 0.0)


# ---------------------------------------------------------------------------
# KKT residual diagnostics


def test_kkt_residuals_exact_point():
    z = DualEstimate(np.array([1.0]), np.array([0.0]))
    ep, ed = kkt_residuals([0.0], z, _oracle_linear(), Regularizer("zero"), POS)
    assert ep == 0.0 and ed == pytest.approx(0.0, abs=1e-15)


def test_kkt_residuals_interior_stationary():
    z = DualEstimate(np.array([0.0]), np.array([0.0]))
    ep, ed = kkt_residuals([1.0], z, _oracle_quad(1.0), Regularizer("zero"), POS)
    assert ep == 0.0 and ed == pytest.approx(0.0, abs=1e-15)


def test_kkt_residuals_l1_interval_distance():
    # at x = 0 the l1 subdifferential is [-lam, lam]; distance from -1 is 0.5
    z = DualEstimate(np.array([0.0]), np.array([0.0]))
    ep, ed = kkt_residuals([0.0], z, _oracle_linear(), Regularizer("l1", 0.5), POS)
    assert ed == pytest.approx(0.5)


def test_kkt_residuals_l0():
    z = DualEstimate(np.array([0.0, 0.0]), np.zeros(2))
    smooth = CallableOracle(lambda x: float(x[0] + 2 * x[1]), lambda x: np.array([1.0, 2.0]))
    ep, ed = kkt_residuals([0.0, 1.0], z, smooth, Regularizer("l0", 3.0),
                           Box(np.zeros(2), np.full(2, np.inf)))
    assert ed == pytest.approx(2.0)  # only the nonzero component contributes


# ---------------------------------------------------------------------------
# inner solve against analytic barrier stationary points


@pytest.mark.parametrize("step", ["diagonal", "r2"])
@pytest.mark.parametrize("mu", [1.0, 0.1, 0.01])
def test_inner_solve_quadratic_barrier_path(step, mu):
    # stationarity of 0.5 (x-2)^2 - mu log x:  x - 2 - mu / x = 0
    root = bisect_root(lambda t: t - 2.0 - mu / t, 1e-9, 10.0)
    opts = IpmOptions(step=step)
    qn = SpectralDiag(1) if step == "diagonal" else LBFGS(1)
    res = inner_solve(_oracle_quad(2.0), Regularizer("zero"), POS, qn,
                      np.array([1.0]), DualEstimate.ones_for(POS), mu, opts,
                      eps_d_abs=1e-9, eps_d_rel=0.0, eps_p=1e-9, delta0=100.0)
    assert res.status == "tol"
    assert res.x[0] == pytest.approx(root, abs=1e-6)
    assert abs(res.x[0] * res.z.zl[0] - mu) <= 1e-9


@pytest.mark.parametrize("mode", ["cp", "lagrangian"])
def test_inner_solve_l1_barrier_stationary_point(mode):
    # f = 0, h = lam |x|, x > 0: stationarity lam - mu / x = 0 -> x = mu / lam
    mu, lam = 0.5, 1.0
    opts = IpmOptions(step="diagonal")
    res = inner_solve(_oracle_zero(), Regularizer("l1", lam), POS, SpectralDiag(1),
                      np.array([2.0]), DualEstimate.ones_for(POS), mu, opts,
                      eps_d_abs=1e-9, eps_d_rel=0.0, eps_p=1e-9, delta0=100.0,
                      mode=mode)
    assert res.status == "tol"
    assert res.x[0] == pytest.approx(mu / lam, abs=1e-6)


def test_inner_solve_immediate_exit():
    mu = 0.5
    root = bisect_root(lambda t: t - 2.0 - mu / t, 1e-9, 10.0)
    x0 = np.array([root])
    z0 = DualEstimate(mu / x0, np.zeros(1))
    res = inner_solve(_oracle_quad(2.0), Regularizer("zero"), POS, SpectralDiag(1),
                      x0, z0, mu, IpmOptions(step="diagonal"),
                      eps_d_abs=1e-6, eps_d_rel=0.0, eps_p=1e-6, delta0=10.0)
    assert res.status == "tol"
    assert res.accepted == 0
    assert res.x[0] == x0[0]


def test_inner_solve_requires_interior_start():
    with pytest.raises(BoundaryPoint):
        inner_solve(_oracle_quad(2.0), Regularizer("zero"), POS, SpectralDiag(1),
                    np.array([0.0]), DualEstimate.ones_for(POS), 1.0,
                    IpmOptions(step="diagonal"))


# ---------------------------------------------------------------------------
# outer solve: mu -> 0 limits, crossover, invariants


def _outer(smooth, h, bounds, x0, step="diagonal", **kw):
    opts = IpmOptions(step=step, **kw)
    if step == "diagonal":
        factory = lambda n: SpectralDiag(n)
    else:
        factory = lambda n: LBFGS(n)
    return outer_solve(smooth, h, bounds, factory, x0, opts)


@pytest.mark.parametrize("step", ["diagonal", "r2"])
def test_outer_quadratic_limit(step):
    rep = _outer(_oracle_quad(2.0), Regularizer("zero"), POS, np.array([1.0]), step)
    assert rep.termination == CONVERGED
    assert abs(rep.x[0] - 2.0) <= 1e-3


def test_outer_active_bound_multiplier():
    rep = _outer(_oracle_linear(), Regularizer("zero"), POS, np.array([1.0]))
    assert rep.termination == CONVERGED
    assert rep.x[0] == 0.0  # snapped exactly by the crossover
    assert rep.z.zl[0] == pytest.approx(1.0, abs=1e-2)


def test_outer_invariants_from_diagnostics():
    rep = _outer(_oracle_quad(2.0), Regularizer("l1", 0.3), POS, np.array([1.0]),
                 step="r2")
    assert rep.termination == CONVERGED
    iters = rep.diagnostics["inner"]
    assert iters
    for it in iters:
        # criticality lower bounds
        tol = 1e-10 * max(1.0, it["xi_cp"])
        assert it["xi_cp"] + tol >= 0.5 / it["nu"] * it["s1_norm2"] ** 2
        assert it["xi_meas"] + tol >= 0.5 / it["nu"] * it["s_meas_norm2"] ** 2
        if it["accepted"]:
            assert it["min_gap_after"] > 0.0
            assert it["z_viol"] <= 1e-15
            assert it["fbar_after"] <= it["fbar_before"] + 1e-12 * abs(it["fbar_before"])
        if it["exit"] == "tol":
            assert it["compl"] <= it["mu"] ** 1.01 + 1e-15
    cross = rep.diagnostics["crossover"]
    assert cross["applied"] and cross["max_gap_times_z"] == 0.0


def test_outer_mode_forced_to_cp_for_l0():
    rep = _outer(_oracle_quad(2.0), Regularizer("l0", 0.1), POS, np.array([1.0]),
                 mode="lagrangian")
    assert rep.diagnostics["mode"] == "cp"


def test_outer_budget_one():
    smooth = _oracle_quad(2.0)
    smooth.budget = 1
    rep = outer_solve(smooth, Regularizer("zero"), POS, lambda n: SpectralDiag(n),
                      np.array([1.0]), IpmOptions(step="diagonal"))
    assert rep.termination == "max_iter"
    assert rep.n_f <= 2


def test_outer_detects_unbounded():
    # f = -x on x >= 0 is unbounded below; every barrier stage floors out
    smooth = CallableOracle(lambda x: -float(np.sum(x)), lambda x: -np.ones_like(x))
    rep = _outer(smooth, Regularizer("zero"), POS, np.array([1.0]),
                 objective_floor=-1e6, max_outer=3)
    assert rep.termination == "unbounded"
