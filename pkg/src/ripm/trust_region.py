"""Proximal quasi-Newton trust-region baselines TR and TRDH.

Both handle bounds by folding the box indicator into the nonsmooth term, so
every subproblem lives on the box  Delta*B_inf  intersected with the bounds
shifted to the current point.  Each iteration computes a proximal-gradient
(Cauchy) step s1 that defines the criticality measure sqrt(xi / nu), then a
model step capped at min(Delta, beta * ||s1||_inf): TR solves the quadratic
model with R2, TRDH takes the closed-form separable minimizer with the
spectral-gradient diagonal.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field, replace

import numpy as np

from .errors import BudgetExhausted
from .oracles import QuadModelOracle
from .qnops import SpectralDiag
from .r2 import R2Options, r2_solve
from .regprox import Box, intersect_boxes
from .report import CONVERGED, MAX_ITER, SolverReport


@dataclass
class TrustRegionOptions:
    delta_init: float = 1.0
    delta_max: float = 1e12
    eta1: float = 1e-3
    eta2: float = 0.9
    gamma1: float = 0.25
    gamma2: float = 0.5
    gamma3: float = 2.0
    gamma4: float = 4.0
    alpha: float = 1.0
    beta: float = 10.0
    max_iter: int = 10_000
    abs_tol: float = 1e-4
    rel_tol: float = 1e-4
    subsolver_max_iter: int = 200
    subsolver_rel_tol: float = 0.1

    def __post_init__(self):
        ok = 0 < self.eta1 <= self.eta2 < 1
        ok &= 0 < self.gamma1 <= self.gamma2 < 1 < self.gamma3 <= self.gamma4
        ok &= self.delta_init <= self.delta_max
        if not ok:
            raise ValueError("trust-region constants violate their ordering constraints")


def update_radius(delta: float, rho: float, o: TrustRegionOptions) -> float:
    """Radius schedule: grow on very successful steps, shrink on failures."""
    if rho >= o.eta2:
        return min(o.gamma3 * delta, o.delta_max)
    if rho >= o.eta1:
        return min(delta, o.delta_max)
    return o.gamma2 * delta


def _subsolver_options(o: TrustRegionOptions) -> R2Options:
    return R2Options(max_iter=o.subsolver_max_iter, abs_tol=0.0,
                     rel_tol=o.subsolver_rel_tol)


def tr_solve(smooth, h, bounds: Box, qn, x0, opts: TrustRegionOptions | None = None,
             solver_name: str = "TR-R2") -> SolverReport:
    """Quasi-Newton proximal trust region with R2 as subproblem solver."""
    return _tr_loop(smooth, h, bounds, x0, opts or TrustRegionOptions(),
                    qn=qn, diagonal=False, solver_name=solver_name)


def trdh_solve(smooth, h, bounds: Box, x0, opts: TrustRegionOptions | None = None,
               solver_name: str = "TRDH", sigma0: float = 1.0) -> SolverReport:
    """Diagonal-Hessian trust region: closed-form steps from the spectral diagonal."""
    qn = SpectralDiag(np.atleast_1d(np.asarray(x0)).size, sigma0)
    return _tr_loop(smooth, h, bounds, x0, opts or TrustRegionOptions(),
                    qn=qn, diagonal=True, solver_name=solver_name)


def _tr_loop(smooth, h, bounds, x0, opts, *, qn, diagonal, solver_name):
    t0 = time.perf_counter()
    x = bounds.clamp(np.asarray(x0, dtype=float))
    n = x.size
    delta = opts.delta_init
    n_prox = 0
    crit = np.inf
    tol = None
    status = MAX_ITER
    trace: list = []
    diag: list = []
    fx, hx = np.inf, 0.0

    try:
        fx = smooth.value(x)
        hx = h.value(x)
        gx = smooth.grad(x)
        trace.append((smooth.n_grad, fx + hx))
        for _ in range(opts.max_iter):
            curv_norm = qn.norm_estimate()
            nu = 1.0 / (curv_norm + 1.0 / (opts.alpha * delta))
            step_box = intersect_boxes(Box.ball(n, delta), bounds.shifted(x))
            s1 = h.prox_shifted(1.0 / nu, -nu * gx, x, step_box)
            n_prox += 1
            xi = max(hx - float(gx @ s1) - h.value(x + s1), 0.0)
            crit = float(np.sqrt(xi / nu))
            if tol is None:
                tol = opts.abs_tol + opts.rel_tol * crit
            if crit <= tol:
                status = CONVERGED
                break
            s1_inf = float(np.max(np.abs(s1)))
            delta_eff = min(delta, opts.beta * s1_inf)
            eff_box = intersect_boxes(Box.ball(n, delta_eff), bounds.shifted(x))
            if diagonal:
                d = qn.diagonal()
                s = h.prox_shifted(d, -gx / d, x, eff_box)
                n_prox += 1
            else:
                model = QuadModelOracle(gx, qn.apply)
                sub = r2_solve(model, h.shifted(x), eff_box, s1, _subsolver_options(opts))
                s = sub.x
                n_prox += sub.n_prox
            decrease = hx - float(gx @ s) - 0.5 * float(s @ qn.apply(s)) - h.value(x + s)
            x_trial = bounds.clamp(x + s)
            f_trial = smooth.value(x_trial)
            h_trial = h.value(x_trial)
            rho = ((fx + hx) - (f_trial + h_trial)) / decrease if decrease > 0 else -np.inf
            accepted = rho >= opts.eta1
            new_delta = update_radius(delta, rho, opts)
            diag.append({
                "delta_before": delta, "delta_after": new_delta, "rho": float(rho),
                "nu": nu, "xi": xi, "s1_norm2": float(np.linalg.norm(s1)),
                "s_inf": float(np.max(np.abs(s))), "cap_inf": delta_eff,
                "accepted": bool(accepted),
            })
            if accepted:
                step = x_trial - x
                x, fx, hx = x_trial, f_trial, h_trial
                g_new = smooth.grad(x)
                qn.update(step, g_new - gx)
                gx = g_new
                trace.append((smooth.n_grad, fx + hx))
            delta = new_delta
    except BudgetExhausted:
        status = MAX_ITER

    return SolverReport(
        solver=solver_name,
        x=x,
        f=fx,
        h_over_lam=(hx / h.lam) if h.lam else 0.0,
        criticality=crit if np.isfinite(crit) else 0.0,
        n_f=smooth.n_f,
        n_grad=smooth.n_grad,
        n_prox=n_prox,
        wall_time_s=time.perf_counter() - t0,
        termination=status,
        trace=trace,
        diagnostics={"iters": diag},
        lam=h.lam,
    )


def options_with(opts: TrustRegionOptions, **overrides) -> TrustRegionOptions:
    return replace(opts, **overrides)
