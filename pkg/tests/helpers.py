"""Shared test oracles: brute-force minimizers independent of the library code."""
import numpy as np


def _grid(lo, hi, step):
    # stay strictly inside [lo, hi]: arange may otherwise overshoot hi
    return np.append(np.arange(lo, hi, step), hi)


def grid_min_1d(obj, lo, hi, step=1e-3):
    """Minimum of obj over a uniform grid on [lo, hi] (endpoints included)."""
    grid = _grid(lo, hi, step)
    vals = np.array([obj(t) for t in grid])
    i = int(np.argmin(vals))
    return grid[i], vals[i]


def grid_min_vec(obj, lo, hi, step=1e-3):
    """Vectorized variant: obj maps an array of candidates to their objectives."""
    grid = _grid(lo, hi, step)
    vals = obj(grid)
    i = int(np.argmin(vals))
    return grid[i], float(vals[i])


def comp_reg_value(kind, lam, v):
    if kind == "l1":
        return lam * abs(v)
    if kind == "l0":
        return lam if v != 0.0 else 0.0
    return 0.0


def bisect_root(fun, lo, hi, iters=200):
    flo, fhi = fun(lo), fun(hi)
    assert flo * fhi <= 0, "root not bracketed"
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        fm = fun(mid)
        if flo * fm <= 0:
            hi, fhi = mid, fm
        else:
            lo, flo = mid, fm
    return 0.5 * (lo + hi)


def central_diff_grad(f, x, eps=1e-6):
    x = np.asarray(x, dtype=float)
    g = np.zeros_like(x)
    for i in range(x.size):
        e = np.zeros_like(x)
        e[i] = eps * max(1.0, abs(x[i]))
        g[i] = (f(x + e) - f(x - e)) / (2 * e[i])
    return g


def dense_bfgs(pairs, n):
    """Dense direct BFGS recursion from the identity; oracle for LBFGS products."""
    B = np.eye(n)
    for s, y in pairs:
        sy = float(s @ y)
        if sy <= 1e-8 * np.linalg.norm(s) * np.linalg.norm(y):
            continue
        Bs = B @ s
        B = B - np.outer(Bs, Bs) / float(s @ Bs) + np.outer(y, y) / sy
    return B


def dense_sr1(pairs, n):
    """Dense SR1 recursion from the identity, with the same skip rule as LSR1."""
    B = np.eye(n)
    for s, y in pairs:
        r = y - B @ s
        rs = float(r @ s)
        if abs(rs) <= 1e-8 * np.linalg.norm(r) * np.linalg.norm(s) or rs == 0.0:
            continue
        B = B + np.outer(r, r) / rs
    return B
