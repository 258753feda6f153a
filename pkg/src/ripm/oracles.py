"""Smooth-oracle protocol: counted f / grad-f evaluations with a budget."""
from __future__ import annotations

import copy

import numpy as np

from .errors import BudgetExhausted


class SmoothOracle:
    """Base class for smooth objectives.

    Subclasses implement ``_value`` and ``_grad``.  Evaluation counters live
    on the oracle; a solve owns exactly one oracle, so counters are per-run.
    ``budget`` caps the number of objective evaluations (None = unlimited).
    """

    def __init__(self):
        self.n_f = 0
        self.n_grad = 0
        self.budget: int | None = None

    def value(self, x) -> float:
        if self.budget is not None and self.n_f >= self.budget:
            raise BudgetExhausted(f"objective budget {self.budget} spent")
        self.n_f += 1
        return float(self._value(np.asarray(x, dtype=float)))

    def grad(self, x) -> np.ndarray:
        self.n_grad += 1
        return np.asarray(self._grad(np.asarray(x, dtype=float)), dtype=float)

    def fresh(self) -> "SmoothOracle":
        """Copy sharing problem data but with zeroed counters and no budget."""
        other = copy.copy(self)
        other.n_f = 0
        other.n_grad = 0
        other.budget = None
        return other

    def _value(self, x):  # pragma: no cover - abstract
        raise NotImplementedError

    def _grad(self, x):  # pragma: no cover - abstract
        raise NotImplementedError


class CallableOracle(SmoothOracle):
    """Wraps plain callables; handy for small analytic test problems."""

    def __init__(self, f, g):
        super().__init__()
        self._f = f
        self._g = g

    def _value(self, x):
        return self._f(x)

    def _grad(self, x):
        return np.atleast_1d(self._g(x))


class QuadModelOracle(SmoothOracle):
    """Quadratic model g.s + s.(B s + theta * s)/2 used by subproblem solves.

    ``apply_curv`` maps s to B s; ``theta`` is an optional extra diagonal.
    Counters on this oracle are model evaluations and are never merged into
    the true objective counters.
    """

    def __init__(self, g, apply_curv, theta=None):
        super().__init__()
        self.g = np.asarray(g, dtype=float)
        self.apply_curv = apply_curv
        self.theta = None if theta is None else np.asarray(theta, dtype=float)

    def _curv(self, s):
        w = self.apply_curv(s)
        if self.theta is not None:
            w = w + self.theta * s
        return w

    def _value(self, s):
        return float(self.g @ s + 0.5 * (s @ self._curv(s)))

    def _grad(self, s):
        return self.g + self._curv(s)
