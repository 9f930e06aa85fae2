"""Payoff objectives f(x, y) with evaluation and partial-gradient contracts.

Three variants:

* ``BilinearObjective``: f(x, y) = x'My + a'x + b'y + c.
* ``QuadraticGameObjective``: f(x, y) = 0.5 y'Sy - y'Ax - g(x), the
  unbounded-in-y game handled by the quadratic reduction module.
* ``BlackBoxObjective``: arbitrary callable, optional gradient handles,
  central finite differences otherwise.

All objectives are immutable and evaluation is pure; black-box handles are
required (documented, not enforced) to be deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, NamedTuple, Optional

import numpy as np

from .errors import DimensionMismatchError, EvaluationError

FD_STEP = 1e-5


class GradientPair(NamedTuple):
    grad_x: np.ndarray
    grad_y: np.ndarray


def _vec(v, dim, what):
    v = np.asarray(v, dtype=float).reshape(-1)
    if v.shape[0] != dim:
        raise DimensionMismatchError(f"{what} has dimension {v.shape[0]}, expected {dim}")
    return v


def _check_finite(value, x, y):
    if not np.isfinite(value):
        raise EvaluationError(f"objective evaluated to {value}", x=x, y=y)
    return float(value)


class Objective:
    """Common payoff interface; dim_x / dim_y are the strategy dimensions."""

    dim_x: int
    dim_y: int

    def value(self, x, y) -> float:
        raise NotImplementedError

    def gradients(self, x, y) -> GradientPair:
        raise NotImplementedError

    def value_matrix(self, x_nodes, y_nodes):
        """Payoff table F[i, j] = f(x_nodes[i], y_nodes[j]).

        Generic double loop; vectorized overrides in subclasses.
        """
        x_nodes = np.atleast_2d(x_nodes)
        y_nodes = np.atleast_2d(y_nodes)
        out = np.empty((len(x_nodes), len(y_nodes)))
        for i, xi in enumerate(x_nodes):
            for j, yj in enumerate(y_nodes):
                out[i, j] = self.value(xi, yj)
        return out


class BilinearObjective(Objective):
    """f(x, y) = x'My + a'x + b'y + c."""

    def __init__(self, M, a=None, b=None, c=0.0):
        M = np.atleast_2d(np.asarray(M, dtype=float))
        self.M = M
        self.dim_x, self.dim_y = M.shape
        self.a = np.zeros(self.dim_x) if a is None else _vec(a, self.dim_x, "a")
        self.b = np.zeros(self.dim_y) if b is None else _vec(b, self.dim_y, "b")
        self.c = float(c)

    def value(self, x, y):
        x = _vec(x, self.dim_x, "x")
        y = _vec(y, self.dim_y, "y")
        return _check_finite(x @ self.M @ y + self.a @ x + self.b @ y + self.c, x, y)

    def gradients(self, x, y):
        x = _vec(x, self.dim_x, "x")
        y = _vec(y, self.dim_y, "y")
        return GradientPair(self.M @ y + self.a, self.M.T @ x + self.b)

    def value_matrix(self, x_nodes, y_nodes):
        X = np.atleast_2d(x_nodes)
        Y = np.atleast_2d(y_nodes)
        return X @ self.M @ Y.T + (X @ self.a)[:, None] + (Y @ self.b)[None, :] + self.c


class QuadraticGameObjective(Objective):
    """f(x, y) = 0.5 y'Sy - y'Ax - g(x) with symmetric PSD S.

    ``g`` is a convex scalar function of x; ``g_grad`` defaults to central
    finite differences.  Structural validation of (S, A, g, X) lives in the
    quadratic reduction module; this class only evaluates.
    """

    def __init__(self, S, A, g: Optional[Callable] = None, g_grad: Optional[Callable] = None):
        S = np.atleast_2d(np.asarray(S, dtype=float))
        A = np.atleast_2d(np.asarray(A, dtype=float))
        if S.shape[0] != S.shape[1]:
            raise DimensionMismatchError("S must be square")
        if A.shape[0] != S.shape[0]:
            raise DimensionMismatchError("A must have as many rows as S")
        self.S = S
        self.A = A
        self.dim_y, self.dim_x = A.shape
        self.g = g if g is not None else (lambda x: 0.0)
        self._g_grad = g_grad

    def g_grad(self, x):
        if self._g_grad is not None:
            return np.asarray(self._g_grad(x), dtype=float).reshape(-1)
        return _central_diff(lambda z: float(self.g(z)), np.asarray(x, dtype=float))

    def value(self, x, y):
        x = _vec(x, self.dim_x, "x")
        y = _vec(y, self.dim_y, "y")
        return _check_finite(0.5 * y @ self.S @ y - y @ self.A @ x - float(self.g(x)), x, y)

    def gradients(self, x, y):
        x = _vec(x, self.dim_x, "x")
        y = _vec(y, self.dim_y, "y")
        return GradientPair(-self.A.T @ y - self.g_grad(x), self.S @ y - self.A @ x)

    def value_matrix(self, x_nodes, y_nodes):
        X = np.atleast_2d(x_nodes)
        Y = np.atleast_2d(y_nodes)
        quad = 0.5 * np.einsum("jk,kl,jl->j", Y, self.S, Y)
        cross = (X @ self.A.T) @ Y.T
        gvals = np.array([float(self.g(xi)) for xi in X])
        return quad[None, :] - cross - gvals[:, None]


class BlackBoxObjective(Objective):
    """User-supplied payoff with optional gradient handles.

    The callable must be deterministic; gradients fall back to central
    finite differences with step ``fd_step``.
    """

    def __init__(self, func, dim_x, dim_y, grad_x=None, grad_y=None, smooth=True, fd_step=FD_STEP):
        self.func = func
        self.dim_x = int(dim_x)
        self.dim_y = int(dim_y)
        self._grad_x = grad_x
        self._grad_y = grad_y
        self.smooth = bool(smooth)
        self.fd_step = float(fd_step)

    def value(self, x, y):
        x = _vec(x, self.dim_x, "x")
        y = _vec(y, self.dim_y, "y")
        return _check_finite(float(self.func(x, y)), x, y)

    def gradients(self, x, y):
        x = _vec(x, self.dim_x, "x")
        y = _vec(y, self.dim_y, "y")
        if self._grad_x is not None:
            gx = np.asarray(self._grad_x(x, y), dtype=float).reshape(-1)
        else:
            gx = _central_diff(lambda z: float(self.func(z, y)), x, self.fd_step)
        if self._grad_y is not None:
            gy = np.asarray(self._grad_y(x, y), dtype=float).reshape(-1)
        else:
            gy = _central_diff(lambda z: float(self.func(x, z)), y, self.fd_step)
        return GradientPair(gx, gy)


def _central_diff(func, point, h=FD_STEP):
    point = np.asarray(point, dtype=float).reshape(-1)
    grad = np.empty_like(point)
    for i in range(len(point)):
        bump = np.zeros_like(point)
        bump[i] = h
        grad[i] = (func(point + bump) - func(point - bump)) / (2.0 * h)
    return grad


def evaluate(objective, x, y):
    """Evaluate f(x, y) with dimension and finiteness checks."""
    return objective.value(x, y)


def gradients(objective, x, y):
    """Partial gradients (grad_x, grad_y) of f at (x, y)."""
    return objective.gradients(x, y)


def finite_difference_gradients(objective, x, y, h=FD_STEP):
    """Central-difference gradients of any objective; the oracle side of
    the analytic-gradient checks."""
    x = np.asarray(x, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    gx = _central_diff(lambda z: objective.value(z, y), x, h)
    gy = _central_diff(lambda z: objective.value(x, z), y, h)
    return GradientPair(gx, gy)


@dataclass(frozen=True)
class ConvexityReport:
    """Worst midpoint-violation diagnostics; report-only, never a proof."""

    concavity_violation: float
    concavity_witness: tuple
    convexity_violation: float
    convexity_witness: tuple
    samples: int
    seed: int

    @property
    def clean(self):
        return self.concavity_violation <= 1e-12 and self.convexity_violation <= 1e-12


def check_convex_concave(objective, domain_x, domain_y, samples=200, seed=0, tol=0.0):
    """Sample midpoint concavity in x and convexity in y; return worst violations.

    Draws random triples (x1, x2, y) and checks
    f((x1+x2)/2, y) >= (f(x1,y)+f(x2,y))/2 - tol, and the symmetric convexity
    test in y.  A report of zero violation means "no violation found", not
    "convex".
    """
    rng = np.random.default_rng(seed)
    worst_cave, wit_cave = 0.0, None
    worst_vex, wit_vex = 0.0, None
    xs1 = domain_x.sample(samples, rng)
    xs2 = domain_x.sample(samples, rng)
    ys = domain_y.sample(samples, rng)
    ys1 = domain_y.sample(samples, rng)
    ys2 = domain_y.sample(samples, rng)
    xs = domain_x.sample(samples, rng)
    for k in range(samples):
        mid = objective.value((xs1[k] + xs2[k]) / 2.0, ys[k])
        avg = 0.5 * (objective.value(xs1[k], ys[k]) + objective.value(xs2[k], ys[k]))
        gap = avg - mid - tol
        if gap > worst_cave:
            worst_cave, wit_cave = gap, (xs1[k], xs2[k], ys[k])
        mid = objective.value(xs[k], (ys1[k] + ys2[k]) / 2.0)
        avg = 0.5 * (objective.value(xs[k], ys1[k]) + objective.value(xs[k], ys2[k]))
        gap = mid - avg - tol
        if gap > worst_vex:
            worst_vex, wit_vex = gap, (xs[k], ys1[k], ys2[k])
    return ConvexityReport(worst_cave, wit_cave, worst_vex, wit_vex, samples, seed)


def g_handle_from_spec(kind, coef=None, dim=None):
    """Build (g, g_grad) for the CLI's named convex terms.

    kind: "zero", "sumsq" (squared Euclidean norm) or "linear" (needs coef).
    """
    from .errors import ProblemFormatError

    if kind == "zero":
        return (lambda x: 0.0), (lambda x: np.zeros_like(np.asarray(x, dtype=float)))
    if kind == "sumsq":
        return (lambda x: float(np.sum(np.asarray(x, dtype=float) ** 2))), (
            lambda x: 2.0 * np.asarray(x, dtype=float)
        )
    if kind == "linear":
        if coef is None:
            raise ProblemFormatError("linear g requires g_coef", location="g_coef")
        c = np.asarray(coef, dtype=float).reshape(-1)
        if dim is not None and c.shape[0] != dim:
            raise ProblemFormatError("g_coef dimension mismatch", location="g_coef")
        return (lambda x: float(c @ np.asarray(x, dtype=float))), (lambda x: c.copy())
    raise ProblemFormatError(f"unknown g kind {kind!r}", location="g")
