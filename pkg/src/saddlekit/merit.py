"""Saddle-point merit functional and its projected-gradient minimizer.

The merit value at (x, y) is the quadrature sum

    sum_v sum_u  w_u * w_v * (f(u, y) - f(x, v))_+^2

over grids on the two (convex) domains.  It is nonnegative everywhere and
zero exactly when no node pair witnesses a saddle violation, which makes it
a computable residual: drive it to zero and you have a saddle point at grid
scale.  The module also exposes the algebraic identities the residual's
correctness rests on (one-sided derivative of the squared positive part,
skew-symmetry of the pair gap, the variation inequality) as checkable
operations.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import List, Tuple

import numpy as np

from .domains import QuadratureGrid
from .errors import UnsupportedDomainError
from .objectives import GradientPair

DEFAULT_MERIT_RESOLUTION = 32
DEFAULT_SOLVER_PARAMS = dict(step0=1.0, shrink=0.5, max_iters=5000, tol=1e-8)


@dataclass(frozen=True)
class MeritContext:
    """Objective plus the two quadrature grids the merit sums run over."""

    objective: object
    x_grid: QuadratureGrid
    y_grid: QuadratureGrid


def build_context(objective, domain_x, domain_y, resolution=DEFAULT_MERIT_RESOLUTION):
    """Quadrature grids for the merit sums; rejects nonconvex domains."""
    if not (domain_x.convex and domain_y.convex):
        raise UnsupportedDomainError("merit certificates require convex domains on both sides")
    return MeritContext(
        objective=objective,
        x_grid=domain_x.quadrature(resolution),
        y_grid=domain_y.quadrature(resolution),
    )


def pair_gap(objective, u, v, x, y):
    """h(u, v; x, y) = f(u, y) - f(x, v); skew-symmetric in the pair swap."""
    return objective.value(u, y) - objective.value(x, v)


def candidate_gap(ctx, x_star, y_star, u, v):
    """The pair gap anchored at a fixed candidate (x*, y*)."""
    return pair_gap(ctx.objective, u, v, x_star, y_star)


def _gap_matrix(ctx, x, y):
    """G[i, j] = f(u_i, y) - f(x, v_j) over the grid nodes."""
    x = np.asarray(x, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    f_u = ctx.objective.value_matrix(ctx.x_grid.nodes, y[None, :])[:, 0]
    f_v = ctx.objective.value_matrix(x[None, :], ctx.y_grid.nodes)[0, :]
    return f_u[:, None] - f_v[None, :]


def merit_value(ctx, x, y):
    """The weighted sum of squared positive node-pair gaps; >= 0 always."""
    gap = np.maximum(_gap_matrix(ctx, x, y), 0.0)
    return float(ctx.x_grid.weights @ (gap * gap) @ ctx.y_grid.weights)


def squared_positive_part_slope(a, b):
    """One-sided derivative of t -> ((a + t b)_+)^2 at t = 0+, i.e. 2 a_+ b."""
    return 2.0 * max(float(a), 0.0) * float(b)


def merit_gradient(ctx, x, y):
    """Gradient of the merit value, differentiated under the sums.

    Uses the one-sided slope 2 a_+ b at the kink, so the result is the
    correct right derivative everywhere.  Summation order is fixed
    (u-major, v-minor) for bit determinism.
    """
    x = np.asarray(x, dtype=float).reshape(-1)
    y = np.asarray(y, dtype=float).reshape(-1)
    gap_plus = np.maximum(_gap_matrix(ctx, x, y), 0.0)
    w_u = ctx.x_grid.weights
    w_v = ctx.y_grid.weights

    # per-node partials: d/dx enters through -f(x, v_j), d/dy through f(u_i, y)
    gx_nodes = np.stack([ctx.objective.gradients(x, v).grad_x for v in ctx.y_grid.nodes])
    gy_nodes = np.stack([ctx.objective.gradients(u, y).grad_y for u in ctx.x_grid.nodes])

    coeff_v = w_u @ gap_plus  # (Nv,)
    coeff_u = gap_plus @ w_v  # (Nu,)
    grad_x = -2.0 * (coeff_v * w_v) @ gx_nodes
    grad_y = 2.0 * (coeff_u * w_u) @ gy_nodes
    return GradientPair(grad_x, grad_y)


def variation_inequality(ctx, x_star, y_star, x, y, tol=1e-6):
    """First-order optimality of the merit minimizer against a probe pair.

    Returns (lhs, rhs, holds) where lhs is the merit value at (x*, y*) and
    rhs is the weighted sum of g_+ times the probe's pair gap; at a true
    minimizer lhs <= rhs for every probe in the domain product.
    """
    lhs = merit_value(ctx, x_star, y_star)
    g_plus = np.maximum(_gap_matrix(ctx, x_star, y_star), 0.0)
    h_mat = _gap_matrix(ctx, x, y)
    rhs = float(ctx.x_grid.weights @ (g_plus * h_mat) @ ctx.y_grid.weights)
    return lhs, rhs, bool(lhs <= rhs + tol)


def skew_symmetry_residual(ctx, probes=100, seed=0):
    """Max |h(u,v;x,y) + h(x,y;u,v)| over seeded random node quadruples.

    Exactly zero up to rounding for any deterministic objective; a positive
    residual flags a nondeterministic evaluation handle.
    """
    if probes < 1:
        raise ValueError("probes must be >= 1")
    rng = np.random.default_rng(seed)
    n_u = len(ctx.x_grid.nodes)
    n_v = len(ctx.y_grid.nodes)
    worst = 0.0
    for _ in range(int(probes)):
        u = ctx.x_grid.nodes[rng.integers(n_u)]
        x = ctx.x_grid.nodes[rng.integers(n_u)]
        v = ctx.y_grid.nodes[rng.integers(n_v)]
        y = ctx.y_grid.nodes[rng.integers(n_v)]
        resid = abs(pair_gap(ctx.objective, u, v, x, y) + pair_gap(ctx.objective, x, y, u, v))
        worst = max(worst, resid)
    return worst


@dataclass(frozen=True)
class MeritSolveResult:
    """Outcome of the projected-gradient merit minimization."""

    x_star: np.ndarray
    y_star: np.ndarray
    merit: float
    iterations: int
    trajectory: Tuple[Tuple[np.ndarray, np.ndarray, float], ...]
    converged: bool
    stop_reason: str


def minimize_merit(
    ctx,
    domain_x,
    domain_y,
    start_x=None,
    start_y=None,
    step0=1.0,
    shrink=0.5,
    max_iters=5000,
    tol=1e-8,
):
    """Projected gradient descent on the merit value with Armijo backtracking.

    For convex-concave objectives the true minimum is zero, so a
    non-converged result on such inputs signals a numerical failure rather
    than a mathematical one; ``stop_reason`` distinguishes tolerance hits
    from line-search collapse and iteration caps.
    """
    if not (domain_x.convex and domain_y.convex):
        raise UnsupportedDomainError("merit minimization requires convex domains")
    x = domain_x.center() if start_x is None else domain_x.project(np.asarray(start_x, dtype=float))
    y = domain_y.center() if start_y is None else domain_y.project(np.asarray(start_y, dtype=float))

    value = merit_value(ctx, x, y)
    trajectory: List[Tuple[np.ndarray, np.ndarray, float]] = [(x.copy(), y.copy(), value)]
    step = float(step0)
    stop_reason = "max_iters"
    iterations = 0
    for iterations in range(int(max_iters) + 1):
        if value <= tol:
            stop_reason = "tolerance"
            break
        if iterations == int(max_iters):
            stop_reason = "max_iters"
            break
        grad = merit_gradient(ctx, x, y)
        grad_norm2 = float(grad.grad_x @ grad.grad_x + grad.grad_y @ grad.grad_y)
        if grad_norm2 <= 1e-32:
            stop_reason = "stationary"
            break
        step = min(float(step0), step * 2.0)
        accepted = False
        while step > 1e-18:
            x_new = domain_x.project(x - step * grad.grad_x)
            y_new = domain_y.project(y - step * grad.grad_y)
            move2 = float(np.sum((x_new - x) ** 2) + np.sum((y_new - y) ** 2))
            if move2 <= 1e-32:
                break
            new_value = merit_value(ctx, x_new, y_new)
            # Armijo sufficient decrease, factor 1/2, scaled by the move
            if new_value <= value - 0.5 * move2 / step:
                accepted = True
                break
            step *= float(shrink)
        if not accepted:
            stop_reason = "line_search_collapse"
            break
        x, y, value = x_new, y_new, new_value
        trajectory.append((x.copy(), y.copy(), value))
    return MeritSolveResult(
        x_star=x,
        y_star=y,
        merit=value,
        iterations=len(trajectory) - 1,
        trajectory=tuple(trajectory),
        converged=bool(value <= tol),
        stop_reason=stop_reason,
    )
