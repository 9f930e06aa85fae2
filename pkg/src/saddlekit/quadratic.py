"""Quadratic games 0.5 y'Sy - y'Ax - g(x) on unbounded y, solved by
spectral reduction.

For PSD symmetric S the inner minimization over all of R^k is finite exactly
when Ax lies in the image of S, in which case the unique minimizer inside
that image is y = pinv(S) A x and the value function

    v(x) = -0.5 (Ax)' pinv(S) (Ax) - g(x)

is concave on X.  The inner minimizer obeys |y| <= C |A| / sigma_min(S)
with C the norm bound of X, which yields an explicit ball of radius
R = C |A| / sigma_min(S) on which the unbounded problem compactifies; a grid
minimax over X x Ball(0, R) then cross-checks the reduced solve.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import minimax
from .domains import Ball, FinitePointSet
from .errors import DegenerateGameError, DimensionMismatchError, MembershipError
from .objectives import QuadraticGameObjective

SYMMETRY_TOL = 1e-12
RANK_TOL_FACTOR = 1e-10
IN_IMAGE_TOL = 1e-8
DEFAULT_CROSS_RESOLUTION = 41
DEFAULT_CHAIN_TOL = 1e-3


@dataclass(frozen=True)
class SpectralData:
    """Eigendecomposition of a symmetric PSD matrix, eigenvalues descending."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray  # orthonormal, columns match eigenvalues
    rank: int
    sigma_min_pos: Optional[float]  # None when rank == 0

    @property
    def rank_tol(self):
        lam_max = self.eigenvalues[0] if len(self.eigenvalues) else 0.0
        return RANK_TOL_FACTOR * max(1.0, lam_max)


def jacobi_eigh(S, max_sweeps=100):
    """Cyclic Jacobi eigendecomposition of a symmetric matrix.

    Returns (eigenvalues, eigenvectors) unsorted; rotations sweep the upper
    triangle until the largest off-diagonal entry is at rounding level.
    """
    A = np.array(S, dtype=float)
    n = A.shape[0]
    V = np.eye(n)
    if n == 1:
        return np.array([A[0, 0]]), V
    threshold = 1e-14 * max(1.0, float(np.max(np.abs(A))))
    for _ in range(int(max_sweeps)):
        off = np.max(np.abs(A - np.diag(np.diag(A))))
        if off <= threshold:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = A[p, q]
                if abs(apq) <= threshold * 1e-2:
                    continue
                theta = (A[q, q] - A[p, p]) / (2.0 * apq)
                t = np.sign(theta) / (abs(theta) + np.sqrt(1.0 + theta * theta))
                if theta == 0.0:
                    t = 1.0
                c = 1.0 / np.sqrt(1.0 + t * t)
                s = t * c
                rot_p = c * A[:, p] - s * A[:, q]
                rot_q = s * A[:, p] + c * A[:, q]
                A[:, p], A[:, q] = rot_p, rot_q
                rot_p = c * A[p, :] - s * A[q, :]
                rot_q = s * A[p, :] + c * A[q, :]
                A[p, :], A[q, :] = rot_p, rot_q
                rot_p = c * V[:, p] - s * V[:, q]
                rot_q = s * V[:, p] + c * V[:, q]
                V[:, p], V[:, q] = rot_p, rot_q
    return np.diag(A).copy(), V


def spectral_decompose(S):
    """SpectralData for a symmetric (within tolerance) matrix."""
    S = np.atleast_2d(np.asarray(S, dtype=float))
    if S.shape[0] != S.shape[1]:
        raise DimensionMismatchError("matrix must be square")
    if np.max(np.abs(S - S.T)) > SYMMETRY_TOL * max(1.0, float(np.max(np.abs(S)))):
        raise ValueError("matrix is not symmetric within tolerance")
    values, vectors = jacobi_eigh(S)
    order = np.argsort(-values, kind="stable")
    values = values[order]
    vectors = vectors[:, order]
    rank_tol = RANK_TOL_FACTOR * max(1.0, values[0] if len(values) else 0.0)
    positive = values > rank_tol
    rank = int(np.count_nonzero(positive))
    sigma_min_pos = float(values[positive][-1]) if rank >= 1 else None
    return SpectralData(values, vectors, rank, sigma_min_pos)


def spectral_norm(A):
    """Largest singular value of A via the eigenvalues of A'A."""
    A = np.atleast_2d(np.asarray(A, dtype=float))
    if not np.any(A):
        return 0.0
    gram = A.T @ A
    values, _ = jacobi_eigh(gram)
    return float(np.sqrt(max(float(np.max(values)), 0.0)))


def in_image(spec, w, tol=IN_IMAGE_TOL):
    """Whether w lies in the span of the positive-eigenvalue eigenvectors."""
    w = np.asarray(w, dtype=float).reshape(-1)
    if w.shape[0] != spec.eigenvectors.shape[0]:
        raise DimensionMismatchError("vector dimension does not match the matrix")
    basis = spec.eigenvectors[:, : spec.rank]
    residual = w - basis @ (basis.T @ w)
    return bool(np.linalg.norm(residual) <= tol * max(1.0, np.linalg.norm(w)))


def pseudo_inverse_apply(spec, w):
    """pinv(S) w through the spectral factors (zero on the kernel)."""
    w = np.asarray(w, dtype=float).reshape(-1)
    basis = spec.eigenvectors[:, : spec.rank]
    coeffs = basis.T @ w
    return basis @ (coeffs / spec.eigenvalues[: spec.rank])


class QuadraticGame:
    """The tuple (S, A, g, X) with its structural invariants checked."""

    def __init__(self, S, A, domain_x, g=None, g_grad=None, g_kind=None):
        S = np.atleast_2d(np.asarray(S, dtype=float))
        A = np.atleast_2d(np.asarray(A, dtype=float))
        if np.max(np.abs(S - S.T)) > SYMMETRY_TOL * max(1.0, float(np.max(np.abs(S)))):
            raise ValueError("S must be symmetric within 1e-12")
        self.spectral = spectral_decompose(S)
        lam = self.spectral.eigenvalues
        lam_max = lam[0] if len(lam) else 0.0
        if len(lam) and lam[-1] < -RANK_TOL_FACTOR * max(1.0, lam_max):
            raise ValueError("S must be positive semidefinite (up to tolerance)")
        if A.shape[0] != S.shape[0]:
            raise DimensionMismatchError("A must have as many rows as S")
        if A.shape[1] != domain_x.dimension:
            raise DimensionMismatchError("A columns must match the x-domain dimension")
        if not domain_x.contains(np.zeros(domain_x.dimension), 1e-9):
            raise MembershipError("the x-domain must contain the zero vector")
        self.S = S
        self.A = A
        self.domain_x = domain_x
        self.g_kind = g_kind
        self.objective = QuadraticGameObjective(S, A, g=g, g_grad=g_grad)

    @property
    def dim_x(self):
        return self.A.shape[1]

    @property
    def dim_y(self):
        return self.A.shape[0]

    @property
    def degenerate(self):
        """Rank-0 curvature with nonzero coupling: no finite reduction."""
        return self.spectral.rank == 0 and bool(np.any(self.A))


@dataclass(frozen=True)
class InnerMinResult:
    """Closed-form inner minimization over all of R^k at a fixed x."""

    value: float  # -inf when Ax is outside the image of S
    y_min: Optional[np.ndarray]
    bound_ok: Optional[bool]  # |y_min| <= C|A|/sigma_min check, when finite


def inner_min(game, x, spec=None, image_tol=IN_IMAGE_TOL):
    """min over y in R^k of the payoff at fixed x, in closed form."""
    spec = spec or game.spectral
    x = np.asarray(x, dtype=float).reshape(-1)
    ax = game.A @ x
    if not np.any(ax):
        y_min = np.zeros(game.dim_y)
        return InnerMinResult(-float(game.objective.g(x)), y_min, True)
    if spec.rank == 0 or not in_image(spec, ax, image_tol):
        return InnerMinResult(-np.inf, None, None)
    y_min = pseudo_inverse_apply(spec, ax)
    value = -0.5 * ax @ pseudo_inverse_apply(spec, ax) - float(game.objective.g(x))
    bound = game.domain_x.bounding_norm() * spectral_norm(game.A) / spec.sigma_min_pos
    bound_ok = bool(np.linalg.norm(y_min) <= bound + 1e-8)
    return InnerMinResult(float(value), y_min, bound_ok)


def ball_radius(game, spec=None):
    """Compactification radius C|A|/sigma_min(S); zero for A = 0."""
    spec = spec or game.spectral
    norm_a = spectral_norm(game.A)
    if norm_a == 0.0:
        return 0.0
    if spec.rank == 0:
        raise DegenerateGameError(
            "S has rank 0 with nonzero A: the inner infimum is -inf off the kernel of A"
        )
    return game.domain_x.bounding_norm() * norm_a / spec.sigma_min_pos


@dataclass(frozen=True)
class QuadraticSolveReport:
    x_star: np.ndarray
    y_star: np.ndarray
    value_sup_inf: float
    value_inf_sup: float
    radius: float
    x0_members_checked: int
    chain_ok: bool
    ascent_iterations: int
    resolution: int


def _value_function(game, spec):
    """v(x) and its supergradient on the in-image set."""
    if spec.rank:
        # P = A' pinv(S) A, symmetric PSD
        pinv_a = np.column_stack([pseudo_inverse_apply(spec, col) for col in game.A.T])
        P = game.A.T @ pinv_a
    else:
        P = np.zeros((game.dim_x, game.dim_x))

    def value(x):
        ax = game.A @ x
        return float(-0.5 * ax @ pseudo_inverse_apply(spec, ax) - float(game.objective.g(x)))

    def grad(x):
        return -P @ x - game.objective.g_grad(x)

    return value, grad


def _outer_maximize(game, spec, resolution, max_iters=2000, image_tol=IN_IMAGE_TOL):
    """Projected supergradient ascent on v over X, seeded by a grid sweep.

    Iterates whose image test fails are rejected (shrinking the step), so
    the search stays inside the finite-value set.
    """
    domain = game.domain_x
    value, grad = _value_function(game, spec)

    sweep_res = minimax.capped_resolution(resolution, domain.dimension)
    nodes = domain.evaluation_grid(sweep_res)
    nodes = np.vstack([nodes, np.zeros(domain.dimension)])
    best_x, best_v = None, -np.inf
    members = 0
    for node in nodes:
        ax = game.A @ node
        if np.any(ax) and not in_image(spec, ax, image_tol):
            continue
        members += 1
        v = value(node)
        if v > best_v:
            best_x, best_v = node, v

    x = np.asarray(best_x, dtype=float)
    current = best_v
    step = 1.0
    iterations = 0
    for iterations in range(int(max_iters)):
        direction = grad(x)
        norm2 = float(direction @ direction)
        if norm2 <= 1e-24:
            break
        step = min(1.0, step * 2.0)
        accepted = False
        while step > 1e-16:
            x_new = domain.project(x + step * direction)
            ax_new = game.A @ x_new
            if np.any(ax_new) and not in_image(spec, ax_new, image_tol):
                step *= 0.5
                continue
            move2 = float(np.sum((x_new - x) ** 2))
            if move2 <= 1e-28:
                break
            v_new = value(x_new)
            if v_new >= current + 0.5 * move2 / step:
                accepted = True
                members += 1
                break
            step *= 0.5
        if not accepted:
            break
        x, current = x_new, v_new
    return x, current, members, iterations


def solve_quadratic_game(game, resolution=DEFAULT_CROSS_RESOLUTION, tol=DEFAULT_CHAIN_TOL, max_iters=2000):
    """Full reduction: outer concave ascent, explicit radius, grid cross-check.

    The cross-check runs a grid minimax of the payoff over X x Ball(0, R)
    with (x*, y*) injected into the grids, and reports whether the two
    routes agree within ``tol``.
    """
    if game.degenerate:
        raise DegenerateGameError("S = 0 with A != 0: no finite value function exists")
    spec = game.spectral
    x_star, value_sup_inf, members, iterations = _outer_maximize(game, spec, resolution, max_iters)
    ax = game.A @ x_star
    y_star = pseudo_inverse_apply(spec, ax) if spec.rank else np.zeros(game.dim_y)
    radius = ball_radius(game, spec)

    if radius > 0.0:
        domain_y = Ball(np.zeros(game.dim_y), radius)
        res_y = minimax.capped_resolution(resolution, game.dim_y)
    else:
        domain_y = FinitePointSet(np.zeros((1, game.dim_y)))
        res_y = 1
    res_x = minimax.capped_resolution(resolution, game.dim_x)
    estimate = _cross_check(game.objective, game.domain_x, domain_y, res_x, res_y, x_star, y_star)
    chain_ok = bool(abs(value_sup_inf - estimate.inf_sup) <= tol)
    return QuadraticSolveReport(
        x_star=x_star,
        y_star=y_star,
        value_sup_inf=float(value_sup_inf),
        value_inf_sup=float(estimate.inf_sup),
        radius=float(radius),
        x0_members_checked=int(members),
        chain_ok=chain_ok,
        ascent_iterations=int(iterations),
        resolution=int(resolution),
    )


def _cross_check(objective, domain_x, domain_y, res_x, res_y, x_star, y_star):
    x_nodes = np.vstack([domain_x.evaluation_grid(res_x), x_star[None, :]])
    y_nodes = np.vstack([domain_y.evaluation_grid(res_y), y_star[None, :]])
    table = objective.value_matrix(x_nodes, y_nodes)
    row_min = table.min(axis=1)
    col_max = table.max(axis=0)
    i_star = int(np.argmax(row_min))
    j_star = int(np.argmin(col_max))
    return minimax.MinimaxEstimate(
        sup_inf=float(row_min[i_star]),
        inf_sup=float(col_max[j_star]),
        outer_max_arg=x_nodes[i_star].copy(),
        outer_min_arg=y_nodes[j_star].copy(),
        resolution=int(max(res_x, res_y)),
    )


@dataclass(frozen=True)
class SaddleChainReport:
    values: dict
    ok: bool
    tol: float


def verify_saddle_chain(game, report, resolution=DEFAULT_CROSS_RESOLUTION, tol=DEFAULT_CHAIN_TOL):
    """All members of the saddle chain agree within tol on candidate-augmented grids.

    Members: min-max over the grids, the outer max at y*, the saddle value,
    the inner min at x*, and the in-image-restricted outer sweep of the
    closed-form value function.
    """
    if not report.chain_ok:
        raise ValueError("chain verification requires a report with chain_ok")
    spec = game.spectral
    if report.radius > 0.0:
        domain_y = Ball(np.zeros(game.dim_y), report.radius)
        res_y = minimax.capped_resolution(resolution, game.dim_y)
    else:
        domain_y = FinitePointSet(np.zeros((1, game.dim_y)))
        res_y = 1
    res_x = minimax.capped_resolution(resolution, game.dim_x)

    x_nodes = np.vstack([game.domain_x.evaluation_grid(res_x), report.x_star[None, :]])
    y_nodes = np.vstack([domain_y.evaluation_grid(res_y), report.y_star[None, :]])
    table = game.objective.value_matrix(x_nodes, y_nodes)

    min_max = float(np.min(table.max(axis=0)))
    max_at_ystar = float(np.max(game.objective.value_matrix(x_nodes, report.y_star[None, :])))
    saddle_value = float(game.objective.value(report.x_star, report.y_star))
    min_at_xstar = float(np.min(game.objective.value_matrix(report.x_star[None, :], y_nodes)))

    restricted = -np.inf
    for node in x_nodes:
        inner = inner_min(game, node, spec)
        if np.isfinite(inner.value) and inner.value > restricted:
            restricted = inner.value

    values = {
        "min_max": min_max,
        "max_at_y_star": max_at_ystar,
        "saddle_value": saddle_value,
        "min_at_x_star": min_at_xstar,
        "restricted_max_min": float(restricted),
    }
    numbers = list(values.values())
    ok = bool(max(numbers) - min(numbers) <= tol)
    return SaddleChainReport(values=values, ok=ok, tol=float(tol))
