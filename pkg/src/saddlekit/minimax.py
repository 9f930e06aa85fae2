"""Grid evaluation of both minimax values, weak duality, and saddle checks.

The continuum sup/inf are realized as max/min over endpoint-inclusive
evaluation grids; every report carries the grid resolution so tolerances
stay interpretable.  Reductions run in fixed node order (row-major lattice,
appended candidates last) and ties break at the lowest node index, so
repeated runs are bit-identical.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import MembershipError, SaddlekitError

DUALITY_SLACK = 1e-9
DEFAULT_VERIFY_TOL = 1e-6
_CHUNK_ENTRIES = 4_000_000


class DualityGapError(SaddlekitError):
    """Minimax equality failed on the grid; carries the observed gap."""

    def __init__(self, gap):
        super().__init__(f"minimax equality does not hold on the grid (gap {gap:.6g})")
        self.gap = float(gap)


@dataclass(frozen=True)
class MinimaxEstimate:
    """Both grid minimax values with their attaining nodes."""

    sup_inf: float
    inf_sup: float
    outer_max_arg: np.ndarray
    outer_min_arg: np.ndarray
    resolution: int

    @property
    def gap(self):
        return self.inf_sup - self.sup_inf


@dataclass(frozen=True)
class SaddleCandidate:
    """A candidate pair with its one-sided violations on the check grid."""

    x_star: np.ndarray
    y_star: np.ndarray
    value: float
    max_violation: float
    min_violation: float
    verified: bool


def default_resolution(dim_x, dim_y):
    """Nodes per axis: 101 up to two dimensions, then capped so the total
    node count stays near 101**2 per side."""
    dim = max(int(dim_x), int(dim_y), 1)
    if dim <= 2:
        return 101
    return int(math.ceil(101.0 ** (2.0 / dim)))


def capped_resolution(resolution, dim):
    """Per-axis count for a requested budget, capped the same way."""
    dim = max(int(dim), 1)
    if dim <= 2:
        return int(resolution)
    return max(2, int(math.ceil(float(resolution) ** (2.0 / dim))))


def _stack_extra(nodes, extra):
    if extra is None:
        return nodes
    extra = np.atleast_2d(np.asarray(extra, dtype=float))
    return np.vstack([nodes, extra])


def grid_minimax(objective, domain_x, domain_y, resolution=None, extra_x=None, extra_y=None):
    """max-min and min-max of f over evaluation grids on the two domains.

    ``extra_x`` / ``extra_y`` append candidate nodes to the lattices (used
    by the verification paths so exact saddle points are represented
    exactly).  Evaluation is chunked over x-nodes to bound memory.
    """
    if resolution is None:
        resolution = default_resolution(domain_x.dimension, domain_y.dimension)
    resolution = int(resolution)
    if resolution < 1:
        raise ValueError("resolution must be >= 1")
    x_nodes = _stack_extra(domain_x.evaluation_grid(resolution), extra_x)
    y_nodes = _stack_extra(domain_y.evaluation_grid(resolution), extra_y)

    n_x, n_y = len(x_nodes), len(y_nodes)
    chunk = max(1, _CHUNK_ENTRIES // max(n_y, 1))
    row_min = np.empty(n_x)
    col_max = np.full(n_y, -np.inf)
    for start in range(0, n_x, chunk):
        block = objective.value_matrix(x_nodes[start : start + chunk], y_nodes)
        row_min[start : start + block.shape[0]] = block.min(axis=1)
        np.maximum(col_max, block.max(axis=0), out=col_max)

    i_star = int(np.argmax(row_min))  # first occurrence = lowest index
    j_star = int(np.argmin(col_max))
    return MinimaxEstimate(
        sup_inf=float(row_min[i_star]),
        inf_sup=float(col_max[j_star]),
        outer_max_arg=x_nodes[i_star].copy(),
        outer_min_arg=y_nodes[j_star].copy(),
        resolution=resolution,
    )


def weak_duality_check(estimate, slack=DUALITY_SLACK):
    """sup-inf <= inf-sup up to rounding slack; exact on identical grids."""
    return bool(estimate.sup_inf <= estimate.inf_sup + slack)


def verify_saddle(objective, x_star, y_star, domain_x, domain_y, resolution=None, tol=DEFAULT_VERIFY_TOL):
    """One-sided saddle violations of (x*, y*) on candidate-augmented grids.

    max_violation is the worst positive part of f(x, y*) - f(x*, y*) over
    the x-grid; min_violation the worst positive part of
    f(x*, y*) - f(x*, y) over the y-grid.
    """
    x_star = np.asarray(x_star, dtype=float).reshape(-1)
    y_star = np.asarray(y_star, dtype=float).reshape(-1)
    if not domain_x.contains(x_star, 1e-9):
        raise MembershipError("x_star is not a member of the x-domain (tol 1e-9)")
    if not domain_y.contains(y_star, 1e-9):
        raise MembershipError("y_star is not a member of the y-domain (tol 1e-9)")
    if resolution is None:
        resolution = default_resolution(domain_x.dimension, domain_y.dimension)

    x_nodes = _stack_extra(domain_x.evaluation_grid(resolution), x_star)
    y_nodes = _stack_extra(domain_y.evaluation_grid(resolution), y_star)
    value = objective.value(x_star, y_star)
    f_x = objective.value_matrix(x_nodes, y_star[None, :])[:, 0]
    f_y = objective.value_matrix(x_star[None, :], y_nodes)[0, :]
    max_violation = float(np.max(np.maximum(f_x - value, 0.0)))
    min_violation = float(np.max(np.maximum(value - f_y, 0.0)))
    return SaddleCandidate(
        x_star=x_star,
        y_star=y_star,
        value=float(value),
        max_violation=max_violation,
        min_violation=min_violation,
        verified=bool(max_violation <= tol and min_violation <= tol),
    )


@dataclass(frozen=True)
class MinimaxEquivalenceReport:
    """Forward direction of the saddle/minimax equivalence at grid scale."""

    estimate: MinimaxEstimate
    value: float
    mismatches: tuple
    passed: bool


def proposition1_forward(objective, candidate, domain_x, domain_y, resolution=None, tol=DEFAULT_VERIFY_TOL):
    """A verified saddle must produce equal grid minimax values that it attains.

    Mismatches come back as structured strings, never exceptions.
    """
    if not candidate.verified:
        raise ValueError("forward check requires a verified candidate")
    estimate = grid_minimax(
        objective,
        domain_x,
        domain_y,
        resolution,
        extra_x=candidate.x_star,
        extra_y=candidate.y_star,
    )
    mismatches = []
    if abs(estimate.sup_inf - candidate.value) > tol:
        mismatches.append(
            f"sup_inf {estimate.sup_inf!r} differs from saddle value {candidate.value!r}"
        )
    if abs(estimate.inf_sup - candidate.value) > tol:
        mismatches.append(
            f"inf_sup {estimate.inf_sup!r} differs from saddle value {candidate.value!r}"
        )
    y_nodes = _stack_extra(domain_y.evaluation_grid(estimate.resolution), candidate.y_star)
    attained_x = float(np.min(objective.value_matrix(candidate.x_star[None, :], y_nodes)[0, :]))
    if abs(attained_x - estimate.sup_inf) > tol:
        mismatches.append(f"x_star does not attain the outer max ({attained_x!r} vs {estimate.sup_inf!r})")
    x_nodes = _stack_extra(domain_x.evaluation_grid(estimate.resolution), candidate.x_star)
    attained_y = float(np.max(objective.value_matrix(x_nodes, candidate.y_star[None, :])[:, 0]))
    if abs(attained_y - estimate.inf_sup) > tol:
        mismatches.append(f"y_star does not attain the outer min ({attained_y!r} vs {estimate.inf_sup!r})")
    return MinimaxEquivalenceReport(
        estimate=estimate,
        value=candidate.value,
        mismatches=tuple(mismatches),
        passed=not mismatches,
    )


def proposition1_converse(objective, estimate, domain_x, domain_y, tol=DEFAULT_VERIFY_TOL):
    """When the grid minimax values agree, the pair of outer attainers must
    verify as a saddle; rejects (with the gap) when they do not agree."""
    gap = abs(estimate.sup_inf - estimate.inf_sup)
    if gap > tol:
        raise DualityGapError(gap)
    return verify_saddle(
        objective,
        estimate.outer_max_arg,
        estimate.outer_min_arg,
        domain_x,
        domain_y,
        resolution=estimate.resolution,
        tol=tol,
    )
