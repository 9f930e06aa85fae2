"""Compact strategy domains: membership, projection, grids, and norm bounds.

Four domain kinds are supported: axis-aligned boxes, Euclidean balls, the
standard probability simplex, and explicit finite point sets.  Boxes, balls
and the simplex are convex; finite point sets are not, and every operation
that needs convexity rejects them explicitly.

Two grid constructions live here:

* ``quadrature`` builds a midpoint tensor-product rule (interior nodes,
  positive weights).  Non-box domains mask the bounding-box rule by
  membership, keeping the rule a plain Riemann sum.
* ``evaluation_grid`` builds an endpoint-inclusive uniform lattice used for
  discrete max/min sweeps, where hitting extreme points matters more than
  integrating.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatchError, UnsupportedDomainError

DEFAULT_MEMBERSHIP_TOL = 1e-9


@dataclass(frozen=True)
class QuadratureGrid:
    """Midpoint-rule nodes and weights on a domain.

    ``nodes`` is (N, d), ``weights`` is (N,) and strictly positive;
    ``resolution`` is the nodes-per-axis count the grid was built from.
    """

    nodes: np.ndarray
    weights: np.ndarray
    resolution: int

    def __post_init__(self):
        object.__setattr__(self, "nodes", _readonly(np.atleast_2d(np.asarray(self.nodes, dtype=float))))
        object.__setattr__(self, "weights", _readonly(np.asarray(self.weights, dtype=float)))
        if np.any(self.weights <= 0):
            raise ValueError("quadrature weights must be strictly positive")


def _readonly(a):
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


def _as_vector(point, dimension, what="point"):
    p = np.asarray(point, dtype=float).reshape(-1)
    if p.shape[0] != dimension:
        raise DimensionMismatchError(
            f"{what} has dimension {p.shape[0]}, domain expects {dimension}"
        )
    return p


def _axis_midpoints(lo, hi, n):
    h = (hi - lo) / n
    return lo + (np.arange(n) + 0.5) * h


def _axis_uniform(lo, hi, n):
    if n == 1:
        return np.array([(lo + hi) / 2.0])
    return np.linspace(lo, hi, n)


def _tensor_nodes(axes):
    """Row-major (first axis slowest) cartesian product of 1-d node arrays."""
    mesh = np.meshgrid(*axes, indexing="ij")
    return np.stack([m.reshape(-1) for m in mesh], axis=1)


class Domain:
    """Common interface; see concrete subclasses."""

    kind = None
    convex = False

    @property
    def dimension(self):
        raise NotImplementedError

    def contains(self, point, tol=DEFAULT_MEMBERSHIP_TOL):
        raise NotImplementedError

    def project(self, point):
        raise NotImplementedError

    def quadrature(self, resolution):
        raise NotImplementedError

    def evaluation_grid(self, resolution):
        """Endpoint-inclusive uniform node lattice, shape (N, d)."""
        raise NotImplementedError

    def bounding_norm(self):
        """Exact max of the Euclidean norm over the domain."""
        raise NotImplementedError

    def center(self):
        """A canonical interior (or relative-interior) point."""
        raise NotImplementedError

    def sample(self, n, rng):
        """n uniform-ish random members, shape (n, d)."""
        raise NotImplementedError

    def _check_resolution(self, resolution):
        if int(resolution) < 1:
            raise ValueError(f"resolution must be >= 1, got {resolution}")
        return int(resolution)


class Box(Domain):
    """Axis-aligned box [lower, upper] with nonempty interior."""

    kind = "box"
    convex = True

    def __init__(self, lower, upper):
        lower = np.asarray(lower, dtype=float).reshape(-1)
        upper = np.asarray(upper, dtype=float).reshape(-1)
        if lower.shape != upper.shape:
            raise DimensionMismatchError("lower and upper bounds differ in length")
        if np.any(lower >= upper):
            raise ValueError("box requires lower[i] < upper[i] for all i")
        self.lower = _readonly(lower)
        self.upper = _readonly(upper)

    @property
    def dimension(self):
        return self.lower.shape[0]

    def __repr__(self):
        return f"Box(lower={self.lower.tolist()}, upper={self.upper.tolist()})"

    def contains(self, point, tol=DEFAULT_MEMBERSHIP_TOL):
        p = _as_vector(point, self.dimension)
        return bool(np.all(p >= self.lower - tol) and np.all(p <= self.upper + tol))

    def project(self, point):
        p = _as_vector(point, self.dimension)
        return np.clip(p, self.lower, self.upper)

    def quadrature(self, resolution):
        n = self._check_resolution(resolution)
        axes = [_axis_midpoints(lo, hi, n) for lo, hi in zip(self.lower, self.upper)]
        nodes = _tensor_nodes(axes)
        cell = float(np.prod((self.upper - self.lower) / n))
        return QuadratureGrid(nodes, np.full(len(nodes), cell), n)

    def evaluation_grid(self, resolution):
        n = self._check_resolution(resolution)
        axes = [_axis_uniform(lo, hi, n) for lo, hi in zip(self.lower, self.upper)]
        return _tensor_nodes(axes)

    def bounding_norm(self):
        return float(np.sqrt(np.sum(np.maximum(self.lower**2, self.upper**2))))

    def center(self):
        return (self.lower + self.upper) / 2.0

    def sample(self, n, rng):
        return rng.uniform(self.lower, self.upper, size=(n, self.dimension))


class Ball(Domain):
    """Closed Euclidean ball of radius > 0."""

    kind = "ball"
    convex = True

    def __init__(self, center, radius):
        center = np.asarray(center, dtype=float).reshape(-1)
        if radius <= 0:
            raise ValueError("ball requires radius > 0")
        self._center = _readonly(center)
        self.radius = float(radius)

    @property
    def dimension(self):
        return self._center.shape[0]

    def __repr__(self):
        return f"Ball(center={self._center.tolist()}, radius={self.radius})"

    def contains(self, point, tol=DEFAULT_MEMBERSHIP_TOL):
        p = _as_vector(point, self.dimension)
        return bool(np.linalg.norm(p - self._center) <= self.radius + tol)

    def project(self, point):
        p = _as_vector(point, self.dimension)
        delta = p - self._center
        dist = np.linalg.norm(delta)
        if dist <= self.radius:
            return p
        return self._center + delta * (self.radius / dist)

    def _masked_grid(self, axis_builder, resolution):
        n = self._check_resolution(resolution)
        lo = self._center - self.radius
        hi = self._center + self.radius
        axes = [axis_builder(a, b, n) for a, b in zip(lo, hi)]
        nodes = _tensor_nodes(axes)
        keep = np.linalg.norm(nodes - self._center, axis=1) <= self.radius
        return nodes[keep], n, float(np.prod((hi - lo) / n))

    def quadrature(self, resolution):
        nodes, n, cell = self._masked_grid(_axis_midpoints, resolution)
        if len(nodes) == 0:
            # coarse grids can miss the ball entirely; fall back to the center
            nodes = self._center[None, :]
            return QuadratureGrid(nodes, np.array([cell]), n)
        return QuadratureGrid(nodes, np.full(len(nodes), cell), n)

    def evaluation_grid(self, resolution):
        nodes, _, _ = self._masked_grid(_axis_uniform, resolution)
        if len(nodes) == 0:
            nodes = self._center[None, :]
        return nodes

    def bounding_norm(self):
        return float(np.linalg.norm(self._center) + self.radius)

    def center(self):
        return self._center.copy()

    def sample(self, n, rng):
        d = self.dimension
        direction = rng.normal(size=(n, d))
        direction /= np.maximum(np.linalg.norm(direction, axis=1, keepdims=True), 1e-300)
        radii = self.radius * rng.uniform(size=(n, 1)) ** (1.0 / d)
        return self._center + direction * radii


class Simplex(Domain):
    """Standard probability simplex {x >= 0, sum(x) = 1} in the given dimension.

    The simplex is flat in ambient space, so both grids are built in the
    affine hull: the first (dim-1) coordinates parametrize it and the last
    coordinate closes the sum to one.
    """

    kind = "simplex"
    convex = True

    def __init__(self, dim):
        dim = int(dim)
        if dim < 1:
            raise ValueError("simplex dimension must be >= 1")
        self.dim = dim

    @property
    def dimension(self):
        return self.dim

    def __repr__(self):
        return f"Simplex(dim={self.dim})"

    def contains(self, point, tol=DEFAULT_MEMBERSHIP_TOL):
        p = _as_vector(point, self.dim)
        return bool(np.all(p >= -tol) and abs(np.sum(p) - 1.0) <= tol)

    def project(self, point):
        p = _as_vector(point, self.dim)
        if self.contains(p, 0.0):
            return p
        return project_to_simplex(p)

    def _lift(self, params):
        last = 1.0 - np.sum(params, axis=1, keepdims=True)
        return np.hstack([params, np.clip(last, 0.0, None)])

    def quadrature(self, resolution):
        n = self._check_resolution(resolution)
        m = self.dim - 1
        if m == 0:
            return QuadratureGrid(np.array([[1.0]]), np.array([1.0]), n)
        axes = [_axis_midpoints(0.0, 1.0, n)] * m
        params = _tensor_nodes(axes)
        keep = np.sum(params, axis=1) <= 1.0
        params = params[keep]
        cell = (1.0 / n) ** m
        return QuadratureGrid(self._lift(params), np.full(len(params), cell), n)

    def evaluation_grid(self, resolution):
        n = self._check_resolution(resolution)
        m = self.dim - 1
        if m == 0:
            return np.array([[1.0]])
        axes = [_axis_uniform(0.0, 1.0, n)] * m
        params = _tensor_nodes(axes)
        keep = np.sum(params, axis=1) <= 1.0 + 1e-12
        return self._lift(params[keep])

    def bounding_norm(self):
        # max of a convex function over the simplex sits at a vertex e_i
        return 1.0

    def center(self):
        return np.full(self.dim, 1.0 / self.dim)

    def sample(self, n, rng):
        return rng.dirichlet(np.ones(self.dim), size=n)


class FinitePointSet(Domain):
    """Explicit nonempty list of points; nonconvex by declaration."""

    kind = "points"
    convex = False

    def __init__(self, points):
        points = np.atleast_2d(np.asarray(points, dtype=float))
        if points.size == 0:
            raise ValueError("finite point set must be nonempty")
        self.points = _readonly(points)

    @property
    def dimension(self):
        return self.points.shape[1]

    def __repr__(self):
        return f"FinitePointSet({self.points.tolist()})"

    def contains(self, point, tol=DEFAULT_MEMBERSHIP_TOL):
        p = _as_vector(point, self.dimension)
        return bool(np.any(np.max(np.abs(self.points - p), axis=1) <= tol))

    def project(self, point):
        raise UnsupportedDomainError("projection onto a finite point set is not supported (nonconvex)")

    def quadrature(self, resolution=1):
        n = self._check_resolution(resolution)
        return QuadratureGrid(self.points.copy(), np.ones(len(self.points)), n)

    def evaluation_grid(self, resolution=1):
        return self.points.copy()

    def bounding_norm(self):
        return float(np.max(np.linalg.norm(self.points, axis=1)))

    def center(self):
        raise UnsupportedDomainError("a finite point set has no canonical interior point")

    def sample(self, n, rng):
        idx = rng.integers(0, len(self.points), size=n)
        return self.points[idx].copy()


def project_to_simplex(v):
    """Euclidean projection of v onto {x >= 0, sum(x) = 1} via the sort method."""
    v = np.asarray(v, dtype=float).reshape(-1)
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    rho_candidates = u + (1.0 - css) / np.arange(1, len(v) + 1)
    rho = np.nonzero(rho_candidates > 0)[0][-1]
    theta = (1.0 - css[rho]) / (rho + 1)
    return np.maximum(v + theta, 0.0)


def domain_from_dict(record):
    """Build a Domain from a tagged record ({"kind": "box", ...} etc.)."""
    from .errors import ProblemFormatError

    if not isinstance(record, dict) or "kind" not in record:
        raise ProblemFormatError("domain record must be an object with a 'kind' field")
    kind = record["kind"]
    builders = {
        "box": (Box, {"lower", "upper"}),
        "ball": (Ball, {"center", "radius"}),
        "simplex": (Simplex, {"dim"}),
        "points": (FinitePointSet, {"points"}),
    }
    if kind not in builders:
        raise ProblemFormatError(f"unknown domain kind {kind!r}", location="kind")
    cls, allowed = builders[kind]
    extra = set(record) - allowed - {"kind"}
    if extra:
        raise ProblemFormatError(
            f"unknown field(s) {sorted(extra)} in {kind} domain", location=",".join(sorted(extra))
        )
    missing = allowed - set(record)
    if missing:
        raise ProblemFormatError(
            f"missing field(s) {sorted(missing)} in {kind} domain", location=",".join(sorted(missing))
        )
    try:
        return cls(**{k: record[k] for k in allowed})
    except (ValueError, TypeError) as exc:
        raise ProblemFormatError(f"invalid {kind} domain: {exc}") from exc
