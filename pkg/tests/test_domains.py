import numpy as np
import pytest

import saddlekit as sk
from saddlekit.domains import project_to_simplex


class TestContains:
    def test_box_interior(self):
        assert sk.Box([-1, -1], [1, 1]).contains([0.0, 0.0], tol=0.0)

    def test_ball_boundary_within_tol(self):
        assert sk.Ball([0.0], 1.0).contains([1.0000005], tol=1e-6)
        assert not sk.Ball([0.0], 1.0).contains([1.0000005], tol=1e-9)

    def test_simplex_bad_sum(self):
        assert not sk.Simplex(2).contains([0.7, 0.4])

    def test_points_membership(self):
        fps = sk.FinitePointSet([[-1.0], [1.0]])
        assert fps.contains([1.0])
        assert not fps.contains([0.5])

    def test_dimension_mismatch(self):
        with pytest.raises(sk.DimensionMismatchError):
            sk.Box([-1], [1]).contains([0.0, 0.0])


class TestProject:
    def test_box_clamp(self):
        np.testing.assert_allclose(sk.Box([-1, -1], [1, 1]).project([2.0, 0.5]), [1.0, 0.5])

    def test_ball_radial(self):
        np.testing.assert_allclose(sk.Ball([0.0, 0.0], 1.0).project([3.0, 4.0]), [0.6, 0.8])

    def test_simplex_identity_on_members(self):
        np.testing.assert_allclose(sk.Simplex(2).project([0.5, 0.5]), [0.5, 0.5])

    def test_points_rejected(self):
        with pytest.raises(sk.UnsupportedDomainError):
            sk.FinitePointSet([[0.0]]).project([0.0])

    @pytest.mark.parametrize(
        "domain",
        [sk.Box([-1, 0], [2, 3]), sk.Ball([0.5, -0.5], 2.0), sk.Simplex(3)],
        ids=["box", "ball", "simplex"],
    )
    def test_idempotent(self, domain):
        rng = np.random.default_rng(7)
        for _ in range(50):
            p = rng.normal(scale=3.0, size=domain.dimension)
            once = domain.project(p)
            np.testing.assert_allclose(domain.project(once), once, atol=1e-12)

    @pytest.mark.parametrize(
        "domain",
        [sk.Box([-1, 0], [2, 3]), sk.Ball([0.5, -0.5], 2.0), sk.Simplex(3)],
        ids=["box", "ball", "simplex"],
    )
    def test_projection_optimality(self, domain):
        # nearest-point property against 1000 random members, fixed seed
        rng = np.random.default_rng(11)
        p = rng.normal(scale=3.0, size=domain.dimension)
        proj = domain.project(p)
        members = domain.sample(1000, rng)
        dist = np.linalg.norm(proj - p)
        assert np.all(dist <= np.linalg.norm(members - p, axis=1) + 1e-12)


class TestQuadrature:
    def test_box_midpoints(self):
        grid = sk.Box([0.0], [1.0]).quadrature(2)
        np.testing.assert_allclose(grid.nodes[:, 0], [0.25, 0.75])
        np.testing.assert_allclose(grid.weights, [0.5, 0.5])

    def test_disk_area(self):
        grid = sk.Ball([0.0, 0.0], 1.0).quadrature(64)
        # frozen Riemann count at this resolution; 1.1e-2 from the disk area
        assert grid.weights.sum() == pytest.approx(3.15234375)
        assert abs(grid.weights.sum() - np.pi) <= 1.1e-2

    def test_points_enumeration(self):
        grid = sk.FinitePointSet([[-1.0], [1.0]]).quadrature()
        np.testing.assert_allclose(grid.nodes[:, 0], [-1.0, 1.0])
        np.testing.assert_allclose(grid.weights, [1.0, 1.0])

    @pytest.mark.parametrize("resolution", [1, 3, 10, 25])
    def test_box_volume_exact(self, resolution):
        box = sk.Box([-1.0, 0.5], [2.0, 1.5])
        grid = box.quadrature(resolution)
        volume = 3.0 * 1.0
        assert grid.weights.sum() == pytest.approx(volume, rel=1e-12)

    @pytest.mark.parametrize(
        "domain",
        [sk.Box([-1, -1], [1, 1]), sk.Ball([0.2, 0.0], 1.5), sk.Simplex(3), sk.FinitePointSet([[0.0, 1.0]])],
        ids=["box", "ball", "simplex", "points"],
    )
    def test_nodes_are_members_with_positive_weights(self, domain):
        grid = domain.quadrature(9)
        assert np.all(grid.weights > 0)
        for node in grid.nodes:
            assert domain.contains(node, tol=1e-12)

    @pytest.mark.parametrize(
        "domain",
        [sk.Box([-1, -1], [1, 1]), sk.Ball([0.2, 0.0], 1.5), sk.Simplex(3)],
        ids=["box", "ball", "simplex"],
    )
    def test_bounding_norm_dominates_nodes(self, domain):
        grid = domain.quadrature(9)
        bound = domain.bounding_norm()
        assert np.all(np.linalg.norm(grid.nodes, axis=1) <= bound + 1e-12)

    def test_resolution_validation(self):
        with pytest.raises(ValueError):
            sk.Box([0.0], [1.0]).quadrature(0)


class TestBoundingNorm:
    def test_box_vertex(self):
        assert sk.Box([-1, -1], [1, 1]).bounding_norm() == pytest.approx(np.sqrt(2.0))

    def test_ball(self):
        assert sk.Ball([0.0], 2.0).bounding_norm() == pytest.approx(2.0)

    def test_simplex_brute_force(self):
        # the norm is convex, so its max over the simplex is at a vertex;
        # brute-force over vertices plus random interior points as oracle
        dim = 3
        rng = np.random.default_rng(3)
        candidates = np.vstack([np.eye(dim), rng.dirichlet(np.ones(dim), 500)])
        oracle = np.max(np.linalg.norm(candidates, axis=1))
        assert sk.Simplex(dim).bounding_norm() == pytest.approx(oracle)


class TestEvaluationGrid:
    def test_box_includes_endpoints_and_zero(self):
        nodes = sk.Box([-1.0], [1.0]).evaluation_grid(101)[:, 0]
        assert nodes.min() == -1.0 and nodes.max() == 1.0
        assert 0.0 in nodes

    def test_simplex_includes_vertices(self):
        nodes = sk.Simplex(2).evaluation_grid(11)
        assert any(np.allclose(n, [1.0, 0.0]) for n in nodes)
        assert any(np.allclose(n, [0.0, 1.0]) for n in nodes)


class TestInvariantsOfConstruction:
    def test_box_requires_nonempty_interior(self):
        with pytest.raises(ValueError):
            sk.Box([0.0], [0.0])

    def test_ball_requires_positive_radius(self):
        with pytest.raises(ValueError):
            sk.Ball([0.0], 0.0)

    def test_points_nonempty(self):
        with pytest.raises(ValueError):
            sk.FinitePointSet([])

    def test_convex_flags(self):
        assert sk.Box([0.0], [1.0]).convex
        assert sk.Ball([0.0], 1.0).convex
        assert sk.Simplex(2).convex
        assert not sk.FinitePointSet([[0.0]]).convex


def test_simplex_projection_matches_quadratic_program():
    # oracle: dense search over the simplex grid should never beat the
    # sort-based projection
    rng = np.random.default_rng(5)
    grid = sk.Simplex(3).evaluation_grid(60)
    for _ in range(20):
        p = rng.normal(scale=2.0, size=3)
        proj = project_to_simplex(p)
        assert sk.Simplex(3).contains(proj, 1e-12)
        best = np.min(np.linalg.norm(grid - p, axis=1))
        assert np.linalg.norm(proj - p) <= best + 1e-9


def test_domain_from_dict_round_trip():
    box = sk.domain_from_dict({"kind": "box", "lower": [-1.0], "upper": [1.0]})
    assert isinstance(box, sk.Box)
    with pytest.raises(sk.ProblemFormatError):
        sk.domain_from_dict({"kind": "box", "lower": [-1.0], "upper": [1.0], "oops": 1})
    with pytest.raises(sk.ProblemFormatError):
        sk.domain_from_dict({"kind": "torus"})
