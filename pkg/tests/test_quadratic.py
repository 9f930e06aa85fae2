import numpy as np
import pytest

import saddlekit as sk
from saddlekit.objectives import g_handle_from_spec
from saddlekit.quadratic import pseudo_inverse_apply, spectral_norm

from conftest import make_random_quadratic_game, random_psd


def make_game(S, A, domain, g_kind="zero", g_coef=None):
    g, g_grad = g_handle_from_spec(g_kind, g_coef)
    return sk.QuadraticGame(S, A, domain, g=g, g_grad=g_grad, g_kind=g_kind)


class TestSpectralDecompose:
    def test_identity(self):
        spec = sk.spectral_decompose(np.eye(2))
        np.testing.assert_allclose(spec.eigenvalues, [1.0, 1.0])
        assert spec.rank == 2
        assert spec.sigma_min_pos == pytest.approx(1.0)

    def test_diagonal_rank_deficient(self):
        spec = sk.spectral_decompose(np.diag([4.0, 0.0]))
        np.testing.assert_allclose(spec.eigenvalues, [4.0, 0.0])
        assert spec.rank == 1
        assert spec.sigma_min_pos == pytest.approx(4.0)

    def test_two_by_two_by_hand(self):
        # characteristic polynomial x^2 - 4x + 3 gives eigenvalues 3 and 1
        spec = sk.spectral_decompose([[2.0, 1.0], [1.0, 2.0]])
        np.testing.assert_allclose(spec.eigenvalues, [3.0, 1.0], atol=1e-12)
        assert spec.sigma_min_pos == pytest.approx(1.0)

    def test_asymmetric_rejected(self):
        with pytest.raises(ValueError):
            sk.spectral_decompose([[0.0, 1.0], [0.0, 0.0]])

    def test_rank_zero_has_no_sigma(self):
        spec = sk.spectral_decompose(np.zeros((3, 3)))
        assert spec.rank == 0
        assert spec.sigma_min_pos is None

    @pytest.mark.parametrize("seed", range(100))
    def test_reconstruction_and_orthonormality(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(1, 7))
        s = random_psd(rng, n)
        spec = sk.spectral_decompose(s)
        lam_max = max(float(spec.eigenvalues[0]), 0.0)
        rebuilt = (spec.eigenvectors * spec.eigenvalues) @ spec.eigenvectors.T
        assert np.max(np.abs(rebuilt - s)) <= 1e-9 * max(1.0, lam_max)
        gram = spec.eigenvectors.T @ spec.eigenvectors
        assert np.max(np.abs(gram - np.eye(n))) <= 1e-10
        assert np.all(np.diff(spec.eigenvalues) <= 1e-12)


class TestInImage:
    def test_range_vector(self):
        spec = sk.spectral_decompose(np.diag([1.0, 0.0]))
        assert sk.in_image(spec, [1.0, 0.0], 1e-8)

    def test_kernel_vector(self):
        spec = sk.spectral_decompose(np.diag([1.0, 0.0]))
        assert not sk.in_image(spec, [0.0, 1.0], 1e-8)

    def test_full_rank_accepts_everything(self):
        spec = sk.spectral_decompose(np.eye(3))
        rng = np.random.default_rng(0)
        for _ in range(10):
            assert sk.in_image(spec, rng.normal(size=3), 1e-8)


class TestInnerMin:
    def test_identity_game_closed_form(self):
        game = make_game(np.eye(2), np.eye(2), sk.Ball([0.0, 0.0], 1.0))
        result = sk.inner_min(game, [1.0, 0.0])
        assert result.value == pytest.approx(-0.5)
        np.testing.assert_allclose(result.y_min, [1.0, 0.0])

    def test_zero_point_always_finite(self):
        game = make_game(np.diag([1.0, 0.0]), np.eye(2), sk.Box([-1, -1], [1, 1]), "sumsq")
        result = sk.inner_min(game, [0.0, 0.0])
        assert result.value == pytest.approx(0.0)
        np.testing.assert_allclose(result.y_min, [0.0, 0.0])

    def test_outside_image_is_unbounded(self):
        game = make_game(np.diag([1.0, 0.0]), np.eye(2), sk.Box([-1, -1], [1, 1]))
        result = sk.inner_min(game, [0.0, 1.0])
        assert result.value == -np.inf
        assert result.y_min is None

    @pytest.mark.parametrize("seed", range(25))
    def test_stationarity_bound_and_image_membership(self, seed):
        game = make_random_quadratic_game(seed)
        rng = np.random.default_rng(500 + seed)
        x = game.domain_x.sample(1, rng)[0]
        result = sk.inner_min(game, x)
        if not np.isfinite(result.value):
            return
        ax = game.A @ x
        # stationarity S y = A x
        assert np.linalg.norm(game.S @ result.y_min - ax) <= 1e-8 * max(1.0, np.linalg.norm(ax))
        # the explicit norm bound and image membership of the minimizer
        assert result.bound_ok
        spec = game.spectral
        kernel = spec.eigenvectors[:, spec.rank :]
        if kernel.shape[1]:
            assert np.linalg.norm(kernel.T @ result.y_min) <= 1e-10


class TestBallRadius:
    def test_identity_game(self):
        game = make_game(np.eye(2), np.eye(2), sk.Ball([0.0, 0.0], 1.0))
        assert sk.ball_radius(game) == pytest.approx(1.0)

    def test_zero_coupling(self):
        game = make_game(np.eye(2), np.zeros((2, 2)), sk.Box([-1, -1], [1, 1]))
        assert sk.ball_radius(game) == 0.0

    def test_hand_computed_factors(self):
        game = make_game(np.diag([4.0, 1.0]), 2.0 * np.eye(2), sk.Box([-1, -1], [1, 1]))
        assert sk.ball_radius(game) == pytest.approx(2.0 * np.sqrt(2.0))

    def test_rank_zero_with_coupling_is_degenerate(self):
        game = make_game(np.zeros((2, 2)), np.eye(2), sk.Box([-1, -1], [1, 1]))
        with pytest.raises(sk.DegenerateGameError):
            sk.ball_radius(game)


class TestSolveQuadraticGame:
    def test_identity_game_on_ball(self):
        game = make_game(np.eye(2), np.eye(2), sk.Ball([0.0, 0.0], 1.0))
        report = sk.solve_quadratic_game(game)
        assert report.chain_ok
        assert report.value_sup_inf == pytest.approx(0.0, abs=1e-9)
        assert report.value_inf_sup == pytest.approx(0.0, abs=1e-3)
        np.testing.assert_allclose(report.x_star, [0.0, 0.0], atol=1e-6)
        np.testing.assert_allclose(report.y_star, [0.0, 0.0], atol=1e-6)

    def test_decoupled_game(self):
        game = make_game(np.eye(2), np.zeros((2, 2)), sk.Box([-1, -1], [1, 1]), "sumsq")
        report = sk.solve_quadratic_game(game)
        assert report.chain_ok
        assert report.radius == 0.0
        assert report.value_sup_inf == pytest.approx(0.0, abs=1e-9)
        np.testing.assert_allclose(report.y_star, [0.0, 0.0])

    def test_rank_deficient_aligned_coupling(self):
        # v(x) = -x1^2/2, flat in x2; ties break at the lowest grid index
        game = make_game(np.diag([1.0, 0.0]), np.array([[1.0, 0.0], [0.0, 0.0]]), sk.Box([-1, -1], [1, 1]))
        report = sk.solve_quadratic_game(game)
        assert report.chain_ok
        assert report.value_sup_inf == pytest.approx(0.0, abs=1e-9)
        assert report.x_star[0] == pytest.approx(0.0, abs=1e-9)

    def test_degenerate_game_raises(self):
        game = make_game(np.zeros((2, 2)), np.eye(2), sk.Box([-1, -1], [1, 1]))
        with pytest.raises(sk.DegenerateGameError):
            sk.solve_quadratic_game(game)

    @pytest.mark.parametrize("seed", range(20))
    def test_random_games_close_the_chain(self, seed):
        game = make_random_quadratic_game(seed)
        report = sk.solve_quadratic_game(game, resolution=41, tol=1e-3)
        assert report.chain_ok
        assert abs(report.value_sup_inf - report.value_inf_sup) <= 1e-3

    @pytest.mark.parametrize("seed", range(20))
    def test_weak_duality_across_the_reduction(self, seed):
        game = make_random_quadratic_game(seed)
        report = sk.solve_quadratic_game(game, resolution=21, tol=1e-3)
        assert report.value_sup_inf <= report.value_inf_sup + 1e-6


class TestVerifySaddleChain:
    def test_identity_game_chain(self):
        game = make_game(np.eye(2), np.eye(2), sk.Ball([0.0, 0.0], 1.0))
        report = sk.solve_quadratic_game(game)
        chain = sk.verify_saddle_chain(game, report)
        assert chain.ok
        for value in chain.values.values():
            assert value == pytest.approx(0.0, abs=1e-3)

    def test_decoupled_game_chain(self):
        game = make_game(np.eye(2), np.zeros((2, 2)), sk.Box([-1, -1], [1, 1]), "sumsq")
        report = sk.solve_quadratic_game(game)
        chain = sk.verify_saddle_chain(game, report)
        assert chain.ok
        for value in chain.values.values():
            assert value == pytest.approx(0.0, abs=1e-6)

    @pytest.mark.parametrize("seed", range(12))
    def test_random_games_chain_within_tolerance(self, seed):
        game = make_random_quadratic_game(seed)
        report = sk.solve_quadratic_game(game, resolution=41, tol=1e-3)
        chain = sk.verify_saddle_chain(game, report, resolution=41, tol=1e-3)
        assert chain.ok


class TestValueFunctionConcavity:
    @pytest.mark.parametrize("seed", range(10))
    def test_midpoint_concavity(self, seed):
        game = make_random_quadratic_game(seed)
        rng = np.random.default_rng(900 + seed)
        xs1 = game.domain_x.sample(100, rng)
        xs2 = game.domain_x.sample(100, rng)
        for x1, x2 in zip(xs1, xs2):
            v1 = sk.inner_min(game, x1).value
            v2 = sk.inner_min(game, x2).value
            vm = sk.inner_min(game, (x1 + x2) / 2.0).value
            if np.isfinite(v1) and np.isfinite(v2) and np.isfinite(vm):
                assert vm >= 0.5 * (v1 + v2) - 1e-10


class TestSpectralNorm:
    def test_matches_numpy(self):
        rng = np.random.default_rng(1)
        for _ in range(20):
            a = rng.normal(size=(int(rng.integers(1, 5)), int(rng.integers(1, 5))))
            assert spectral_norm(a) == pytest.approx(np.linalg.norm(a, 2), rel=1e-10)


class TestPseudoInverse:
    def test_matches_numpy_pinv(self):
        rng = np.random.default_rng(2)
        for _ in range(20):
            n = int(rng.integers(1, 6))
            s = random_psd(rng, n)
            spec = sk.spectral_decompose(s)
            w = rng.normal(size=n)
            np.testing.assert_allclose(
                pseudo_inverse_apply(spec, w), np.linalg.pinv(s, rcond=1e-10) @ w, atol=1e-8
            )


class TestGameValidation:
    def test_zero_must_be_inside(self):
        with pytest.raises(sk.MembershipError):
            make_game(np.eye(1), np.eye(1), sk.Box([0.5], [1.5]))

    def test_indefinite_rejected(self):
        with pytest.raises(ValueError):
            make_game(np.diag([1.0, -1.0]), np.zeros((2, 2)), sk.Box([-1, -1], [1, 1]))

    def test_asymmetric_rejected(self):
        with pytest.raises(ValueError):
            make_game([[0.0, 1.0], [0.0, 0.0]], np.zeros((2, 2)), sk.Box([-1, -1], [1, 1]))
