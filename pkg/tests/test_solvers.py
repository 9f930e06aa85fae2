import numpy as np
import pytest

import saddlekit as sk

from conftest import make_random_quadratic_game


class TestMeritSaddleSolver:
    def test_get_set_params_round_trip(self):
        solver = sk.MeritSaddleSolver(resolution=16, tol=1e-10)
        params = solver.get_params()
        assert params["resolution"] == 16
        assert params["tol"] == 1e-10
        solver.set_params(max_iters=100)
        assert solver.get_params()["max_iters"] == 100

    def test_fit_sets_trailing_underscore_attributes(self, xy_objective, unit_box):
        solver = sk.MeritSaddleSolver(resolution=32)
        solver.fit(xy_objective, unit_box, unit_box, start_x=[1.0], start_y=[1.0])
        assert solver.converged_
        assert abs(solver.x_star_[0]) <= 1e-3
        assert solver.candidate_.verified
        assert solver.score() == -solver.merit_

    def test_unfitted_score_raises(self):
        with pytest.raises(sk.SaddlekitError):
            sk.MeritSaddleSolver().score()


class TestQuadraticGameSolver:
    def test_fit_identity_game(self):
        game = make_random_quadratic_game(0)
        solver = sk.QuadraticGameSolver(resolution=21)
        solver.fit(game)
        assert solver.chain_ok_
        assert solver.report_.value_sup_inf == pytest.approx(solver.value_)
        assert solver.chain_report_ is not None

    def test_params_visible_to_sklearn_tools(self):
        from sklearn.base import clone

        solver = sk.QuadraticGameSolver(resolution=11, tol=1e-2)
        cloned = clone(solver)
        assert cloned.get_params() == solver.get_params()
