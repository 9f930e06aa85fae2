"""Estimator-style front ends so the solvers compose with sklearn tooling.

Both classes follow the familiar pattern: hyperparameters in ``__init__``
(available through ``get_params`` / ``set_params``), a ``fit`` that runs the
computation, and trailing-underscore attributes for the fitted results.
"""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator

from . import merit, minimax, quadratic
from .errors import SaddlekitError


class MeritSaddleSolver(BaseEstimator):
    """Find a saddle point by driving the merit residual to zero.

    Parameters
    ----------
    resolution : nodes per axis for the merit quadrature grids.
    step0, shrink, max_iters, tol : projected-gradient parameters.
    verify_resolution, verify_tol : grid and tolerance for the final
        saddle verification of the solver output.
    """

    def __init__(
        self,
        resolution=merit.DEFAULT_MERIT_RESOLUTION,
        step0=1.0,
        shrink=0.5,
        max_iters=5000,
        tol=1e-8,
        verify_resolution=None,
        verify_tol=1e-3,
    ):
        self.resolution = resolution
        self.step0 = step0
        self.shrink = shrink
        self.max_iters = max_iters
        self.tol = tol
        self.verify_resolution = verify_resolution
        self.verify_tol = verify_tol

    def fit(self, objective, domain_x, domain_y, start_x=None, start_y=None):
        ctx = merit.build_context(objective, domain_x, domain_y, self.resolution)
        result = merit.minimize_merit(
            ctx,
            domain_x,
            domain_y,
            start_x=start_x,
            start_y=start_y,
            step0=self.step0,
            shrink=self.shrink,
            max_iters=self.max_iters,
            tol=self.tol,
        )
        self.context_ = ctx
        self.result_ = result
        self.x_star_ = result.x_star
        self.y_star_ = result.y_star
        self.merit_ = result.merit
        self.converged_ = result.converged
        self.candidate_ = minimax.verify_saddle(
            objective,
            result.x_star,
            result.y_star,
            domain_x,
            domain_y,
            resolution=self.verify_resolution,
            tol=self.verify_tol,
        )
        return self

    def score(self, *args):
        """Negated merit residual, so larger is better (sklearn convention)."""
        self._check_fitted()
        return -self.merit_

    def _check_fitted(self):
        if not hasattr(self, "result_"):
            raise SaddlekitError("solver is not fitted; call fit first")


class QuadraticGameSolver(BaseEstimator):
    """Solve a PSD quadratic game through its spectral reduction."""

    def __init__(self, resolution=quadratic.DEFAULT_CROSS_RESOLUTION, tol=quadratic.DEFAULT_CHAIN_TOL, max_iters=2000):
        self.resolution = resolution
        self.tol = tol
        self.max_iters = max_iters

    def fit(self, game):
        report = quadratic.solve_quadratic_game(
            game, resolution=self.resolution, tol=self.tol, max_iters=self.max_iters
        )
        self.report_ = report
        self.x_star_ = report.x_star
        self.y_star_ = report.y_star
        self.value_ = report.value_sup_inf
        self.chain_ok_ = report.chain_ok
        if report.chain_ok:
            self.chain_report_ = quadratic.verify_saddle_chain(
                game, report, resolution=self.resolution, tol=self.tol
            )
        else:
            self.chain_report_ = None
        return self

    def score(self, *args):
        """Negated duality mismatch of the two solve routes."""
        if not hasattr(self, "report_"):
            raise SaddlekitError("solver is not fitted; call fit first")
        return -abs(self.report_.value_sup_inf - self.report_.value_inf_sup)
