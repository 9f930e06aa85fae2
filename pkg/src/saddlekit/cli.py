"""Command-line front end: JSON problem files in, structured reports out.

Commands: ``gap``, ``verify``, ``phi``, ``solve-phi``, ``solve-quadratic``.
Problem files are strict JSON (unknown fields rejected).  Reports go to
standard output with floats printed at 17 significant digits so repeated
runs are byte-identical and diffable; progress notes go to standard error.

Exit codes: 0 pass, 1 fail, 2 input error, 3 degenerate game.
"""

from __future__ import annotations

import argparse
import json
import sys

import numpy as np

from . import __version__, merit, minimax, quadratic
from .domains import Ball, FinitePointSet, domain_from_dict
from .errors import (
    DegenerateGameError,
    ProblemFormatError,
    SaddlekitError,
)
from .objectives import BilinearObjective, g_handle_from_spec
from .quadratic import QuadraticGame

FORMAT_VERSION = "1"

EXIT_PASS = 0
EXIT_FAIL = 1
EXIT_INPUT_ERROR = 2
EXIT_DEGENERATE = 3

_OPTION_FIELDS = {
    "resolution",
    "tol",
    "verify_tol",
    "step0",
    "shrink",
    "max_iters",
    "seed",
    "start_x",
    "start_y",
}


def _fmt(value):
    """Recursive JSON-ish formatting with 17-significant-digit floats."""
    if isinstance(value, dict):
        inner = ", ".join(f"{json.dumps(str(k))}: {_fmt(v)}" for k, v in value.items())
        return "{" + inner + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ", ".join(_fmt(v) for v in value) + "]"
    if isinstance(value, np.ndarray):
        return _fmt(value.tolist())
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        v = float(value)
        if v != v:
            return '"nan"'
        if v == float("inf"):
            return '"inf"'
        if v == float("-inf"):
            return '"-inf"'
        return f"{v:.17g}"
    if value is None:
        return "null"
    return json.dumps(str(value))


def _strict_object(record, allowed, required, where):
    if not isinstance(record, dict):
        raise ProblemFormatError(f"{where} must be an object", location=where)
    unknown = set(record) - allowed
    if unknown:
        raise ProblemFormatError(
            f"unknown field(s) {sorted(unknown)} in {where}", location=f"{where}.{sorted(unknown)[0]}"
        )
    missing = required - set(record)
    if missing:
        raise ProblemFormatError(
            f"missing field(s) {sorted(missing)} in {where}", location=f"{where}.{sorted(missing)[0]}"
        )
    return record


class Problem:
    """Parsed problem file: objective spec, domains, options."""

    def __init__(self, raw):
        _strict_object(raw, {"objective", "domain_x", "domain_y", "options"}, {"objective", "domain_x"}, "problem")
        self.raw = raw
        self.options = dict(raw.get("options", {}))
        _strict_object(self.options, _OPTION_FIELDS, set(), "options")

        obj = raw["objective"]
        if not isinstance(obj, dict) or "kind" not in obj:
            raise ProblemFormatError("objective must be an object with a 'kind' field", location="objective")
        self.kind = obj["kind"]
        self.domain_x = domain_from_dict(raw["domain_x"])

        if self.kind == "bilinear":
            _strict_object(obj, {"kind", "M", "a", "b", "c"}, {"kind", "M"}, "objective")
            if "domain_y" not in raw:
                raise ProblemFormatError("bilinear problems require domain_y", location="domain_y")
            self.domain_y = domain_from_dict(raw["domain_y"])
            try:
                self.objective = BilinearObjective(obj["M"], obj.get("a"), obj.get("b"), obj.get("c", 0.0))
            except (ValueError, TypeError) as exc:
                raise ProblemFormatError(f"invalid bilinear objective: {exc}", location="objective") from exc
            if self.objective.dim_x != self.domain_x.dimension:
                raise ProblemFormatError("objective and domain_x dimensions disagree", location="domain_x")
            if self.objective.dim_y != self.domain_y.dimension:
                raise ProblemFormatError("objective and domain_y dimensions disagree", location="domain_y")
            self.game = None
        elif self.kind == "quadratic":
            _strict_object(obj, {"kind", "S", "A", "g", "g_coef"}, {"kind", "S", "A", "g"}, "objective")
            if "domain_y" in raw:
                raise ProblemFormatError(
                    "quadratic problems take y over all of R^k; omit domain_y", location="domain_y"
                )
            g, g_grad = g_handle_from_spec(obj["g"], obj.get("g_coef"), dim=self.domain_x.dimension)
            try:
                self.game = QuadraticGame(
                    obj["S"], obj["A"], self.domain_x, g=g, g_grad=g_grad, g_kind=obj["g"]
                )
            except SaddlekitError:
                raise
            except ValueError as exc:
                raise ProblemFormatError(f"invalid quadratic game: {exc}", location="objective") from exc
            self.objective = self.game.objective
            self.domain_y = None
        else:
            raise ProblemFormatError(f"unknown objective kind {self.kind!r}", location="objective.kind")

    def y_domain_or_ball(self):
        """Explicit y-domain, or the compactification ball for quadratic games."""
        if self.domain_y is not None:
            return self.domain_y
        radius = quadratic.ball_radius(self.game)
        if radius == 0.0:
            return FinitePointSet(np.zeros((1, self.game.dim_y)))
        return Ball(np.zeros(self.game.dim_y), radius)

    def opt(self, name, default):
        return self.options.get(name, default)


def load_problem(path):
    try:
        with open(path, "r", encoding="utf-8") as handle:
            raw = json.load(handle)
    except OSError as exc:
        raise ProblemFormatError(f"cannot read problem file: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ProblemFormatError(f"invalid JSON at line {exc.lineno}: {exc.msg}", location=f"line {exc.lineno}") from exc
    return Problem(raw)


def _parse_point(text, what):
    if text is None:
        raise ProblemFormatError(f"missing required flag --{what}", location=what)
    try:
        return np.array([float(part) for part in str(text).split(",")])
    except ValueError as exc:
        raise ProblemFormatError(f"--{what} must be comma-separated numbers", location=what) from exc


def _report(command, problem, results, status):
    return {
        "command": command,
        "inputs": problem.raw,
        "results": results,
        "status": status,
        "versions": {"library": __version__, "format": FORMAT_VERSION},
    }


def _candidate_payload(candidate):
    return {
        "x_star": candidate.x_star,
        "y_star": candidate.y_star,
        "value": candidate.value,
        "max_violation": candidate.max_violation,
        "min_violation": candidate.min_violation,
        "verified": candidate.verified,
    }


def run_gap(problem, args):
    resolution = problem.opt("resolution", None)
    estimate = minimax.grid_minimax(problem.objective, problem.domain_x, problem.y_domain_or_ball(), resolution)
    ok = minimax.weak_duality_check(estimate)
    results = {
        "sup_inf": estimate.sup_inf,
        "inf_sup": estimate.inf_sup,
        "gap": estimate.gap,
        "outer_max_arg": estimate.outer_max_arg,
        "outer_min_arg": estimate.outer_min_arg,
        "resolution": estimate.resolution,
        "weak_duality": ok,
    }
    return (EXIT_PASS if ok else EXIT_FAIL), results, ("pass" if ok else "fail")


def run_verify(problem, args):
    x = _parse_point(args.x, "x")
    y = _parse_point(args.y, "y")
    candidate = minimax.verify_saddle(
        problem.objective,
        x,
        y,
        problem.domain_x,
        problem.y_domain_or_ball(),
        resolution=problem.opt("resolution", None),
        tol=problem.opt("verify_tol", minimax.DEFAULT_VERIFY_TOL),
    )
    code = EXIT_PASS if candidate.verified else EXIT_FAIL
    return code, _candidate_payload(candidate), ("pass" if candidate.verified else "fail")


def run_phi(problem, args):
    x = _parse_point(args.x, "x")
    y = _parse_point(args.y, "y")
    ctx = merit.build_context(
        problem.objective,
        problem.domain_x,
        problem.y_domain_or_ball(),
        problem.opt("resolution", merit.DEFAULT_MERIT_RESOLUTION),
    )
    value = merit.merit_value(ctx, x, y)
    return EXIT_PASS, {"x": x, "y": y, "merit": value}, "pass"


def run_solve_phi(problem, args):
    domain_y = problem.y_domain_or_ball()
    ctx = merit.build_context(
        problem.objective,
        problem.domain_x,
        domain_y,
        problem.opt("resolution", merit.DEFAULT_MERIT_RESOLUTION),
    )
    result = merit.minimize_merit(
        ctx,
        problem.domain_x,
        domain_y,
        start_x=problem.opt("start_x", None),
        start_y=problem.opt("start_y", None),
        step0=problem.opt("step0", 1.0),
        shrink=problem.opt("shrink", 0.5),
        max_iters=problem.opt("max_iters", 5000),
        tol=problem.opt("tol", 1e-8),
    )
    candidate = minimax.verify_saddle(
        problem.objective,
        result.x_star,
        result.y_star,
        problem.domain_x,
        domain_y,
        tol=problem.opt("verify_tol", 1e-3),
    )
    if getattr(args, "trace", None):
        emit_trajectory(result, args.trace)
    ok = result.converged and candidate.verified
    results = {
        "x_star": result.x_star,
        "y_star": result.y_star,
        "merit": result.merit,
        "iterations": result.iterations,
        "converged": result.converged,
        "stop_reason": result.stop_reason,
        "verification": _candidate_payload(candidate),
    }
    return (EXIT_PASS if ok else EXIT_FAIL), results, ("pass" if ok else "fail")


def run_solve_quadratic(problem, args):
    if problem.game is None:
        raise ProblemFormatError("solve-quadratic requires a quadratic objective", location="objective.kind")
    resolution = problem.opt("resolution", quadratic.DEFAULT_CROSS_RESOLUTION)
    tol = problem.opt("tol", quadratic.DEFAULT_CHAIN_TOL)
    report = quadratic.solve_quadratic_game(problem.game, resolution=resolution, tol=tol)
    results = {
        "x_star": report.x_star,
        "y_star": report.y_star,
        "value_sup_inf": report.value_sup_inf,
        "value_inf_sup": report.value_inf_sup,
        "radius": report.radius,
        "x0_members_checked": report.x0_members_checked,
        "chain_ok": report.chain_ok,
    }
    ok = report.chain_ok
    if report.chain_ok:
        chain = quadratic.verify_saddle_chain(problem.game, report, resolution=resolution, tol=tol)
        results["chain_values"] = chain.values
        results["chain_verified"] = chain.ok
        ok = ok and chain.ok
    return (EXIT_PASS if ok else EXIT_FAIL), results, ("pass" if ok else "fail")


def emit_trajectory(result, path):
    """Comma-separated trajectory rows: iter, x..., y..., merit value."""
    dim_x = len(result.x_star)
    dim_y = len(result.y_star)
    header = (
        ["iter"]
        + [f"x{i}" for i in range(dim_x)]
        + [f"y{i}" for i in range(dim_y)]
        + ["phi"]
    )
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as handle:
            handle.write(",".join(header) + "\n")
            for it, (x, y, value) in enumerate(result.trajectory):
                cells = [str(it)] + [f"{v:.17g}" for v in x] + [f"{v:.17g}" for v in y] + [f"{value:.17g}"]
                handle.write(",".join(cells) + "\n")
    except OSError as exc:
        raise ProblemFormatError(f"cannot write trajectory file: {exc}") from exc


_RUNNERS = {
    "gap": run_gap,
    "verify": run_verify,
    "phi": run_phi,
    "solve-phi": run_solve_phi,
    "solve-quadratic": run_solve_quadratic,
}


def run(command, problem_path, args, out=None, err=None):
    """Execute one command against a problem file; returns the exit code."""
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        problem = load_problem(problem_path)
        print(f"saddlekit {command}: {problem_path}", file=err)
        code, results, status = _RUNNERS[command](problem, args)
    except ProblemFormatError as exc:
        loc = f" [{exc.location}]" if exc.location else ""
        print(f"input error{loc}: {exc}", file=err)
        return EXIT_INPUT_ERROR
    except DegenerateGameError as exc:
        report = _report(command, problem, {"reason": str(exc)}, "degenerate")
        print(_fmt(report), file=out)
        return EXIT_DEGENERATE
    except SaddlekitError as exc:
        print(f"input error: {exc}", file=err)
        return EXIT_INPUT_ERROR
    report = _report(command, problem, results, status)
    print(_fmt(report), file=out)
    return code


def build_parser():
    parser = argparse.ArgumentParser(prog="saddlekit", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _RUNNERS:
        cmd = sub.add_parser(name)
        cmd.add_argument("problem", help="path to the JSON problem file")
        if name in ("verify", "phi"):
            cmd.add_argument("--x", required=True, help="comma-separated x coordinates")
            cmd.add_argument("--y", required=True, help="comma-separated y coordinates")
        if name == "solve-phi":
            cmd.add_argument("--trace", default=None, help="write the iterate trajectory to this CSV path")
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    return run(args.command, args.problem, args)


if __name__ == "__main__":
    sys.exit(main())
