import numpy as np
import pytest

import saddlekit as sk
from saddlekit.objectives import g_handle_from_spec
from saddlekit.quadratic import pseudo_inverse_apply, spectral_decompose


@pytest.fixture
def xy_objective():
    """f(x, y) = x*y on scalar strategies."""
    return sk.BilinearObjective([[1.0]])


@pytest.fixture
def unit_box():
    return sk.Box([-1.0], [1.0])


@pytest.fixture
def matching_pennies():
    return sk.BilinearObjective([[1.0, -1.0], [-1.0, 1.0]])


def random_psd(rng, n, rank=None):
    """Random symmetric PSD matrix with a known rank, eigenvalues in [0.1, 5]."""
    if rank is None:
        rank = int(rng.integers(0, n + 1))
    lam = np.zeros(n)
    lam[:rank] = rng.uniform(0.1, 5.0, rank)
    q, _ = np.linalg.qr(rng.normal(size=(n, n)))
    s = (q * lam) @ q.T
    return 0.5 * (s + s.T)


def make_random_quadratic_game(seed):
    """Seeded game with d, k <= 4, PSD S (rank-deficient allowed), A's
    columns projected into the image of S, g cycling zero/sumsq/linear,
    X a box or ball containing zero."""
    rng = np.random.default_rng(seed)
    d = int(rng.integers(1, 5))
    k = int(rng.integers(1, 5))
    rank = int(rng.integers(1, k + 1))
    lam = np.zeros(k)
    lam[:rank] = rng.uniform(0.5, 2.0, rank)
    q, _ = np.linalg.qr(rng.normal(size=(k, k)))
    s = (q * lam) @ q.T
    s = 0.5 * (s + s.T)
    proj = q[:, :rank] @ q[:, :rank].T
    a = proj @ rng.uniform(-1.0, 1.0, (k, d))
    if seed % 2 == 0:
        domain = sk.Box(-rng.uniform(0.5, 1.5, d), rng.uniform(0.5, 1.5, d))
    else:
        center = rng.uniform(-0.2, 0.2, d)
        domain = sk.Ball(center, float(rng.uniform(0.8, 1.5)) + float(np.linalg.norm(center)))
    kind = ["zero", "sumsq", "linear"][seed % 3]
    if kind == "linear":
        # pick the linear term so the outer maximizer sits at a chosen
        # interior point: coef = -A' pinv(S) A xbar
        spec = spectral_decompose(s)
        p = a.T @ np.column_stack([pseudo_inverse_apply(spec, col) for col in a.T])
        xbar = 0.3 * domain.center() if domain.kind == "ball" else 0.15 * (domain.lower + domain.upper)
        g, g_grad = g_handle_from_spec("linear", -p @ xbar)
    else:
        g, g_grad = g_handle_from_spec(kind)
    return sk.QuadraticGame(s, a, domain, g=g, g_grad=g_grad, g_kind=kind)
