import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from smoothq import Laplace, Normal, SmoothParams, dq_dh, dq_dz, line_z, solve_population, zm
from smoothq.errors import OutOfRangeError, UnsupportedOperation
from smoothq.distributions import Empirical, Sample
from smoothq.population import line_z_unchecked, population_residual

from . import oracles

MODELS = [Normal(), Laplace(), Normal(1.0, 2.0), Laplace(0.5, 0.7)]


def _oracle_q(pdf, z, h, m=0.0):
    g = lambda q: oracles.quad_cdf(pdf, q) + 0.5 * h * q - 0.5 * (1.0 - z + h * m)
    return oracles.bisect(g, -20.0, 20.0, tol=1e-13)


@pytest.mark.parametrize("z", [-1.0, 1.0, 1.5, float("nan")])
def test_params_reject_z(z):
    with pytest.raises(OutOfRangeError):
        SmoothParams(z, 1.0)


@pytest.mark.parametrize("h", [-0.1, float("inf"), float("nan")])
def test_params_reject_h(h):
    with pytest.raises(OutOfRangeError):
        SmoothParams(0.0, h)


def test_normal_symmetric_solution():
    for h in (0.0, 0.5, 3.0, 100.0):
        sol = solve_population(Normal(), SmoothParams(0.0, h))
        assert sol.q == pytest.approx(0.0, abs=1e-13)
        assert sol.tau == pytest.approx(0.5, abs=1e-13)


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.spec())
@pytest.mark.parametrize("z", [-0.8, -0.2, 0.4])
def test_h_zero_is_quantile(model, z):
    assert solve_population(model, SmoothParams(z, 0.0)).q == model.quantile((1 - z) / 2)


def test_normal_against_bisection_oracle():
    sol = solve_population(Normal(), SmoothParams(-0.5, 1.0))
    assert sol.q == pytest.approx(0.27970434472322836, abs=1e-10)  # bisection on quadrature cdf
    assert sol.q == pytest.approx(0.2797, abs=1e-4)


@pytest.mark.parametrize("z,h", [(0.3, 0.2), (-0.7, 4.0), (0.9, 25.0)])
def test_laplace_against_bisection_oracle(z, h):
    sol = solve_population(Laplace(), SmoothParams(z, h))
    assert sol.q == pytest.approx(_oracle_q(oracles.laplace_pdf, z, h), abs=1e-10)


@settings(max_examples=200, deadline=None)
@given(
    model=st.sampled_from(MODELS),
    z=st.floats(-0.99, 0.99),
    h=st.floats(0.0, 1e3),
)
def test_residual_and_bounds(model, z, h):
    params = SmoothParams(z, h)
    sol = solve_population(model, params)
    assert abs(population_residual(model, sol.q, z, h)) <= 1e-10 * max(1.0, h)
    assert 0.0 < sol.tau < 1.0
    assert sol.score_slope == pytest.approx(2 * model.pdf(sol.q) + h)
    q0, m = model.quantile((1 - z) / 2), model.mean()
    assert min(q0, m) - 1e-10 <= sol.q <= max(q0, m) + 1e-10


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.spec())
@pytest.mark.parametrize("z", [-0.5, 0.5])
def test_monotone_in_h_toward_mean(model, z):
    grid = np.linspace(0.0, 50.0, 201)
    qs = np.array([solve_population(model, SmoothParams(z, float(h))).q for h in grid])
    m = model.mean()
    if qs[0] < m:
        assert np.all(np.diff(qs) >= -1e-13) and np.all(qs <= m + 1e-12)
    else:
        assert np.all(np.diff(qs) <= 1e-13) and np.all(qs >= m - 1e-12)


@pytest.mark.parametrize("model", [Normal(), Laplace()], ids=lambda m: m.spec())
@pytest.mark.parametrize("z", [-0.5, 0.5])
def test_large_h_limit(model, z):
    assert abs(solve_population(model, SmoothParams(z, 1e4)).q - model.mean()) <= 1e-3


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.spec())
def test_decreasing_in_z(model):
    for h in (0.0, 1.0, 10.0):
        qs = [solve_population(model, SmoothParams(float(z), h)).q for z in np.linspace(-0.95, 0.95, 39)]
        assert np.all(np.diff(qs) < 0.0)


def test_line_z_values():
    assert line_z(Normal(), 0.3, 0.0) == pytest.approx(0.4, abs=1e-15)
    for h in (0.0, 1.0, 50.0):
        assert line_z(Normal(), 0.5, h) == 0.0
        assert line_z(Laplace(2.0, 3.0), 0.5, h) == 0.0


def test_line_z_out_of_range_names_bound():
    # 0.5 + 1 * (0 - ln 0.5) = 1.1931...
    assert line_z_unchecked(Laplace(), 0.25, 1.0) == pytest.approx(0.5 - math.log(0.5), abs=1e-15)
    with pytest.raises(OutOfRangeError, match="1"):
        line_z(Laplace(), 0.25, 1.0)
    with pytest.raises(OutOfRangeError, match="-1"):
        line_z(Laplace(), 0.75, 1.0)


@settings(max_examples=200, deadline=None)
@given(model=st.sampled_from(MODELS), tau=st.floats(0.02, 0.98), h=st.floats(0.0, 5.0))
def test_line_round_trip(model, tau, h):
    z = line_z_unchecked(model, tau, h)
    if not -1.0 < z < 1.0:
        return
    assert solve_population(model, SmoothParams(z, h)).tau == pytest.approx(tau, abs=1e-8)


def test_derivatives_against_finite_differences():
    params = SmoothParams(-0.5, 1.0)
    # frozen central differences of bisection roots (oracles.central_diff, step 1e-4)
    assert dq_dh(Normal(), params) == pytest.approx(-0.15826862087564564, rel=1e-5)
    assert dq_dz(Normal(), params) == pytest.approx(-0.5658425525467692, rel=1e-5)


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.spec())
@pytest.mark.parametrize("z,h", [(-0.6, 0.7), (0.2, 3.0), (0.8, 12.0)])
def test_derivative_formulas(model, z, h):
    qh = lambda t: solve_population(model, SmoothParams(z, t)).q
    qz = lambda t: solve_population(model, SmoothParams(t, h)).q
    assert dq_dh(model, SmoothParams(z, h)) == pytest.approx(oracles.central_diff(qh, h), rel=1e-4, abs=1e-9)
    assert dq_dz(model, SmoothParams(z, h)) == pytest.approx(oracles.central_diff(qz, z), rel=1e-4)


def test_derivative_at_h_zero_one_sided():
    model, z, step = Normal(), 0.4, 1e-6
    fd = (solve_population(model, SmoothParams(z, step)).q - solve_population(model, SmoothParams(z, 0.0)).q) / step
    assert dq_dh(model, SmoothParams(z, 0.0)) == pytest.approx(fd, rel=1e-4)


def test_derivative_signs():
    assert dq_dh(Normal(), SmoothParams(0.0, 2.0)) == pytest.approx(0.0, abs=1e-14)
    for model in MODELS:
        for z in (-0.9, 0.0, 0.9):
            assert dq_dz(model, SmoothParams(z, 1.0)) < 0.0


@pytest.mark.parametrize("model", MODELS, ids=lambda m: m.spec())
def test_zm_targets_mean(model):
    z = zm(model)
    assert z == pytest.approx(0.0, abs=1e-15)
    for h in (0.0, 1.0, 30.0):
        assert solve_population(model, SmoothParams(z, h)).q == pytest.approx(model.mean(), abs=1e-10)


def test_empirical_model_rejected():
    with pytest.raises(UnsupportedOperation):
        solve_population(Empirical(Sample([1.0, 2.0])), SmoothParams(0.0, 1.0))
