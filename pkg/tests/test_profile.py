import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from makai.errors import NoRoot
from makai.families import FamilySpec, make_body
from makai.geometry import build_body, circumscribed_polygon, equilateral_triangle, unit_cube, unit_square
from makai.profile import (
    chain_passed, chebyshev_grid, fit_slope, lambda_moment_closed_form, lambda_moment_quadrature,
    lambda_moment_series, measure_defect, profile_table, verify_profile_chain,
)


def test_chebyshev_grid_shape():
    t = chebyshev_grid(2.0, 16)
    assert t[0] == 0.0 and t[-1] < 2.0
    assert (np.diff(t) > 0).all()
    # clustered towards the inradius
    assert np.diff(t)[-2] < np.diff(t)[0]


@pytest.mark.parametrize("body", [unit_square(), unit_cube(), equilateral_triangle(),
                                  circumscribed_polygon(12)])
def test_tangential_bodies_have_linear_profile(body):
    table = profile_table(body, 32)
    chain = verify_profile_chain(table)
    assert chain_passed(chain)
    assert abs(table.z_value) <= 1e-10
    assert abs(table.gamma_tilde) <= 1e-10
    assert table.equality


def test_square_moment_and_volume():
    table = profile_table(unit_square(), 64)
    assert table.int_P == pytest.approx(1.0, abs=1e-12)
    assert table.int_L_t2 == pytest.approx(1 / 24, abs=1e-12)


@pytest.mark.parametrize("seed", [1, 2, 3])
@pytest.mark.parametrize("n", [2, 3])
def test_random_hull_chain(seed, n):
    body = make_body(FamilySpec("random_hull", n, {}, seed))
    table = profile_table(body, 32)
    chain = verify_profile_chain(table)
    assert chain_passed(chain), {k: v for k, v in chain.items() if not v["pass"]}
    assert 0 < table.z_value < 1
    assert 0 < table.crossing <= table.inradius


def test_long_rectangle_has_flat_profile_end():
    body = build_body(vertices=[(0, 0), (4, 0), (4, 1), (0, 1)])
    table = profile_table(body, 64)
    # P(t) = 10 - 8t stays away from zero at t = R, so z > 0
    assert table.per[-1] == pytest.approx(10 - 8 * table.grid[-1], rel=1e-9)
    assert table.z_value > 0
    assert chain_passed(verify_profile_chain(table))


@settings(max_examples=200, deadline=None)
@given(st.floats(0.1, 10), st.floats(0.0, 1.0), st.floats(0.1, 3), st.integers(2, 9))
def test_lambda_moment_three_ways(L, frac, R, n):
    a = frac * L / R
    series = lambda_moment_series(L, a, R, n)
    quad = lambda_moment_quadrature(L, a, R, n)
    assert series == pytest.approx(quad, rel=1e-11)
    if frac > 0.2:
        assert lambda_moment_closed_form(L, a, R, n) == pytest.approx(quad, rel=1e-8)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.5, 5), st.floats(0.2, 2), st.integers(2, 6), st.floats(0.0, 0.99))
def test_fit_slope_inverts_measure(L, R, n, z_true):
    P = L ** (n - 1)
    volume = P * R / n * sum(z_true ** j for j in range(n))
    a, z = fit_slope(L, R, P, volume, n)
    assert z == pytest.approx(z_true, abs=1e-9)
    assert abs(measure_defect(a, L, R, P, volume, n)) <= 1e-9 * volume


def test_fit_slope_without_root():
    with pytest.raises(NoRoot):
        fit_slope(1.0, 1.0, 1.0, 5.0, 2)
