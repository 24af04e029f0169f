import math

import pytest

from makai.errors import InconsistentBounds, InputError
from makai.families import FamilySpec, makai_constant
from makai.geometry import unit_square
from makai.inequalities import (
    InequalityReport, SolverConfig, c1_constant, c1_gamma_power, c2_constant, dumps, evaluate,
    evaluate_analytic, sweep, _raise_if_inconsistent,
)


def test_constants():
    assert c1_constant(2) == pytest.approx(6 / 24)
    assert c2_constant(3) == pytest.approx(18 / 20)
    assert c1_gamma_power(3, 0.0) == 0.0
    assert c1_gamma_power(3, 0.5) == pytest.approx(c1_constant(3) * 0.125)
    # no underflow in the intermediate power for large n and tiny gamma
    assert c1_gamma_power(40, 1e-9) >= 0.0


def test_square_report():
    rep = evaluate(unit_square(), SolverConfig(refinements=3))
    assert rep.passed
    v = rep.values
    assert v["F_lower"] < makai_constant(2)
    assert v["F_d2"] == pytest.approx(makai_constant(2), rel=1e-12)  # tangential body
    assert rep.remainders["gamma"] == pytest.approx(0.0, abs=1e-10)
    assert rep.check("refinement_monotone")["pass"]
    T = rep.torsion_levels
    assert all(b > a for a, b in zip(T, T[1:]))


def test_random_body_report_3d():
    rep = evaluate(FamilySpec("random_hull", 3, {}, 5))
    assert rep.passed, [c for c in rep.checks if not c["pass"]]
    assert rep.values["F_lower"] <= rep.values["F_d2"] + rep.values["F_d2_error"]


def test_analytic_ball_is_sharp_for_torsion_but_below_makai():
    rep = evaluate_analytic(FamilySpec("ball", 3))
    assert rep.values["F_lower"] == pytest.approx(0.6, rel=1e-12)
    rep2 = evaluate_analytic(FamilySpec("ball", 2))
    assert rep2.values["F_lower"] == pytest.approx(0.5, rel=1e-12)


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6])
def test_analytic_thin_cones_approach_makai(n):
    rep = evaluate_analytic(FamilySpec("cone", n, {"k": 1e3}))
    mk = makai_constant(n)
    assert abs(rep.values["F_extrapolated"] - mk) <= 1e-3 * mk
    assert rep.values["F_d2"] == pytest.approx(mk, rel=1e-12)


def test_exact_box_path_matches_fem():
    spec = FamilySpec("cylinder", 3, {"ell": 10.0})
    exact = evaluate_analytic(spec)
    assert exact.values["torsion_kind"] == "exact"
    assert exact.passed
    fem = evaluate(spec)
    assert fem.values["T_lower"] < exact.values["T_lower"]
    assert fem.values["F_extrapolated"] == pytest.approx(exact.values["F_lower"], rel=2e-3)


def test_cone_sweep_trends():
    rep = sweep(FamilySpec("cone", 2), [2, 5, 10, 20])
    assert rep.passed
    assert rep.trends["alpha_decreasing"] and rep.trends["deficit_decreasing"]
    assert rep.slopes["alpha_vs_inverse_param"] == pytest.approx(1.0, abs=0.1)
    assert rep.to_csv().splitlines()[0].startswith("param,alpha")


def test_thin_limit_cone_torsion_is_not_certified():
    # the first-order thin formula overshoots the constant from above
    rep = evaluate_analytic(FamilySpec("cone", 3, {"k": 5.0}))
    assert rep.values["F_lower"] > makai_constant(3)
    assert not rep.check("makai")["certain"]
    assert rep.passed


def test_cylinder_sweep_exact_tends_to_polya():
    rep = sweep(FamilySpec("cylinder", 3), [10, 100, 1000], analytic=True)
    F = [r["F"] for r in rep.rows]
    assert all(f > 1 / 3 for f in F) and rep.trends["F_decreasing"]
    assert rep.rows[-1]["gamma"] == pytest.approx(2.0, abs=5e-3)


def test_sweep_input_validation():
    with pytest.raises(InputError):
        sweep(FamilySpec("box", 3), [1, 2])
    with pytest.raises(InputError):
        sweep(FamilySpec("cone", 2), [5, 2, 10])


def test_strict_mode_raises_on_a_broken_report():
    bad = InequalityReport("x", 2, {}, {}, [{"name": "makai", "pass": False, "certain": True,
                                              "margin": -1.0}])
    with pytest.raises(InconsistentBounds):
        _raise_if_inconsistent(bad)


def test_config_clamps_coarse_mesh():
    sq = unit_square()
    assert SolverConfig(refinements=8).base_h(sq) < sq.diameter
    assert SolverConfig(mesh_h=0.1).base_h(sq) == 0.1


def test_dumps_is_canonical():
    assert dumps({"b": 1, "a": [0.1, math.pi]}) == dumps({"a": [0.1, math.pi], "b": 1})
