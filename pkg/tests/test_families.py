import math

import pytest

from makai.errors import InputError, MakaiError
from makai.families import (
    FAMILIES, FamilySpec, analytic_geometry, ball_volume, make_body, makai_constant,
)
from makai.geometry import summarize


def test_makai_constant_values():
    assert makai_constant(2) == pytest.approx(2 / 3)
    assert makai_constant(3) == pytest.approx(0.9)
    for n in range(2, 12):
        assert makai_constant(n) == pytest.approx(2 * n * n / ((n + 1) * (n + 2)))


def test_ball_volume_recursion():
    assert ball_volume(2) == pytest.approx(math.pi)
    assert ball_volume(3) == pytest.approx(4 * math.pi / 3)
    assert ball_volume(4) == pytest.approx(math.pi ** 2 / 2)


@pytest.mark.parametrize("spec", [
    FamilySpec("cone", 2, {"k": 3.0}),
    FamilySpec("cone", 3, {"k": 4.0}),
    FamilySpec("cylinder", 2, {"ell": 5.0}),
    FamilySpec("cylinder", 3, {"ell": 7.0}),
    FamilySpec("box", 3, {"edges": [1.0, 2.0, 0.5]}),
    FamilySpec("simplex", 2, {}),
    FamilySpec("simplex", 3, {}),
])
def test_closed_forms_match_polytope(spec):
    geo = analytic_geometry(spec)
    g = summarize(make_body(spec))
    # 3-D cones are m-gon pyramids, so their closed forms hold to O(m^-2)
    rel = 5e-3 if (spec.family == "cone" and spec.dim == 3) else 1e-10
    assert g.volume == pytest.approx(geo.volume, rel=rel)
    assert g.perimeter == pytest.approx(geo.perimeter, rel=rel)
    assert g.inradius == pytest.approx(geo.inradius, rel=rel)
    assert g.diameter == pytest.approx(geo.diameter, rel=rel)


def test_tangential_random_is_tangential():
    for seed in (1, 2, 3):
        for n in (2, 3):
            g = summarize(make_body(FamilySpec("tangential_random", n, {}, seed)))
            assert abs(g.gamma) <= 1e-10


def test_random_hull_is_seeded():
    a = make_body(FamilySpec("random_hull", 3, {}, 11))
    b = make_body(FamilySpec("random_hull", 3, {}, 11))
    c = make_body(FamilySpec("random_hull", 3, {}, 12))
    assert (a.vertices == b.vertices).all()
    assert a.vertices.shape != c.vertices.shape or not (a.vertices == c.vertices).all()


def test_cone_alpha_decreases_with_flattening():
    alphas = [analytic_geometry(FamilySpec("cone", 3, {"k": k})).alpha for k in (2, 10, 100)]
    assert alphas[0] > alphas[1] > alphas[2]


def test_invalid_specs():
    with pytest.raises(InputError):
        FamilySpec("dodecahedron", 3)
    with pytest.raises(InputError):
        FamilySpec("cone", 1)
    with pytest.raises(InputError):
        FamilySpec("cone", 2, {"k": -1.0})
    with pytest.raises(MakaiError):
        make_body(FamilySpec("ball", 3))
    with pytest.raises(MakaiError):
        make_body(FamilySpec("cone", 4, {"k": 2.0}))


def test_spec_json_roundtrip():
    for fam in FAMILIES:
        s = FamilySpec(fam, 3, {}, 5)
        assert FamilySpec.from_json(s.to_json()) == s
