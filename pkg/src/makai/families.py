"""Parametric body families with closed-form geometry.

Cones ``{x in B^{n-1}, 0 <= y <= (1-|x|)/k}`` flatten as ``k`` grows and drive
the Makai functional to its supremum; cylinders ``C x [-1/(2l), 1/(2l)]`` thin
out towards the Polya end. Explicit polytopal realizations exist for n <= 3;
the closed forms hold in any dimension.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import DimensionUnsupported, InputError, NoClosedForm, Unbounded
from .geometry import ConvexBody, build_body

FAMILIES = ("cone", "cylinder", "box", "simplex", "regular_polygon",
            "tangential_random", "random_hull", "ball")
ANALYTIC_FAMILIES = ("cone", "cylinder", "box", "simplex", "regular_polygon", "ball")

DEFAULT_CONE_SIDES = 64


def ball_volume(k: int) -> float:
    """Volume of the unit k-ball via omega_k = omega_{k-2} * 2 pi / k."""
    if k < 0:
        raise ValueError("dimension must be nonnegative")
    w = [1.0, 2.0]
    for j in range(2, k + 1):
        w.append(w[j - 2] * 2.0 * math.pi / j)
    return w[k]


def makai_constant(n: int) -> float:
    if n < 2:
        raise InputError("n must be at least 2")
    return 2.0 * n * n / ((n + 1) * (n + 2))


@dataclass(frozen=True)
class FamilySpec:
    family: str
    dim: int
    params: dict = field(default_factory=dict)
    seed: Optional[int] = None

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InputError(f"unknown family {self.family!r}")
        if self.dim < 2:
            raise InputError("dim must be >= 2")
        for key, val in self.params.items():
            vals = val if isinstance(val, (list, tuple)) else [val]
            if any(isinstance(v, (int, float)) and v <= 0 for v in vals):
                raise InputError(f"parameter {key} must be positive")

    def to_json(self) -> dict:
        return {"family": self.family, "dim": self.dim, "params": dict(self.params), "seed": self.seed}

    @classmethod
    def from_json(cls, obj: dict) -> "FamilySpec":
        try:
            return cls(family=obj["family"], dim=int(obj["dim"]),
                       params=dict(obj.get("params", {})), seed=obj.get("seed"))
        except KeyError as exc:
            raise InputError(f"family spec missing key {exc}") from exc

    def label(self) -> str:
        p = ",".join(f"{k}={v}" for k, v in sorted(self.params.items()))
        s = f"{self.family}(n={self.dim}{',' if p else ''}{p})"
        return s if self.seed is None else f"{s}#seed{self.seed}"

    def __str__(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True)


@dataclass(frozen=True)
class AnalyticGeometry:
    volume: float
    perimeter: float
    inradius: float
    minwidth: float
    diameter: float
    torsion: Optional[float] = None
    torsion_kind: Optional[str] = None  # "exact" or "thin-limit"
    torsion_limit_coeff: Optional[float] = None
    exact: dict = field(default_factory=dict)

    @property
    def alpha(self) -> float:
        return self.minwidth / self.diameter

    def gamma(self, n: int) -> float:
        return n - self.perimeter * self.inradius / self.volume

    def beta(self, n: int) -> float:
        return self.perimeter * self.inradius / self.volume - 1.0

    def to_dict(self) -> dict:
        d = dict(self.__dict__)
        d["exact"] = dict(self.exact)
        return d


def _cone_meridian(k: float):
    """Slant length, inradius, minimal width and diameter of the cone of slope 1/k.

    A cone of revolution has the same width function and inball as its
    meridian triangle (-1,0), (1,0), (0,1/k), in every dimension.
    """
    s = math.sqrt(1.0 + 1.0 / k ** 2)
    R = 1.0 / (k + math.sqrt(k * k + 1.0))
    w = 1.0 / k if k >= 1.0 / math.sqrt(3.0) else 2.0 / (k * s)
    diam = max(2.0, s)
    return s, R, w, diam


def _regular_simplex_width(n: int, edge: float) -> float:
    if n % 2:
        return edge * math.sqrt(2.0 / (n + 1))
    return edge * math.sqrt(2.0 * (n + 1) / (n * (n + 2)))


def _simplex_volume(n: int, edge: float) -> float:
    return edge ** n / math.factorial(n) * math.sqrt((n + 1) / 2.0 ** n)


def analytic_geometry(spec: FamilySpec) -> AnalyticGeometry:
    n, p = spec.dim, spec.params
    all_exact = dict.fromkeys(("volume", "perimeter", "inradius", "minwidth", "diameter"), True)
    if spec.family == "cone":
        k = float(p.get("k", 1.0))
        om = ball_volume(n - 1)
        s, R, w, diam = _cone_meridian(k)
        coeff = om / (2.0 * n * (n + 1) * (n + 2))
        return AnalyticGeometry(
            volume=om / (n * k), perimeter=om * (1.0 + s), inradius=R, minwidth=w, diameter=diam,
            torsion=coeff / k ** 3, torsion_kind="thin-limit", torsion_limit_coeff=coeff,
            exact=all_exact,
        )
    if spec.family in ("cylinder", "box"):
        if spec.family == "cylinder":
            ell = float(p.get("ell", 10.0))
            edges = [1.0] * (n - 1) + [1.0 / ell]
        else:
            edges = [float(e) for e in p.get("edges", [1.0] * n)]
            if len(edges) != n:
                raise InputError("box needs one edge length per dimension")
        vol = math.prod(edges)
        per = 2.0 * sum(vol / e for e in edges)
        hmin = min(edges)
        torsion, kind = None, None
        if n == 2:
            from .fem import analytic_torsion_rectangle
            torsion, kind = analytic_torsion_rectangle(*edges), "exact"
        elif n == 3:
            from .fem import analytic_torsion_box
            torsion, kind = analytic_torsion_box(*edges), "exact"
        elif spec.family == "cylinder":
            torsion, kind = vol / hmin * hmin ** 3 / 12.0, "thin-limit"
        return AnalyticGeometry(
            volume=vol, perimeter=per, inradius=hmin / 2.0, minwidth=hmin,
            diameter=math.sqrt(sum(e * e for e in edges)), torsion=torsion, torsion_kind=kind,
            torsion_limit_coeff=(1.0 / 12.0 if spec.family == "cylinder" else None),
            exact=all_exact,
        )
    if spec.family == "simplex":
        a = float(p.get("edge", 1.0))
        vol = _simplex_volume(n, a)
        per = (n + 1) * _simplex_volume(n - 1, a)
        torsion, kind = None, None
        if n == 2:
            torsion, kind = math.sqrt(3.0) * a ** 4 / 320.0, "exact"
        return AnalyticGeometry(
            volume=vol, perimeter=per, inradius=n * vol / per, minwidth=_regular_simplex_width(n, a),
            diameter=a, torsion=torsion, torsion_kind=kind, exact=all_exact,
        )
    if spec.family == "regular_polygon":
        if n != 2:
            raise InputError("regular_polygon is planar")
        m = int(p.get("m", 6))
        r, rho = _polygon_radii(p, m)
        vol = m * r * r * math.tan(math.pi / m)
        per = 2.0 * m * r * math.tan(math.pi / m)
        diam = 2 * rho if m % 2 == 0 else 2 * rho * math.cos(math.pi / (2 * m))
        w = 2 * r if m % 2 == 0 else r + rho
        return AnalyticGeometry(volume=vol, perimeter=per, inradius=r, minwidth=w, diameter=diam,
                                exact=all_exact)
    if spec.family == "ball":
        Rb = float(p.get("radius", 1.0))
        om = ball_volume(n)
        return AnalyticGeometry(
            volume=om * Rb ** n, perimeter=n * om * Rb ** (n - 1), inradius=Rb, minwidth=2 * Rb,
            diameter=2 * Rb, torsion=om * Rb ** (n + 2) / (n * (n + 2)), torsion_kind="exact",
            exact=all_exact,
        )
    raise NoClosedForm(f"family {spec.family!r} has no closed form")


def _polygon_radii(p: dict, m: int):
    if "circumradius" in p:
        rho = float(p["circumradius"])
        return rho * math.cos(math.pi / m), rho
    r = float(p.get("inradius", 1.0))
    return r, r / math.cos(math.pi / m)


# ---------------------------------------------------------------------------
# explicit realizations
# ---------------------------------------------------------------------------

def make_body(spec: FamilySpec) -> ConvexBody:
    n, p = spec.dim, spec.params
    if spec.family == "ball":
        raise NoClosedForm("balls have no polytopal realization; use regular_polygon or tangential_random")
    if n > 3:
        raise DimensionUnsupported(f"no explicit realization in dimension {n}")
    prov = spec.to_json()
    if spec.family == "cone":
        k = float(p.get("k", 1.0))
        if n == 2:
            V = [(-1.0, 0.0), (1.0, 0.0), (0.0, 1.0 / k)]
        else:
            m = int(p.get("m", DEFAULT_CONE_SIDES))
            ang = 2 * math.pi * np.arange(m) / m
            base = np.stack([np.cos(ang), np.sin(ang), np.zeros(m)], axis=1)
            V = np.vstack([base, [[0.0, 0.0, 1.0 / k]]])
        return build_body(vertices=V, provenance=prov)
    if spec.family in ("cylinder", "box"):
        if spec.family == "cylinder":
            ell = float(p.get("ell", 10.0))
            lo = [0.0] * (n - 1) + [-0.5 / ell]
            hi = [1.0] * (n - 1) + [0.5 / ell]
        else:
            edges = [float(e) for e in p.get("edges", [1.0] * n)]
            lo, hi = [0.0] * n, edges
        return make_box(lo, hi, provenance=prov)
    if spec.family == "simplex":
        a = float(p.get("edge", 1.0))
        if n == 2:
            V = [(0.0, 0.0), (a, 0.0), (a / 2, a * math.sqrt(3) / 2)]
        else:
            V = np.array([(1, 1, 1), (1, -1, -1), (-1, 1, -1), (-1, -1, 1)], float) * a / (2 * math.sqrt(2))
        return build_body(vertices=V, provenance=prov)
    if spec.family == "regular_polygon":
        if n != 2:
            raise InputError("regular_polygon is planar")
        m = int(p.get("m", 6))
        r, _ = _polygon_radii(p, m)
        ang = 2 * math.pi * np.arange(m) / m
        H = np.stack([np.cos(ang), np.sin(ang), np.full(m, r)], axis=1)
        return build_body(halfspaces=H, provenance=prov)
    rng = np.random.default_rng(spec.seed)
    if spec.family == "random_hull":
        N = int(p.get("n_points", 12 if n == 2 else 16))
        side = float(p.get("side", 1.0))
        return build_body(vertices=rng.uniform(0.0, side, size=(N, n)), provenance=prov)
    if spec.family == "tangential_random":
        N = int(p.get("n_normals", 7 if n == 2 else 14))
        A = rng.normal(size=(N, n))
        for _ in range(1000):
            A_unit = A / np.linalg.norm(A, axis=1)[:, None]
            try:
                return build_body(halfspaces=np.hstack([A_unit, np.ones((len(A), 1))]), provenance=prov)
            except Unbounded:
                # draw one extra normal until the normals positively span
                A = np.vstack([A, rng.normal(size=(1, n))])
        raise InputError("could not draw a bounded tangential body")
    raise InputError(f"unknown family {spec.family!r}")


def make_box(lo, hi, provenance="box") -> ConvexBody:
    lo, hi = np.asarray(lo, float), np.asarray(hi, float)
    n = lo.size
    H = []
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        H.append(np.r_[e, hi[i]])
        H.append(np.r_[-e, -lo[i]])
    return build_body(halfspaces=np.array(H), provenance=provenance)


def box_extent(body: ConvexBody):
    """``(lo, hi)`` if the body is an axis-aligned box, else ``None``."""
    n = body.dim
    if body.n_facets != 2 * n:
        return None
    A = body.normals
    if not np.allclose(np.abs(A).max(axis=1), 1.0, atol=1e-12):
        return None
    lo, hi = body.vertices.min(axis=0), body.vertices.max(axis=0)
    if len(body.vertices) != 2 ** n:
        return None
    return lo, hi
