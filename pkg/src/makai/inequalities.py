"""The inequality chain for one body and family sweeps.

Every check is stored as ``lhs <= rhs`` with ``margin = rhs - lhs`` and a
slack ``tol`` built from the numerical error bars that apply to it. Checks
whose inputs are only approximate (thin-domain torsion) are flagged
``certain = False`` and never decide the pass/fail status.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import asdict, dataclass, field
from typing import Optional, Sequence, Union

import numpy as np

from . import __version__
from .errors import InconsistentBounds, InputError
from .families import FamilySpec, analytic_geometry, box_extent, make_body, makai_constant
from .fem import integrate_d_squared, mesh_convex, richardson, torsion_sequence
from .geometry import ConvexBody, summarize

POLYA_CONSTANT = 1.0 / 3.0
STRICT_GAP = 1e-6


def c1_constant(n: int) -> float:
    return (n * n + 3 * n - 4) / (n * (n + 1) * (n + 2) * (n - 1) ** n)


def c2_constant(n: int) -> float:
    return 6.0 * n / ((n + 1) * (n + 2))


def c1_gamma_power(n: int, gamma: float) -> float:
    """C1 * gamma^n, computed in log space so tiny gamma cannot underflow midway."""
    if gamma <= 0:
        return 0.0
    return math.exp(math.log(c1_constant(n)) + n * math.log(gamma))


@dataclass
class SolverConfig:
    mesh_h: Union[str, float] = "auto"  # absolute length, or "auto"
    refinements: int = 2
    cg_tol: float = 1e-10
    strategy: str = "auto"
    mesh_fraction: Optional[float] = None  # base h as a fraction of the diameter

    def base_h(self, body: ConvexBody) -> float:
        """Target for the coarsest level; "auto" puts the finest level at diam/40 (2-D)
        or diam/12 (3-D)."""
        if self.mesh_h != "auto":
            return float(self.mesh_h)
        frac = self.mesh_fraction or (1.0 / 40.0 if body.dim == 2 else 1.0 / 12.0)
        # many refinements would put the coarsest level above the diameter
        return body.diameter * min(frac * 2 ** self.refinements, 0.5)

    def to_dict(self) -> dict:
        return asdict(self)


def body_id(body: ConvexBody) -> str:
    if isinstance(body.provenance, dict) and "family" in body.provenance:
        return FamilySpec.from_json(body.provenance).label()
    hs = np.round(np.hstack([body.normals, body.offsets[:, None]]), 12)
    digest = hashlib.sha256(json.dumps(hs.tolist()).encode()).hexdigest()[:12]
    return f"polytope-{body.dim}d-{digest}"


def _check(name, lhs, rhs, tol=0.0, certain=True, note=None) -> dict:
    margin = float(rhs) - float(lhs)
    out = {"name": name, "lhs": float(lhs), "rhs": float(rhs), "margin": margin,
           "tol": float(tol), "pass": bool(margin >= -tol), "certain": bool(certain)}
    if note:
        out["note"] = note
    return out


@dataclass
class InequalityReport:
    body: str
    n: int
    values: dict
    remainders: dict
    checks: list
    config: dict = field(default_factory=dict)
    torsion_levels: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks if c["certain"])

    def check(self, name: str) -> dict:
        return next(c for c in self.checks if c["name"] == name)

    def to_dict(self) -> dict:
        return {
            "body": self.body, "n": self.n, "values": self.values,
            "remainders": self.remainders, "checks": self.checks,
            "torsion_levels": self.torsion_levels, "config": self.config,
            "code_version": __version__, "passed": self.passed,
        }


def _checks(n, T_low, T_ext, T_err, d2, d2_err, vol, per, beta, gamma, torsion_certain=True,
            lower_bound_certain=True):
    """All inequality checks from the scalar inputs."""
    k = per * per / vol ** 3
    mk = makai_constant(n)
    F_low, F_ext, F_d2 = T_low * k, T_ext * k, d2 * k
    F_err, F_d2_err = T_err * k, d2_err * k
    c1g = c1_gamma_power(n, gamma)
    checks = [
        # T_h <= T, so F_low <= F <= makai constant needs no numerical slack
        _check("makai", F_low, mk, 0.0, certain=torsion_certain and lower_bound_certain),
        _check("makai_d2", F_d2, mk, F_d2_err + 1e-12 * mk),
        _check("ordering", F_low, F_d2, F_d2_err, certain=torsion_certain and lower_bound_certain),
        _check("polya", POLYA_CONSTANT, F_ext, F_err, certain=torsion_certain),
        _check("strict_d2", T_low, d2 * (1 - STRICT_GAP), d2_err,
               certain=torsion_certain and lower_bound_certain),
        _check("quantitative_deficit", c1g, mk - F_low, 0.0,
               certain=torsion_certain and lower_bound_certain),
        _check("sandwich_lower", c1g, mk - F_d2, F_d2_err + 1e-12 * mk),
        _check("sandwich_upper", mk - F_d2, c2_constant(n) * gamma, F_d2_err + 1e-12 * mk),
        _check("beta_bound", (d2 - T_low) * k, (n * n + n + 1) / 3.0 * beta,
               F_d2_err + max(F_ext - F_low, 0.0) + F_err, certain=torsion_certain),
        _check("polya_chain_upper", F_ext - POLYA_CONSTANT, (n + 1) / 3.0 * beta, F_err,
               certain=torsion_certain),
        _check("polya_chain_lower", beta ** 3 / (2 ** 3 * 3 ** 4 * n ** 3), F_ext - POLYA_CONSTANT,
               F_err, certain=torsion_certain),
    ]
    values = {
        "T_lower": T_low, "T_extrapolated": T_ext, "T_error": T_err, "d2": d2, "d2_error": d2_err,
        "volume": vol, "perimeter": per, "F_lower": F_low, "F_extrapolated": F_ext,
        "F_error": F_err, "F_d2": F_d2, "F_d2_error": F_d2_err, "makai_const": mk,
        "polya_const": POLYA_CONSTANT, "deficit_lower": mk - F_low,
        "deficit_extrapolated": mk - F_ext, "deficit_d2": mk - F_d2,
        "C1": c1_constant(n), "C2": c2_constant(n),
        "deficit_over_gamma_n": ((mk - F_ext) / gamma ** n) if gamma > 1e-12 else None,
    }
    return checks, values


def evaluate(obj: Union[ConvexBody, FamilySpec], config: Optional[SolverConfig] = None,
             strict: bool = False) -> InequalityReport:
    """Evaluate the full chain for a polytope (FEM path) or a family (closed form).

    Families in dimension 2 or 3 are realised as polytopes and go through the
    FEM path; higher dimensions use the analytic path.
    """
    config = config or SolverConfig()
    if isinstance(obj, FamilySpec):
        if obj.dim > 3:
            return evaluate_analytic(obj, strict=strict)
        body = make_body(obj)
    else:
        body = obj
    if body.dim not in (2, 3):
        raise InputError("the FEM path needs dim 2 or 3")
    n = body.dim
    geo = summarize(body)
    mesh = mesh_convex(body, config.base_h(body), config.strategy)
    sols = torsion_sequence(mesh, config.refinements, config.cg_tol)
    T_levels = [s.T_h for s in sols]
    T_low = T_levels[-1]
    if len(sols) >= 2:
        T_ext, T_err = richardson(T_levels[-2], T_levels[-1])
    else:
        T_ext, T_err = T_low, 0.0
    d2, d2_err = integrate_d_squared(body)
    checks, values = _checks(n, T_low, T_ext, T_err, d2, d2_err, geo.volume, geo.perimeter,
                             geo.beta, geo.gamma)
    monotone = all(b >= a * (1 - 10 * config.cg_tol) for a, b in zip(T_levels, T_levels[1:]))
    checks.append(_check("refinement_monotone", 0.0, 1.0 if monotone else -1.0))
    values.update({"inradius": geo.inradius, "diameter": geo.diameter, "minwidth": geo.minwidth,
                   "minwidth_error": geo.minwidth_error, "mesh_nodes": sols[-1].mesh.n_nodes,
                   "h_max": sols[-1].mesh.h_max})
    report = InequalityReport(
        body=body_id(body), n=n, values=values,
        remainders={"alpha": geo.alpha, "beta": geo.beta, "gamma": geo.gamma,
                    "beta_over_alpha": geo.beta / geo.alpha},
        checks=checks, config=config.to_dict(), torsion_levels=T_levels,
    )
    if strict:
        _raise_if_inconsistent(report)
    return report


def analytic_d2(spec: FamilySpec, geo) -> tuple[float, bool]:
    """Closed-form integral of d^2 for families where it is available.

    Tangential bodies: 2 R^3 P / (n(n+1)(n+2)). Boxes: 2 * integral of t mu(t)
    with mu(t) the product of (e_i - 2t).
    """
    n = spec.dim
    if spec.family in ("cone", "simplex", "regular_polygon", "ball") or (
            spec.family == "box" and len(set(spec.params.get("edges", [1.0] * n))) == 1):
        R, P = geo.inradius, geo.perimeter
        return 2.0 * R ** 3 * P / (n * (n + 1) * (n + 2)), True
    if spec.family in ("box", "cylinder"):
        if spec.family == "cylinder":
            edges = [1.0] * (n - 1) + [1.0 / float(spec.params.get("ell", 10.0))]
        else:
            edges = [float(e) for e in spec.params["edges"]]
        mu = np.polynomial.Polynomial([1.0])
        for e in edges:
            mu = mu * np.polynomial.Polynomial([e, -2.0])
        prim = (mu * np.polynomial.Polynomial([0.0, 1.0])).integ()
        R = min(edges) / 2.0
        return 2.0 * float(prim(R) - prim(0.0)), True
    raise InputError(f"no closed-form distance integral for {spec.family!r}")


def evaluate_analytic(spec: FamilySpec, strict: bool = False) -> InequalityReport:
    """Closed-form path, any n. Thin-limit torsion values are not certified."""
    geo = analytic_geometry(spec)
    n = spec.dim
    if geo.torsion is None:
        raise InputError(f"family {spec.family!r} has no closed-form torsion in dimension {n}")
    exact_T = geo.torsion_kind == "exact"
    d2, _ = analytic_d2(spec, geo)
    beta, gamma = geo.beta(n), max(geo.gamma(n), 0.0)
    if abs(gamma) < 1e-12:
        gamma = 0.0
    checks, values = _checks(n, geo.torsion, geo.torsion, 0.0, d2, 1e-14 * d2, geo.volume,
                             geo.perimeter, beta, gamma, torsion_certain=exact_T)
    values.update({"inradius": geo.inradius, "diameter": geo.diameter, "minwidth": geo.minwidth,
                   "minwidth_error": 0.0, "torsion_kind": geo.torsion_kind})
    report = InequalityReport(
        body=spec.label(), n=n, values=values,
        remainders={"alpha": geo.alpha, "beta": beta, "gamma": gamma,
                    "beta_over_alpha": beta / geo.alpha},
        checks=checks, config={"path": "analytic"}, torsion_levels=[geo.torsion],
    )
    if strict:
        _raise_if_inconsistent(report)
    return report


def _raise_if_inconsistent(report: InequalityReport) -> None:
    for c in report.checks:
        if c["certain"] and not c["pass"]:
            raise InconsistentBounds(c["name"], c["margin"])


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

PARAM_OF_FAMILY = {"cone": "k", "cylinder": "ell"}


def _slope(x, y) -> Optional[float]:
    x, y = np.asarray(x, float), np.asarray(y, float)
    ok = (x > 0) & (y > 0)
    if ok.sum() < 2:
        return None
    return float(np.polyfit(np.log(x[ok]), np.log(y[ok]), 1)[0])


@dataclass
class SweepReport:
    family: str
    n: int
    param: str
    values: list
    rows: list
    slopes: dict
    trends: dict
    reports: list = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.reports)

    def to_dict(self) -> dict:
        return {"family": self.family, "n": self.n, "param": self.param, "values": self.values,
                "rows": self.rows, "slopes": self.slopes, "trends": self.trends,
                "reports": [r.to_dict() for r in self.reports], "passed": self.passed,
                "code_version": __version__}

    def to_csv(self) -> str:
        cols = ["param", "alpha", "beta", "gamma", "F", "F_lower", "F_d2", "deficit",
                "deficit_over_gamma_n"]
        lines = [",".join(cols)]
        for r in self.rows:
            lines.append(",".join("" if r[c] is None else repr(r[c]) for c in cols))
        return "\n".join(lines) + "\n"


def _strictly_monotone(seq, direction: int) -> bool:
    return all(direction * (b - a) > 0 for a, b in zip(seq, seq[1:]))


def sweep(spec: FamilySpec, params: Sequence[float], config: Optional[SolverConfig] = None,
          analytic: Optional[bool] = None) -> SweepReport:
    """Evaluate a family along a monotone parameter list.

    ``analytic`` forces the closed-form path; by default it is used only for
    n > 3.
    """
    if spec.family not in PARAM_OF_FAMILY:
        raise InputError(f"sweeps are defined for {sorted(PARAM_OF_FAMILY)}")
    name = PARAM_OF_FAMILY[spec.family]
    params = [float(p) for p in params]
    if len(params) < 2 or not _strictly_monotone(params, 1 if params[1] > params[0] else -1):
        raise InputError("sweep parameters must be strictly monotone")
    use_analytic = spec.dim > 3 if analytic is None else analytic
    rows, reports = [], []
    for p in params:
        s = FamilySpec(spec.family, spec.dim, {**spec.params, name: p}, spec.seed)
        rep = evaluate_analytic(s) if use_analytic else evaluate(s, config)
        v, rem = rep.values, rep.remainders
        rows.append({
            "param": p, "alpha": rem["alpha"], "beta": rem["beta"], "gamma": rem["gamma"],
            "F": v["F_extrapolated"], "F_lower": v["F_lower"], "F_d2": v["F_d2"],
            "deficit": v["deficit_extrapolated"], "deficit_over_gamma_n": v["deficit_over_gamma_n"],
        })
        reports.append(rep)
    inv = [1.0 / p for p in params]
    slopes = {
        "deficit_vs_inverse_param": _slope(inv, [r["deficit"] for r in rows]),
        "alpha_vs_inverse_param": _slope(inv, [r["alpha"] for r in rows]),
        "abs_F_minus_third_vs_inverse_param": _slope(inv, [abs(r["F"] - POLYA_CONSTANT) for r in rows]),
        "gamma_gap_vs_inverse_param": _slope(inv, [spec.dim - 1 - r["gamma"] for r in rows]),
    }
    F = [r["F"] for r in rows]
    trends = {
        "alpha_decreasing": _strictly_monotone([r["alpha"] for r in rows], -1),
        "deficit_decreasing": _strictly_monotone([r["deficit"] for r in rows], -1),
        "F_increasing": _strictly_monotone(F, 1),
        "F_decreasing": _strictly_monotone(F, -1),
        "gamma_increasing": _strictly_monotone([r["gamma"] for r in rows], 1),
        "gamma_limit": float(spec.dim - 1),
    }
    return SweepReport(spec.family, spec.dim, name, params, rows, slopes, trends, reports)


def dumps(obj) -> str:
    """Canonical JSON: sorted keys, repr floats, no timestamps."""
    return json.dumps(obj, sort_keys=True, indent=2, allow_nan=True) + "\n"
