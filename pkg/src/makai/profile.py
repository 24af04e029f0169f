"""Inner parallel body profiles and the linear comparison profile.

For a polytope every inner parallel body is again a polytope, so mu(t) and
P(t) are exact at each sample. Between combinatorial events (a facet or an
edge disappearing) P is a polynomial of degree n-1 in t; the events are
bracketed by bisection and each event-free piece is integrated exactly from
its interpolant.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .errors import CheckFailed, EmptyErosion, InputError, NoRoot
from .geometry import ConvexBody, _collapsed_measures, erode

DEFAULT_GRID_M = 256
LAST_POINT = 1.0 - 1e-9
EVENT_TOL = 1e-5  # relative to the inradius
EPS_REL = 1e-6


@dataclass
class _Sample:
    t: float
    mu: float
    per: float
    key: tuple


def _sample(body: ConvexBody, t: float) -> _Sample:
    if t == 0:
        return _Sample(0.0, body.volume, body.perimeter, tuple(len(f) for f in body.facets))
    try:
        B = erode(body, t)
        return _Sample(t, B.volume, B.perimeter, tuple(len(f) for f in B.facets))
    except EmptyErosion:
        if t < body.inradius * (1 - 1e-6):
            raise
        mu, per = _collapsed_measures(body, t)
        return _Sample(t, mu, per, ("collapsed",))


@dataclass
class ProfileTable:
    body: ConvexBody
    n: int
    inradius: float
    volume: float
    perimeter: float
    grid: np.ndarray
    mu: np.ndarray
    per: np.ndarray
    L: np.ndarray
    breakpoints: np.ndarray
    int_P: float  # integral of P over [0, R]; equals the volume by coarea
    int_L_t2: float  # integral of L^(n-1) t^2 = P t^2 over [0, R]
    int_error: float
    interval_int_P: np.ndarray  # integral of P over each grid interval
    a_fit: Optional[float] = None
    z_value: Optional[float] = None
    crossing: Optional[float] = None
    equality: bool = False
    gamma_tilde: Optional[float] = None
    extras: dict = field(default_factory=dict)

    @property
    def L0(self) -> float:
        return float(self.L[0])

    @property
    def lam(self) -> np.ndarray:
        if self.a_fit is None:
            raise InputError("table has no fitted slope yet")
        return self.L0 - self.a_fit * self.grid

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["t", "mu", "per", "L", "lambda"])
        lam = self.lam if self.a_fit is not None else np.full_like(self.grid, np.nan)
        for row in zip(self.grid, self.mu, self.per, self.L, lam):
            w.writerow([repr(float(v)) for v in row])
        return buf.getvalue()

    def to_dict(self) -> dict:
        return {
            "n": self.n, "inradius": self.inradius, "volume": self.volume,
            "perimeter": self.perimeter, "grid_points": int(self.grid.size),
            "events": int(self.breakpoints.size - self.grid.size),
            "a_fit": self.a_fit, "z_value": self.z_value, "t_cross": self.crossing,
            "equality": self.equality, "gamma_tilde": self.gamma_tilde,
            "int_L_t2": self.int_L_t2, "int_L_t2_error": self.int_error,
        }


def chebyshev_grid(R: float, M: int) -> np.ndarray:
    """t_j = R sin(pi j / 2M), clustered towards t = R; last point pulled inside."""
    j = np.arange(M + 1)
    t = R * np.sin(0.5 * math.pi * j / M)
    t[0] = 0.0
    t[-1] = R * LAST_POINT
    return t


def _find_events(body, s0: _Sample, s1: _Sample, tol: float, out: list, cache: dict):
    """Collect brackets [a, b] of width <= tol around every type change."""
    if s0.key == s1.key:
        return
    if s1.t - s0.t <= tol:
        out.append((s0, s1))
        return
    tm = 0.5 * (s0.t + s1.t)
    sm = cache.get(tm) or _sample(body, tm)
    cache[tm] = sm
    _find_events(body, s0, sm, tol, out, cache)
    _find_events(body, sm, s1, tol, out, cache)


_GX, _GW = np.polynomial.legendre.leggauss(4)


def _piece_integrals(body, samples: list, n: int, cache: dict):
    """Integrals of P and P t^2 over consecutive samples of one combinatorial type.

    2-D: P is linear, endpoints suffice. 3-D: P is quadratic, one extra
    midpoint sample pins it down.
    """
    s0, s1 = samples
    a, b = s0.t, s1.t
    if b <= a:
        return 0.0, 0.0
    x = 0.5 * (a + b) + 0.5 * (b - a) * _GX
    if n == 2 or s0.key != s1.key:
        # linear interpolant; across an unresolved event of width <= tol this is first order
        P = s0.per + (s1.per - s0.per) * (x - a) / (b - a)
    else:
        tm = 0.5 * (a + b)
        sm = cache.get(tm) or _sample(body, tm)
        cache[tm] = sm
        # quadratic through (a, P0), (m, Pm), (b, P1)
        u = (x - a) / (b - a)
        P = s0.per * (1 - u) * (1 - 2 * u) + sm.per * 4 * u * (1 - u) + s1.per * u * (2 * u - 1)
    h = 0.5 * (b - a)
    return h * float(_GW @ P), h * float(_GW @ (P * x * x))


def profile_table(body: ConvexBody, M: int = DEFAULT_GRID_M, fit: bool = True) -> ProfileTable:
    """Sample mu, P and L = P^(1/(n-1)) on a Chebyshev grid in [0, R]."""
    n = body.dim
    if n not in (2, 3):
        raise InputError("profiles need dim 2 or 3")
    if M < 32:
        raise InputError("grid size M must be at least 32")
    R = body.inradius
    grid = chebyshev_grid(R, M)
    cache: dict = {}
    samples = []
    for t in grid:
        s = _sample(body, float(t))
        cache[float(t)] = s
        samples.append(s)

    # refine around combinatorial events so every piece has fixed type
    pieces = []
    interval_P = np.zeros(M)
    total_P = total_t2 = 0.0
    err = 0.0
    tol = EVENT_TOL * R
    for j, (s0, s1) in enumerate(zip(samples[:-1], samples[1:])):
        brackets: list = []
        _find_events(body, s0, s1, tol, brackets, cache)
        nodes = [s0]
        for lo, hi in brackets:
            if lo is not nodes[-1]:
                nodes.append(lo)
            nodes.append(hi)
        if nodes[-1] is not s1:
            nodes.append(s1)
        ip = 0.0
        for p0, p1 in zip(nodes[:-1], nodes[1:]):
            dP, dT = _piece_integrals(body, [p0, p1], n, cache)
            ip += dP
            total_t2 += dT
            if p0.key != p1.key:
                # unresolved kink inside a bracket of width <= tol
                err += abs(p1.per - p0.per) * (p1.t - p0.t) * p1.t ** 2
        interval_P[j] = ip
        total_P += ip
        pieces.extend(p.t for p in nodes[:-1])
    # last sliver [R(1 - 1e-9), R]: P is bounded by its value there
    sliver = R - grid[-1]
    total_t2 += samples[-1].per * R * R * sliver
    err += samples[-1].per * R * R * sliver
    total_P += samples[-1].per * sliver
    err += 1e-14 * total_t2 * (len(pieces) + 1) ** 0.5

    mu = np.array([s.mu for s in samples])
    per = np.array([s.per for s in samples])
    table = ProfileTable(
        body=body, n=n, inradius=R, volume=body.volume, perimeter=body.perimeter,
        grid=grid, mu=mu, per=per, L=per ** (1.0 / (n - 1)),
        breakpoints=np.array(sorted(set(pieces) | {float(grid[-1])})),
        int_P=total_P, int_L_t2=total_t2, int_error=err, interval_int_P=interval_P,
    )
    if fit:
        fit_lambda(table)
    return table


# ---------------------------------------------------------------------------
# linear comparison profile
# ---------------------------------------------------------------------------

def measure_defect(a: float, L: float, R: float, P: float, volume: float, n: int) -> float:
    """f(a) in factored form: (P R / n) * sum_j (1 - aR/L)^j - |volume|."""
    q = 1.0 - a * R / L
    return P * R / n * sum(q ** j for j in range(n)) - volume


def fit_slope(L: float, R: float, P: float, volume: float, n: int,
              rel_tol: float = 1e-12) -> tuple[float, float]:
    """Slope a in [0, L/R] of lambda(t) = L - a t matching the volume; returns (a, z)."""
    lo, hi = 0.0, L / R
    f_lo = measure_defect(lo, L, R, P, volume, n)
    f_hi = measure_defect(hi, L, R, P, volume, n)
    slack = 1e-12 * volume
    if abs(f_hi) <= slack:
        return hi, 0.0
    if abs(f_lo) <= slack:
        return lo, 1.0
    if f_lo < 0 or f_hi > 0:
        raise NoRoot(f"no sign change: f(0)={f_lo:.3e}, f(L/R)={f_hi:.3e}")
    while hi - lo > rel_tol * (L / R):
        mid = 0.5 * (lo + hi)
        if measure_defect(mid, L, R, P, volume, n) > 0:
            lo = mid
        else:
            hi = mid
    a = 0.5 * (lo + hi)
    return a, 1.0 - a * R / L


def fit_lambda(table: ProfileTable) -> tuple[float, float]:
    n = table.n
    a, z = fit_slope(table.L0, table.inradius, table.perimeter, table.volume, n)
    table.a_fit, table.z_value = a, z
    table.gamma_tilde = n * table.volume / (table.perimeter * table.inradius) - 1.0
    _locate_crossing(table)
    return a, z


def _locate_crossing(table: ProfileTable) -> None:
    diff = table.L - table.lam
    tol = 1e-9 * table.L0
    if np.abs(diff).max() <= tol:
        table.crossing, table.equality = table.inradius, True
        return
    table.equality = False
    neg = np.nonzero(diff < -tol)[0]
    if neg.size == 0:
        table.crossing = table.inradius
        return
    j = int(neg[0])
    lo, hi = float(table.grid[j - 1]), float(table.grid[j])
    body, n, a = table.body, table.n, table.a_fit
    for _ in range(60):
        if hi - lo <= 1e-12 * table.inradius:
            break
        mid = 0.5 * (lo + hi)
        s = _sample(body, mid)
        if s.per ** (1.0 / (n - 1)) - (table.L0 - a * mid) >= 0:
            lo = mid
        else:
            hi = mid
    table.crossing = 0.5 * (lo + hi)


def lambda_moment_closed_form(L: float, a: float, R: float, n: int) -> float:
    """Integral of (L - a t)^(n-1) t^2 over [0, R] via three integrations by parts."""
    if a == 0:
        return L ** (n - 1) * R ** 3 / 3.0
    e = L - a * R
    return (-R * R * e ** n / (a * n)
            - 2.0 * R * e ** (n + 1) / (a * a * n * (n + 1))
            + 2.0 * (L ** (n + 2) - e ** (n + 2)) / (a ** 3 * n * (n + 1) * (n + 2)))


def lambda_moment_series(L: float, a: float, R: float, n: int) -> float:
    """Same integral by binomial expansion; no cancellation for small a."""
    y = a * R / L
    s = sum(math.comb(n - 1, k) * (-y) ** k / (k + 3) for k in range(n))
    return L ** (n - 1) * R ** 3 * s


def lambda_moment_quadrature(L: float, a: float, R: float, n: int) -> float:
    """Gauss-Legendre with enough nodes to be exact for the degree n+1 integrand."""
    x, w = np.polynomial.legendre.leggauss(n // 2 + 2)
    t = 0.5 * R * (x + 1)
    return 0.5 * R * float(w @ ((L - a * t) ** (n - 1) * t * t))


def _closed_form_tolerance(L: float, a: float, R: float, n: int) -> float:
    """Relative roundoff scale of the closed form (its terms can cancel)."""
    if a == 0:
        return 1e-12
    e = abs(L - a * R)
    terms = [R * R * e ** n / (a * n), 2 * R * e ** (n + 1) / (a * a * n * (n + 1)),
             2 * (L ** (n + 2) + e ** (n + 2)) / (a ** 3 * n * (n + 1) * (n + 2))]
    value = lambda_moment_series(L, a, R, n)
    return max(1e-9, 64 * np.finfo(float).eps * sum(terms) / abs(value))


# ---------------------------------------------------------------------------
# checks
# ---------------------------------------------------------------------------

def _check(name, lhs, rhs, tol=0.0):
    """Record lhs <= rhs with slack tol; margin = rhs - lhs."""
    margin = float(rhs - lhs)
    return {"name": name, "lhs": float(lhs), "rhs": float(rhs), "margin": margin,
            "tol": float(tol), "pass": bool(margin >= -tol)}


def verify_profile_chain(table: ProfileTable, raise_on_fail: bool = False) -> dict:
    """Every intermediate inequality of the comparison argument, keyed by check id."""
    if table.a_fit is None:
        fit_lambda(table)
    n, R, L0, a = table.n, table.inradius, table.L0, table.a_fit
    t, mu, per, L = table.grid, table.mu, table.per, table.L
    vol, P0 = table.volume, table.perimeter
    out: dict = {}

    # L concave: slopes nonincreasing
    slopes = np.diff(L) / np.diff(t)
    worst = float(np.max(np.diff(slopes))) if slopes.size > 1 else 0.0
    out["L_concave"] = _check("L_concave", worst, 0.0, EPS_REL * L0 / R)

    # coarea: mu_j - mu_{j+1} = integral of P, and P_{j+1} h <= drop <= P_j h
    drop = mu[:-1] - mu[1:]
    h = np.diff(t)
    resid = float(np.max(np.abs(drop - table.interval_int_P))) if drop.size else 0.0
    out["coarea_identity"] = _check("coarea_identity", resid, 0.0, 1e-9 * vol)
    low = float(np.max(per[1:] * h - drop))
    high = float(np.max(drop - per[:-1] * h))
    out["coarea_bracket"] = _check("coarea_bracket", max(low, high), 0.0, 1e-10 * vol)
    out["coarea_total"] = _check("coarea_total", abs(table.int_P - vol), 0.0, 1e-9 * vol)
    out["mu_decreasing"] = _check("mu_decreasing", float(np.max(np.diff(mu))), 0.0, 0.0)

    # concavity bounds on mu and P
    s = 1.0 - t / R
    mu_gap = float(np.min(mu - s ** n * vol))
    per_gap = float(np.min(per - s ** (n - 1) * P0))
    out["prop_mu_lower"] = _check("prop_mu_lower", 0.0, mu_gap / vol, EPS_REL)
    out["prop_per_lower"] = _check("prop_per_lower", 0.0, per_gap / P0, EPS_REL)

    # matching measure, endpoints
    matched = P0 * R / n * sum(table.z_value ** j for j in range(n))
    out["lambda_measure"] = _check("lambda_measure", abs(matched - vol), 0.0, 1e-10 * vol)
    out["slope_range"] = _check("slope_range", a, L0 / R, 1e-12 * L0 / R)
    out["slope_nonneg"] = _check("slope_nonneg", 0.0, a, 0.0)
    lam_R = L0 - a * R
    L_R = float(per[-1]) ** (1.0 / (n - 1))
    out["endpoint_order"] = _check("endpoint_order", L_R, lam_R, EPS_REL * L0)

    # unique crossing: L - lambda is >= 0 then <= 0
    diff = L - table.lam
    tol = 1e-9 * L0
    neg = np.nonzero(diff < -tol)[0]
    if neg.size:
        after = float(diff[neg[0]:].max())
        out["unique_crossing"] = _check("unique_crossing", after, 0.0, tol)
    else:
        out["unique_crossing"] = _check("unique_crossing", 0.0, 0.0, tol)

    # weighted comparison
    lam_t2 = lambda_moment_series(L0, a, R, n)
    tol_w = 1e-9 * lam_t2 + table.int_error
    out["weighted_comparison"] = _check("weighted_comparison", table.int_L_t2, lam_t2, tol_w)

    # closed form against quadrature and the series
    cf = lambda_moment_closed_form(L0, a, R, n)
    qd = lambda_moment_quadrature(L0, a, R, n)
    rel = abs(cf - qd) / abs(qd)
    out["closed_form"] = _check("closed_form", rel, 0.0, _closed_form_tolerance(L0, a, R, n))
    out["series_form"] = _check("series_form", abs(lam_t2 - qd) / abs(qd), 0.0, 1e-12)

    # reconstruction of the alternative remainder from z
    z = table.z_value
    gz = sum(z ** k for k in range(1, n))
    out["gamma_tilde"] = _check("gamma_tilde", abs(gz - table.gamma_tilde), 0.0, 1e-9)

    if raise_on_fail:
        for cid, c in out.items():
            if not c["pass"]:
                raise CheckFailed(cid, c["margin"])
    return out


def chain_passed(report: dict) -> bool:
    return all(c["pass"] for c in report.values())
