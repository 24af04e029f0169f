"""Exact integer certificates for the polynomials behind the sharp bound.

Polynomials are coefficient lists (index = power) of Python ints. Grid
checks at z = j/N are done on N^deg * p(j/N), which is an integer, so no
rounding enters anywhere.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import CertFailed, InputError

Poly = list


def _trim(p: Poly) -> Poly:
    p = list(p)
    while len(p) > 1 and p[-1] == 0:
        p.pop()
    return p


def padd(p: Poly, q: Poly) -> Poly:
    out = [0] * max(len(p), len(q))
    for i, c in enumerate(p):
        out[i] += c
    for i, c in enumerate(q):
        out[i] += c
    return _trim(out)


def pscale(p: Poly, c: int) -> Poly:
    return _trim([c * a for a in p])


def pmul(p: Poly, q: Poly) -> Poly:
    out = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if a:
            for j, b in enumerate(q):
                out[i + j] += a * b
    return _trim(out)


def ppow(p: Poly, k: int) -> Poly:
    out = [1]
    for _ in range(k):
        out = pmul(out, p)
    return out


def monomial(k: int, c: int = 1) -> Poly:
    return [0] * k + [c]


def pderiv(p: Poly) -> Poly:
    return _trim([i * p[i] for i in range(1, len(p))] or [0])


def peval(p: Poly, z) -> int | Fraction:
    acc = 0
    for c in reversed(p):
        acc = acc * z + c
    return acc


def divide_by_linear(p: Poly, root: int) -> tuple[Poly, int]:
    """Synthetic division by (z - root); returns (quotient, remainder)."""
    coeffs = list(reversed(p))
    out = [coeffs[0]]
    for c in coeffs[1:]:
        out.append(c + out[-1] * root)
    rem = out.pop()
    return _trim(list(reversed(out))), rem


def scaled_values(p: Poly, N: int, deg: int | None = None) -> list[int]:
    """N^deg * p(j/N) for j = 0..N, as exact integers."""
    deg = len(p) - 1 if deg is None else deg
    powN = [N ** (deg - i) for i in range(len(p))]
    q = [c * powN[i] for i, c in enumerate(p)]
    vals = []
    for j in range(N + 1):
        acc = 0
        for c in reversed(q):
            acc = acc * j + c
        vals.append(acc)
    return vals


# ---------------------------------------------------------------------------
# the polynomials
# ---------------------------------------------------------------------------

def h_poly(n: int) -> Poly:
    """2z^{2n} - 6z^n - n(n+1)z^2 + 2n(n+2)z - (n^2+3n-4)."""
    p = [0] * (2 * n + 1)
    p[2 * n] += 2
    p[n] += -6
    p[2] += -n * (n + 1)
    p[1] += 2 * n * (n + 2)
    p[0] += -(n * n + 3 * n - 4)
    return _trim(p)


def twice_g_from_definition(n: int) -> Poly:
    """2 g(z) expanded from its defining combination of profile terms."""
    one_minus_z = [1, -1]
    t1 = pscale(pmul(monomial(n), ppow(one_minus_z, 2)), -(n + 1) * (n + 2))
    t2 = pscale(pmul(monomial(n + 1), one_minus_z), -2 * (n + 2))
    t3 = pscale(padd([1], monomial(n + 2, -1)), 2)
    t4 = pscale(ppow(padd([1], monomial(n, -1)), 3), -2)
    return padd(padd(t1, t2), padd(t3, t4))


def H_poly(n: int) -> Poly:
    """H = -h / (1 - z)^3 = h / (z - 1)^3, by exact synthetic division."""
    q = h_poly(n)
    for _ in range(3):
        q, rem = divide_by_linear(q, 1)
        if rem != 0:
            raise CertFailed(1, rem, "H-division")
    return q


def third_derivative_factored(n: int) -> Poly:
    """2n(n-1) z^{n-3} [4(2n-1) z^n - 3(n-2)], times z^3 to stay polynomial."""
    inner = padd(monomial(n, 4 * (2 * n - 1)), [-3 * (n - 2)])
    return pscale(pmul(monomial(n), inner), 2 * n * (n - 1))


def bridge_poly(n: int) -> Poly:
    """Q(z) with Q >= 0 on [0,1] iff the z-form bound implies the gamma^n bound.

    With S = 1 + z + ... + z^{n-1}, U = 1 + ... + z^{n-2} and gamma = n z U / S,
    the bound K z^n / S^3 >= C1 gamma^n is, after clearing the positive factor
    z^n S^{-3} / (C1 S^n), n^3 (n-1)^n S^n - n^n U^n S^3 >= 0.
    """
    S = [1] * n
    U = [1] * (n - 1)
    left = pscale(ppow(S, n), n ** 3 * (n - 1) ** n)
    right = pscale(pmul(ppow(U, n), ppow(S, 3)), n ** n)
    return padd(left, pscale(right, -1))


def z_tilde(n: int) -> float:
    return (3.0 * (n - 2) / (4.0 * (2 * n - 1))) ** (1.0 / n)


@dataclass
class PolynomialCertificate:
    n: int
    h: Poly
    g_times_two: Poly
    H: Poly
    z_tilde: float
    grid_size: int
    checks: list

    @property
    def passed(self) -> bool:
        return all(c["pass"] for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "n": self.n, "h": [str(c) for c in self.h], "H": [str(c) for c in self.H],
            "g_times_two": [str(c) for c in self.g_times_two], "z_tilde": self.z_tilde,
            "grid_size": self.grid_size, "passed": self.passed, "checks": self.checks,
        }


def _record(checks, name, ok, worst=None, violations=0):
    checks.append({"name": name, "pass": bool(ok), "violations": int(violations),
                   "worst": None if worst is None else str(worst)})


def certify_polynomials(n: int, grid_size: int = 10_000, raise_on_fail: bool = False,
                        bridge_grid: int | None = None) -> PolynomialCertificate:
    """Exact identity and sign checks for h, g, H and the third derivative of h."""
    if n < 2:
        raise InputError("certificates need n >= 2")
    if grid_size < 1000:
        raise InputError("grid_size must be at least 1000")
    N = grid_size
    h = h_poly(n)
    dh, d2h = pderiv(h), pderiv(pderiv(h))
    d3h = pderiv(d2h)
    c0 = n * n + 3 * n - 4
    checks: list = []

    _record(checks, "h(1)=0", peval(h, 1) == 0, peval(h, 1))
    _record(checks, "h'(1)=0", peval(dh, 1) == 0, peval(dh, 1))
    _record(checks, "h''(1)=0", peval(d2h, 1) == 0, peval(d2h, 1))
    _record(checks, "h(0)=-(n^2+3n-4)", peval(h, 0) == -c0, peval(h, 0))

    g2 = twice_g_from_definition(n)
    zn_h = pmul(monomial(n), h)
    _record(checks, "2g = z^n h", g2 == zn_h)

    # h''' z^3 equals the factored expression times z^3 (identity of polynomials)
    _record(checks, "h''' factorization", pmul(d3h, monomial(3)) == third_derivative_factored(n))

    try:
        H = H_poly(n)
    except CertFailed as exc:
        H = None
        _record(checks, "h = -(1-z)^3 H", False, exc.value)
    if H is not None:
        _record(checks, "h = -(1-z)^3 H", pmul(H, ppow([-1, 1], 3)) == h)
        _record(checks, "H(0)=n^2+3n-4", peval(H, 0) == c0, peval(H, 0))

    # grid: sign of h''' switches exactly at z~ (compare 4(2n-1) z^n <= 3(n-2) rationally)
    v3 = scaled_values(d3h, N)
    bad = [j for j in range(N + 1)
           if (v3[j] <= 0) != (4 * (2 * n - 1) * j ** n <= 3 * (n - 2) * N ** n)]
    _record(checks, "h''' <= 0 iff z <= z~", not bad, bad[:1] or None, len(bad))

    def sign_check(name, p, sign, offset=0):
        deg = len(p) - 1
        vals = scaled_values(p, N, deg)
        shift = offset * N ** deg
        bad = [j for j, v in enumerate(vals) if sign * (v - shift) < 0]
        worst = None
        if bad:
            worst = Fraction(vals[bad[0]], N ** deg) - offset
        _record(checks, name, not bad, worst, len(bad))

    sign_check("h <= 0", h, -1)
    sign_check("h' >= 0", dh, +1)
    sign_check("h'' <= 0", d2h, -1)
    if H is not None:
        sign_check("H >= n^2+3n-4", H, +1, offset=c0)
        sign_check("H' >= 0", pderiv(H), +1)

    # the gamma-tilde to gamma passage, certified on its own grid
    Nb = bridge_grid or min(N, 2000)
    Q = bridge_poly(n)
    vals = scaled_values(Q, Nb)
    bad = [j for j, v in enumerate(vals) if v < 0]
    _record(checks, "z-bound implies C1 gamma^n", not bad, bad[:1] or None, len(bad))

    cert = PolynomialCertificate(n=n, h=h, g_times_two=g2, H=H or [], z_tilde=z_tilde(n),
                                 grid_size=N, checks=checks)
    if raise_on_fail and not cert.passed:
        first = next(c for c in checks if not c["pass"])
        raise CertFailed(first["worst"], first["violations"], first["name"])
    return cert
