from fractions import Fraction

import pytest

import makai.certificates as cert
from makai.errors import CertFailed, InputError


def test_small_polynomial_helpers():
    assert cert.pmul([1, 1], [1, -1]) == [1, 0, -1]
    assert cert.ppow([1, 1], 3) == [1, 3, 3, 1]
    assert cert.pderiv([5, 0, 3]) == [0, 6]
    q, r = cert.divide_by_linear([-1, 0, 1], 1)
    assert (q, r) == ([1, 1], 0)
    assert cert.scaled_values([0, 1], 4) == [0, 1, 2, 3, 4]
    assert cert.peval([1, 2], Fraction(1, 2)) == 2


def test_h_for_n_equals_two():
    # 2z^4 - 6z^2 - 6z^2 + 16z - 6
    assert cert.h_poly(2) == [-6, 16, -12, 0, 2]


@pytest.mark.parametrize("n", range(2, 8))
def test_certificate_passes(n):
    c = cert.certify_polynomials(n, grid_size=2000)
    assert c.passed, [x for x in c.checks if not x["pass"]]
    assert cert.peval(c.H, 0) == n * n + 3 * n - 4


def test_z_tilde_is_the_sign_change_of_third_derivative():
    for n in range(3, 9):
        z = cert.z_tilde(n)
        d3 = cert.pderiv(cert.pderiv(cert.pderiv(cert.h_poly(n))))
        assert float(cert.peval(d3, z * (1 - 1e-6))) < 0 < float(cert.peval(d3, z * (1 + 1e-6)))


def test_bridge_polynomial_nonnegative():
    for n in range(2, 9):
        Q = cert.bridge_poly(n)
        assert min(cert.scaled_values(Q, 500)) >= 0


def test_certificate_detects_a_wrong_polynomial(monkeypatch):
    # flipping one coefficient of h breaks h(1) = 0 and the sign checks
    original = cert.h_poly

    def broken(n):
        p = original(n)
        p[1] += 1
        return p

    monkeypatch.setattr(cert, "h_poly", broken)
    with pytest.raises(CertFailed):
        cert.certify_polynomials(4, grid_size=1000, raise_on_fail=True)
    c = cert.certify_polynomials(4, grid_size=1000)
    failed = {x["name"] for x in c.checks if not x["pass"]}
    assert {"h(1)=0", "h = -(1-z)^3 H"} <= failed


def test_certificate_input_validation():
    with pytest.raises(InputError):
        cert.certify_polynomials(1)
    with pytest.raises(InputError):
        cert.certify_polynomials(3, grid_size=10)
