"""Acceptance suite: one test per criterion, each recorded for the summary table."""

import math

import pytest

from conftest import criterion
from makai.certificates import certify_polynomials
from makai.cli import main
from makai.corpus import evaluate_entry
from makai.families import FamilySpec, make_body, makai_constant
from makai.fem import (
    analytic_torsion_ball, analytic_torsion_rectangle, integrate_d_squared, mesh_convex,
    richardson, torsion_sequence,
)
from makai.geometry import (
    circumscribed_polygon, equilateral_triangle, regular_polygon, summarize, unit_cube, unit_square,
)
from makai.inequalities import dumps, evaluate_analytic, sweep
from makai.profile import profile_table, verify_profile_chain

# independent reference: the 1x1 square torsion from the classical single series
SQUARE_TORSION_REFERENCE = 0.035144


def failures(entries, check):
    return [e.spec.label() for e in entries if not e.report.check(check)["pass"]]


def test_01_disk_torsion_oracle():
    with criterion(1, "disk: 256-gon FEM below pi/8 within 0.5%, monotone over 3 refinements") as d:
        exact = analytic_torsion_ball(2, 1.0)
        assert exact == pytest.approx(math.pi / 8, rel=1e-15)
        polygon = regular_polygon(256)
        coarse = mesh_convex(polygon, 0.13, strategy="fan")
        sols = torsion_sequence(coarse, 3)
        T = [s.T_h for s in sols]
        final = sols[-1]
        assert final.mesh.h_max <= 0.02
        assert all(b > a for a, b in zip(T, T[1:]))
        gap = exact - final.T_h
        assert 0 < gap <= 0.005 * exact
        d.append(f"h={final.mesh.h_max:.4f} T_h={final.T_h:.8f} rel gap={gap / exact:.2e}")


def test_02_square_torsion_oracle():
    with criterion(2, "square: extrapolated torsion within 1%, convergence slope in [1.7, 2.3]") as d:
        series = analytic_torsion_rectangle(1.0, 1.0)
        assert series == pytest.approx(SQUARE_TORSION_REFERENCE, abs=1e-6)
        sq = unit_square()
        sols = torsion_sequence(mesh_convex(sq, sq.diameter / 8), 3)
        T = [s.T_h for s in sols]
        T_ext, err = richardson(T[-2], T[-1])
        assert abs(T_ext - series) <= 0.01 * series
        slope = math.log2((T[-2] - T[-3]) / (T[-1] - T[-2]))
        assert 1.7 <= slope <= 2.3
        d.append(f"T_ext={T_ext:.7f} rel err={abs(T_ext - series) / series:.1e} slope={slope:.3f}")


def test_03_upper_bound_on_corpus(corpus):
    with criterion(3, "upper bound: F_lower <= 2n^2/((n+1)(n+2)) on all 400 corpus bodies") as d:
        assert len(corpus) == 400
        for e in corpus:
            c = e.report.check("makai")
            assert c["certain"] and c["tol"] == 0.0
        bad = failures(corpus, "makai")
        assert not bad, bad[:5]
        worst = min(e.report.check("makai")["margin"] for e in corpus)
        d.append(f"min margin={worst:.3e}")


def test_04_distance_integral_dominates_torsion(corpus):
    with criterion(4, "T_h < integral of d^2 with relative gap >= 1e-6; square value 1/24 to 1e-8") as d:
        gaps = [(e.report.values["d2"] - e.report.values["T_lower"]) / e.report.values["d2"]
                for e in corpus]
        assert min(gaps) >= 1e-6
        assert not failures(corpus, "strict_d2")
        value, err = integrate_d_squared(unit_square())
        coarea = profile_table(unit_square(), 64, fit=False).int_L_t2
        assert abs(value - 1 / 24) <= 1e-8
        assert abs(coarea - 1 / 24) <= 1e-8
        assert abs(value - coarea) <= 1e-8
        d.append(f"min rel gap={min(gaps):.3e}; square |I-1/24|={abs(value - 1 / 24):.1e}")


def test_05_cone_sharpness():
    with criterion(5, "flat cones approach the constant; thin triangle matches 1/(24k^3)") as d:
        worst = 0.0
        for n in (2, 3, 4, 5):
            mk = makai_constant(n)
            rep = evaluate_analytic(FamilySpec("cone", n, {"k": 1e3}))
            dev = abs(rep.values["F_extrapolated"] - mk)
            assert dev <= 0.02 * mk
            worst = max(worst, dev / mk)
        k = 50.0
        body = make_body(FamilySpec("cone", 2, {"k": k}))
        sols = torsion_sequence(mesh_convex(body, body.diameter / 20), 2)
        ratio = sols[-1].T_h * 24 * k ** 3
        assert abs(ratio - 1) <= 0.05
        d.append(f"max |F/c - 1|={worst:.1e}; FEM T_h*24k^3={ratio:.4f}")


def test_06_polya_side(corpus):
    with criterion(6, "F_ext >= 1/3 - error on the corpus; cylinders decrease to 1/3 with gamma -> n-1") as d:
        low = [e.report.values["F_extrapolated"] + e.report.values["F_error"] - 1 / 3 for e in corpus]
        assert min(low) >= 0
        assert not failures(corpus, "polya")
        rep = sweep(FamilySpec("cylinder", 3), [10.0, 100.0])
        F = [r["F"] for r in rep.rows]
        gaps = [2.0 - r["gamma"] for r in rep.rows]
        assert rep.passed
        assert F[0] > F[1] > 1 / 3
        assert gaps[0] > gaps[1] > 0 and gaps[1] <= 0.05
        d.append(f"min F_ext - 1/3={min(low):.3e}; cylinder F={F[0]:.4f},{F[1]:.4f}; "
                 f"gamma={rep.rows[-1]['gamma']:.3f}")


def test_07_quantitative_bounds(corpus):
    with criterion(7, "deficit >= C1 gamma^n; C1 gamma^n <= deficit(d^2) <= C2 gamma") as d:
        for name in ("quantitative_deficit", "sandwich_lower", "sandwich_upper"):
            bad = failures(corpus, name)
            assert not bad, (name, bad[:5])
        assert all(e.report.check("quantitative_deficit")["tol"] == 0.0 for e in corpus)
        ratio = max(e.report.check("sandwich_upper")["lhs"] / e.report.check("sandwich_upper")["rhs"]
                    for e in corpus if e.report.remainders["gamma"] > 1e-9)
        d.append(f"max deficit/(C2 gamma)={ratio:.3f}")


def test_08_beta_bound(corpus):
    with criterion(8, "(d^2 integral - T_h) P^2/|K|^3 <= (n^2+n+1)/3 beta within the FEM gap") as d:
        bad = failures(corpus, "beta_bound")
        assert not bad, bad[:5]
        worst = max(e.report.check("beta_bound")["lhs"] / e.report.check("beta_bound")["rhs"]
                    for e in corpus)
        # empirical thickness-to-flatness ratio; no bound is claimed for it
        ratio = min(e.report.remainders["beta_over_alpha"] for e in corpus)
        d.append(f"max lhs/rhs={worst:.3f}; min beta/alpha={ratio:.3f}")


def test_09_polynomial_certificates():
    with criterion(9, "exact certificates for n = 2..10 on 10^4 grid points, zero violations") as d:
        required = {"h(1)=0", "h'(1)=0", "h''(1)=0", "h(0)=-(n^2+3n-4)", "h <= 0",
                    "H >= n^2+3n-4", "H' >= 0"}
        for n in range(2, 11):
            cert = certify_polynomials(n, grid_size=10_000)
            by_name = {c["name"]: c for c in cert.checks}
            assert required <= set(by_name)
            for name in required:
                assert by_name[name]["pass"] and by_name[name]["violations"] == 0, (n, name)
            assert cert.passed
        d.append("n=2..10 all checks pass")


def test_10_profile_chain(corpus):
    with criterion(10, "profile chain on every corpus body; tangential bodies give z = gamma = 0") as d:
        bad = [(e.spec.label(), [k for k, c in e.chain.items() if not c["pass"]])
               for e in corpus if not e.profile_passed]
        assert not bad, bad[:5]
        for e in corpus:
            lhs, tol = e.coarea_agreement()
            assert lhs <= tol + 1e-9 * e.report.values["d2"]
        tangential = [unit_square(), unit_cube(), equilateral_triangle(),
                      make_body(FamilySpec("simplex", 3)), circumscribed_polygon(8),
                      circumscribed_polygon(64)]
        tangential += [make_body(e.spec) for e in corpus if e.spec.family == "tangential_random"][:20]
        for body in tangential:
            table = profile_table(body, 32)
            assert verify_profile_chain(table)["weighted_comparison"]["pass"]
            assert abs(table.z_value) <= 1e-10
            assert abs(summarize(body).gamma) <= 1e-10
        for e in corpus:
            if e.spec.family == "tangential_random":
                assert abs(e.table.z_value) <= 1e-10 and abs(e.report.remainders["gamma"]) <= 1e-10
        d.append(f"{len(corpus)} bodies, {len(tangential)} tangential checks")


def test_11_cone_sweep_signature():
    with criterion(11, "cone sweep: alpha and deficit strictly decreasing together") as d:
        rep = sweep(FamilySpec("cone", 2), [2.0, 5.0, 10.0, 20.0, 50.0])
        assert rep.passed
        assert rep.trends["alpha_decreasing"] and rep.trends["deficit_decreasing"]
        for name, slope in sorted(rep.slopes.items()):
            assert slope is not None and math.isfinite(slope)
        d.append(", ".join(f"{k}={v:.3f}" for k, v in sorted(rep.slopes.items())))
        print(rep.to_csv())


def test_12_determinism(tmp_path):
    with criterion(12, "identical config and seed give byte-identical reports") as d:
        runs = [
            ["verify", "--family", "random_hull", "--dim", "3", "--seed", "42"],
            ["profile", "--family", "tangential_random", "--dim", "2", "--seed", "7"],
            ["sweep", "--family", "cone", "--dim", "4", "--k", "10,100"],
            ["certify", "--n-range", "2..5"],
        ]
        for i, argv in enumerate(runs):
            a, b = tmp_path / f"{i}a.json", tmp_path / f"{i}b.json"
            main(argv + ["--out", str(a)])
            main(argv + ["--out", str(b)])
            assert a.read_bytes() == b.read_bytes(), argv
        spec = FamilySpec("random_hull", 2, {}, 3)
        first, second = evaluate_entry(spec), evaluate_entry(spec)
        assert dumps(first.report.to_dict()) == dumps(second.report.to_dict())
        d.append(f"{len(runs)} CLI runs and one corpus entry compared")
