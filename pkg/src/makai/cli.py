"""Command-line front end.

Exit status: 0 when every mathematically certain check passes, 1 when one
fails, 2 on bad input. Errors are reported as JSON on stderr.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from dataclasses import asdict, dataclass
from pathlib import Path
from typing import Optional

from . import __version__
from .certificates import certify_polynomials
from .errors import InputError, LPFailure, MakaiError
from .families import FAMILIES, FamilySpec, make_body
from .fem import analytic_torsion, mesh_convex, richardson, torsion_sequence
from .geometry import (ConvexBody, body_from_json, circumscribed_polygon, equilateral_triangle,
                       summarize, unit_cube, unit_square)
from .inequalities import SolverConfig, dumps, evaluate, sweep
from .profile import DEFAULT_GRID_M, chain_passed, profile_table, verify_profile_chain

COMMANDS = ("validate", "verify", "profile", "certify", "sweep")


@dataclass
class RunConfig:
    command: str
    family: Optional[str] = None
    dim: Optional[int] = None
    k: Optional[str] = None
    ell: Optional[str] = None
    input: Optional[str] = None
    mesh_h: str = "auto"
    refinements: int = 2
    cg_tol: float = 1e-10
    grid_m: int = DEFAULT_GRID_M
    output: Optional[str] = None
    format: str = "json"
    seed: int = 0
    n_range: str = "2..10"

    def solver(self) -> SolverConfig:
        h = self.mesh_h if self.mesh_h == "auto" else float(self.mesh_h)
        return SolverConfig(mesh_h=h, refinements=self.refinements, cg_tol=self.cg_tol)

    def to_dict(self) -> dict:
        # the destination is not part of the computation, so reports do not record it
        d = asdict(self)
        d.pop("output")
        return d


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        sys.stderr.write(json.dumps({"error": "UsageError", "message": message}) + "\n")
        self.exit(2)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="makai", description="Torsion and shape inequality toolkit for convex polytopes.")
    p.add_argument("--version", action="version", version=__version__)
    p.add_argument("command", choices=COMMANDS)
    p.add_argument("--family", choices=FAMILIES)
    p.add_argument("--dim", type=int)
    p.add_argument("--k", help="cone flattening; comma separated list for sweep")
    p.add_argument("--ell", help="cylinder thinning; comma separated list for sweep")
    p.add_argument("--input", help="polytope JSON or family JSON")
    p.add_argument("--mesh-h", default="auto", help="coarsest mesh size, or 'auto'")
    p.add_argument("--refine", type=int, default=2, help="uniform refinements after the base mesh")
    p.add_argument("--cg-tol", type=float, default=1e-10)
    p.add_argument("--grid-m", type=int, default=DEFAULT_GRID_M)
    p.add_argument("--out", help="output file (default: stdout)")
    p.add_argument("--format", choices=("json", "csv"), default="json")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--n-range", default="2..10", help="e.g. 2..6")
    return p


def parse_config(argv=None) -> RunConfig:
    a = build_parser().parse_args(argv)
    return RunConfig(command=a.command, family=a.family, dim=a.dim, k=a.k, ell=a.ell,
                     input=a.input, mesh_h=a.mesh_h, refinements=a.refine, cg_tol=a.cg_tol,
                     grid_m=a.grid_m, output=a.out, format=a.format, seed=a.seed,
                     n_range=a.n_range)


def _floats(text: Optional[str], flag: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except (AttributeError, ValueError):
        raise InputError(f"{flag} expects a number or a comma separated list") from None


def parse_n_range(text: str) -> list[int]:
    try:
        if ".." in text:
            lo, hi = (int(x) for x in text.split(".."))
        else:
            lo = hi = int(text)
    except ValueError:
        raise InputError(f"bad --n-range {text!r}; expected e.g. 2..6") from None
    if lo < 2 or hi < lo:
        raise InputError("--n-range must satisfy 2 <= lo <= hi")
    return list(range(lo, hi + 1))


def family_spec(cfg: RunConfig) -> FamilySpec:
    if cfg.dim is None:
        raise InputError("--family needs --dim")
    params = {}
    if cfg.k is not None:
        params["k"] = _floats(cfg.k, "--k")[0]
    if cfg.ell is not None:
        params["ell"] = _floats(cfg.ell, "--ell")[0]
    return FamilySpec(cfg.family, cfg.dim, params, cfg.seed)


def load_target(cfg: RunConfig):
    """A ConvexBody or a FamilySpec from --input or the family flags."""
    if cfg.input:
        try:
            obj = json.loads(Path(cfg.input).read_text())
        except OSError as exc:
            raise InputError(f"cannot read {cfg.input}: {exc}") from None
        except json.JSONDecodeError as exc:
            raise InputError(f"{cfg.input} is not valid JSON: {exc}") from None
        if isinstance(obj, dict) and "family" in obj:
            return FamilySpec.from_json(obj)
        if not isinstance(obj, dict):
            raise InputError("input JSON must be an object")
        return body_from_json(obj)
    if cfg.family:
        return family_spec(cfg)
    raise InputError("give --input or --family")


def as_body(target) -> ConvexBody:
    return make_body(target) if isinstance(target, FamilySpec) else target


def _emit(cfg: RunConfig, text: str, suffix: str = "") -> None:
    if cfg.output:
        path = Path(cfg.output)
        if suffix:
            path = path.with_name(path.stem + suffix)
        path.write_text(text)
    else:
        sys.stdout.write(text)


def _envelope(cfg: RunConfig, payload: dict) -> dict:
    return {"config": cfg.to_dict(), "code_version": __version__, **payload}


def _checks_csv(checks: list) -> str:
    cols = ["name", "lhs", "rhs", "margin", "tol", "pass", "certain"]
    rows = [",".join(cols)]
    for c in checks:
        rows.append(",".join(repr(c.get(k)) if isinstance(c.get(k), float) else str(c.get(k))
                             for k in cols))
    return "\n".join(rows) + "\n"


# ---------------------------------------------------------------------------
# commands
# ---------------------------------------------------------------------------

def cmd_verify(cfg: RunConfig) -> int:
    report = evaluate(load_target(cfg), cfg.solver())
    if cfg.format == "csv":
        _emit(cfg, _checks_csv(report.checks))
    else:
        _emit(cfg, dumps(_envelope(cfg, {"report": report.to_dict()})))
    return 0 if report.passed else 1


def cmd_profile(cfg: RunConfig) -> int:
    body = as_body(load_target(cfg))
    table = profile_table(body, cfg.grid_m)
    chain = verify_profile_chain(table)
    ok = chain_passed(chain)
    if cfg.format == "csv":
        _emit(cfg, table.to_csv())
        if cfg.output:
            _emit(cfg, dumps(_envelope(cfg, {"summary": table.to_dict(), "chain": chain})),
                  suffix=".chain.json")
    else:
        columns = {"t": table.grid.tolist(), "mu": table.mu.tolist(), "per": table.per.tolist(),
                   "L": table.L.tolist(), "lambda": table.lam.tolist()}
        _emit(cfg, dumps(_envelope(cfg, {"summary": table.to_dict(), "table": columns,
                                         "chain": chain, "passed": ok})))
    return 0 if ok else 1


def cmd_certify(cfg: RunConfig) -> int:
    grid = cfg.grid_m if cfg.grid_m >= 1000 else 10_000
    certs = [certify_polynomials(n, grid) for n in parse_n_range(cfg.n_range)]
    ok = all(c.passed for c in certs)
    if cfg.format == "csv":
        lines = ["n,check,pass,violations"]
        for c in certs:
            lines += [f"{c.n},{x['name']},{x['pass']},{x['violations']}" for x in c.checks]
        _emit(cfg, "\n".join(lines) + "\n")
    else:
        _emit(cfg, dumps(_envelope(cfg, {"certificates": [c.to_dict() for c in certs],
                                         "passed": ok})))
    return 0 if ok else 1


def cmd_sweep(cfg: RunConfig) -> int:
    if cfg.family not in ("cone", "cylinder"):
        raise InputError("sweep needs --family cone or --family cylinder")
    if cfg.dim is None:
        raise InputError("sweep needs --dim")
    text = cfg.k if cfg.family == "cone" else cfg.ell
    if text is None:
        text = "2,5,10,20,50" if cfg.family == "cone" else "10,100"
    values = _floats(text, "--k" if cfg.family == "cone" else "--ell")
    report = sweep(FamilySpec(cfg.family, cfg.dim, {}, cfg.seed), values, cfg.solver())
    if cfg.format == "csv":
        _emit(cfg, report.to_csv())
    else:
        _emit(cfg, dumps(_envelope(cfg, {"sweep": report.to_dict()})))
    return 0 if report.passed else 1


def validation_suite(cfg: Optional[RunConfig] = None) -> list[dict]:
    """Analytic-oracle checks: ball and rectangle torsion, tangential bodies, certificates."""
    cfg = cfg or RunConfig("validate")
    out = []

    def rec(name, value, expected, tol):
        err = abs(value - expected)
        out.append({"name": name, "value": value, "expected": expected, "error": err,
                    "tol": tol, "pass": bool(err <= tol)})

    rec("ball torsion n=2", analytic_torsion("ball", 2, 1.0), math.pi / 8, 1e-15)
    rec("ball torsion n=3", analytic_torsion("ball", 3, 1.0), 4 * math.pi / 45, 1e-15)
    rec("rectangle torsion 1x1", analytic_torsion("rectangle", 1.0, 1.0), 0.0351442537, 1e-9)
    sq = unit_square()
    sols = torsion_sequence(mesh_convex(sq, sq.diameter / 10), cfg.refinements, cfg.cg_tol)
    T_ext, _ = richardson(sols[-2].T_h, sols[-1].T_h)
    exact = analytic_torsion("rectangle", 1.0, 1.0)
    rec("FEM square (extrapolated)", T_ext, exact, 0.01 * exact)
    out.append({"name": "FEM square lower bound", "value": sols[-1].T_h, "expected": exact,
                "error": exact - sols[-1].T_h, "tol": 0.0, "pass": bool(sols[-1].T_h <= exact)})
    for name, body in [("square", sq), ("cube", unit_cube()),
                       ("equilateral triangle", equilateral_triangle()),
                       ("circumscribed 64-gon", circumscribed_polygon(64)),
                       ("tangential_random n=2 seed 42",
                        make_body(FamilySpec("tangential_random", 2, {}, 42)))]:
        rec(f"gamma=0 {name}", summarize(body).gamma, 0.0, 1e-10)
    for n in range(2, 7):
        c = certify_polynomials(n, 10_000)
        out.append({"name": f"certificate n={n}", "pass": c.passed,
                    "failed": [x["name"] for x in c.checks if not x["pass"]]})
    return out


def cmd_validate(cfg: RunConfig) -> int:
    results = validation_suite(cfg)
    ok = all(r["pass"] for r in results)
    if cfg.format == "csv":
        lines = ["name,pass"] + [f"{r['name']},{r['pass']}" for r in results]
        _emit(cfg, "\n".join(lines) + "\n")
    elif cfg.output:
        _emit(cfg, dumps(_envelope(cfg, {"results": results, "passed": ok})))
    if not cfg.output and cfg.format == "json":
        for r in results:
            sys.stdout.write(f"{'PASS' if r['pass'] else 'FAIL'}  {r['name']}\n")
    return 0 if ok else 1


HANDLERS = {"validate": cmd_validate, "verify": cmd_verify, "profile": cmd_profile,
            "certify": cmd_certify, "sweep": cmd_sweep}


def run(cfg: RunConfig) -> int:
    try:
        return HANDLERS[cfg.command](cfg)
    except (InputError, LPFailure) as exc:
        sys.stderr.write(json.dumps(exc.to_dict()) + "\n")
        return 2
    except MakaiError as exc:
        sys.stderr.write(json.dumps(exc.to_dict()) + "\n")
        return 1
    except (ValueError, OSError) as exc:
        sys.stderr.write(json.dumps({"error": "InputError", "message": str(exc)}) + "\n")
        return 2


def main(argv=None) -> int:
    return run(parse_config(argv))


if __name__ == "__main__":
    sys.exit(main())
