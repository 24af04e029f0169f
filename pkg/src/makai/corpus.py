"""The fixed random corpus used by the acceptance runs."""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from typing import Optional

from .families import FamilySpec, make_body
from .inequalities import InequalityReport, SolverConfig, evaluate
from .profile import ProfileTable, profile_table, verify_profile_chain


def corpus_config() -> dict:
    return json.loads(resources.files("makai").joinpath("data/corpus.json").read_text())


def corpus_specs(n: int, config: Optional[dict] = None) -> list[FamilySpec]:
    cfg = config or corpus_config()
    lo, hi = cfg["seeds"]
    return [FamilySpec(fam, n, dict(cfg["params"].get(fam, {})), seed)
            for fam in cfg["families"] for seed in range(lo, hi + 1)]


def solver_for(n: int, config: Optional[dict] = None) -> SolverConfig:
    cfg = (config or corpus_config())["solver"][str(n)]
    return SolverConfig(refinements=cfg["refinements"], cg_tol=cfg["cg_tol"],
                        mesh_fraction=cfg["mesh_fraction"])


@dataclass
class CorpusEntry:
    spec: FamilySpec
    report: InequalityReport
    table: ProfileTable
    chain: dict

    @property
    def profile_passed(self) -> bool:
        return all(c["pass"] for c in self.chain.values())

    def coarea_agreement(self) -> tuple[float, float]:
        """|quadrature of P t^2 - ridge quadrature of d^2| and the combined error bar."""
        d2, d2_err = self.report.values["d2"], self.report.values["d2_error"]
        return abs(self.table.int_L_t2 - d2), d2_err + self.table.int_error


def evaluate_entry(spec: FamilySpec, config: Optional[dict] = None) -> CorpusEntry:
    cfg = config or corpus_config()
    body = make_body(spec)
    report = evaluate(body, solver_for(spec.dim, cfg))
    table = profile_table(body, cfg["profile_grid_m"])
    return CorpusEntry(spec, report, table, verify_profile_chain(table))


def evaluate_corpus(n: int, config: Optional[dict] = None, limit: Optional[int] = None):
    specs = corpus_specs(n, config)
    if limit is not None:
        specs = specs[:limit]
    return [evaluate_entry(s, config) for s in specs]

