"""Run every analysis on one instance and collect a serializable report."""

from __future__ import annotations

import json
import time
from dataclasses import asdict, dataclass, field, fields
from typing import Any

import numpy as np

from . import __version__
from .instances import Instance
from .koszul import KoszulSlice, koszul_slice, generic_sections
from .lattice import PolytopeFamily, is_essential
from .rank import exact_rank, modular_rank, random_primes
from .theorems import (
    E1Table,
    NotEssentialError,
    abc_check,
    bignef_case,
    codim_bounds,
    codim_formula,
    e1_table,
    genfor_formula,
    restrictdelta_check,
)
from .toric import critical_degree, graded_basis, normal_fan

RESEEDS = 3

# verdicts
AGREE = "agree"
DISAGREE = "disagree"
INDETERMINATE = "indeterminate"
NO_ORACLE = "no-oracle"
NO_CLAIMS = "no-claims"

EXIT_OK = 0
EXIT_DISAGREE = 1
EXIT_INPUT = 2
EXIT_BUDGET = 3


def reseed(seed: int, attempt: int) -> int:
    """Seed for the given attempt; attempt 0 uses the seed as given."""
    return seed + (attempt << 32)


@dataclass
class CodimReport:
    n: int
    polytopes: list
    member_dims: list
    essential: bool
    violating_subset: list | None
    lstar_total: int
    lower: int | None = None
    upper: int | None = None
    formula_applicable: bool = False
    abc_violators: list = field(default_factory=list)
    formula_value: int | None = None
    bignef_case: dict | None = None
    restrictdelta_ok: bool | None = None
    genfor_value: int | None = None
    rays: list | None = None
    critical_degree: list | None = None
    dim_s_rho: int | None = None
    e1_table: list | None = None
    oracle_value: int | None = None
    oracle: dict | None = None
    trials: list | None = None
    verdict: str = NO_ORACLE
    exit_code: int = EXIT_OK
    provenance: dict = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> "CodimReport":
        names = {f.name for f in fields(cls)}
        unknown = set(data) - names
        if unknown:
            raise ValueError(f"unknown report keys: {sorted(unknown)}")
        return cls(**data)

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @classmethod
    def from_json(cls, text: str) -> "CodimReport":
        return cls.from_dict(json.loads(text))


def claim_failures(report: CodimReport, value: int) -> list[str]:
    """Which of the report's claims an oracle value contradicts."""
    bad = []
    if report.lower is not None and not report.lower <= value <= report.upper:
        bad.append("bounds")
    if report.formula_value is not None and value != report.formula_value:
        bad.append("formula")
    if report.genfor_value is not None and value != report.genfor_value:
        bad.append("genfor")
    if report.bignef_case is not None and value != report.bignef_case["value"]:
        bad.append("bignef")
    return bad


def _solve(ks: KoszulSlice, seed_for_primes: int | None, engine: str) -> dict[str, Any]:
    rk = exact_rank(ks.matrix, engine)
    out: dict[str, Any] = {
        "shape": list(ks.shape),
        "rank": rk,
        "value": len(ks.target) - rk,
    }
    if seed_for_primes is not None:
        primes = random_primes(np.random.default_rng([seed_for_primes, 0x5EED]))
        mods = [modular_rank(ks.matrix, p) for p in primes]
        out.update(primes=primes, modular_ranks=mods, ranks_agree=max(mods) == rk)
    return out


def _generic_oracle(F: PolytopeFamily, report: CodimReport, seed: int, engine: str, fan) -> dict:
    attempts = []
    for attempt in range(RESEEDS + 1):
        s = reseed(seed, attempt)
        ks = koszul_slice(F, generic_sections(F, s), fan)
        res = _solve(ks, s, engine)
        res["seed"] = s
        res["failed_claims"] = claim_failures(report, res["value"]) if report.essential else []
        attempts.append(res)
        if not res["failed_claims"] and res["ranks_agree"]:
            return {"attempts": attempts, "verdict": AGREE if report.essential else NO_CLAIMS}
    values = {a["value"] for a in attempts}
    return {"attempts": attempts, "verdict": DISAGREE if len(values) == 1 else INDETERMINATE}


def analyze(
    inst: Instance,
    seed: int | None = None,
    engine: str = "auto",
    oracle: bool = True,
    timing: bool = False,
) -> CodimReport:
    """Full analysis of an instance.

    ``seed`` overrides the instance's generic seed.  The oracle runs when the
    instance carries explicit sections or a generic seed is available.
    """
    t0 = time.perf_counter()
    F = inst.family
    cert = is_essential(F)
    total = F.total()
    report = CodimReport(
        n=F.n,
        polytopes=[[list(v) for v in P.vertices] for P in F.members],
        member_dims=[P.dim for P in F.members],
        essential=cert.essential,
        violating_subset=list(cert.violating_subset) if cert.violating_subset else None,
        lstar_total=F.lstar_of(range(F.n + 1)),
    )
    if cert.essential:
        report.lower, report.upper = codim_bounds(F)
        applicable, violators = abc_check(F)
        report.formula_applicable = applicable
        report.abc_violators = [list(J) for J in violators]
        report.formula_value = codim_formula(F)
        report.restrictdelta_ok = restrictdelta_check(F)
        report.genfor_value = genfor_formula(F)
        report.e1_table = [list(col) for col in e1_table(F).entries]
    case = bignef_case(F)
    report.bignef_case = {"tag": case[0], "value": case[1]} if case else None

    fan = None
    if total.dim == F.n:
        fan = normal_fan(total)
        rho = critical_degree(F, fan)
        report.rays = [list(r) for r in fan.rays]
        report.critical_degree = list(rho.coeffs)
        report.dim_s_rho = len(graded_basis(rho))

    if seed is None:
        seed = inst.generic_seed
    provenance: dict[str, Any] = {"tool": "toricodim", "version": __version__, "engine": engine}
    if oracle and fan is not None and inst.sections is not None and seed is None:
        ks = koszul_slice(F, inst.sections, fan)
        res = _solve(ks, 0, engine)
        res["failed_claims"] = claim_failures(report, res["value"]) if cert.essential else []
        res["sections"] = "explicit"
        report.oracle = res
        report.oracle_value = res["value"]
        if not cert.essential:
            report.verdict = NO_CLAIMS
        else:
            # the no-common-zeros hypothesis is unchecked for explicit sections
            report.verdict = DISAGREE if res["failed_claims"] else AGREE
    elif oracle and fan is not None and seed is not None:
        res = _generic_oracle(F, report, seed, engine, fan)
        report.oracle = {"sections": "generic", **res}
        report.oracle_value = res["attempts"][-1]["value"]
        report.verdict = res["verdict"]
        provenance["seed"] = seed
        if res["verdict"] == DISAGREE:
            report.exit_code = EXIT_DISAGREE
        elif res["verdict"] == INDETERMINATE:
            report.exit_code = EXIT_BUDGET
    elif not cert.essential:
        report.verdict = NO_CLAIMS
    if timing:
        provenance["seconds"] = round(time.perf_counter() - t0, 3)
    report.provenance = provenance
    return report


def verify(inst: Instance, seed: int, trials: int, engine: str = "auto", timing: bool = False) -> CodimReport:
    """Independent generic draws with seeds seed, seed+1, ...; checks every claim."""
    t0 = time.perf_counter()
    base = analyze(Instance(inst.family, inst.vertex_lists), engine=engine, oracle=False)
    if not base.essential:
        raise NotEssentialError("family is not essential; the theorems make no claims to verify")
    fan = normal_fan(inst.family.total())
    results = []
    for t in range(trials):
        res = _generic_oracle(inst.family, base, seed + t, engine, fan)
        last = res["attempts"][-1]
        results.append(
            {
                "trial": t,
                "seed": seed + t,
                "value": last["value"],
                "reseeds": len(res["attempts"]) - 1,
                "verdict": res["verdict"],
                "attempts": res["attempts"],
            }
        )
    base.trials = results
    verdicts = {r["verdict"] for r in results}
    if DISAGREE in verdicts:
        base.verdict, base.exit_code = DISAGREE, EXIT_DISAGREE
    elif INDETERMINATE in verdicts:
        base.verdict, base.exit_code = INDETERMINATE, EXIT_BUDGET
    else:
        base.verdict = AGREE
    values = sorted({r["value"] for r in results})
    base.oracle_value = values[0] if len(values) == 1 else None
    base.provenance = {"tool": "toricodim", "version": __version__, "engine": engine, "seed": seed, "trials": trials}
    if timing:
        base.provenance["seconds"] = round(time.perf_counter() - t0, 3)
    return base


def render_text(report: CodimReport) -> str:
    """Plain-text summary using the usual vocabulary (essential, l*, E_1, ...)."""
    lines = [f"n = {report.n}"]
    for i, (verts, d) in enumerate(zip(report.polytopes, report.member_dims)):
        lines.append(f"  Delta_{i}: dim {d}, vertices {verts}")
    if report.essential:
        lines.append("family: essential")
    else:
        lines.append(f"family: NOT essential (J = {report.violating_subset}); no formula applies")
    lines.append(f"l*(Delta_0 + ... + Delta_n) = {report.lstar_total}")
    if report.critical_degree is not None:
        lines.append(f"rays: {report.rays}")
        lines.append(f"critical degree rho (coefficients on rays): {report.critical_degree}")
        lines.append(f"dim S_rho = {report.dim_s_rho}")
    if report.essential:
        lines.append(f"bounds: {report.lower} <= dim (S/I)_rho <= {report.upper}")
        if report.formula_applicable:
            lines.append(f"conditions (a)/(b)/(c) hold: dim (S/I)_rho = {report.formula_value}")
        else:
            lines.append(f"conditions (a)/(b)/(c) fail for J in {report.abc_violators}")
        if report.restrictdelta_ok is None:
            lines.append("dimension restriction {1, n-1, n}: not applicable (n < 3)")
        else:
            lines.append(f"dimension restriction {{1, n-1, n}}: {'holds' if report.restrictdelta_ok else 'fails'}")
        if report.genfor_value is not None:
            lines.append(f"inclusion-exclusion formula: {report.genfor_value}")
    if report.bignef_case is not None:
        lines.append(f"big-and-nef case ({report.bignef_case['tag']}): {report.bignef_case['value']}")
    if report.e1_table is not None:
        lines.append("E_1 table (dimensions):")
        table = E1Table(report.n, tuple(tuple(c) for c in report.e1_table))
        lines.extend("  " + row for row in table.render().splitlines())
    if report.oracle is not None:
        lines.append(f"oracle dim (S/I)_rho = {report.oracle_value}")
    if report.trials is not None:
        for tr in report.trials:
            lines.append(
                f"  trial {tr['trial']} seed {tr['seed']}: {tr['value']} "
                f"({tr['verdict']}, {tr['reseeds']} reseeds)"
            )
    lines.append(f"verdict: {report.verdict}")
    return "\n".join(lines) + "\n"
