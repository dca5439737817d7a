"""Analysis requests, reports and parameter sweeps.

Reports are plain JSON-compatible dictionaries with every exact value written
as a string, so they serialize losslessly and compare byte for byte.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from typing import Iterable, Mapping

from . import __version__
from .algebra import (
    A,
    B,
    FracElement,
    format_polynomial,
    format_scalar,
    is_constant,
    parse_scalar,
    scalar,
    substitute,
    to_fraction,
)
from .obstructions import (
    INCONCLUSIVE,
    NON_INTEGRABLE,
    SEPARABLE,
    Obstruction,
    Verdict,
    branching_test,
    denominator_gate,
    log_verdict,
    resonance_parameter,
    residue_verdict,
    theorem_evaluator,
)
from .ode import RepeatedRoots
from .variational import PARAM_NAMES, HamiltonianParams, build_invariant_plane

SCHEMA = "hamint.report/1"
TEST_ORDER = ("branching", "gate", "log", "residue2", "residue3", "theorem")


class UsageError(ValueError):
    pass


def parse_fraction(text: str) -> Fraction:
    """Exact "num/den" or integer; floats are rejected."""
    s = str(text).strip()
    if not s or any(ch in s for ch in ".eE") or s.count("/") > 1:
        raise UsageError(f"not an exact fraction: {text!r}")
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"not an exact fraction: {text!r}") from exc


@dataclass(frozen=True)
class AnalysisRequest:
    params: Mapping[str, Fraction]
    h: Fraction | str = "symbolic"
    tests: tuple[str, ...] = ("all",)
    order: int = 12
    output: str = "text"
    chart: str = "auto"
    timing: bool = False

    def __post_init__(self):
        unknown = set(self.params) - set(PARAM_NAMES)
        if unknown:
            raise UsageError(f"unknown parameters {sorted(unknown)}")
        if self.order < 4:
            raise UsageError("order must be at least 4")
        bad = set(self.tests) - set(TEST_ORDER) - {"all"}
        if bad:
            raise UsageError(f"unknown tests {sorted(bad)}")
        if self.output not in ("text", "json"):
            raise UsageError(f"unknown format {self.output!r}")

    @property
    def selected(self) -> tuple[str, ...]:
        if "all" in self.tests:
            return TEST_ORDER
        return tuple(t for t in TEST_ORDER if t in self.tests)

    def hamiltonian(self) -> HamiltonianParams:
        return HamiltonianParams.from_values(h=self.h, **{k: v for k, v in self.params.items()})

    def echo(self) -> dict:
        return {
            "params": {n: str(Fraction(self.params.get(n, 0))) for n in PARAM_NAMES},
            "h": str(self.h),
            "tests": list(self.selected),
            "order": self.order,
            "chart": self.chart,
        }


@dataclass(frozen=True)
class Report:
    data: dict

    def to_json(self) -> str:
        return json.dumps(self.data, sort_keys=True, indent=2, ensure_ascii=False)

    @classmethod
    def from_json(cls, text: str) -> Report:
        return cls(json.loads(text))

    @property
    def outcome(self) -> str:
        return self.data.get("summary", {}).get("outcome", "")

    @property
    def exit_code(self) -> int:
        return self.data.get("exit_code", 0)

    def to_text(self) -> str:
        return render_text(self.data)


# ---------------------------------------------------------------------------
# serialization helpers
# ---------------------------------------------------------------------------

def _value_text(v) -> str:
    if isinstance(v, FracElement):
        return format_scalar(v)
    return str(v)


def obstruction_dict(ob: Obstruction) -> dict:
    out = {"kind": ob.kind, "value": _value_text(ob.value)}
    if ob.level is not None:
        out["level"] = ob.level
    if ob.detail:
        out["detail"] = ob.detail
    locus = ob.locus()
    if locus:
        out["locus"] = [f"({format_polynomial(f)})^{m}" if m > 1 else format_polynomial(f)
                        for f, m in locus]
    if ob.entries:
        out["entries"] = [
            {"choice": list(e.choice), "row": e.row, "label": e.label, "value": _value_text(e.value)}
            for e in ob.entries
        ]
    return out


def verdict_dict(v: Verdict) -> dict:
    out = {"outcome": v.outcome, "case": v.case,
           "obstructions": [obstruction_dict(o) for o in v.obstructions]}
    if v.note:
        out["note"] = v.note
    return out


# ---------------------------------------------------------------------------
# comparison with reference values
# ---------------------------------------------------------------------------

# reference level-2 residue for V = Ar^2 + Bz^2 + z^3 + 3r^2 z
REFERENCE_LEVEL2 = (32 * (A - B) * B * (A**2 - Fraction(17, 8) * A * B - Fraction(9, 512) * B**2)) / 225
# reference logarithm locus for V = Ar^2 + Bz^2 + 16z^3 + 3r^2 z
REFERENCE_LOG = 16 * A - 5 * B


def proportional(x: FracElement, y: FracElement) -> bool:
    """x = k*y for a nonzero constant k, or both zero."""
    if not x or not y:
        return not x and not y
    return is_constant(x / y)


def compare_reference(quantity: str, reference: FracElement, computed: FracElement) -> dict | None:
    if proportional(computed, reference):
        return None
    return {"quantity": quantity, "reference": format_scalar(reference),
            "computed": format_scalar(computed)}


def _restrict(ref: FracElement, params: HamiltonianParams) -> FracElement:
    return substitute(ref, {"A": params.A, "B": params.B})


def reference_discrepancies(params: HamiltonianParams, verdicts: Mapping[str, Verdict]) -> list[dict]:
    out = []
    base = not params.E and not params.F and not params.G
    if base and params.D == 3 and params.C == 1 and "residue2" in verdicts:
        v = verdicts["residue2"]
        if v.obstructions:
            d = compare_reference("level-2 residue, V = Ar^2 + Bz^2 + z^3 + 3r^2 z",
                                  _restrict(REFERENCE_LEVEL2, params), scalar(v.obstructions[0].value))
            if d:
                out.append(d)
    if base and params.D == 3 and params.C == 16 and "log" in verdicts:
        v = verdicts["log"]
        if v.obstructions:
            d = compare_reference("logarithm coefficient, V = Ar^2 + Bz^2 + 16z^3 + 3r^2 z",
                                  _restrict(REFERENCE_LOG, params), scalar(v.obstructions[0].value))
            if d:
                out.append(d)
    return out


# ---------------------------------------------------------------------------
# analysis
# ---------------------------------------------------------------------------

def _run_test(name: str, params: HamiltonianParams, req: AnalysisRequest, extras: dict) -> Verdict:
    if name in ("branching", "gate"):
        rp = resonance_parameter(params)
        return branching_test(rp) if name == "branching" else denominator_gate(rp)
    if name == "log":
        return log_verdict(params, req.order)
    if name in ("residue2", "residue3"):
        verdict, run = residue_verdict(params, int(name[-1]), req.chart, req.order)
        if run is not None:
            extras["precision_retries"] += run.retries
        return verdict
    return theorem_evaluator(params)


def run_analysis(req: AnalysisRequest) -> Report:
    start = time.perf_counter()
    params = req.hamiltonian()
    data = {"schema": SCHEMA, "tool_version": __version__, "request": req.echo(),
            "verdicts": {}, "precision_retries": 0, "reference_discrepancies": [], "exit_code": 0}
    try:
        if not params.separable and build_invariant_plane(params).squarefree is False:
            raise RepeatedRoots(f"q = {build_invariant_plane(params).q!r} has a repeated root")
    except RepeatedRoots as exc:
        data["error"] = {"kind": "RepeatedRoots", "message": str(exc)}
        data["exit_code"] = 3
        data["summary"] = {"outcome": "Error", "case": "RepeatedRoots"}
        return Report(data)

    verdicts: dict[str, Verdict] = {}
    extras = {"precision_retries": 0}
    for name in req.selected:
        if params.separable and name != "theorem":
            verdicts[name] = Verdict(SEPARABLE, "separable", note="D = 0 and F = 0")
            continue
        verdicts[name] = _run_test(name, params, req, extras)
    data["verdicts"] = {k: verdict_dict(v) for k, v in verdicts.items()}
    data["precision_retries"] = extras["precision_retries"]
    data["reference_discrepancies"] = reference_discrepancies(params, verdicts)
    data["summary"] = _summary(verdicts, params)
    if req.timing:
        data["timing_seconds"] = round(time.perf_counter() - start, 3)
    return Report(data)


def _summary(verdicts: Mapping[str, Verdict], params: HamiltonianParams) -> dict:
    if params.separable:
        return {"outcome": SEPARABLE, "case": "separable"}
    for name in TEST_ORDER:
        v = verdicts.get(name)
        if v is not None and v.outcome == NON_INTEGRABLE:
            return {"outcome": NON_INTEGRABLE, "case": v.case, "test": name}
    th = verdicts.get("theorem")
    return {"outcome": INCONCLUSIVE, "case": th.case if th else "none"}


# ---------------------------------------------------------------------------
# sweeps
# ---------------------------------------------------------------------------

def parse_values(text: str) -> list[Fraction]:
    """"1,2,5/2" or an inclusive range "start:stop:step"."""
    out: list[Fraction] = []
    for part in str(text).split(","):
        part = part.strip()
        if not part:
            continue
        if ":" in part:
            bits = part.split(":")
            if len(bits) != 3:
                raise UsageError(f"range must be start:stop:step, got {part!r}")
            lo, hi, step = (parse_fraction(b) for b in bits)
            if step <= 0:
                raise UsageError("range step must be positive")
            x = lo
            while x <= hi:
                out.append(x)
                x += step
        else:
            out.append(parse_fraction(part))
    return out


@dataclass
class SweepResult:
    reports: list[Report]
    summary: dict = field(default_factory=dict)

    def to_json(self) -> str:
        doc = {"schema": SCHEMA + "+sweep", "summary": self.summary,
               "reports": [r.data for r in self.reports]}
        return json.dumps(doc, sort_keys=True, indent=2, ensure_ascii=False)

    def to_text(self) -> str:
        lines = []
        for r in self.reports:
            p = r.data["request"]["params"]
            point = " ".join(f"{k}={v}" for k, v in p.items())
            s = r.data["summary"]
            lines.append(f"{point}  ->  {s['outcome']} ({s['case']})")
        lines.append("summary: " + ", ".join(f"{k}={v}" for k, v in sorted(self.summary.items())))
        return "\n".join(lines)


def run_sweep(grid: Mapping[str, Iterable[Fraction]], p_values: Iterable[Fraction] | None = None,
              h="symbolic", tests=("theorem",), order: int = 12, chart: str = "auto") -> SweepResult:
    """One report per grid point, in the fixed order A..G then p.

    With ``p_values`` the coefficient F is replaced by E(p^2 - 1)/4.
    """
    axes = [(n, list(grid.get(n, [Fraction(0)]))) for n in PARAM_NAMES]
    p_list = list(p_values) if p_values is not None else [None]
    if any(not vals for _, vals in axes) or not p_list:
        raise UsageError("empty grid")
    reports = []
    for combo in product(*(vals for _, vals in axes)):
        for pv in p_list:
            point = dict(zip(PARAM_NAMES, combo))
            if pv is not None:
                point["F"] = point["E"] * (pv * pv - 1) / 4
            req = AnalysisRequest(point, h=h, tests=tuple(tests), order=order, chart=chart)
            rep = run_analysis(req)
            if pv is not None:
                rep.data["request"]["p"] = str(pv)
            reports.append(rep)
    counts: dict[str, int] = {}
    for r in reports:
        k = r.outcome
        counts[k] = counts.get(k, 0) + 1
    return SweepResult(reports, counts)


# ---------------------------------------------------------------------------
# text rendering
# ---------------------------------------------------------------------------

def render_text(data: dict) -> str:
    req = data["request"]
    lines = [f"hamint {data['tool_version']}  ({data['schema']})"]
    lines.append("parameters: " + " ".join(f"{k}={v}" for k, v in req["params"].items())
                 + f" h={req['h']}")
    if "error" in data:
        lines.append(f"error: {data['error']['kind']}: {data['error']['message']}")
        return "\n".join(lines)
    for name, v in data["verdicts"].items():
        lines.append(f"[{name}] {v['outcome']} ({v['case']})" + (f"  {v['note']}" if "note" in v else ""))
        for ob in v["obstructions"]:
            lvl = f" level {ob['level']}" if "level" in ob else ""
            lines.append(f"    {ob['kind']}{lvl}: {ob['value']}")
            if "detail" in ob:
                lines.append(f"      {ob['detail']}")
            if "locus" in ob:
                lines.append("      vanishing locus: " + " * ".join(ob["locus"]))
            for e in ob.get("entries", []):
                if e["value"] != "0":
                    lines.append(f"      {e['label']} at {tuple(e['choice'])}: {e['value']}")
    for d in data.get("reference_discrepancies", []):
        lines.append(f"discrepancy: {d['quantity']}: reference {d['reference']}, computed {d['computed']}")
    s = data["summary"]
    lines.append(f"summary: {s['outcome']} ({s['case']})")
    if "timing_seconds" in data:
        lines.append(f"time: {data['timing_seconds']} s")
    return "\n".join(lines)


def parse_h(text: str | None):
    if text is None or text == "symbolic":
        return "symbolic"
    return parse_fraction(text)


def coefficient_list(text: str) -> list[FracElement]:
    """Comma separated ascending coefficients; entries may use the parameter symbols."""
    parts = [p.strip() for p in str(text).split(",")]
    if not parts or any(not p for p in parts):
        raise UsageError(f"bad coefficient list {text!r}")
    out = []
    for p in parts:
        if "." in p:
            raise UsageError(f"floating point coefficient {p!r}")
        try:
            out.append(parse_scalar(p))
        except Exception as exc:  # sympy raises many types on junk
            raise UsageError(f"cannot parse coefficient {p!r}") from exc
    return out


def fraction_text(x) -> str:
    return str(to_fraction(x)) if isinstance(x, FracElement) else str(x)
