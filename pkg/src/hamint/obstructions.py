"""Non-integrability tests built on the variational equations.

Each test returns a ``Verdict`` carrying its ``Obstruction`` witnesses.  A
NonIntegrable verdict always holds at least one nonzero witness; everything
that cannot be decided is Inconclusive, never upgraded to integrable.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import product
from typing import Callable

from sympy import QQ
from sympy.polys.fields import field as make_field

from .algebra import (
    SYMBOL_NAMES,
    ZERO,
    FracElement,
    InsufficientPrecision,
    factor_numerator,
    format_scalar,
    is_constant,
    sqrt_scalar,
    to_fraction,
)
from .ode import (
    FrobeniusSolution,
    LinearODE2,
    TraceValue,
    frobenius_solve,
    indicial_finite_simple_root,
    transform_to_infinity,
    FiniteExponentUnknown,
)
from .variational import (
    XI_NAMES,
    Chart,
    FundamentalMatrix,
    HamiltonianParams,
    HigherVariationRHS,
    build_ve1_infinity,
    fundamental_matrix,
    hvar_rhs,
    make_chart,
)

NON_INTEGRABLE = "NonIntegrable"
INCONCLUSIVE = "Inconclusive"
SEPARABLE = "Separable"
NOT_APPLICABLE = "NotApplicable"
SKIPPED = "Skipped"
OUTSIDE_THEOREM = "OutsideTheorem"


class NotApplicable(ValueError):
    pass


# ---------------------------------------------------------------------------
# results
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ResidueEntry:
    """One residue of X^-1 f at a given choice of first-variation solutions.

    ``choice`` = (i, j) means xi11 = xi11^(i), xi12 = xi12^(j), 1-based.
    """

    choice: tuple[int, int]
    row: int
    label: str
    value: FracElement


@dataclass(frozen=True)
class Obstruction:
    kind: str  # branching | trace | logarithm | residue | condition
    value: object
    level: int | None = None
    detail: str = ""
    entries: tuple[ResidueEntry, ...] = ()

    @property
    def nonzero(self) -> bool:
        v = self.value
        if isinstance(v, (FracElement, Fraction, int)):
            return bool(v)
        return v is not None

    def locus(self) -> list[tuple[object, int]]:
        """Factored numerator of a parametric witness (empty for constants)."""
        if not isinstance(self.value, FracElement) or not self.value:
            return []
        return factor_numerator(self.value)[1]

    def value_text(self) -> str:
        v = self.value
        if isinstance(v, FracElement):
            return format_scalar(v)
        return str(v)


@dataclass(frozen=True)
class Verdict:
    outcome: str
    case: str
    obstructions: tuple[Obstruction, ...] = ()
    note: str = ""

    def __post_init__(self):
        if self.outcome == NON_INTEGRABLE and not any(o.nonzero for o in self.obstructions):
            raise ValueError("a NonIntegrable verdict needs a nonzero witness")

    @property
    def non_integrable(self) -> bool:
        return self.outcome == NON_INTEGRABLE


# ---------------------------------------------------------------------------
# branching and the denominator gate
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ResonanceParameter:
    """p = sqrt(1 + 4F/E)."""

    kind: str  # exact | irrational | undefined | symbolic
    value: Fraction | FracElement | None = None
    radicand: FracElement | None = None

    @property
    def denominator(self) -> int | None:
        return self.value.denominator if self.kind == "exact" else None


def resonance_parameter(params: HamiltonianParams) -> ResonanceParameter:
    if not params.E:
        return ResonanceParameter("undefined")
    rad = 1 + 4 * params.F / params.E
    root = sqrt_scalar(rad)
    if is_constant(rad):
        if root is None:
            return ResonanceParameter("irrational", None, rad)
        return ResonanceParameter("exact", abs(to_fraction(root)), rad)
    return ResonanceParameter("symbolic", root, rad)


def branching_test(rp: ResonanceParameter) -> Verdict:
    if rp.kind == "undefined":
        return Verdict(SKIPPED, "a", note="p is undefined for E = 0")
    if rp.kind == "irrational":
        ob = Obstruction("branching", rp.radicand, detail="1 + 4F/E is not a rational square")
        return Verdict(NON_INTEGRABLE, "a", (ob,))
    return Verdict(INCONCLUSIVE, "a")


def denominator_gate(rp: ResonanceParameter) -> Verdict:
    if rp.kind != "exact":
        return Verdict(SKIPPED, "b", note=f"p is {rp.kind}")
    n = rp.value.denominator
    if n >= 4:
        t = TraceValue.from_delta(rp.value)
        ob = Obstruction("trace", n, detail=f"N(p) = {n}; t_inf = {t} is not rational")
        return Verdict(NON_INTEGRABLE, "b", (ob,))
    return Verdict(INCONCLUSIVE, "b", note=f"N(p) = {n}")


# ---------------------------------------------------------------------------
# logarithms and local Galois groups
# ---------------------------------------------------------------------------

def log_obstruction_test(ode: LinearODE2, order: int = 12) -> tuple[Obstruction, tuple]:
    """Exact coefficient of the logarithm in the second local solution at var = 0.

    Returns the obstruction together with the Frobenius pair it came from.
    """
    s1, s2 = frobenius_solve(ode, order)
    gap = s1.exponent - s2.exponent
    if gap.denominator != 1:
        raise NotApplicable(f"exponent difference {gap} is not an integer")
    c = s2.log_obstruction
    return Obstruction("logarithm", c, detail=f"exponents {s1.exponent}, {s2.exponent}"), (s1, s2)


def log_verdict(params: HamiltonianParams, order: int = 12) -> Verdict:
    """Logarithm at the pole of z(t) combined with the {0, 1/2} exponents at finite points."""
    ve_r = build_ve1_infinity(params)[0]
    try:
        ob, _ = log_obstruction_test(ve_r, order)
    except NotApplicable as exc:
        return Verdict(NOT_APPLICABLE, "log", note=str(exc))
    except ValueError as exc:
        return Verdict(NOT_APPLICABLE, "log", note=str(exc))
    if not ob.nonzero:
        return Verdict(INCONCLUSIVE, "log", (ob,), note="no logarithm at infinity")
    try:
        finite = indicial_finite_simple_root(transform_to_infinity(ve_r, "z"))
        ok = finite.roots is not None and set(finite.roots) == {Fraction(0), Fraction(1, 2)}
    except (FiniteExponentUnknown, ValueError):
        ok = False
    if not ok:
        return Verdict(INCONCLUSIVE, "log", (ob,), note="finite exponents are not {0, 1/2}")
    return Verdict(NON_INTEGRABLE, "log", (ob,),
                   note="logarithm at infinity and exponents {0, 1/2} at the finite points")


GALOIS_FIELD, delta, gamma, mu, *_ = make_field("delta,gamma,mu," + ",".join(SYMBOL_NAMES), QQ)


def _to_galois(s: FracElement):
    return GALOIS_FIELD.from_expr(s.as_expr()) if not is_constant(s) else \
        GALOIS_FIELD(QQ(to_fraction(s).numerator, to_fraction(s).denominator))


@dataclass(frozen=True)
class LocalGaloisFamily:
    """Identity-component family of a local differential Galois group as a symbolic 2x2 matrix.

    kind is one of
      diagonalizable   no logarithm, exponents not in {0, 1/2}: diag(delta, 1/delta)
      additive         no logarithm, exponents {0, 1/2}: (1, 0; mu, 1)
      unipotent_log    logarithm, integer exponents: (1, 0; c*gamma, 1)
      lower_triangular logarithm, non-integer exponents: (1/(1+c delta), 0; c gamma/(1+c delta), 1)

    In the logarithmic kinds the log coefficient c enters the parametrization,
    so setting c = 0 collapses the family to the identity.
    """

    kind: str
    matrix: tuple[tuple[object, object], tuple[object, object]]
    obstruction: FracElement = ZERO

    def describe(self) -> str:
        return {
            "diagonalizable": "{diag(delta, 1/delta)}",
            "additive": "{(1, 0; mu, 1)}",
            "unipotent_log": "{(1, 0; gamma, 1)}",
            "lower_triangular": "{(1/delta, 0; gamma/delta, 1), delta != 0}",
        }[self.kind]


def galois_local_classify(sol1: FrobeniusSolution, sol2: FrobeniusSolution) -> LocalGaloisFamily:
    one, zero = GALOIS_FIELD.one, GALOIS_FIELD.zero
    logs = [s for s in (sol1, sol2) if s.has_log]
    if logs:
        c = _to_galois(logs[0].log_obstruction)
        if sol1.exponent.denominator == 1 and sol2.exponent.denominator == 1:
            return LocalGaloisFamily("unipotent_log", ((one, zero), (c * gamma, one)),
                                     logs[0].log_obstruction)
        d = 1 + c * delta
        return LocalGaloisFamily("lower_triangular", ((1 / d, zero), (c * gamma / d, one)),
                                 logs[0].log_obstruction)
    if {sol1.exponent, sol2.exponent} == {Fraction(0), Fraction(1, 2)}:
        return LocalGaloisFamily("additive", ((one, zero), (mu, one)))
    return LocalGaloisFamily("diagonalizable", ((delta, zero), (zero, 1 / delta)))


def _mat_mul(a, b):
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(2)), GALOIS_FIELD.zero)
                       for j in range(2)) for i in range(2))


def commutator(f: LocalGaloisFamily, g: LocalGaloisFamily):
    """f g - g f as a symbolic 2x2 matrix."""
    fg, gf = _mat_mul(f.matrix, g.matrix), _mat_mul(g.matrix, f.matrix)
    return tuple(tuple(fg[i][j] - gf[i][j] for j in range(2)) for i in range(2))


def families_commute(f: LocalGaloisFamily, g: LocalGaloisFamily) -> bool:
    return all(not e for row in commutator(f, g) for e in row)


# ---------------------------------------------------------------------------
# higher-variation residues
# ---------------------------------------------------------------------------

_ROW_LABELS = ("-xi11^(2)*K{L}^(1)", "xi11^(1)*K{L}^(1)", "-xi12^(2)*K{L}^(2)", "xi12^(1)*K{L}^(2)")


def _solve_level(chart: Chart, basis: FundamentalMatrix, forcing: tuple):
    """Residues of X^-1 f and the particular solution by variation of constants."""
    entries = basis.apply_inverse((None, forcing[0], None, forcing[1]))
    residues, integrals = [], []
    for e in entries:
        if e is None:
            residues.append(ZERO)
            integrals.append(None)
            continue
        anti, res = chart.integrate(e)
        residues.append(res)
        integrals.append(anti)
    # X * integral of X^-1 f, first and third rows
    particular = []
    for blk, (a, b) in enumerate(basis.pairs):
        i1, i2 = integrals[2 * blk], integrals[2 * blk + 1]
        if i1 is None:
            particular.append(None)
        else:
            particular.append(a * i1 + b * i2)
    return residues, particular


def residue_obstruction(level: int, basis: FundamentalMatrix, rhs2: HigherVariationRHS,
                        chart: Chart, rhs3: HigherVariationRHS | None = None) -> Obstruction:
    """Residues of the variation-of-constants integrands at the pole of z(t).

    Every combination of first-variation solutions (xi11^(i), xi12^(j)) is
    tried.  At level 3 the second variation is the particular solution with
    zero integration constants; residues met on the way are dropped from it
    (they are reported by the level-2 run).
    """
    if level not in (2, 3):
        raise ValueError("level must be 2 or 3")
    if level == 3 and rhs3 is None:
        raise ValueError("level 3 needs the level-3 forcing")
    entries = []
    for i, j in product((0, 1), repeat=2):
        values = {"xi11": basis.pairs[0][i], "xi12": basis.pairs[1][j]}
        f2 = tuple(_scaled(rhs2.evaluate(k, values, chart.coefficient), chart) for k in (0, 1))
        residues, particular = _solve_level(chart, basis, f2)
        if level == 3:
            zero = values["xi11"].scale(0)
            values["xi21"] = particular[0] if particular[0] is not None else zero
            values["xi22"] = particular[1] if particular[1] is not None else zero
            f3 = tuple(_scaled(rhs3.evaluate(k, values, chart.coefficient), chart) for k in (0, 1))
            residues, _ = _solve_level(chart, basis, f3)
        for row, r in enumerate(residues):
            entries.append(ResidueEntry((i + 1, j + 1), row + 1,
                                        _ROW_LABELS[row].format(L=level), r))
    if level == 2:
        entries.extend(_cross_term_entries(basis, rhs2, chart))
    witness = next((e.value for e in entries if e.value), ZERO)
    return Obstruction("residue", witness, level, f"chart {chart.name}", tuple(entries))


def _cross_term_entries(basis: FundamentalMatrix, rhs2: HigherVariationRHS, chart: Chart):
    """Residues of the mixed products a squared forcing term picks up.

    For xi11 = a1 xi11^(1) + a2 xi11^(2) a term xi11^2 also contains
    2 a1 a2 xi11^(1) xi11^(2), which no single basis choice exposes.
    """
    out = []
    block_of = {"xi11": 0, "xi12": 1}
    for k in (0, 1):
        sols = basis.pairs[k]
        for mono, poly in sorted(rhs2.components[k].items()):
            for name, e in zip(XI_NAMES, mono):
                if e != 2:
                    continue
                pair = basis.pairs[block_of[name]]
                prod = pair[0] * pair[1]
                if poly.degree > 0:
                    prod = prod * chart.coefficient(poly)
                else:
                    prod = prod.scale(poly.coeff(0))
                prod = prod.scale(2 * chart.scale)
                for row, sol in ((2 * k + 1, -sols[1]), (2 * k + 2, sols[0])):
                    _, res = chart.integrate(sol * prod)
                    which = "(2)" if row % 2 else "(1)"
                    label = f"{'-' if row % 2 else ''}xi1{k + 1}^{which}*[{name}^(1)*{name}^(2)]"
                    out.append(ResidueEntry((), row, label, res))
    return out


def _scaled(s, chart: Chart):
    return None if s is None else s.scale(chart.scale)


def chart_basis(params: HamiltonianParams, chart: Chart) -> FundamentalMatrix:
    pairs = chart.solutions(params)
    for s1, s2 in pairs:
        if s1.has_log or s2.has_log:
            raise NotApplicable("a first-variation solution carries a logarithm")
    return fundamental_matrix((pairs[0][0].series(), pairs[0][1].series()),
                              (pairs[1][0].series(), pairs[1][1].series()),
                              derivation=chart.d_tau)


@dataclass
class ResidueRun:
    obstruction: Obstruction
    order: int
    retries: int
    chart: str


def residue_analysis(params: HamiltonianParams, level: int, chart: str = "auto",
                     order: int = 12, max_retries: int = 3) -> ResidueRun:
    """Build the chart and basis, then run residue_obstruction, doubling the order on demand."""
    if not params.h:
        raise ValueError("h = 0 is refused: the zero energy level distorts the residue test")
    rhs2 = hvar_rhs(params, 2)
    rhs3 = hvar_rhs(params, 3) if level == 3 else None
    retries = 0
    while True:
        try:
            ch = make_chart(params, chart, order)
            basis = chart_basis(params, ch)
            ob = residue_obstruction(level, basis, rhs2, ch, rhs3)
            return ResidueRun(ob, order, retries, ch.name)
        except InsufficientPrecision as exc:
            if retries >= max_retries:
                raise InsufficientPrecision(
                    f"order {order} still insufficient after {retries} retries", order * 2) from exc
            retries += 1
            order *= 2


def residue_verdict(params: HamiltonianParams, level: int, chart: str = "auto",
                    order: int = 12) -> tuple[Verdict, ResidueRun | None]:
    name = f"residue{level}"
    try:
        run = residue_analysis(params, level, chart, order)
    except (NotApplicable, ValueError) as exc:
        if isinstance(exc, InsufficientPrecision):
            raise
        return Verdict(NOT_APPLICABLE, name, note=str(exc)), None
    ob = run.obstruction
    if ob.nonzero:
        return Verdict(NON_INTEGRABLE, name, (ob,)), run
    return Verdict(INCONCLUSIVE, name, (ob,), note="all residues vanish"), run


# ---------------------------------------------------------------------------
# quartic classes and the case table
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class QuarticClass:
    name: str  # V0 ... V6 or NoMatch
    case: str | None  # c.0 ... c.10
    scale: Fraction | None = None
    alpha: Fraction | None = None
    pattern: tuple[Fraction, Fraction, Fraction] | None = None


# (E, F, G) patterns: V = E z^4 + F r^2 z^2 + G r^4
_PATTERNS = [
    ("V1", "c.1", [(1, 0, 0)]),
    ("V1", "c.2", [(0, 0, 1)]),
    ("V2", "c.3", [(1, 2, 1)]),
    ("V3", "c.4", [(1, 6, 1)]),
    ("V5", "c.7", [(1, 3, 16), (1, 12, 16)]),
    ("V5", "c.8", [(16, 3, 1), (16, 12, 1)]),
    ("V6", "c.9", [(1, 6, 8)]),
    ("V6", "c.10", [(8, 6, 1)]),
]


def _proportional(v, pattern) -> Fraction | None:
    k = None
    for a, b in zip(v, pattern):
        if b == 0:
            if a != 0:
                return None
            continue
        r = Fraction(a) / b
        if k is None:
            k = r
        elif r != k:
            return None
    return k if k is not None and k > 0 else None


def classify_quartic(params: HamiltonianParams) -> QuarticClass:
    """Match (E, F, G) against the integrable quartic patterns up to a positive scale."""
    vals = []
    for n in ("E", "F", "G"):
        v = getattr(params, n)
        if not is_constant(v):
            raise ValueError("classify_quartic needs explicit E, F, G")
        vals.append(to_fraction(v))
    E, F, G = vals
    if E == F == G == 0:
        return QuarticClass("V0", "c.0", pattern=(Fraction(0),) * 3)
    for name, case, patterns in _PATTERNS:
        for pat in patterns:
            k = _proportional(vals, pat)
            if k is not None:
                return QuarticClass(name, case, k, None, tuple(Fraction(x) for x in pat))
    # V4 = z^4 + alpha r^4 / 4 and its mirror; the first reading wins when both apply
    if F == 0 and E > 0 and G != 0:
        return QuarticClass("V4", "c.5", E, 4 * G / E, (Fraction(1), Fraction(0), G / E))
    if F == 0 and G > 0 and E != 0:
        return QuarticClass("V4", "c.6", G, 4 * E / G, (E / G, Fraction(0), Fraction(1)))
    return QuarticClass("NoMatch", None)


Condition = Callable[[dict], "Fraction | None"]
R13, R2, R163 = Fraction(1, 3), Fraction(2), Fraction(16, 3)


def _ratio_outside(excluded) -> Condition:
    def check(v):
        if v["D"] == 0:
            return None
        r = v["C"] / v["D"]
        if r in excluded:
            return None
        w = Fraction(1)
        for s in excluded:
            w *= r - s
        return w
    return check


def _ratio_is(target, *conds) -> Condition:
    """D != 0, C/D = target, then every condition (a witness function) nonzero."""
    def check(v):
        if v["D"] == 0 or v["C"] / v["D"] != target:
            return None
        w = Fraction(1)
        for c in conds:
            x = c(v)
            if x is None or x == 0:
                return None
            w *= x
        return w
    return check


def _d_nonzero(v):
    return v["D"] if v["D"] != 0 else None


def _d_c_zero(*conds) -> Condition:
    def check(v):
        if v["D"] != 0 or v["C"] != 0:
            return None
        w = Fraction(1)
        for c in conds:
            x = c(v)
            if x == 0:
                return None
            w *= x
        return w
    return check


def _eq(expr) -> Condition:
    """Guard that holds when expr(v) == 0; contributes a unit factor."""
    return lambda v: Fraction(1) if expr(v) == 0 else None


def _ne_AB(v):
    return v["A"] - v["B"]


def _ne_16A_5B(v):
    return 16 * v["A"] - 5 * v["B"]


_on_16A_5B = _eq(lambda v: 16 * v["A"] - 5 * v["B"])
_on_AB = _eq(lambda v: v["A"] - v["B"])

CASE_TABLE: dict[str, list[tuple[str, Condition, str]]] = {
    "c.0": [
        ("c.01", _ratio_outside((R13, R2, R163)), "D != 0, C/D not in {1/3, 2, 16/3}"),
        ("c.02", _ratio_is(R13, _ne_AB), "D != 0, C/D = 1/3, A != B"),
        ("c.03", _ratio_is(R163, _ne_16A_5B), "D != 0, C/D = 16/3, 16A != 5B"),
    ],
    "c.1": [("c.1", _d_nonzero, "D != 0")],
    "c.2": [("c.2", _d_nonzero, "D != 0")],
    "c.3": [
        ("c.31", _ratio_outside((R13, R2, R163)), "D != 0, C/D not in {1/3, 2, 16/3}"),
        ("c.32", _ratio_is(R13, _ne_AB), "D != 0, C/D = 1/3, A != B"),
        ("c.33", _ratio_is(R13, _on_AB, lambda v: v["A"], lambda v: 4 * v["A"] - 15 * v["D"] ** 2),
         "D != 0, C/D = 1/3, A = B, A != 0 and 4A != 15D^2"),
        ("c.34", _ratio_is(R2, lambda v: v["D"] ** 2 - (v["B"] - 2 * v["A"])),
         "D != 0, C/D = 2, D^2 != B - 2A"),
        ("c.35", _ratio_is(R163, _ne_16A_5B), "D != 0, C/D = 16/3, 16A != 5B"),
        ("c.36", _ratio_is(R163, _on_16A_5B, lambda v: 20 * v["A"] + 63 * v["D"] ** 2),
         "D != 0, C/D = 16/3, 16A = 5B, 20A != -63D^2"),
    ],
    "c.4": [
        ("c.41", _ratio_outside((R13, R2, R163)), "D != 0, C/D not in {1/3, 2, 16/3}"),
        ("c.42", _ratio_is(R13, _ne_AB), "D != 0, C/D = 1/3, A != B"),
        ("c.43", _ratio_is(R2, lambda v: v["D"] ** 2 - (v["B"] - 2 * v["A"])),
         "D != 0, C/D = 2, D^2 != B - 2A"),
        ("c.44", _ratio_is(R163, _ne_16A_5B), "D != 0, C/D = 16/3, 16A != 5B"),
        ("c.45", _ratio_is(R163, _on_16A_5B, lambda v: 20 * v["A"] + 63 * v["D"] ** 2),
         "D != 0, C/D = 16/3, 16A = 5B, 20A != -63D^2"),
    ],
    "c.5": [("c.5", _d_nonzero, "D != 0")],
    "c.6": [("c.6", _d_nonzero, "D != 0")],
    "c.7": [
        ("c.71", _ratio_outside((R13, R163)), "D != 0, C/D not in {1/3, 16/3}"),
        ("c.72", _ratio_is(R13, _ne_AB), "D != 0, C/D = 1/3, A != B"),
        ("c.73", _ratio_is(R163, _ne_16A_5B), "D != 0, C/D = 16/3, 16A != 5B"),
        ("c.74", _ratio_is(R163, _on_16A_5B, lambda v: 16 * v["A"] + 15 * v["D"] ** 2),
         "D != 0, C/D = 16/3, 16A = 5B, 16A != -15D^2"),
        ("c.75", _d_c_zero(lambda v: v["A"] - 4 * v["B"]), "D = 0, C = 0, A != 4B"),
    ],
    "c.8": [
        ("c.81", _ratio_outside((R13, R2, R163)), "D != 0, C/D not in {1/3, 2, 16/3}"),
        ("c.82", _ratio_is(R13, _ne_AB), "D != 0, C/D = 1/3, A != B"),
        ("c.83", _ratio_is(R13, _on_AB, lambda v: 8 * v["A"] - 5 * v["D"] ** 2),
         "D != 0, C/D = 1/3, A = B, 8A != 5D^2"),
        ("c.84", _ratio_is(R2, lambda v: v["B"] - 4 * v["A"]), "D != 0, C/D = 2, B != 4A"),
        ("c.85", _ratio_is(R163, _ne_16A_5B), "D != 0, C/D = 16/3, 16A != 5B"),
        ("c.86", _ratio_is(R163, _on_16A_5B, lambda v: 16 * v["A"] + 15 * v["D"] ** 2),
         "D != 0, C/D = 16/3, 16A = 5B, 16A != -15D^2"),
        ("c.87", _d_c_zero(lambda v: v["A"], lambda v: v["A"] - 3 * v["B"]),
         "D = 0, C = 0, A != 0 and A != 3B"),
    ],
    "c.9": [
        ("c.91", _d_nonzero, "D != 0"),
        ("c.92", _d_c_zero(lambda v: v["A"] - 4 * v["B"]), "D = 0, C = 0, A != 4B"),
    ],
    "c.10": [
        ("c.101", _d_nonzero, "D != 0"),
        ("c.102", _d_c_zero(lambda v: 4 * v["A"] - v["B"]), "D = 0, C = 0, 4A != B"),
    ],
}

# sub-cases whose printed inequality disagrees with the logarithm computed here
LOG_LOCUS_CASES = ("c.03", "c.35", "c.44", "c.73", "c.85")


def theorem_evaluator(params: HamiltonianParams) -> Verdict:
    """Decision tree: separable, then (a), (b), then the case table of the quartic class."""
    if not params.is_explicit():
        raise ValueError("the case analysis needs explicit rational A..G")
    if params.separable:
        return Verdict(SEPARABLE, "separable", note="D = 0 and F = 0: the variables separate")
    rp = resonance_parameter(params)
    v = branching_test(rp)
    if v.non_integrable:
        return v
    v = denominator_gate(rp)
    if v.non_integrable:
        return v
    cls = classify_quartic(params)
    if cls.case is None:
        return Verdict(INCONCLUSIVE, OUTSIDE_THEOREM, note="quartic part matches no listed class")
    vals = {n: to_fraction(getattr(params, n)) for n in ("A", "B", "C", "D", "E", "F", "G")}
    rows = CASE_TABLE[cls.case]
    for sub, check, text in rows:
        w = check(vals)
        if w is not None and w != 0:
            ob = Obstruction("condition", w, detail=text)
            return Verdict(NON_INTEGRABLE, sub, (ob,), note=f"{cls.name} class")
    if vals["D"] == 0 and vals["C"] != 0:
        return Verdict(INCONCLUSIVE, OUTSIDE_THEOREM,
                       note=f"{cls.name} class with D = 0, C != 0 is not covered")
    return Verdict(INCONCLUSIVE, cls.case, note=f"{cls.name} class: no listed condition holds")
