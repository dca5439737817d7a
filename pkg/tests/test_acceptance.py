"""Acceptance checks, one printed PASS/FAIL line per criterion.

Each test states its criterion number; the line is written straight to the
terminal so it shows up under ``pytest -v`` as well.
"""

import random
from fractions import Fraction as Fr
from itertools import product

import pytest
import sympy

from hamint import algebra as al
from hamint.algebra import LogSeries, PuiseuxSeries
from hamint.obstructions import (
    INCONCLUSIVE,
    NON_INTEGRABLE,
    SEPARABLE,
    commutator,
    denominator_gate,
    families_commute,
    galois_local_classify,
    log_obstruction_test,
    Verdict,
    residue_analysis,
    resonance_parameter,
    theorem_evaluator,
)
from hamint.ode import (
    FrobeniusSolution,
    churchill_invariants,
    frobenius_solve,
    indicial_at_infinity,
    indicial_finite_simple_root,
)
from hamint.report import reference_discrepancies
from hamint.variational import (
    HamiltonianParams,
    build_ve1_infinity,
    build_ve1_z,
    make_chart,
    weierstrass_form,
    weierstrass_series,
)

S = al.scalar


@pytest.fixture
def verdict_line(capsys):
    def emit(n, ok, detail=""):
        with capsys.disabled():
            print(f"\n[criterion {n:>2}] {'PASS' if ok else 'FAIL'}  {detail}")
        assert ok, detail
    return emit


def _series_ok(sol, expected):
    return all(sol.body.s0.coefficient(e) == S(c) for e, c in expected.items())


# 1 -------------------------------------------------------------------------

def test_criterion_01_indicial_data(verdict_line):
    P = HamiltonianParams.from_values(A=al.A, B=al.B, C=al.C, D=al.D, E=1, F=2, G=al.G)
    ve_r, ve_z = build_ve1_z(P)
    finite = [indicial_finite_simple_root(ode).roots for ode in (ve_r, ve_z)]
    inf = indicial_at_infinity(ve_r).roots
    ok = all(set(r) == {Fr(0), Fr(1, 2)} for r in finite) and set(inf) == {Fr(2), Fr(-1)}
    verdict_line(1, ok, f"finite {finite[0]}, {finite[1]}; infinity {inf} for (E, F) = (1, 2)")


# 2 -------------------------------------------------------------------------

def test_criterion_02_churchill_invariants(verdict_line):
    P = HamiltonianParams.from_values(A=al.A, B=al.B, C=al.C, D=al.D, E=1,
                                      F=(al.p ** 2 - 1) / 4, G=al.G)
    ve_r = build_ve1_z(P)[0]
    inv = churchill_invariants(ve_r)
    finite = [(loc, ci) for loc, ci in inv.items() if loc.kind == "roots"]
    infinity = [ci for loc, ci in inv.items() if loc.kind == "infinity"]
    ok_f = (len(finite) == 1 and finite[0][0].count == 4
            and (finite[0][1].a, finite[0][1].b, finite[0][1].delta) == (S(Fr(1, 2)), S(0), Fr(1, 2))
            and finite[0][1].trace.kind == "zero")
    ci = infinity[0]
    ok_i = ci.a == S(2) and ci.b == (1 - al.p ** 2) / 4 and ci.delta == al.p
    verdict_line(2, ok_f and ok_i,
                 f"finite x{finite[0][0].count}: (1/2, 0, 1/2, {finite[0][1].trace}); "
                 f"infinity: a={al.format_scalar(ci.a)}, b={al.format_scalar(ci.b)}, t={ci.trace}")


# 3 -------------------------------------------------------------------------

def test_criterion_03_denominator_gate(verdict_line):
    results = {}
    for pv in (Fr(1, 4), Fr(1), Fr(2), Fr(1, 2), Fr(5, 3)):
        P = HamiltonianParams.from_values(A=1, B=2, C=1, D=1, E=1, F=(pv * pv - 1) / 4)
        results[pv] = denominator_gate(resonance_parameter(P))
    th = theorem_evaluator(HamiltonianParams.from_values(A=1, B=2, C=1, D=1, E=1,
                                                         F=Fr(1, 16 * 4) - Fr(1, 4)))
    ok = (results[Fr(1, 4)].outcome == NON_INTEGRABLE and results[Fr(1, 4)].case == "b"
          and all(results[p].outcome == INCONCLUSIVE for p in results if p != Fr(1, 4))
          and (th.outcome, th.case) == (NON_INTEGRABLE, "b"))
    verdict_line(3, ok, ", ".join(f"p={p}: {v.outcome}" for p, v in results.items()))


# 4 -------------------------------------------------------------------------

def test_criterion_04_frobenius_reproduction(verdict_line):
    P = HamiltonianParams.from_values(A=al.A, B=al.B, C=1, D=3)
    ve_r, ve_z = build_ve1_infinity(P)
    A, B = al.A, al.B
    s_hi, s_lo = frobenius_solve(ve_r, 12)
    t_hi, t_lo = frobenius_solve(ve_z, 12)
    exps = {s_hi.exponent, s_lo.exponent} == {Fr(2), Fr(-3, 2)}
    first = (s_lo.body.s0.coefficient(Fr(-1, 2)) == -2 * A / 5 + 9 * B / 10
             and s_hi.body.s0.coefficient(Fr(3)) == 2 * A / 9 - 8 * B / 9)
    second_z = (t_lo.body.s0.coefficient(Fr(-1, 2)) == B / 2
                and t_lo.body.s0.coefficient(Fr(1, 2)) == -B ** 2 / 8
                and t_hi.body.s0.coefficient(Fr(3)) == -2 * B / 3
                and t_hi.body.s0.coefficient(Fr(4)) == 16 * B ** 2 / 33)
    resid = [ode.residual(sol.body) for ode, pair in ((ve_r, (s_hi, s_lo)), (ve_z, (t_hi, t_lo)))
             for sol in pair]
    backsub = all(r.s0.is_zero() and r.s1.is_zero() for r in resid)
    resolved = s_lo.body.s0.coefficient(Fr(1, 2))
    ok = exps and first and second_z and backsub and resolved == (
        2 * A ** 2 / 15 - A * B / 3 + 3 * B ** 2 / 40)
    verdict_line(4, ok, f"second-order coefficient of the x^(-3/2) branch resolves to "
                        f"{al.format_scalar(resolved)} (B^2, not B); back-substitution zero to order 12")


# 5 -------------------------------------------------------------------------

def test_criterion_05_log_obstruction(verdict_line):
    P = HamiltonianParams.from_values(A=al.A, B=al.B, C=16, D=3)
    ve_r = build_ve1_infinity(P)[0]
    ob, (s1, s2) = log_obstruction_test(ve_r, 12)
    exps = (s1.exponent, s2.exponent) == (Fr(3, 4), Fr(-1, 4))
    factors = [f for f, _ in ob.locus()]
    expected = al.RING(16 * sympy.Symbol("A") - 5 * sympy.Symbol("B"))
    on_line = al.substitute(ob.value, {"A": Fr(5, 16) * al.B})
    ok = exps and factors == [expected] and not on_line
    verdict_line(5, ok, f"exponents {s1.exponent}, {s2.exponent}; computed logarithm "
                        f"{al.format_scalar(ob.value)}, locus {[str(f.as_expr()) for f in factors]}; "
                        f"at 16A = 5B it is {al.format_scalar(on_line)}")


# 6 -------------------------------------------------------------------------

_INTERP_POINTS = [(Fr(a), Fr(b, 3)) for a, b in product((-2, -1, 1, 2, 3), (-4, -1, 1, 2, 5))]


def _fit_degree4(points, values):
    """Exact least-squares fit in A, B of total degree <= 4; ``holds`` when it interpolates every point."""
    monos = [(i, j) for i in range(5) for j in range(5 - i)]
    M = sympy.Matrix([[sympy.Rational(a) ** i * sympy.Rational(b) ** j for i, j in monos]
                      for a, b in points])
    rhs = sympy.Matrix([v.as_expr() for v in values])
    coeffs = (M.T * M).LUsolve(M.T * rhs)
    poly = sum(c * sympy.Symbol("A") ** i * sympy.Symbol("B") ** j for c, (i, j) in zip(coeffs, monos))
    holds = all(sympy.simplify(poly.subs({"A": a, "B": b}) - v.as_expr()) == 0
                for (a, b), v in zip(points, values))
    return sympy.expand(poly), holds


def test_criterion_06_level2_residue(verdict_line):
    P = HamiltonianParams.from_values(A=al.A, B=al.B, C=1, D=3)
    run = residue_analysis(P, 2, "x", 12)
    entries = run.obstruction.entries
    on_lines = all(not al.substitute(e.value, {"A": al.B}) and not al.substitute(e.value, {"B": 0})
                   for e in entries)
    per_point = []
    for a, b in _INTERP_POINTS:
        r = residue_analysis(P.subs({"A": a, "B": b}), 2, "x", 6)
        per_point.append([e.value for e in r.obstruction.entries])
    oracle = True
    for k, e in enumerate(entries):
        fit, holds = _fit_degree4(_INTERP_POINTS, [vals[k] for vals in per_point])
        oracle &= holds and sympy.simplify(fit - e.value.as_expr()) == 0
    disc = reference_discrepancies(P, {"residue2": Verdict(INCONCLUSIVE, "residue2", (run.obstruction,))})
    ok = on_lines and oracle and len(disc) == 1
    verdict_line(6, ok, f"{len(entries)} residues, witness {run.obstruction.value_text()}; "
                        f"interpolation over {len(_INTERP_POINTS)} points agrees; "
                        f"reference mismatch reported: {disc[0]['reference'] if disc else 'none'}")


# 7 -------------------------------------------------------------------------

def test_criterion_07_weierstrass_third_variation(verdict_line):
    P = HamiltonianParams.from_values(A=al.A, C=1, D=3)
    chart = make_chart(P, "t", 8)
    (r1, r2), (z1, z2) = chart.solutions(P)
    A, h = al.A, al.h
    shapes = (_series_ok(r1, {4: 1, 6: -A / 9}) and _series_ok(r2, {-3: 1, -1: A / 5})
              and _series_ok(z1, {4: 1, 10: h / 364}) and _series_ok(z2, {-3: 1, 3: -h / 28}))
    form = weierstrass_form(P)
    wp = weierstrass_series(form.g2, form.g3, 12).series
    sign_oracle = wp.derivative().scale(Fr(-1, 2)).agrees_with(z2.body.s0.truncate(wp.order - 3))
    lvl2 = residue_analysis(P, 2, "t", 8).obstruction
    lvl3 = residue_analysis(P, 3, "t", 8).obstruction
    designated = [e for e in lvl3.entries if e.choice == (2, 1) and e.row == 2][0]
    ok = (shapes and sign_oracle and not any(e.value for e in lvl2.entries)
          and designated.value == A / 343 and not al.substitute(designated.value, {"A": 0}))
    verdict_line(7, ok, f"t^4 - (A/9)t^6, t^-3 + (A/5)t^-1, t^-3 - (h/28)t^3 (sign fixed by wp'); "
                        f"level 2 all zero; {designated.label} = {al.format_scalar(designated.value)}")


# 8 -------------------------------------------------------------------------

def test_criterion_08_weierstrass_identity(verdict_line):
    g2, g3 = al.C, al.D  # two free symbols stand in for the invariants
    ws = weierstrass_series(g2, g3, 26)
    defect = ws.identity_defect()
    ok = defect.order >= 20 and defect.is_zero()
    verdict_line(8, ok, f"(wp')^2 - 4wp^3 + g2 wp + g3 = O(t^{defect.order}) with symbolic g2, g3")


# 9 -------------------------------------------------------------------------

def test_criterion_09_galois_commutator(verdict_line):
    P = HamiltonianParams.from_values(A=al.A, B=al.B, C=16, D=3)
    ve_r = build_ve1_infinity(P)[0]
    _, (s1, s2) = log_obstruction_test(ve_r, 12)
    log_family = galois_local_classify(s1, s2)
    exps = indicial_finite_simple_root(build_ve1_z(P)[0]).roots
    finite = galois_local_classify(
        *(FrobeniusSolution(e, LogSeries(PuiseuxSeries({e: al.ONE}, e + 4))) for e in exps))
    com = commutator(log_family, finite)
    nontrivial = any(e for row in com for e in row)
    on_locus = [e.as_expr().subs(sympy.Symbol("A"), sympy.Symbol("B") / 16) for row in com for e in row]
    ok = (log_family.kind == "lower_triangular" and finite.kind == "additive" and nontrivial
          and not families_commute(log_family, finite)
          and all(sympy.simplify(e) == 0 for e in on_locus))
    verdict_line(9, ok, f"[log family, (1, 0; mu, 1)] has entry {com[1][0].as_expr()}; "
                        f"commutes once the logarithm vanishes")


# 10 ------------------------------------------------------------------------

_GRID_VALUES = [Fr(0), Fr(1), Fr(-1), Fr(2), Fr(1, 3), Fr(3), Fr(16), Fr(5, 2), Fr(12), Fr(6), Fr(8)]

_FIXTURES = [
    # (A, B, C, D, E, F, G) -> (outcome, case)
    ((1, 2, 1, 3, 0, 0, 0), NON_INTEGRABLE, "c.02"),
    ((1, 1, 2, 1, 1, 2, 1), NON_INTEGRABLE, "c.34"),
    ((1, 2, 1, 1, 1, 12, 16), NON_INTEGRABLE, "c.71"),
    ((1, 2, 1, 1, 16, 12, 1), NON_INTEGRABLE, "c.81"),
    ((1, 2, 0, 1, 1, 6, 8), NON_INTEGRABLE, "c.91"),
    ((1, 1, 1, 3, 0, 0, 0), INCONCLUSIVE, "c.0"),
    ((0, 0, 1, 3, 1, 2, 1), INCONCLUSIVE, "c.3"),
    ((1, 1, 1, 3, 1, 6, 1), INCONCLUSIVE, "c.4"),
    ((1, 1, 1, 3, 1, 12, 16), INCONCLUSIVE, "c.7"),
    ((Fr(45, 8), Fr(45, 8), 1, 3, 16, 12, 1), INCONCLUSIVE, "c.8"),
    ((4, 1, 0, 0, 1, 6, 8), INCONCLUSIVE, "c.9"),
    ((1, 4, 0, 0, 8, 6, 1), INCONCLUSIVE, "c.10"),
]


def test_criterion_10_theorem_totality(verdict_line):
    rng = random.Random(20261016)
    names = "ABCDEFG"
    seen, separable_ok = 0, True
    for _ in range(200):
        vals = {n: rng.choice(_GRID_VALUES) for n in names}
        v = theorem_evaluator(HamiltonianParams.from_values(**vals))
        seen += v.outcome in (NON_INTEGRABLE, INCONCLUSIVE, SEPARABLE)
        separable_ok &= (v.outcome == SEPARABLE) == (vals["D"] == 0 and vals["F"] == 0)
    fixtures_ok = True
    for vals, outcome, case in _FIXTURES:
        v = theorem_evaluator(HamiltonianParams.from_values(**dict(zip(names, vals))))
        fixtures_ok &= (v.outcome, v.case) == (outcome, case)
    ok = seen == 200 and separable_ok and fixtures_ok
    verdict_line(10, ok, f"{seen}/200 grid verdicts; {len(_FIXTURES)} fixtures; "
                         f"Separable exactly on D = F = 0: {separable_ok}")
