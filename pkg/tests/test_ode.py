from fractions import Fraction as Fr

import pytest
from hypothesis import given, settings, strategies as st

from hamint import algebra as al
from hamint.algebra import RationalFunction, UniPoly
from hamint.ode import (
    DegenerateIndicial,
    IrregularSingularity,
    LinearODE2,
    RepeatedRoots,
    TraceValue,
    _translate,
    churchill_invariants,
    frobenius_solve,
    indicial_at_infinity,
    indicial_finite_simple_root,
    singular_points,
    transform_to_infinity,
)
from hamint.variational import HamiltonianParams, build_ve1_z

X = UniPoly.gen("x")
S = al.scalar


def bessel(nu):
    """y'' + y'/x + (1 - nu^2/x^2) y = 0."""
    c1 = RationalFunction(UniPoly([1], "x"), X)
    c2 = RationalFunction(X * X - nu * nu, X * X)
    return LinearODE2(c1, c2, "x")


def _zero(logseries):
    return logseries.s0.is_zero() and logseries.s1.is_zero()


# ---------------------------------------------------------------------------
# Frobenius against closed forms
# ---------------------------------------------------------------------------

def test_bessel_j0_coefficients_and_log():
    y1, y2 = frobenius_solve(bessel(0), 8)
    s = y1.series()
    assert [s.coefficient(k) for k in (0, 2, 4, 6)] == [S(c) for c in (1, Fr(-1, 4), Fr(1, 64), Fr(-1, 2304))]
    assert y2.log_obstruction == 1 and y2.resonance == 0


def test_bessel_order_one_has_log():
    y1, y2 = frobenius_solve(bessel(1), 8)
    assert (y1.exponent, y2.exponent) == (1, -1)
    assert y2.log_obstruction == S(Fr(-1, 2))
    assert _zero(bessel(1).residual(y2.body))


def test_bessel_half_order_gap_one_without_log():
    # sin(x)/sqrt(x) and cos(x)/sqrt(x)
    y1, y2 = frobenius_solve(bessel(Fr(1, 2)), 8)
    assert not y2.has_log
    assert y2.series().coefficient(Fr(3, 2)) == S(Fr(-1, 2))
    assert y1.series().coefficient(Fr(5, 2)) == S(Fr(-1, 6))


@given(st.fractions(min_value=0, max_value=3, max_denominator=4))
@settings(max_examples=25, deadline=None)
def test_bessel_back_substitution(nu):
    ode = bessel(nu)
    for sol in frobenius_solve(ode, 8):
        assert _zero(ode.residual(sol.body))


def test_symbolic_back_substitution_to_order_12():
    P = HamiltonianParams.from_values(A=al.A, B=al.B, C=1, D=3)
    for ode in build_ve1_z(P):
        inf = transform_to_infinity(ode, "x")
        for sol in frobenius_solve(inf, 12):
            assert _zero(inf.residual(sol.body))


# ---------------------------------------------------------------------------
# chart change and exponents
# ---------------------------------------------------------------------------

coeffs = st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=3), min_size=1, max_size=3)


@given(coeffs, coeffs, coeffs, coeffs)
@settings(max_examples=40, deadline=None)
def test_chart_change_is_an_involution(n1, d1, n2, d2):
    d1p, d2p = UniPoly(d1, "z"), UniPoly(d2, "z")
    if d1p.is_zero() or d2p.is_zero():
        return
    ode = LinearODE2(RationalFunction(UniPoly(n1, "z"), d1p), RationalFunction(UniPoly(n2, "z"), d2p), "z")
    back = transform_to_infinity(transform_to_infinity(ode, "x"), "z")
    assert back == ode


def test_exponents_at_infinity_two_routes():
    P = HamiltonianParams.from_values(A=al.A, B=al.B, C=al.C, D=al.D, E=1, F=2, G=al.G)
    for ode in build_ve1_z(P):
        via_limit = set(indicial_at_infinity(ode).roots)
        via_chart = {s.exponent for s in frobenius_solve(transform_to_infinity(ode, "x"), 8)}
        assert via_limit == via_chart


def test_generic_singular_structure():
    P = HamiltonianParams.from_values(A=al.A, B=al.B, C=al.C, D=al.D, E=al.E, F=al.F, G=al.G)
    locs = singular_points(build_ve1_z(P)[0])
    assert [loc.kind for loc in locs] == ["roots", "infinity"]
    assert locs[0].count == 4


def test_finite_points_never_log():
    # q = z^4 - 5z^2 + 4 has the rational roots -2, -1, 1, 2
    P = HamiltonianParams.from_values(A=1, B=-5, C=0, D=1, E=1, F=2, h=4)
    ode = build_ve1_z(P)[0]
    pts = [loc for loc in singular_points(ode) if loc.kind == "point"]
    assert [loc.point for loc in pts] == [-2, -1, 1, 2]
    for loc, ci in churchill_invariants(ode).items():
        if loc.kind == "point":
            assert (ci.a, ci.b, ci.delta, ci.trace.kind) == (S(Fr(1, 2)), S(0), Fr(1, 2), "zero")
    for z0 in (-2, 1):
        moved = LinearODE2(
            RationalFunction(_translate(ode.c1.num, z0), _translate(ode.c1.den, z0)),
            RationalFunction(_translate(ode.c2.num, z0), _translate(ode.c2.den, z0)), "z")
        s1, s2 = frobenius_solve(moved, 6)
        assert {s1.exponent, s2.exponent} == {0, Fr(1, 2)}
        assert not s1.has_log and not s2.has_log and s2.log_obstruction == 0


def test_indicial_finite_symbolic():
    P = HamiltonianParams.from_values(A=al.A, B=al.B, C=al.C, D=al.D, E=al.E, F=al.F, G=al.G)
    data = indicial_finite_simple_root(build_ve1_z(P)[1])
    assert data.roots == (Fr(1, 2), 0)
    assert data.location.poly.degree == 4


# ---------------------------------------------------------------------------
# traces
# ---------------------------------------------------------------------------

@given(st.fractions(min_value=-6, max_value=6, max_denominator=12))
def test_trace_is_even_and_two_periodic(r):
    a, b, c = TraceValue.from_delta(r), TraceValue.from_delta(-r), TraceValue.from_delta(r + 2)
    assert a == b == c
    assert (a.exact_value() is not None) == bool(a.is_rational())


@pytest.mark.parametrize("delta, value", [(0, 2), (Fr(1, 3), 1), (Fr(1, 2), 0), (Fr(2, 3), -1),
                                          (1, -2), (Fr(1, 4), None), (Fr(2, 5), None)])
def test_trace_values(delta, value):
    assert TraceValue.from_delta(delta).exact_value() == value


# ---------------------------------------------------------------------------
# refusals
# ---------------------------------------------------------------------------

def test_irregular_point_is_refused():
    ode = LinearODE2(RationalFunction(UniPoly([0], "x")), RationalFunction(UniPoly([1], "x"), X ** 3), "x")
    with pytest.raises(IrregularSingularity):
        frobenius_solve(ode, 4)


def test_irrational_exponents_are_refused():
    ode = LinearODE2(RationalFunction(UniPoly([0], "x")), RationalFunction(UniPoly([-1], "x"), X * X), "x")
    with pytest.raises(DegenerateIndicial):
        frobenius_solve(ode, 4)


def test_repeated_nonlinear_factor_is_refused():
    den = (UniPoly([1, 0, 1], "z")) ** 2
    ode = LinearODE2(RationalFunction(UniPoly([1], "z"), den), RationalFunction(UniPoly([0], "z")), "z")
    with pytest.raises(RepeatedRoots):
        singular_points(ode)
