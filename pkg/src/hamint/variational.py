"""Variational equations along the invariant plane r = p_r = 0.

The potential V = Ar^2 + Bz^2 + Cz^3 + Dr^2 z + Ez^4 + Fr^2 z^2 + Gr^4 is even in
r, so r = p_r = 0 is invariant and carries the motion  zdot^2 = -2 q(z)  with
q = Ez^4 + Cz^3 + Bz^2 + h.  Linearizing around it gives two decoupled
equations (VE1); the second and third order terms of the Taylor expansion of
the force field give the inhomogeneous forcings of VE2 and VE3.

Two local charts are supported around a pole of z(t):

* ``"x"``: x = 1/z, where the equations are Fuchsian with rational
  coefficients.  Integrals over time are computed with the weight
  dtau/dx = x^(deg/2 - 2) (Q/c)^(-1/2), Q(x) = x^deg q(1/x), c = Q(0); tau is a
  constant multiple of t, which only rescales the forcing by -1/(2c).
* ``"t"``: the time variable itself, available for a cubic relation (E = 0),
  where z(t) = lam*wp(t) + mu with a Weierstrass function wp.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import factorial
from typing import Callable, Mapping

from .algebra import (
    ONE,
    ZERO,
    FracElement,
    PuiseuxSeries,
    RationalFunction,
    UniPoly,
    h as H_SYMBOL,
    is_constant,
    scalar,
    series_sqrt_inverse,
    substitute,
)
from .ode import LinearODE2, frobenius_series, frobenius_solve, transform_to_infinity

PARAM_NAMES = ("A", "B", "C", "D", "E", "F", "G")


class DependentSolutions(ValueError):
    pass


class ChartUnavailable(ValueError):
    """The requested local chart does not exist for these parameters."""


# ---------------------------------------------------------------------------
# parameters and the invariant plane
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HamiltonianParams:
    A: FracElement
    B: FracElement
    C: FracElement
    D: FracElement
    E: FracElement
    F: FracElement
    G: FracElement
    h: FracElement = field(default_factory=lambda: H_SYMBOL)

    def __post_init__(self):
        for name in PARAM_NAMES + ("h",):
            object.__setattr__(self, name, scalar(getattr(self, name)))

    @classmethod
    def from_values(cls, h="symbolic", **values) -> HamiltonianParams:
        """Missing coefficients default to 0; h defaults to the symbol h."""
        unknown = set(values) - set(PARAM_NAMES)
        if unknown:
            raise TypeError(f"unknown parameters {sorted(unknown)}")
        hv = H_SYMBOL if (h is None or h == "symbolic") else h
        return cls(**{n: values.get(n, 0) for n in PARAM_NAMES}, h=hv)

    @property
    def separable(self) -> bool:
        return not self.D and not self.F

    def is_explicit(self) -> bool:
        return all(is_constant(getattr(self, n)) for n in PARAM_NAMES)

    def values(self) -> dict[str, FracElement]:
        return {n: getattr(self, n) for n in PARAM_NAMES + ("h",)}

    def replace(self, **changes) -> HamiltonianParams:
        vals = self.values()
        vals.update(changes)
        return HamiltonianParams(**vals)

    def subs(self, values: Mapping[str, object]) -> HamiltonianParams:
        return HamiltonianParams(**{k: substitute(v, values) for k, v in self.values().items()})

    def potential_terms(self) -> dict[tuple[int, int], FracElement]:
        """V as {(i, j): coefficient of r^i z^j}."""
        terms = {(2, 0): self.A, (0, 2): self.B, (0, 3): self.C, (2, 1): self.D,
                 (0, 4): self.E, (2, 2): self.F, (4, 0): self.G}
        return {k: v for k, v in terms.items() if v}


@dataclass(frozen=True)
class InvariantPlaneRelation:
    """zdot^2 = -2 q(z) on r = p_r = 0."""

    q: UniPoly
    separable: bool
    squarefree: bool | None

    @property
    def degree(self) -> int:
        return self.q.degree


def build_invariant_plane(params: HamiltonianParams) -> InvariantPlaneRelation:
    q = UniPoly([params.h, ZERO, params.B, params.C, params.E], "z")
    try:
        sf = q.is_squarefree()
    except ZeroDivisionError:
        sf = None
    return InvariantPlaneRelation(q, params.separable, sf)


def potential_derivative(params: HamiltonianParams, n_r: int, n_z: int) -> UniPoly:
    """d^(n_r + n_z) V / dr^n_r dz^n_z restricted to r = 0, as a polynomial in z."""
    coeffs: dict[int, FracElement] = {}
    for (i, j), c in params.potential_terms().items():
        if i != n_r or j < n_z:
            continue
        k = j - n_z
        coeffs[k] = coeffs.get(k, ZERO) + c * (factorial(i) * factorial(j) // factorial(k))
    top = max(coeffs, default=-1)
    return UniPoly([coeffs.get(k, ZERO) for k in range(top + 1)], "z")


@dataclass(frozen=True)
class TimeVE:
    """xi_r'' = -hess_r(z) xi_r  and  xi_z'' = -hess_z(z) xi_z  in time."""

    hess_r: UniPoly
    hess_z: UniPoly


def time_ve(params: HamiltonianParams) -> TimeVE:
    return TimeVE(potential_derivative(params, 2, 0), potential_derivative(params, 0, 2))


def build_ve1_z(params: HamiltonianParams) -> tuple[LinearODE2, LinearODE2]:
    """VE1 with z as independent variable: xi'' + q'/(2q) xi' - (hess/2)/q xi = 0."""
    q = build_invariant_plane(params).q
    c1 = RationalFunction(q.derivative(), q * 2)
    tv = time_ve(params)
    return tuple(
        LinearODE2(c1, RationalFunction(hess * Fraction(-1, 2), q), "z")
        for hess in (tv.hess_r, tv.hess_z)
    )


def build_ve1_infinity(params: HamiltonianParams) -> tuple[LinearODE2, LinearODE2]:
    """VE1 in the chart x = 1/z."""
    return tuple(transform_to_infinity(ode, "x") for ode in build_ve1_z(params))


# ---------------------------------------------------------------------------
# higher variations
# ---------------------------------------------------------------------------

XI_NAMES = ("xi11", "xi12", "xi21", "xi22")
_COMPONENT = {0: "r", 1: "z"}


@dataclass(frozen=True)
class HigherVariationRHS:
    """Forcing of the level-2 or level-3 variational equation.

    ``components[k]`` maps exponent vectors over XI_NAMES (xi11, xi12 are the
    r and z parts of the first variation, xi21, xi22 of the second) to the
    coefficient polynomial in z.
    """

    level: int
    components: tuple[dict[tuple[int, ...], UniPoly], dict[tuple[int, ...], UniPoly]]

    def is_zero(self) -> bool:
        return all(not comp for comp in self.components)

    def evaluate(self, k: int, values: Mapping[str, PuiseuxSeries],
                 coefficient: Callable[[UniPoly], PuiseuxSeries]) -> PuiseuxSeries | None:
        total = None
        for mono, poly in self.components[k].items():
            term = None
            for name, e in zip(XI_NAMES, mono):
                for _ in range(e):
                    term = values[name] if term is None else term * values[name]
            term = term.scale(poly.coeff(0)) if poly.degree <= 0 else term * coefficient(poly)
            total = term if total is None else total + term
        return total

    def format(self, k: int) -> str:
        from .algebra import format_scalar
        parts = []
        for mono, poly in sorted(self.components[k].items()):
            coef = format_scalar(poly.coeff(0)) if poly.degree <= 0 else f"({poly!r})"
            factors = "*".join(
                n if e == 1 else f"{n}^{e}" for n, e in zip(XI_NAMES, mono) if e)
            parts.append(f"{coef}*{factors}")
        return " + ".join(parts) if parts else "0"


def _mono(*names: str) -> tuple[int, ...]:
    return tuple(names.count(n) for n in XI_NAMES)


def hvar_rhs(params: HamiltonianParams, level: int) -> HigherVariationRHS:
    """Taylor forcing of VE2 (level 2) or VE3 (level 3).

    With X = X0 + e X1 + e^2 X2 + e^3 X3 the equation for X_k reads
    X_k'' = -Hess X_k + K_k with
    K_2 = -(1/2) V'''(X1, X1) and K_3 = -V'''(X1, X2) - (1/6) V''''(X1, X1, X1).
    """
    if level not in (2, 3):
        raise ValueError("level must be 2 or 3")
    first = ("xi11", "xi12")
    second = ("xi21", "xi22")
    comps = []
    for k in (0, 1):
        acc: dict[tuple[int, ...], UniPoly] = {}

        def add(mono, poly):
            if poly.is_zero():
                return
            total = acc.get(mono, UniPoly([], "z")) + poly
            if total.is_zero():
                acc.pop(mono, None)
            else:
                acc[mono] = total

        if level == 2:
            for i, j in product((0, 1), repeat=2):
                d = _derivative_by_index(params, (k, i, j))
                add(_mono(first[i], first[j]), d * Fraction(-1, 2))
        else:
            for i, j in product((0, 1), repeat=2):
                d = _derivative_by_index(params, (k, i, j))
                add(_mono(first[i], second[j]), d * -1)
            for i, j, l in product((0, 1), repeat=3):
                d = _derivative_by_index(params, (k, i, j, l))
                add(_mono(first[i], first[j], first[l]), d * Fraction(-1, 6))
        comps.append(acc)
    return HigherVariationRHS(level, (comps[0], comps[1]))


def _derivative_by_index(params: HamiltonianParams, idx: tuple[int, ...]) -> UniPoly:
    n_z = sum(idx)
    return potential_derivative(params, len(idx) - n_z, n_z)


# ---------------------------------------------------------------------------
# Weierstrass functions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class WeierstrassSeries:
    g2: FracElement
    g3: FracElement
    series: PuiseuxSeries

    def identity_defect(self) -> PuiseuxSeries:
        """(wp')^2 - 4 wp^3 + g2 wp + g3; vanishes below its truncation order."""
        wp = self.series
        d = wp.derivative()
        return d * d - wp * wp * wp * 4 + wp.scale(self.g2) + self.g3


def weierstrass_series(g2, g3, order: int, var: str = "t") -> WeierstrassSeries:
    """Laurent expansion of wp(t; g2, g3) at t = 0, exact below t^order.

    wp = t^-2 + sum_{k>=2} c_k t^(2k-2), c_2 = g2/20, c_3 = g3/28 and
    c_k = 3/((2k+1)(k-3)) * sum_{m=2}^{k-2} c_m c_{k-m}.
    """
    if order < 4:
        raise ValueError("order must be at least 4")
    g2, g3 = scalar(g2), scalar(g3)
    kmax = (order + 1) // 2 + 1
    c = {2: g2 / 20, 3: g3 / 28}
    for k in range(4, kmax + 1):
        s = ZERO
        for m in range(2, k - 1):
            s += c[m] * c[k - m]
        c[k] = s * Fraction(3, (2 * k + 1) * (k - 3))
    terms = {Fraction(-2): ONE}
    for k, ck in c.items():
        if 2 * k - 2 < order and ck:
            terms[Fraction(2 * k - 2)] = ck
    return WeierstrassSeries(g2, g3, PuiseuxSeries(terms, order, var))


@dataclass(frozen=True)
class WeierstrassForm:
    """z = lam*wp(t; g2, g3) + mu solves zdot^2 = -2(C z^3 + B z^2 + h)."""

    lam: FracElement
    mu: FracElement
    g2: FracElement
    g3: FracElement


def weierstrass_form(params: HamiltonianParams) -> WeierstrassForm:
    """Match the cubic relation to (wp')^2 = 4 wp^3 - g2 wp - g3 coefficient by coefficient."""
    if params.E or not params.C:
        raise ChartUnavailable("a Weierstrass form needs E = 0 and C != 0")
    C, B, h = params.C, params.B, params.h
    lam = -2 / C
    mu = -B / (3 * C)
    g2 = 2 * (3 * C * mu**2 + 2 * B * mu) / lam
    g3 = 2 * (C * mu**3 + B * mu**2 + h) / lam**2
    return WeierstrassForm(lam, mu, g2, g3)


# ---------------------------------------------------------------------------
# local charts at a pole of z(t)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Chart:
    """Local coordinate at a pole of z(t) with everything needed for time integrals.

    ``z`` is z as a series in ``var``; ``weight`` is dtau/d(var); the
    variational equations in tau are  xi_tau_tau = -scale*hess(z) xi + scale*K.
    """

    name: str
    var: str
    z: PuiseuxSeries
    weight: PuiseuxSeries
    scale: FracElement
    order: int

    def coefficient(self, poly: UniPoly) -> PuiseuxSeries:
        return poly(self.z) if poly.degree > 0 else PuiseuxSeries.monomial(
            poly.coeff(0), 0, self.z.order - self.z.valuation, self.var)

    def d_tau(self, s: PuiseuxSeries) -> PuiseuxSeries:
        return s.derivative() / self.weight

    def integrate(self, s: PuiseuxSeries) -> tuple[PuiseuxSeries, FracElement]:
        """Antiderivative in tau and the residue that obstructs it."""
        return (s * self.weight).integrate()

    def solutions(self, params: HamiltonianParams):
        """Local VE1 solution pairs (r block, z block), larger exponent first."""
        if self.name == "x":
            return tuple(frobenius_solve(ode, self.order) for ode in build_ve1_infinity(params))
        tv = time_ve(params)
        out = []
        for hess in (tv.hess_r, tv.hess_z):
            q = self.coefficient(hess).shift(2)
            p = PuiseuxSeries({}, q.order, self.var)
            out.append(frobenius_series(p, q, self.order, self.var))
        return tuple(out)


def chart_infinity(params: HamiltonianParams, order: int = 12) -> Chart:
    rel = build_invariant_plane(params)
    deg = rel.degree
    if deg < 3:
        raise ChartUnavailable("z(t) has no pole unless E or C is nonzero")
    Q = rel.q.reverse(deg, "x")
    c = Q.coeff(0)
    extra = order + 4
    w = series_sqrt_inverse(Q * (1 / c), extra, "x").shift(Fraction(deg, 2) - 2)
    z = PuiseuxSeries({Fraction(-1): ONE}, extra, "x")
    return Chart("x", "x", z, w, -1 / (2 * c), order)


def chart_time(params: HamiltonianParams, order: int = 12) -> Chart:
    form = weierstrass_form(params)
    wp = weierstrass_series(form.g2, form.g3, 2 * order + 4).series
    z = wp.scale(form.lam) + form.mu
    one = PuiseuxSeries.monomial(ONE, 0, z.order + 2, "t")
    return Chart("t", "t", z, one, ONE, order)


def make_chart(params: HamiltonianParams, kind: str = "auto", order: int = 12) -> Chart:
    if kind == "auto":
        kind = "t" if (not params.E and params.C and not params.B) else "x"
    if kind == "x":
        return chart_infinity(params, order)
    if kind == "t":
        return chart_time(params, order)
    raise ValueError(f"unknown chart {kind!r}")


# ---------------------------------------------------------------------------
# fundamental matrix
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FundamentalMatrix:
    """Block-diagonal fundamental matrix of VE1 with unit Wronskian blocks.

    ``pairs[0]`` solves the r equation, ``pairs[1]`` the z equation; the first
    entry of a pair is xi^(1), the second xi^(2).  ``wronskians`` are the raw
    values before the second solution was divided by them.
    """

    pairs: tuple[tuple[PuiseuxSeries, PuiseuxSeries], tuple[PuiseuxSeries, PuiseuxSeries]]
    derivatives: tuple[tuple[PuiseuxSeries, PuiseuxSeries], tuple[PuiseuxSeries, PuiseuxSeries]]
    wronskians: tuple[FracElement, FracElement]

    def matrix(self) -> list[list[PuiseuxSeries | None]]:
        (u1, u2), (v1, v2) = self.pairs
        (du1, du2), (dv1, dv2) = self.derivatives
        return [[u1, u2, None, None], [du1, du2, None, None],
                [None, None, v1, v2], [None, None, dv1, dv2]]

    def inverse(self) -> list[list[PuiseuxSeries | None]]:
        (u1, u2), (v1, v2) = self.pairs
        (du1, du2), (dv1, dv2) = self.derivatives
        return [[du2, -u2, None, None], [-du1, u1, None, None],
                [None, None, dv2, -v2], [None, None, -dv1, v1]]

    def apply_inverse(self, f: tuple) -> list[PuiseuxSeries | None]:
        """X^-1 f for f = (0, g1, 0, g2)."""
        g1, g2 = f[1], f[3]
        (u1, u2), (v1, v2) = self.pairs
        return [None if g1 is None else -(u2 * g1), None if g1 is None else u1 * g1,
                None if g2 is None else -(v2 * g2), None if g2 is None else v1 * g2]

    def identity_defect(self) -> list[list[PuiseuxSeries | None]]:
        X, Y = self.matrix(), self.inverse()
        out = []
        for i in range(4):
            row = []
            for j in range(4):
                acc = None
                for k in range(4):
                    if X[i][k] is None or Y[k][j] is None:
                        continue
                    t = X[i][k] * Y[k][j]
                    acc = t if acc is None else acc + t
                if i == j:
                    acc = acc - 1
                row.append(acc)
            out.append(row)
        return out


def wronskian(a: PuiseuxSeries, b: PuiseuxSeries,
              derivation: Callable[[PuiseuxSeries], PuiseuxSeries] | None = None) -> PuiseuxSeries:
    d = derivation or (lambda s: s.derivative())
    return a * d(b) - b * d(a)


def _constant_value(s: PuiseuxSeries) -> FracElement:
    nonconst = {e for e, c in s.terms.items() if c and e != 0}
    if nonconst:
        raise DependentSolutions(f"Wronskian is not constant: {s!r}")
    return s.terms.get(Fraction(0), ZERO)


def fundamental_matrix(sol11, sol12, derivation=None) -> FundamentalMatrix:
    """Assemble X from two solution pairs, rescaling xi^(2) to unit Wronskian."""
    d = derivation or (lambda s: s.derivative())
    pairs, derivs, ws = [], [], []
    for a, b in (sol11, sol12):
        a = getattr(a, "series", lambda: a)() if not isinstance(a, PuiseuxSeries) else a
        b = getattr(b, "series", lambda: b)() if not isinstance(b, PuiseuxSeries) else b
        w = _constant_value(wronskian(a, b, d))
        if not w:
            raise DependentSolutions("zero Wronskian")
        b = b.scale(1 / w)
        pairs.append((a, b))
        derivs.append((d(a), d(b)))
        ws.append(w)
    return FundamentalMatrix(tuple(pairs), tuple(derivs), tuple(ws))
