"""Second-order linear ODEs with rational coefficients.

Equations are written  y'' + c1 y' + c2 y = 0  in a named chart variable.
Everything here is exact: local exponents come from the indicial quadratic,
Frobenius coefficients from the standard recurrence over the parameter field,
and a logarithmic second solution is produced whenever the exponents differ
by an integer and the resonant coefficient does not vanish.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping

import sympy

from .algebra import (
    ONE,
    ZERO,
    FracElement,
    LogSeries,
    PuiseuxSeries,
    RationalFunction,
    UniPoly,
    format_scalar,
    is_constant,
    scalar,
    sqrt_scalar,
    to_fraction,
)


class RepeatedRoots(ValueError):
    """The singular polynomial has a repeated root; the analysis refuses it."""


class FiniteExponentUnknown(ValueError):
    pass


class IrregularSingularity(ValueError):
    pass


class DegenerateIndicial(ValueError):
    """Local exponents are not rational constants, so no Puiseux expansion exists."""


# ---------------------------------------------------------------------------
# data types
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LinearODE2:
    """y'' + c1*y' + c2*y = 0 in ``var``."""

    c1: RationalFunction
    c2: RationalFunction
    var: str = "z"

    def __post_init__(self):
        for name in ("c1", "c2"):
            rf = getattr(self, name)
            if not isinstance(rf, RationalFunction):
                rf = RationalFunction(rf if isinstance(rf, UniPoly) else UniPoly([rf], self.var))
            if rf.var != self.var:
                if rf.num.degree > 0 or rf.den.degree > 0:
                    raise ValueError(f"{name} is in {rf.var}, equation is in {self.var}")
                rf = RationalFunction(rf.num.rename(self.var), rf.den.rename(self.var))
            object.__setattr__(self, name, rf)

    def subs(self, values: Mapping[str, object]) -> LinearODE2:
        return LinearODE2(self.c1.subs(values), self.c2.subs(values), self.var)

    def residual(self, y, order: int | None = None) -> LogSeries:
        """var**2 * (y'' + c1 y' + c2 y) expanded at var = 0.

        Used to check local solutions by back-substitution; the result vanishes
        below ``y.order`` exactly when ``y`` solves the equation there.
        """
        if isinstance(y, PuiseuxSeries):
            y = LogSeries(y)
        v = y.s0.valuation if not y.s0.is_zero() else y.s1.valuation
        n = int(order if order is not None else (y.order - v)) + 2
        P = self.c1.times_power(1).laurent_series(n)
        Q = self.c2.times_power(2).laurent_series(n)
        d1 = y.derivative()
        d2 = d1.derivative()
        return d2.shift(2) + d1.shift(1) * P + y * Q


@dataclass(frozen=True)
class Location:
    """A finite point, the symbolic simple roots of a polynomial, or infinity."""

    kind: str  # "roots" | "point" | "infinity"
    poly: UniPoly | None = None
    point: Fraction | None = None
    multiplicity: int = 1

    @property
    def count(self) -> int:
        return self.poly.degree if self.kind == "roots" else 1

    def label(self) -> str:
        if self.kind == "infinity":
            return "infinity"
        if self.kind == "point":
            return f"{self.poly.var if self.poly is not None else 'z'}={self.point}"
        return f"simple roots of {self.poly!r}"


INFINITY = Location("infinity")


@dataclass(frozen=True)
class IndicialData:
    """Monic indicial quadratic  s^2 + p1*s + p0  and its roots when exact.

    ``roots`` holds two exact values (Fractions when constant, larger first)
    or None; then ``marker`` is "irrational" (constant discriminant that is not
    a rational square) or "non-rational" (symbolic discriminant).
    """

    location: Location
    quadratic: tuple[FracElement, FracElement, FracElement]
    roots: tuple | None
    discriminant: FracElement
    marker: str = "rational"

    def exponent_difference(self):
        if self.roots is None:
            return None
        return self.roots[0] - self.roots[1]


# trace values 2*cos(pi*r) for r reduced into [0, 1]
_RATIONAL_COS = {
    Fraction(0): Fraction(2), Fraction(1, 3): Fraction(1), Fraction(1, 2): Fraction(0),
    Fraction(2, 3): Fraction(-1), Fraction(1): Fraction(-2),
}


@dataclass(frozen=True)
class TraceValue:
    """Local monodromy trace 2*cos(pi*delta)."""

    kind: str  # "zero" | "two_cos_pi" | "two_cos_pi_irrational"
    arg: object = None

    @classmethod
    def from_delta(cls, delta) -> TraceValue:
        if delta is None:
            return cls("two_cos_pi_irrational")
        if isinstance(delta, FracElement) and not is_constant(delta):
            return cls("two_cos_pi", delta)
        r = Fraction(to_fraction(delta) if isinstance(delta, FracElement) else delta)
        r = abs(r) % 2
        if r > 1:
            r = 2 - r
        if r == Fraction(1, 2):
            return cls("zero", r)
        return cls("two_cos_pi", r)

    def is_rational(self) -> bool | None:
        """2cos(pi r) is rational iff the denominator of r is 1, 2 or 3."""
        if self.kind == "zero":
            return True
        if self.kind == "two_cos_pi_irrational" or not isinstance(self.arg, Fraction):
            return None
        return self.arg.denominator <= 3

    def exact_value(self) -> Fraction | None:
        if self.kind == "zero":
            return Fraction(0)
        if isinstance(self.arg, Fraction):
            return _RATIONAL_COS.get(self.arg)
        return None

    def __str__(self):
        if self.kind == "zero":
            return "0"
        if self.kind == "two_cos_pi_irrational":
            return "2cos(pi*Delta), Delta irrational"
        arg = self.arg if isinstance(self.arg, Fraction) else self.arg.as_expr()
        val = self.exact_value()
        return f"2cos(pi*{arg})" + (f" = {val}" if val is not None else "")


@dataclass(frozen=True)
class ChurchillInvariants:
    a: FracElement
    b: FracElement
    delta: object  # Fraction | FracElement | None (not a square)
    delta_squared: FracElement
    trace: TraceValue


@dataclass(frozen=True)
class FrobeniusSolution:
    """x**exponent * (series) [+ log(x) * ...] at x = 0.

    ``log_obstruction`` is the coefficient c in  y = c*y1*log(x) + x**exponent*(...)
    and is zero for log-free solutions; ``resonance`` is the integer exponent
    difference when there is one.
    """

    exponent: Fraction
    body: LogSeries
    log_obstruction: FracElement = field(default_factory=lambda: ZERO)
    resonance: int | None = None

    @property
    def has_log(self) -> bool:
        return not self.body.is_log_free()

    def series(self) -> PuiseuxSeries:
        if self.has_log:
            raise ValueError("solution carries a logarithm")
        return self.body.s0

    def subs(self, values) -> FrobeniusSolution:
        from .algebra import substitute
        return FrobeniusSolution(self.exponent, self.body.subs(values),
                                 substitute(self.log_obstruction, values), self.resonance)


# ---------------------------------------------------------------------------
# singular points and indicial data
# ---------------------------------------------------------------------------

def _lcm(a: UniPoly, b: UniPoly) -> UniPoly:
    if a.is_zero() or b.is_zero():
        return UniPoly([1], a.var)
    return ((a * b) // a.gcd(b)).monic()


def _singular_polynomial(ode: LinearODE2) -> UniPoly:
    return _lcm(ode.c1.den, ode.c2.den)


def _rational_root_split(q: UniPoly) -> tuple[list[tuple[Fraction, int]], UniPoly]:
    """Rational roots (with multiplicity) and the remaining factor of an explicit polynomial."""
    zs = sympy.Symbol(q.var)
    expr = sum(to_fraction(c) * zs**k for k, c in enumerate(q.coeffs))
    poly = sympy.Poly(sympy.nsimplify(expr), zs, domain="QQ")
    _, factors = poly.factor_list()
    roots, rest = [], UniPoly([1], q.var)
    for f, m in factors:
        if f.degree() == 1:
            a1, a0 = f.all_coeffs()
            roots.append((Fraction(str(-a0 / a1)), m))
        else:
            cs = [Fraction(str(c)) for c in reversed(f.all_coeffs())]
            part = UniPoly(cs, q.var)
            if m > 1:
                raise RepeatedRoots(f"factor {part!r} has multiplicity {m}")
            rest = rest * part
    return sorted(roots), rest.monic()


def singular_points(ode: LinearODE2) -> list[Location]:
    """Finite singular points (symbolic simple roots or explicit points) plus infinity."""
    q = _singular_polynomial(ode)
    out: list[Location] = []
    if q.degree > 0:
        explicit = all(is_constant(c) for c in q.coeffs)
        if explicit:
            roots, rest = _rational_root_split(q)
            for r, m in roots:
                out.append(Location("point", UniPoly([-r, 1], q.var), r, m))
            if rest.degree > 0:
                out.append(Location("roots", rest))
        else:
            # a power of var at the origin is split off before the squarefree check
            k = next(i for i, c in enumerate(q.coeffs) if c)
            if k:
                out.append(Location("point", UniPoly([0, 1], q.var), Fraction(0), k))
                q = UniPoly(q.coeffs[k:], q.var)
            if q.degree > 0:
                if not q.is_squarefree():
                    raise RepeatedRoots(f"{q!r} has a repeated root")
                out.append(Location("roots", q))
    if _singular_at_infinity(ode):
        out.append(INFINITY)
    return out


def _singular_at_infinity(ode: LinearODE2) -> bool:
    t = transform_to_infinity(ode)
    return any(not rf.is_zero() and rf.order_at_zero() < 0 for rf in (t.c1, t.c2))


def solve_indicial(p1: FracElement, p0: FracElement) -> tuple[tuple | None, FracElement, str]:
    """Roots of s^2 + p1 s + p0 when the discriminant is an exact square."""
    disc = p1 * p1 - 4 * p0
    root = sqrt_scalar(disc)
    if root is None:
        return None, disc, "irrational" if is_constant(disc) else "non-rational"
    r1, r2 = (-p1 + root) / 2, (-p1 - root) / 2
    if is_constant(r1) and is_constant(r2):
        f1, f2 = to_fraction(r1), to_fraction(r2)
        return (max(f1, f2), min(f1, f2)), disc, "rational"
    return (r1, r2), disc, "symbolic"


def _structural_finite_ab(ode: LinearODE2) -> tuple[UniPoly, FracElement, FracElement]:
    q = _singular_polynomial(ode)
    if q.degree <= 0:
        raise FiniteExponentUnknown("no finite singular points")
    if not q.is_squarefree():
        raise FiniteExponentUnknown("singular polynomial is not squarefree")
    # residue of c1 at every root of q is N1*(q/den1)/q' mod q when q is squarefree
    num1 = ode.c1.num * (q // ode.c1.den)
    a_poly = (num1 * q.derivative().invmod(q)) % q
    if a_poly.degree > 0:
        raise FiniteExponentUnknown("c1 has different residues at different roots")
    return q, a_poly.coeff(0), ZERO


def indicial_finite_simple_root(ode: LinearODE2) -> IndicialData:
    """Exponents shared by all simple roots of the singular polynomial."""
    q, a, b = _structural_finite_ab(ode)
    p1, p0 = a - 1, b
    roots, disc, marker = solve_indicial(p1, p0)
    return IndicialData(Location("roots", q), (ONE, p1, p0), roots, disc, marker)


def _infinity_ab(ode: LinearODE2) -> tuple[FracElement, FracElement]:
    try:
        a = ode.c1.limit_scaled_at_infinity(1)
        b = ode.c2.limit_scaled_at_infinity(2)
    except ValueError as exc:
        raise IrregularSingularity("equation is not Fuchsian at infinity") from exc
    return a, b


def indicial_at_infinity(ode: LinearODE2) -> IndicialData:
    """Exponents at infinity in the chart x = 1/z: s(s-1) + (2 - a)s + b = 0."""
    a, b = _infinity_ab(ode)
    p1, p0 = 1 - a, b
    roots, disc, marker = solve_indicial(p1, p0)
    return IndicialData(INFINITY, (ONE, p1, p0), roots, disc, marker)


def _translate(poly: UniPoly, z0) -> UniPoly:
    shift = UniPoly([z0, 1], poly.var)
    acc = UniPoly([], poly.var)
    for c in reversed(poly.coeffs):
        acc = acc * shift + c
    return acc


def _point_ab(ode: LinearODE2, z0: Fraction) -> tuple[FracElement, FracElement]:
    out = []
    for rf, k in ((ode.c1, 1), (ode.c2, 2)):
        moved = RationalFunction(_translate(rf.num, z0), _translate(rf.den, z0))
        if moved.is_zero():
            out.append(ZERO)
            continue
        v = moved.order_at_zero()
        if v < -k:
            raise IrregularSingularity(f"pole of order {-v} in c{k} at {z0}")
        out.append(moved.times_power(k).laurent_series(1).coefficient(0))
    return out[0], out[1]


def _invariants(a: FracElement, b: FracElement) -> ChurchillInvariants:
    d2 = (1 - a) ** 2 - 4 * b
    root = sqrt_scalar(d2)
    if root is not None and is_constant(root):
        delta = abs(to_fraction(root))
    else:
        delta = root
    return ChurchillInvariants(a, b, delta, d2, TraceValue.from_delta(delta))


def churchill_invariants(ode: LinearODE2) -> dict[Location, ChurchillInvariants]:
    """(a, b, Delta, t) at every finite singular point and at infinity."""
    out: dict[Location, ChurchillInvariants] = {}
    for loc in singular_points(ode):
        if loc.kind == "roots":
            a, b = _roots_ab(ode, loc.poly)
        elif loc.kind == "point":
            a, b = _point_ab(ode, loc.point)
        else:
            a, b = _infinity_ab(ode)
        out[loc] = _invariants(a, b)
    return out


def _roots_ab(ode: LinearODE2, q: UniPoly) -> tuple[FracElement, FracElement]:
    """Local (a, b) shared by all roots of a squarefree factor q of the singular polynomial.

    On q both coefficients have at most simple poles, so b = 0 and a is the
    residue N1/D1' of c1, which must reduce to a constant modulo q.
    """
    d1 = ode.c1.den
    shared = d1.gcd(q)
    if shared.degree == 0:
        return ZERO, ZERO
    if shared.degree < q.degree:
        raise FiniteExponentUnknown("c1 is singular at only some roots of the factor")
    a_poly = (ode.c1.num * d1.derivative().invmod(q)) % q
    if a_poly.degree > 0:
        raise FiniteExponentUnknown("c1 has different residues at different roots")
    return a_poly.coeff(0), ZERO


# ---------------------------------------------------------------------------
# chart change and Frobenius solutions
# ---------------------------------------------------------------------------

def transform_to_infinity(ode: LinearODE2, var: str | None = None) -> LinearODE2:
    """Change of variable x = 1/z; the result is again in normalized form."""
    new = var or ("x" if ode.var != "x" else "z")
    c1_at = ode.c1.at_reciprocal(new)
    c2_at = ode.c2.at_reciprocal(new)
    two_over = RationalFunction(UniPoly([2], new), UniPoly([0, 1], new))
    c1 = two_over - c1_at.times_power(-2)
    c2 = c2_at.times_power(-4)
    return LinearODE2(c1, c2, new)


def frobenius_series(p: PuiseuxSeries, q: PuiseuxSeries, n_terms: int,
                     var: str | None = None) -> tuple[FrobeniusSolution, FrobeniusSolution]:
    """Local solutions of x^2 y'' + x p(x) y' + q(x) y = 0 at x = 0.

    ``p`` and ``q`` are holomorphic series (known below exponent ``n_terms``).
    The first returned solution has the larger exponent.
    """
    var = var or p.var
    pk = [p.coefficient(k) for k in range(n_terms)]
    qk = [q.coefficient(k) for k in range(n_terms)]
    p1, p0 = scalar(pk[0] - 1), scalar(qk[0])
    roots, _, marker = solve_indicial(p1, p0)
    if roots is None or marker != "rational":
        raise DegenerateIndicial(
            f"indicial roots of s^2 + ({format_scalar(p1)})s + ({format_scalar(p0)}) are not rational")
    r1, r2 = roots
    big = _recurrence(pk, qk, r1, n_terms)
    y1 = PuiseuxSeries({r1 + n: c for n, c in enumerate(big)}, r1 + n_terms, var)
    sol1 = FrobeniusSolution(r1, LogSeries(y1))
    gap = r1 - r2
    if gap.denominator != 1:
        small = _recurrence(pk, qk, r2, n_terms)
        y2 = PuiseuxSeries({r2 + n: c for n, c in enumerate(small)}, r2 + n_terms, var)
        return sol1, FrobeniusSolution(r2, LogSeries(y2))
    N = int(gap)
    # coefficients of 2x y1' + (p - 1) y1 on the x^(r1 + j) lattice
    g = []
    for j in range(n_terms):
        acc = (2 * (r1 + j) - 1 + pk[0]) * big[j]
        for k in range(1, j + 1):
            if pk[k]:
                acc += pk[k] * big[j - k]
        g.append(acc)
    b = [ZERO] * n_terms
    if N == 0:
        c = ONE
    else:
        b[0] = ONE
        c = None
    for m in range(1, n_terms):
        acc = ZERO
        for k in range(1, m + 1):
            if b[m - k] and (pk[k] or qk[k]):
                acc += ((r2 + m - k) * pk[k] + qk[k]) * b[m - k]
        if m == N:
            c = -acc / g[0]
            b[m] = ZERO
            continue
        if c is not None and m - N >= 0:
            acc += c * g[m - N]
        b[m] = -acc / ((r2 + m) * (r2 + m - 1) + pk[0] * (r2 + m) + qk[0])
    if c is None:  # resonance beyond the computed window
        raise ValueError(f"n_terms={n_terms} does not reach the resonant index {N}")
    order = r2 + n_terms
    s0 = PuiseuxSeries({r2 + m: bm for m, bm in enumerate(b)}, order, var)
    s1 = y1.scale(c).truncate(order)
    return sol1, FrobeniusSolution(r2, LogSeries(s0, s1), c, N)


def _recurrence(pk, qk, rho: Fraction, n_terms: int) -> list[FracElement]:
    a = [ONE]
    for n in range(1, n_terms):
        acc = ZERO
        for k in range(1, n + 1):
            if a[n - k] and (pk[k] or qk[k]):
                acc += ((rho + n - k) * pk[k] + qk[k]) * a[n - k]
        denom = (rho + n) * (rho + n - 1) + pk[0] * (rho + n) + qk[0]
        if not denom:
            raise DegenerateIndicial(f"indicial polynomial vanishes at {rho + n}")
        a.append(-acc / denom)
    return a


def frobenius_solve(ode: LinearODE2, order: int = 12) -> tuple[FrobeniusSolution, FrobeniusSolution]:
    """Fundamental system at var = 0 with ``order`` terms beyond each exponent."""
    P = ode.c1.times_power(1)
    Q = ode.c2.times_power(2)
    for name, rf in (("c1", P), ("c2", Q)):
        if not rf.is_zero() and rf.order_at_zero() < 0:
            raise IrregularSingularity(f"{name} has a pole of excessive order at {ode.var}=0")
    return frobenius_series(P.laurent_series(order), Q.laurent_series(order), order, ode.var)
