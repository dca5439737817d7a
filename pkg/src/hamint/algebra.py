"""Exact arithmetic kernel.

Scalars live in the rational function field Q(A, B, C, D, E, F, G, h, alpha, p).
The field itself is sympy's sparse ``FracElement`` implementation; everything
built on top of it here (univariate polynomials and rational functions in a
chart variable, truncated Puiseux series and single-logarithm series) is
local code.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction
from functools import reduce
from typing import Iterable, Mapping

import sympy
from sympy import QQ
from sympy.polys.fields import FracElement, field
from sympy.polys.rings import PolyElement, ring

Rational = Fraction

SYMBOL_NAMES = ("A", "B", "C", "D", "E", "F", "G", "h", "alpha", "p")

FIELD, A, B, C, D, E, F, G, h, alpha, p = field(",".join(SYMBOL_NAMES), QQ)
RING = FIELD.ring

ParamScalar = FracElement
ParamPolynomial = PolyElement

GENERATORS = dict(zip(SYMBOL_NAMES, (A, B, C, D, E, F, G, h, alpha, p)))
_SYMPY_SYMBOLS = {name: sympy.Symbol(name) for name in SYMBOL_NAMES}
_FRACTION_RE = re.compile(r"^\s*([+-]?\d+)\s*(?:/\s*(\d+))?\s*$")


class InsufficientPrecision(ArithmeticError):
    """A coefficient at or beyond the truncation order was requested."""

    def __init__(self, message: str, required=None):
        super().__init__(message)
        self.required = required


class VariableMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# rationals and parameter scalars
# ---------------------------------------------------------------------------

def as_fraction(value) -> Fraction:
    """Parse an exact rational. Floats are rejected on purpose."""
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        m = _FRACTION_RE.match(value)
        if not m:
            raise ValueError(f"not an exact fraction string: {value!r}")
        num, den = m.group(1), m.group(2)
        if den is not None and int(den) == 0:
            raise ValueError(f"zero denominator in {value!r}")
        return Fraction(int(num), int(den) if den else 1)
    if isinstance(value, FracElement):
        return to_fraction(value)
    if type(value).__name__ == "mpq":
        return Fraction(int(value.numerator), int(value.denominator))
    raise TypeError(f"cannot read {type(value).__name__} as an exact rational")


def scalar(value) -> FracElement:
    """Coerce ints, Fractions, fraction strings, expressions or field elements."""
    if isinstance(value, FracElement):
        return value
    if isinstance(value, PolyElement):
        return FIELD(value.as_expr()) if value.ring != RING else FIELD.new(value)
    if isinstance(value, (int, Fraction)) and not isinstance(value, bool):
        fr = Fraction(value)
        return FIELD(QQ(fr.numerator, fr.denominator))
    if isinstance(value, str):
        if _FRACTION_RE.match(value):
            return scalar(as_fraction(value))
        if "." in value:
            raise ValueError(f"floating point input is not accepted: {value!r}")
        expr = sympy.sympify(value, locals=_SYMPY_SYMBOLS)
        return FIELD.from_expr(expr)
    if type(value).__name__ == "mpq":
        return FIELD(value)
    if isinstance(value, sympy.Basic):
        return FIELD.from_expr(value)
    raise TypeError(f"cannot coerce {type(value).__name__} to a parameter scalar")


ZERO = FIELD.zero
ONE = FIELD.one


def is_constant(s: FracElement) -> bool:
    return s.numer.is_ground and s.denom.is_ground


def to_fraction(s: FracElement) -> Fraction:
    if not is_constant(s):
        raise ValueError(f"{s} is not a rational constant")
    num = s.numer.LC if s.numer else QQ(0)
    q = num / s.denom.LC
    return Fraction(int(q.numerator), int(q.denominator))


def free_symbols(s: FracElement) -> set[str]:
    used = set()
    for poly in (s.numer, s.denom):
        for monom in poly.monoms():
            used.update(name for name, k in zip(SYMBOL_NAMES, monom) if k)
    return used


def substitute(s: FracElement, values: Mapping[str, object]) -> FracElement:
    """Exact substitution of parameter values (rationals or other scalars)."""
    if not values:
        return s
    vals = {GENERATORS[name].numer: scalar(v) for name, v in values.items()}
    if all(is_constant(v) for v in vals.values()):
        pairs = [(g, QQ(*_num_den(to_fraction(v)))) for g, v in vals.items()]
        num, den = s.numer.subs(pairs), s.denom.subs(pairs)
        num, den = FIELD(num) if not isinstance(num, PolyElement) else FIELD.new(num), \
            FIELD(den) if not isinstance(den, PolyElement) else FIELD.new(den)
    elif all(v.denom.is_ground for v in vals.values()):
        pairs = [(g, v.numer.quo_ground(v.denom.LC)) for g, v in vals.items()]
        num, den = FIELD.new(s.numer.compose(pairs)), FIELD.new(s.denom.compose(pairs))
    else:
        mapping = {_SYMPY_SYMBOLS[name]: scalar(v).as_expr() for name, v in values.items()}
        num = FIELD.from_expr(s.numer.as_expr().xreplace(mapping))
        den = FIELD.from_expr(s.denom.as_expr().xreplace(mapping))
    if not den:
        raise ZeroDivisionError(f"denominator {s.denom.as_expr()} vanishes at {dict(values)}")
    return num / den


def _num_den(fr: Fraction) -> tuple[int, int]:
    return fr.numerator, fr.denominator


def factor_numerator(s: FracElement) -> tuple[Fraction, list[tuple[PolyElement, int]]]:
    """Content and irreducible factors of the numerator over Q."""
    if not s:
        return Fraction(0), []
    const, factors = s.numer.factor_list()
    const = Fraction(int(const.numerator), int(const.denominator))
    den_c = s.denom.LC if s.denom.is_ground else QQ(1)
    const /= Fraction(int(den_c.numerator), int(den_c.denominator))
    return const, sorted(factors, key=lambda fm: (fm[0].degree(), str(fm[0])))


def _sqrt_fraction(fr: Fraction) -> Fraction | None:
    if fr < 0:
        return None
    n, d = fr.numerator, fr.denominator
    rn, rd = math.isqrt(n), math.isqrt(d)
    if rn * rn == n and rd * rd == d:
        return Fraction(rn, rd)
    return None


def sqrt_scalar(s: FracElement) -> FracElement | None:
    """Exact square root in the field, or None when s is not a square."""
    if not s:
        return ZERO
    if is_constant(s):
        r = _sqrt_fraction(to_fraction(s))
        return None if r is None else scalar(r)
    out = ONE
    for poly, sign in ((s.numer, 1), (s.denom, -1)):
        const, factors = poly.factor_list()
        c = _sqrt_fraction(Fraction(int(const.numerator), int(const.denominator)))
        if c is None:
            return None
        root = FIELD(QQ(c.numerator, c.denominator))
        for f, m in factors:
            if m % 2:
                return None
            root *= FIELD.new(f) ** (m // 2)
        out = out * root if sign > 0 else out / root
    return out


def _format_rational(fr: Fraction) -> str:
    return str(fr.numerator) if fr.denominator == 1 else f"{fr.numerator}/{fr.denominator}"


def format_polynomial(poly: PolyElement) -> str:
    """Deterministic text form: descending total degree, then descending exponents."""
    if not poly:
        return "0"
    terms = sorted(poly.terms(), key=lambda t: (-sum(t[0]), tuple(-k for k in t[0])))
    out = []
    for monom, coeff in terms:
        c = Fraction(int(coeff.numerator), int(coeff.denominator))
        factors = []
        for name, k in zip(SYMBOL_NAMES, monom):
            if k == 1:
                factors.append(name)
            elif k > 1:
                factors.append(f"{name}^{k}")
        mono = "*".join(factors)
        mag = abs(c)
        if mono:
            body = mono if mag == 1 else f"{_format_rational(mag)}*{mono}"
        else:
            body = _format_rational(mag)
        if not out:
            out.append(("-" if c < 0 else "") + body)
        else:
            out.append((" - " if c < 0 else " + ") + body)
    return "".join(out)


def format_scalar(s: FracElement) -> str:
    """Canonical printable form of a field element (parses back with ``scalar``)."""
    s = scalar(s)
    if not s:
        return "0"
    num, den = s.numer, s.denom
    # clear rational denominators so the printed denominator is a polynomial with
    # integer coefficients and positive leading coefficient
    if den.is_ground:
        c = den.LC
        num = num.quo_ground(c)
        return format_polynomial(num)
    lc = den.LC
    num, den = num.quo_ground(lc), den.quo_ground(lc)
    n_str, d_str = format_polynomial(num), format_polynomial(den)
    if len(num.terms()) > 1:
        n_str = f"({n_str})"
    if len(den.terms()) > 1:
        d_str = f"({d_str})"
    return f"{n_str}/{d_str}"


def parse_scalar(text: str) -> FracElement:
    return scalar(text.replace("^", "**"))


# ---------------------------------------------------------------------------
# univariate polynomials over the parameter field
# ---------------------------------------------------------------------------

class UniPoly:
    """Dense polynomial in one chart variable, ascending coefficients."""

    __slots__ = ("var", "coeffs")

    def __init__(self, coeffs: Iterable = (), var: str = "z"):
        cs = [scalar(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)
        self.var = var

    @classmethod
    def monomial(cls, k: int, coeff=1, var: str = "z") -> UniPoly:
        return cls([0] * k + [coeff], var)

    @classmethod
    def gen(cls, var: str = "z") -> UniPoly:
        return cls([0, 1], var)

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    @property
    def lc(self) -> FracElement:
        return self.coeffs[-1] if self.coeffs else ZERO

    def coeff(self, k: int) -> FracElement:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else ZERO

    def _coerce(self, other) -> UniPoly:
        if isinstance(other, UniPoly):
            if other.var != self.var and other.degree > 0 and self.degree > 0:
                raise VariableMismatch(f"{self.var} vs {other.var}")
            return other
        return UniPoly([other], self.var)

    def __add__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        o = self._coerce(other)
        n = max(len(self.coeffs), len(o.coeffs))
        return UniPoly([self.coeff(k) + o.coeff(k) for k in range(n)], self.var)

    __radd__ = __add__

    def __neg__(self):
        return UniPoly([-c for c in self.coeffs], self.var)

    def __sub__(self, other):
        if isinstance(other, RationalFunction):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, (RationalFunction, PuiseuxSeries)):
            return NotImplemented
        o = self._coerce(other)
        if self.is_zero() or o.is_zero():
            return UniPoly([], self.var)
        out = [ZERO] * (len(self.coeffs) + len(o.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            if not a:
                continue
            for j, b in enumerate(o.coeffs):
                out[i + j] += a * b
        return UniPoly(out, self.var)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        out = UniPoly([1], self.var)
        for _ in range(n):
            out = out * self
        return out

    def __truediv__(self, other):
        if isinstance(other, UniPoly):
            return RationalFunction(self, other)
        if isinstance(other, RationalFunction):
            return RationalFunction(self) / other
        inv = ONE / scalar(other)
        return UniPoly([c * inv for c in self.coeffs], self.var)

    def __eq__(self, other):
        if isinstance(other, UniPoly):
            return self.coeffs == other.coeffs and (self.var == other.var or self.degree <= 0)
        if isinstance(other, (int, Fraction, FracElement)):
            return self.degree <= 0 and self.coeff(0) == scalar(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.var, self.coeffs))

    def __call__(self, value):
        acc = ZERO if not isinstance(value, (PuiseuxSeries, UniPoly)) else None
        for c in reversed(self.coeffs):
            acc = c if acc is None else acc * value + c
        if acc is None:
            return ZERO
        return acc

    def derivative(self) -> UniPoly:
        return UniPoly([k * c for k, c in enumerate(self.coeffs)][1:], self.var)

    def divmod(self, other: UniPoly) -> tuple[UniPoly, UniPoly]:
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        rem = list(self.coeffs)
        q = [ZERO] * max(len(rem) - len(other.coeffs) + 1, 0)
        inv = ONE / other.lc
        for k in range(len(q) - 1, -1, -1):
            c = rem[k + other.degree] * inv
            q[k] = c
            if c:
                for j, b in enumerate(other.coeffs):
                    rem[k + j] -= c * b
        return UniPoly(q, self.var), UniPoly(rem[: other.degree], self.var)

    def __floordiv__(self, other):
        return self.divmod(self._coerce(other))[0]

    def __mod__(self, other):
        return self.divmod(self._coerce(other))[1]

    def monic(self) -> UniPoly:
        return self if self.is_zero() else self / self.lc

    def gcd(self, other: UniPoly) -> UniPoly:
        if self.is_zero() or other.is_zero() or self.is_constant() or other.is_constant():
            a = self if other.is_zero() else other if self.is_zero() else UniPoly([1], self.var)
            return a.monic()
        if all(is_constant(c) for c in self.coeffs + other.coeffs):
            a, b = self, other
            while not b.is_zero():
                a, b = b, a % b
            return a.monic()
        # Euclid over the parameter field swells; a multivariate gcd over Q does not
        g = _lift(self).gcd(_lift(other))
        return _drop(g, self.var).monic()

    def invmod(self, modulus: UniPoly) -> UniPoly:
        """Inverse modulo ``modulus`` (extended Euclid); raises if not coprime."""
        r0, r1 = modulus, self % modulus
        s0, s1 = UniPoly([], self.var), UniPoly([1], self.var)
        while not r1.is_zero():
            q, r = r0.divmod(r1)
            r0, r1 = r1, r
            s0, s1 = s1, s0 - q * s1
        if r0.degree != 0:
            raise ValueError("polynomials are not coprime")
        return (s0 / r0.lc) % modulus

    def is_squarefree(self) -> bool:
        return self.degree <= 0 or self.gcd(self.derivative()).degree == 0

    def reverse(self, n: int | None = None, var: str | None = None) -> UniPoly:
        """Return ``v**n * self(1/v)``; n defaults to the degree."""
        n = self.degree if n is None else n
        if n < self.degree:
            raise ValueError("reversal degree below polynomial degree")
        cs = [ZERO] * (n - self.degree) + list(self.coeffs)
        return UniPoly(reversed(cs), var or self.var)

    def subs(self, values: Mapping[str, object]) -> UniPoly:
        return UniPoly([substitute(c, values) for c in self.coeffs], self.var)

    def rename(self, var: str) -> UniPoly:
        return UniPoly(self.coeffs, var)

    def to_series(self, order, var: str | None = None) -> PuiseuxSeries:
        return PuiseuxSeries({Fraction(k): c for k, c in enumerate(self.coeffs)}, order,
                             var or self.var)

    def __repr__(self):
        if self.is_zero():
            return "0"
        parts = []
        for k, c in enumerate(self.coeffs):
            if not c:
                continue
            mono = "" if k == 0 else (self.var if k == 1 else f"{self.var}^{k}")
            cs = format_scalar(c)
            if mono:
                parts.append(mono if cs == "1" else f"({cs})*{mono}")
            else:
                parts.append(f"({cs})")
        return " + ".join(reversed(parts))


_LIFT_RING = ring("_v," + ",".join(SYMBOL_NAMES), QQ)[0]


def _lift(poly: UniPoly) -> PolyElement:
    """Clear parameter denominators and embed into Q[v, parameters]."""
    den = reduce(lambda a, b: a.lcm(b), (c.denom for c in poly.coeffs if c), RING.one)
    terms = {}
    for k, c in enumerate(poly.coeffs):
        if c:
            for m, cf in (c.numer * den.exquo(c.denom)).items():
                terms[(k,) + m] = cf
    return _LIFT_RING.from_dict(terms)


def _drop(g: PolyElement, var: str) -> UniPoly:
    parts: dict[int, dict] = {}
    for m, cf in g.items():
        parts.setdefault(m[0], {})[m[1:]] = cf
    top = max(parts, default=-1)
    return UniPoly([FIELD.new(RING.from_dict(parts[k])) if k in parts else ZERO
                    for k in range(top + 1)], var)


class RationalFunction:
    """num/den in one chart variable, reduced, with monic denominator."""

    __slots__ = ("num", "den")

    def __init__(self, num, den=None):
        if not isinstance(num, UniPoly):
            num = UniPoly([num], den.var if isinstance(den, UniPoly) else "z")
        if den is None:
            den = UniPoly([1], num.var)
        elif not isinstance(den, UniPoly):
            den = UniPoly([den], num.var)
        if den.is_zero():
            raise ZeroDivisionError("rational function with zero denominator")
        var = num.var if num.degree > 0 else den.var
        if num.is_zero():
            self.num, self.den = UniPoly([], var), UniPoly([1], var)
            return
        g = num.gcd(den)
        if g.degree > 0:
            num, den = num // g, den // g
        lc = den.lc
        self.num = (num / lc).rename(var)
        self.den = (den / lc).rename(var)

    @property
    def var(self) -> str:
        return self.num.var

    def is_zero(self) -> bool:
        return self.num.is_zero()

    def _coerce(self, other) -> RationalFunction:
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, UniPoly):
            return RationalFunction(other)
        return RationalFunction(UniPoly([other], self.var))

    def __add__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __neg__(self):
        return RationalFunction(-self.num, self.den)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, PuiseuxSeries):
            return NotImplemented
        o = self._coerce(other)
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        return self._coerce(other) / self

    def __eq__(self, other):
        if isinstance(other, (RationalFunction, UniPoly, int, Fraction, FracElement)):
            o = self._coerce(other)
            return self.num == o.num and self.den == o.den
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __call__(self, value):
        d = self.den(value)
        if not isinstance(d, PuiseuxSeries) and not d:
            raise ZeroDivisionError("evaluation at a pole")
        return self.num(value) / d if not isinstance(d, PuiseuxSeries) else \
            self.num(value) * d.inverse()

    def derivative(self) -> RationalFunction:
        return RationalFunction(self.num.derivative() * self.den - self.num * self.den.derivative(),
                                self.den * self.den)

    def times_power(self, k: int) -> RationalFunction:
        """Multiply by var**k, k may be negative."""
        if k >= 0:
            return RationalFunction(self.num * UniPoly.monomial(k, 1, self.var), self.den)
        return RationalFunction(self.num, self.den * UniPoly.monomial(-k, 1, self.var))

    def at_reciprocal(self, var: str) -> RationalFunction:
        """The function of ``var`` obtained by substituting 1/var."""
        n, d = self.num.degree, self.den.degree
        num = self.num.reverse(var=var) if n >= 0 else UniPoly([], var)
        den = self.den.reverse(var=var)
        shift = d - max(n, 0)
        if self.num.is_zero():
            return RationalFunction(UniPoly([], var), UniPoly([1], var))
        rf = RationalFunction(num, den)
        return rf.times_power(shift)

    def limit_scaled_at_infinity(self, k: int) -> FracElement:
        """lim var**k * f as var -> infinity; raises ValueError on a pole."""
        if self.is_zero():
            return ZERO
        excess = self.num.degree + k - self.den.degree
        if excess > 0:
            raise ValueError("pole at infinity")
        if excess < 0:
            return ZERO
        return self.num.lc / self.den.lc

    def order_at_zero(self) -> int:
        """Valuation at var = 0 (negative for a pole)."""
        if self.is_zero():
            raise ValueError("zero function has no finite order")
        vn = next(k for k, c in enumerate(self.num.coeffs) if c)
        vd = next(k for k, c in enumerate(self.den.coeffs) if c)
        return vn - vd

    def laurent_series(self, order) -> PuiseuxSeries:
        """Expansion at var = 0 valid for exponents below ``order``."""
        order = Fraction(order)
        if self.is_zero():
            return PuiseuxSeries({}, order, self.var)
        vd = next(k for k, c in enumerate(self.den.coeffs) if c)
        vn = next(k for k, c in enumerate(self.num.coeffs) if c)
        den0 = UniPoly(self.den.coeffs[vd:], self.var)
        num0 = UniPoly(self.num.coeffs[vn:], self.var)
        rel = order - (vn - vd)
        if rel <= 0:
            return PuiseuxSeries({}, order, self.var)
        inv = den0.to_series(rel).inverse()
        s = num0.to_series(rel) * inv
        return s.shift(vn - vd).truncate(order)

    def subs(self, values: Mapping[str, object]) -> RationalFunction:
        return RationalFunction(self.num.subs(values), self.den.subs(values))

    def __repr__(self):
        if self.den.degree == 0 and self.den.lc == ONE:
            return f"{self.num!r}"
        return f"({self.num!r}) / ({self.den!r})"


# ---------------------------------------------------------------------------
# truncated Puiseux series
# ---------------------------------------------------------------------------

def _frac(e) -> Fraction:
    return e if isinstance(e, Fraction) else Fraction(e)


class PuiseuxSeries:
    """Sum of c_e * var**e over rational exponents e < order.

    Terms are kept sparsely; ``order`` is the exclusive exponent bound below
    which every coefficient is exact.
    """

    __slots__ = ("var", "terms", "order")

    def __init__(self, terms: Mapping, order, var: str = "x"):
        order = _frac(order)
        clean = {}
        for e, c in terms.items():
            e = _frac(e)
            if e < order:
                c = scalar(c)
                if c:
                    clean[e] = c
        self.terms = clean
        self.order = order
        self.var = var

    # construction -------------------------------------------------------
    @classmethod
    def zero(cls, order, var: str = "x") -> PuiseuxSeries:
        return cls({}, order, var)

    @classmethod
    def monomial(cls, coeff, exponent, order, var: str = "x") -> PuiseuxSeries:
        return cls({_frac(exponent): coeff}, order, var)

    # inspection ---------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    @property
    def valuation(self) -> Fraction:
        return min(self.terms) if self.terms else self.order

    @property
    def lead_exponent(self) -> Fraction | None:
        return min(self.terms) if self.terms else None

    @property
    def lead_coefficient(self) -> FracElement:
        return self.terms[min(self.terms)] if self.terms else ZERO

    @property
    def ramification(self) -> int:
        return reduce(math.lcm, (e.denominator for e in self.terms), 1)

    def exponents(self) -> list[Fraction]:
        return sorted(self.terms)

    def coefficient(self, e) -> FracElement:
        e = _frac(e)
        if e >= self.order:
            raise InsufficientPrecision(
                f"coefficient of {self.var}^{e} requested, series known below {self.order}",
                required=e + 1)
        return self.terms.get(e, ZERO)

    __getitem__ = coefficient

    def coefficients(self) -> list[FracElement]:
        """Dense coefficients from the leading exponent in steps of 1/ramification."""
        if not self.terms:
            return []
        d = self.ramification
        lead = self.lead_exponent
        n = math.ceil((self.order - lead) * d)
        return [self.terms.get(lead + Fraction(k, d), ZERO) for k in range(n)]

    def residue(self) -> FracElement:
        return series_residue(self)

    # arithmetic ---------------------------------------------------------
    def _check(self, other: PuiseuxSeries):
        if other.var != self.var:
            raise VariableMismatch(f"series in {self.var} vs series in {other.var}")

    def _coerce(self, other) -> PuiseuxSeries:
        if isinstance(other, PuiseuxSeries):
            self._check(other)
            return other
        if isinstance(other, UniPoly):
            return other.to_series(self.order, self.var)
        return PuiseuxSeries({Fraction(0): other}, self.order, self.var)

    def __add__(self, other):
        if isinstance(other, LogSeries):
            return NotImplemented
        o = self._coerce(other)
        order = min(self.order, o.order)
        out = dict(self.terms)
        for e, c in o.terms.items():
            out[e] = out.get(e, ZERO) + c
        return PuiseuxSeries(out, order, self.var)

    __radd__ = __add__

    def __neg__(self):
        return PuiseuxSeries({e: -c for e, c in self.terms.items()}, self.order, self.var)

    def __sub__(self, other):
        if isinstance(other, LogSeries):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def scale(self, c) -> PuiseuxSeries:
        c = scalar(c)
        return PuiseuxSeries({e: c * v for e, v in self.terms.items()}, self.order, self.var)

    def __mul__(self, other):
        if isinstance(other, LogSeries):
            return NotImplemented
        if isinstance(other, PuiseuxSeries):
            return series_mul(self, other)
        if isinstance(other, UniPoly):
            return series_mul(self, other.to_series(self.order - self.valuation, self.var))
        return self.scale(other)

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, PuiseuxSeries):
            return self * other.inverse()
        return self.scale(ONE / scalar(other))

    def __pow__(self, n: int):
        if n < 0:
            return self.inverse() ** (-n)
        out = PuiseuxSeries({Fraction(0): ONE}, self.order - self.valuation, self.var)
        for _ in range(n):
            out = out * self
        return out

    def shift(self, e) -> PuiseuxSeries:
        """Multiply by var**e."""
        e = _frac(e)
        return PuiseuxSeries({k + e: c for k, c in self.terms.items()}, self.order + e, self.var)

    def truncate(self, order) -> PuiseuxSeries:
        return PuiseuxSeries(self.terms, min(self.order, _frac(order)), self.var)

    def derivative(self) -> PuiseuxSeries:
        return PuiseuxSeries({e - 1: e * c for e, c in self.terms.items() if e},
                             self.order - 1, self.var)

    def integrate(self) -> tuple[PuiseuxSeries, FracElement]:
        return series_integrate(self)

    def inverse(self) -> PuiseuxSeries:
        if not self.terms:
            raise ZeroDivisionError("inverse of a zero series")
        v = self.valuation
        c0 = self.terms[v]
        inv0 = ONE / c0
        d = self.ramification
        rel = self.order - v
        n_terms = math.ceil(rel * d)
        u = {round((e - v) * d): c for e, c in self.terms.items()}
        b = [inv0]
        for n in range(1, n_terms):
            acc = ZERO
            for k in range(1, n + 1):
                a = u.get(k)
                if a is not None and b[n - k]:
                    acc += a * b[n - k]
            b.append(-acc * inv0)
        return PuiseuxSeries({-v + Fraction(k, d): c for k, c in enumerate(b)}, -v + rel, self.var)

    def subs(self, values: Mapping[str, object]) -> PuiseuxSeries:
        return PuiseuxSeries({e: substitute(c, values) for e, c in self.terms.items()},
                             self.order, self.var)

    def map_coefficients(self, fn) -> PuiseuxSeries:
        return PuiseuxSeries({e: fn(c) for e, c in self.terms.items()}, self.order, self.var)

    def rename(self, var: str) -> PuiseuxSeries:
        return PuiseuxSeries(self.terms, self.order, var)

    def agrees_with(self, other: PuiseuxSeries, order=None) -> bool:
        """Equality of all coefficients below the shared (or given) bound."""
        self._check(other)
        bound = min(self.order, other.order) if order is None else _frac(order)
        keys = {e for e in self.terms if e < bound} | {e for e in other.terms if e < bound}
        return all(self.terms.get(e, ZERO) == other.terms.get(e, ZERO) for e in keys)

    def __eq__(self, other):
        if not isinstance(other, PuiseuxSeries):
            return NotImplemented
        return self.var == other.var and self.order == other.order and self.terms == other.terms

    def __hash__(self):
        return hash((self.var, self.order, frozenset(self.terms.items())))

    def __repr__(self):
        parts = []
        for e in sorted(self.terms):
            cs = format_scalar(self.terms[e])
            mono = "" if e == 0 else (self.var if e == 1 else f"{self.var}^({e})")
            if not mono:
                parts.append(f"({cs})")
            elif cs == "1":
                parts.append(mono)
            else:
                parts.append(f"({cs})*{mono}")
        parts.append(f"O({self.var}^({self.order}))")
        return " + ".join(parts)


def series_mul(a: PuiseuxSeries, b: PuiseuxSeries) -> PuiseuxSeries:
    """Exact product, truncated where either factor's unknown tail enters."""
    if a.var != b.var:
        raise VariableMismatch(f"series in {a.var} vs series in {b.var}")
    order = min(a.order + b.valuation, b.order + a.valuation)
    out: dict[Fraction, FracElement] = {}
    for e1, c1 in a.terms.items():
        if e1 + b.valuation >= order:
            continue
        for e2, c2 in b.terms.items():
            e = e1 + e2
            if e < order:
                out[e] = out.get(e, ZERO) + c1 * c2
    return PuiseuxSeries(out, order, a.var)


def series_residue(a: PuiseuxSeries) -> FracElement:
    """Coefficient of var**-1."""
    if a.order <= -1:
        raise InsufficientPrecision(
            f"residue needs the series known past {a.var}^-1 (known below {a.order})",
            required=Fraction(0))
    return a.terms.get(Fraction(-1), ZERO)


def series_integrate(a: PuiseuxSeries) -> tuple[PuiseuxSeries, FracElement]:
    """Term-wise antiderivative; the var**-1 coefficient is returned separately."""
    residue = series_residue(a) if a.order > -1 else ZERO
    anti = {e + 1: c / (e + 1) for e, c in a.terms.items() if e != -1}
    return PuiseuxSeries(anti, a.order + 1, a.var), residue


def _power_of_unit(u: list[FracElement], exponent: Fraction, n_terms: int) -> list[FracElement]:
    """Coefficients of (1 + u_1 x + u_2 x^2 + ...)**exponent (Miller's recurrence)."""
    g = [ONE]
    for n in range(1, n_terms):
        acc = ZERO
        for k in range(1, min(n, len(u) - 1) + 1):
            if u[k]:
                acc += (k * (exponent + 1) - n) * u[k] * g[n - k]
        g.append(acc / n)
    return g


def sqrt_inverse_normalized(poly: UniPoly, order, var: str | None = None):
    """Split poly = c * x**m * (1 + ...) and expand (poly / c)**(-1/2).

    Returns ``(c, s)`` with ``s**2 * poly == 1/c`` through ``order``.
    """
    if poly.is_zero():
        raise ValueError("inverse square root of the zero polynomial")
    var = var or poly.var
    order = _frac(order)
    m = next(k for k, c in enumerate(poly.coeffs) if c)
    c = poly.coeffs[m]
    u = [cc / c for cc in poly.coeffs[m:]]
    lead = Fraction(-m, 2)
    n_terms = max(math.ceil(order - lead), 0)
    g = _power_of_unit(u, Fraction(-1, 2), n_terms)
    return c, PuiseuxSeries({lead + k: gk for k, gk in enumerate(g)}, order, var)


def series_sqrt_inverse(poly: UniPoly, order, var: str | None = None) -> PuiseuxSeries:
    """Series s with s**2 * poly = 1 through ``order``.

    The lowest coefficient of ``poly`` must be a square in the parameter field;
    use :func:`sqrt_inverse_normalized` to keep a non-square constant aside.
    """
    c, s = sqrt_inverse_normalized(poly, order, var)
    root = sqrt_scalar(c)
    if root is None:
        raise ValueError(f"lowest coefficient {format_scalar(c)} is not a square in the field")
    return s.scale(ONE / root)


# ---------------------------------------------------------------------------
# series with a single logarithm
# ---------------------------------------------------------------------------

class LogSeries:
    """s0 + s1 * log(var)."""

    __slots__ = ("s0", "s1")

    def __init__(self, s0: PuiseuxSeries, s1: PuiseuxSeries | None = None):
        if s1 is None:
            s1 = PuiseuxSeries.zero(s0.order, s0.var)
        if s0.var != s1.var:
            raise VariableMismatch("log series parts in different variables")
        self.s0, self.s1 = s0, s1

    @property
    def var(self) -> str:
        return self.s0.var

    @property
    def order(self) -> Fraction:
        return min(self.s0.order, self.s1.order)

    def is_log_free(self) -> bool:
        return self.s1.is_zero()

    def _coerce(self, other) -> LogSeries:
        if isinstance(other, LogSeries):
            return other
        if isinstance(other, PuiseuxSeries):
            return LogSeries(other)
        return LogSeries(self.s0._coerce(other))

    def __add__(self, other):
        o = self._coerce(other)
        return LogSeries(self.s0 + o.s0, self.s1 + o.s1)

    __radd__ = __add__

    def __neg__(self):
        return LogSeries(-self.s0, -self.s1)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) - self

    def __mul__(self, other):
        if isinstance(other, LogSeries):
            if not self.is_log_free() and not other.is_log_free():
                raise ValueError("product would contain log^2")
            if self.is_log_free():
                return other * self.s0
            other = other.s0
        if isinstance(other, PuiseuxSeries):
            s1 = self.s1 * other if not self.s1.is_zero() else \
                PuiseuxSeries.zero(self.s1.order + other.valuation, self.var)
            return LogSeries(self.s0 * other, s1)
        return LogSeries(self.s0.scale(other), self.s1.scale(other))

    __rmul__ = __mul__

    def scale(self, c) -> LogSeries:
        return LogSeries(self.s0.scale(c), self.s1.scale(c))

    def shift(self, e) -> LogSeries:
        return LogSeries(self.s0.shift(e), self.s1.shift(e))

    def derivative(self) -> LogSeries:
        return LogSeries(self.s0.derivative() + self.s1.shift(-1), self.s1.derivative())

    def truncate(self, order) -> LogSeries:
        return LogSeries(self.s0.truncate(order), self.s1.truncate(order))

    def subs(self, values) -> LogSeries:
        return LogSeries(self.s0.subs(values), self.s1.subs(values))

    def __eq__(self, other):
        if not isinstance(other, LogSeries):
            return NotImplemented
        return self.s0 == other.s0 and self.s1 == other.s1

    def __hash__(self):
        return hash((self.s0, self.s1))

    def __repr__(self):
        if self.is_log_free():
            return repr(self.s0)
        return f"{self.s0!r} + log({self.var})*[{self.s1!r}]"
