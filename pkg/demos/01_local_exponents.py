"""
Local exponents of the first variational equations along r = p_r = 0.

Finite singular points always carry exponents {0, 1/2}; at infinity the
exponents of the r equation are (1 +- p)/2 with p = sqrt(1 + 4F/E).
"""
from fractions import Fraction

from hamint import algebra as al
from hamint.obstructions import denominator_gate, resonance_parameter
from hamint.ode import churchill_invariants, indicial_at_infinity, indicial_finite_simple_root
from hamint.variational import HamiltonianParams, build_ve1_z

# everything symbolic except the quartic ratio, which is tied to p
P = HamiltonianParams.from_values(A=al.A, B=al.B, C=al.C, D=al.D, E=1,
                                  F=(al.p ** 2 - 1) / 4, G=al.G)
ve_r, ve_z = build_ve1_z(P)
print("r equation:", ve_r)
print("finite exponents:", indicial_finite_simple_root(ve_r).roots)
print("exponents at infinity:", indicial_at_infinity(ve_r).roots)

for loc, ci in churchill_invariants(ve_r).items():
    print(f"{loc.label():>45}  a={al.format_scalar(ci.a)}  b={al.format_scalar(ci.b)}  t={ci.trace}")

# the trace at infinity is 2cos(pi p); it leaves Q once N(p) >= 4
for pv in (Fraction(1, 2), Fraction(1, 3), Fraction(1, 4), Fraction(2, 5), Fraction(5, 3)):
    Q = HamiltonianParams.from_values(A=1, B=2, C=1, D=1, E=1, F=(pv * pv - 1) / 4)
    v = denominator_gate(resonance_parameter(Q))
    print(f"p = {pv}:  {v.outcome}  {v.note or v.obstructions[0].detail}")
