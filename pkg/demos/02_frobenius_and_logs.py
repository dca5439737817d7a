"""
Frobenius solutions at the pole of z(t), in the chart x = 1/z.

V = Ar^2 + Bz^2 + z^3 + 3r^2 z gives exponents 2 and -3/2 with no logarithm;
V = Ar^2 + Bz^2 + 16z^3 + 3r^2 z gives exponents 3/4, -1/4 and a logarithm
whose coefficient vanishes on a single line in the (A, B) plane.
"""
from hamint import algebra as al
from hamint.obstructions import galois_local_classify, log_obstruction_test
from hamint.ode import frobenius_solve
from hamint.variational import HamiltonianParams, build_ve1_infinity

P = HamiltonianParams.from_values(A=al.A, B=al.B, C=1, D=3)
for name, ode in zip(("r", "z"), build_ve1_infinity(P)):
    print(f"{name} equation in x:", ode)
    for sol in frobenius_solve(ode, 6):
        print(f"    x^({sol.exponent}) * [{sol.body.s0.shift(-sol.exponent)!r}]")

# residual of the ODE on its own solutions: zero through the working order
ve_r = build_ve1_infinity(P)[0]
print("back-substitution:", [ve_r.residual(s.body) for s in frobenius_solve(ve_r, 12)])

Q = HamiltonianParams.from_values(A=al.A, B=al.B, C=16, D=3)
ob, (s1, s2) = log_obstruction_test(build_ve1_infinity(Q)[0], 12)
print("\nlogarithm coefficient:", ob.value_text())
print("vanishing locus:", [str(f.as_expr()) for f, _ in ob.locus()])
fam = galois_local_classify(s1, s2)
print("local Galois family at infinity:", fam.kind, fam.describe())
