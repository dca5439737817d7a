"""
Residues of the second and third variational equations.

For B = 0 the invariant-plane motion is z = -2 wp(t) with g2 = 0, g3 = h/2,
so time itself is a local coordinate at the pole.  Otherwise the chart x = 1/z
is used and time integrals carry the weight dtau/dx.
"""
from hamint import algebra as al
from hamint.obstructions import residue_analysis
from hamint.variational import HamiltonianParams, hvar_rhs, make_chart, weierstrass_form

P = HamiltonianParams.from_values(A=al.A, C=1, D=3)
form = weierstrass_form(P)
print("z = lam*wp + mu with", {k: al.format_scalar(getattr(form, k)) for k in ("lam", "mu", "g2", "g3")})

chart = make_chart(P, "t", 8)
for (s1, s2), block in zip(chart.solutions(P), ("r", "z")):
    print(f"{block}: {s1.body.s0!r}\n   {s2.body.s0!r}")

print("\nK2:", hvar_rhs(P, 2).format(0), "|", hvar_rhs(P, 2).format(1))
print("K3:", hvar_rhs(P, 3).format(0), "|", hvar_rhs(P, 3).format(1))

for level in (2, 3):
    ob = residue_analysis(P, level, "t", 8).obstruction
    nz = [(e.choice, e.label, al.format_scalar(e.value)) for e in ob.entries if e.value]
    print(f"level {level}: {len(ob.entries)} residues, nonzero: {nz}")

# same Hamiltonian family with B kept symbolic, in the x chart
Q = HamiltonianParams.from_values(A=al.A, B=al.B, C=1, D=3)
ob = residue_analysis(Q, 3, "x", 8).obstruction
print("\nx chart, level 3 witness:", ob.value_text(), "locus", [str(f.as_expr()) for f, _ in ob.locus()])
