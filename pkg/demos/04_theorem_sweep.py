"""
The case analysis over a grid, the way the command line sweep runs it.

Equivalent to:  hamint sweep -A 0:2:1 -B 1,2 -C 1 -D 3
"""
from fractions import Fraction

from hamint.report import run_sweep
from hamint.obstructions import classify_quartic, theorem_evaluator
from hamint.variational import HamiltonianParams

grid = {"A": [Fraction(a) for a in range(3)], "B": [Fraction(1), Fraction(2)],
        "C": [Fraction(1)], "D": [Fraction(3)]}
print(run_sweep(grid).to_text())

# one point per integrable quartic family
for efg in [(1, 2, 1), (1, 6, 1), (1, 12, 16), (16, 12, 1), (1, 6, 8), (8, 6, 1), (1, 2, 3)]:
    P = HamiltonianParams.from_values(A=1, B=2, C=1, D=1, E=efg[0], F=efg[1], G=efg[2])
    cls = classify_quartic(P)
    v = theorem_evaluator(P)
    print(f"(E, F, G) = {efg}: {cls.name:8} -> {v.outcome} ({v.case})")
