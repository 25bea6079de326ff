"""
Singular and unimodular sums of two matrix sets
===============================================

Count pairs (A, B) with A + B singular or of determinant one and compare
with the main terms #Z #A #B / q^{n^2} and #SL #A #B / q^{n^2}.
"""

from __future__ import annotations

from matsumset import MatrixSet, asymptotic_table, field_new, gap_report
from matsumset.sumsets import DensityRule

f3 = field_new(3)
full = MatrixSet.full(2, f3)

# for full sets every target matrix is hit q^{n^2} times: the main term is exact
rep = gap_report("N", full, full)
print("N(FULL, FULL) over F_3:", rep.observed, "main", rep.main_term, "ratio", rep.ratio)

# random sets of size q^3 at q = 5
f5 = field_new(5)
a = MatrixSet.random(2, f5, seed=0, size=125)
b = MatrixSet.random(2, f5, seed=1, size=125)
for kind in ("N", "T"):
    rep = gap_report(kind, a, b)
    print(f"{kind}: observed {rep.observed}, main {float(rep.main_term):.1f}, "
          f"gap/envelope {rep.ratio:.4f}")

# q * N / (#A #B) tends to 1
for row in asymptotic_table("N", 2, [2, 3, 4, 5, 7]):
    print("q =", row["q"], "ratio", row["ratio"], "=", row["ratio_float"])
for row in asymptotic_table("T", 2, [3, 5, 7], DensityRule("random", 3.0, seed=2)):
    print("random q^3 sets, q =", row["q"], "T ratio", row["ratio_float"])
