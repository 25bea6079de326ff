"""
Solutions of (A + B)(C + D) = H
===============================

Counting runs through invertible X: pairs with A + B = X times pairs with
C + D = X^{-1} H.  The naive quadruple loop confirms it on small sets.
"""

from __future__ import annotations

from matsumset import MatF, MatrixSet, Space, count_sumproduct, enumerate_indices, field_new, gap_report

f2 = field_new(2)
full = MatrixSet.full(2, f2)
rep = gap_report("R", full, full, full, full, h=MatF.identity(f2, 2))
print("R(FULL^4; I) over F_2:", rep.observed, "main", rep.main_term, "ratio", round(rep.ratio, 4))

# every invertible H is represented once the sets are large
f3 = field_new(3)
full3 = MatrixSet.full(2, f3)
counts = [count_sumproduct(full3, full3, full3, full3, MatF.from_index(f3, 2, int(i)))
          for i in enumerate_indices(Space.GL, 2, f3)]
print("F_3 full sets: min/max R over GL_2 =", min(counts), max(counts))

# table method against the quadruple loop on small random sets
f5 = field_new(5)
sets = [MatrixSet.random(2, f5, seed=s, size=12) for s in range(4)]
h = MatF.from_rows(f5, [[1, 2], [3, 4]])
print("table", count_sumproduct(*sets, h), "naive", count_sumproduct(*sets, h, method="naive"))
