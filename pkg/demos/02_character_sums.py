"""
Character sums over determinantal sets
======================================

Exact sums of psi(U.X) over singular and unimodular matrices, matrix
Kloosterman sums, and the size of the largest sum over nonzero U.
"""

from __future__ import annotations

from matsumset import MatF, ScanSpec, bound_survey, field_new, gl_order, kloosterman, sum_singular, sum_sl

f3 = field_new(3)
e11 = MatF.unit(f3, 2, 0, 0)

# sums are exact counts per root of unity; the complex value comes last
acc = sum_singular(e11)
print("S(Z_2(F_3), E11): counts", acc.counts, "value", acc.value())
print("S(SL_2(F_3), E11):", sum_sl(e11).value())

k = kloosterman(e11, MatF.zero(f3, 2), MatF.identity(f3, 2))
print("K(GL_2(F_3), E11, 0, I): counts", k.counts, "value", k.value())

# the twist X -> lambda X permutes GL, so the accumulator does not move
v = MatF.from_rows(f3, [[0, 1], [2, 1]])
h = MatF.from_rows(f3, [[1, 1], [0, 1]])
lam = f3(2)
print("twist invariant:", kloosterman(e11, v, h) == kloosterman(e11.scale(lam), v.scale(lam.inv()), h))

# implied constants of the three envelopes at n = 2
print(f"{'kind':<12}{'q':>3}{'max |S|':>12}{'constant':>10}")
for kind in ("SINGULAR", "SL", "KLOOSTERMAN"):
    for p, kdeg in [(2, 1), (3, 1), (2, 2), (5, 1), (7, 1)]:
        f = field_new(p, kdeg)
        scan = ScanSpec("SAMPLED", seed=1, size=512) if kind == "KLOOSTERMAN" else ScanSpec()
        rep = bound_survey(kind, 2, f, scan)
        print(f"{kind:<12}{f.q:>3}{rep.observed_max:>12.4f}{rep.implied_constant:>10.4f}")

# the singular maximum sits at rank-one U with |S| = #GL_n / (q^n - 1) ~ q^{n^2 - n};
# for n = 2 that is q(q - 1), above q^{3/2}, so the constant grows like sqrt(q)
for n, p in [(2, 5), (3, 2), (3, 3)]:
    f = field_new(p)
    print(f"n={n} q={p}: S(Z_n, E11) = {sum_singular(MatF.unit(f, n, 0, 0)).value().real:.1f}, "
          f"#GL_n/(q^n-1) = {gl_order(n, p) // (p**n - 1)}")
