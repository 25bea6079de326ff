"""
Finite fields, matrix groups and rank strata
============================================

Build a few small fields, check the group orders against enumeration, and
look at how the matrices of each rank are distributed.
"""

from __future__ import annotations

import math

from matsumset import Space, enumerate_indices, field_new, gl_order, rank_profile, sl_order, z_order

# F_9 = F_3[t] / (t^2 + 1): the modulus is the smallest irreducible quadratic
f9 = field_new(3, 2)
print(f9.describe())
t = f9.gen
print("t^2 =", t * t, " 1/t =", t.inv(), " Tr(t) =", t.trace())

# the trace hits every residue equally often, so psi is nonprincipal
print("trace histogram:", [sum(1 for x in f9.elements() if x.trace() == a) for a in range(3)])

# closed forms against exhaustive enumeration
for n, p, k in [(2, 2, 1), (2, 3, 1), (2, 2, 2), (3, 2, 1)]:
    f = field_new(p, k)
    q = f.q
    counted = [enumerate_indices(s, n, f).size for s in (Space.GL, Space.SL, Space.SINGULAR)]
    print(f"n={n} q={q}: GL/SL/Z formula {gl_order(n, q)}/{sl_order(n, q)}/{z_order(n, q)}  enumerated {counted}")

# singular matrices form a hypersurface: log_q #Z approaches n^2 - 1
for q in (5, 7, 11, 13):
    print(f"q={q}: log_q #Z_2 = {math.log(z_order(2, q), q):.4f}")

# rank <= n-2 matrices (the singular locus) have dimension n^2 - 4
for p in (2, 3, 5):
    prof = rank_profile(3, field_new(p))
    low = prof.stratum_at_most(1)
    print(f"n=3 q={p}: counts per rank {prof.counts}, log_q #rank<=1 = {math.log(low, p):.3f}")
