"""
Prime divisors of det(A + B) over integer matrices
==================================================

Residue-class statistics of an integer set, and the primes dividing the
nonzero determinants det(A + B) with entries from two small sets.
"""

from __future__ import annotations

from matsumset import IntSet, divides_W, nu_p, omega_W, primes_in, resclass_census, sigma_p

t = IntSet.of([3, 6, 9, 1, 14, 22, 35], N=40)
for p in (3, 5, 7):
    nu, sigma = nu_p(t, p), sigma_p(t, p)
    # Cauchy: (#T)^2 <= nu_p * sigma_p
    print(f"p={p}: nu={nu} sigma={sigma} (#T)^2={len(t) ** 2} <= {nu * sigma}")

census = resclass_census(IntSet.interval(100), 10)
print("census over primes in [10, 20]: pass fraction", census.pass_fraction)

for r, s in [([1, 2], [1]), ([1, 2], [1, 2]), ([1, 2, 3], [1, 2, 3])]:
    rep = omega_W(IntSet.of(r), IntSet.of(s), 2)
    print(f"R={r} S={s}: omega={rep.omega} primes={list(rep.primes)} zero dets={rep.zero_det_pairs}")

# the mod-p route finds the same primes without factoring anything
r = IntSet.of([1, 2, 3])
print("p | W via reduction mod p:", [p for p in primes_in(2, 30) if divides_W(r, r, 2, p)])
