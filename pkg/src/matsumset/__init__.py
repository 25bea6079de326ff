"""Exact desk-scale experiments on sums of matrices over finite fields.

Modules:

* :mod:`matsumset.field` -- F_{p^k} arithmetic, absolute trace, operation tables
* :mod:`matsumset.matrix` -- scalar matrices, determinant, inverse, group orders
* :mod:`matsumset.enumeration` -- batched enumeration of M_n, GL_n, SL_n, Z_n; rank profiles
* :mod:`matsumset.charsums` -- exact character sums, Kloosterman sums, bound surveys
* :mod:`matsumset.sumsets` -- singular / unimodular / sum-product counts and gap reports
* :mod:`matsumset.integers` -- residue-class statistics and prime divisors of integer determinants
* :mod:`matsumset.cli` -- command line front end and reports
"""

__version__ = "0.1.0"

from .charsums import CharAccum, ScanSpec, bound_survey, kloosterman, sum_singular, sum_sl
from .enumeration import RankProfile, Space, enumerate_indices, enumerate_matrices, rank_profile
from .field import Felt, FieldCtx, field_new
from .integers import IntSet, divides_W, nu_p, omega_W, primes_in, resclass_census, sigma_p
from .matrix import MatF, gl_order, sl_order, z_order
from .sumsets import (
    MatrixSet,
    asymptotic_table,
    count_singular_sums,
    count_sl_sums,
    count_sumproduct,
    gap_report,
)

__all__ = [
    "CharAccum", "ScanSpec", "bound_survey", "kloosterman", "sum_singular", "sum_sl",
    "RankProfile", "Space", "enumerate_indices", "enumerate_matrices", "rank_profile",
    "Felt", "FieldCtx", "field_new",
    "IntSet", "divides_W", "nu_p", "omega_W", "primes_in", "resclass_census", "sigma_p",
    "MatF", "gl_order", "sl_order", "z_order",
    "MatrixSet", "asymptotic_table", "count_singular_sums", "count_sl_sums", "count_sumproduct", "gap_report",
]
