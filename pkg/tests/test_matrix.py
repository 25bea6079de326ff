import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from matsumset.errors import ConfigInvalid, CtxMismatch, Singular
from matsumset.field import field_new
from matsumset.matrix import MatF, check_dimension, gl_order, rank_count, sl_order, z_order


def test_det_examples(f3):
    for f in (f3, field_new(2, 2), field_new(7)):
        assert MatF.identity(f, 3).det() == f.one
    assert MatF.from_rows(f3, [[1, 2], [2, 1]]).det() == f3.zero


def test_inverse_examples(f2, f5):
    assert MatF.identity(f5, 2).inverse() == MatF.identity(f5, 2)
    assert MatF.from_rows(f5, [[2, 0], [0, 3]]).inverse() == MatF.from_rows(f5, [[3, 0], [0, 2]])
    m = MatF.from_rows(f2, [[1, 1], [0, 1]])
    assert m.inverse() == m
    assert m @ m == MatF.identity(f2, 2)


def test_inverse_of_singular_raises(f3):
    with pytest.raises(Singular):
        MatF.from_rows(f3, [[1, 2], [2, 1]]).inverse()


def test_rank_examples(f2, f4):
    assert MatF.zero(f2, 3).rank() == 0
    assert MatF.identity(f4, 3).rank() == 3
    assert MatF.from_rows(f2, [[1, 1], [1, 1]]).rank() == 1


def test_dot_examples(f3, f5):
    i = MatF.identity(f5, 2)
    assert i.dot(i) == f5(2)
    assert MatF.zero(f5, 2).dot(MatF.from_rows(f5, [[1, 2], [3, 4]])) == f5.zero
    u = MatF.from_rows(f3, [[1, 2], [0, 1]])
    x = MatF.from_rows(f3, [[2, 2], [1, 1]])
    assert u.dot(x) == f3(1)


def test_ctx_mismatch(f2, f3):
    with pytest.raises(CtxMismatch):
        MatF.identity(f2, 2).dot(MatF.identity(f3, 2))
    with pytest.raises(CtxMismatch):
        MatF.identity(f2, 2) + MatF.identity(f2, 3)


def test_index_roundtrip_and_order(f3):
    assert MatF.from_index(f3, 2, 0) == MatF.zero(f3, 2)
    # first entry is the most significant digit
    assert MatF.from_index(f3, 2, 1) == MatF.unit(f3, 2, 1, 1)
    assert MatF.from_index(f3, 2, 27) == MatF.unit(f3, 2, 0, 0)
    for idx in range(81):
        assert MatF.from_index(f3, 2, idx).index == idx


def test_json_roundtrip(f4):
    m = MatF.from_rows(f4, [[0, 1], [2, 3]])
    data = m.to_json()
    assert data["entries"] == [[0, 0], [1, 0], [0, 1], [1, 1]]
    assert MatF.from_json(f4, data) == m


def test_det_matches_leibniz_oracle_prime_field(f3):
    for m in itertools.product(range(3), repeat=4):
        mat = MatF(f3, 2, m)
        assert mat.det().code == oracles.det_mod(m, 2, 3)


@pytest.mark.parametrize("p,k,n", [(2, 1, 3), (2, 2, 2), (3, 2, 2), (5, 1, 3), (2, 3, 3)])
def test_det_elimination_equals_cofactor(p, k, n):
    f = field_new(p, k)
    rng = np.random.default_rng(11)
    for _ in range(60):
        m = MatF(f, n, tuple(int(x) for x in rng.integers(0, f.q, size=n * n)))
        assert m.det() == m.det_cofactor()
        assert (m.rank() == n) == (not m.det().is_zero())


fields = st.sampled_from([(2, 1), (3, 1), (2, 2), (5, 1), (3, 2), (7, 1), (2, 3)])


@settings(max_examples=150, deadline=None)
@given(fields, st.integers(2, 3), st.data())
def test_det_multiplicative_and_inverse(pk, n, data):
    f = field_new(*pk)
    entries = st.lists(st.integers(0, f.q - 1), min_size=n * n, max_size=n * n)
    a = MatF(f, n, tuple(data.draw(entries)))
    b = MatF(f, n, tuple(data.draw(entries)))
    assert (a @ b).det() == a.det() * b.det()
    assert (a + b) - b == a
    if a.is_invertible():
        assert a @ a.inverse() == MatF.identity(f, n)
        assert a.inverse() @ a == MatF.identity(f, n)


def test_order_examples():
    assert gl_order(2, 2) == 6
    assert gl_order(3, 2) == 168
    assert sl_order(2, 3) == 24
    assert z_order(2, 2) == 10


@pytest.mark.parametrize("n", [1, 2, 3, 4, 5])
@pytest.mark.parametrize("q", [2, 3, 4, 5, 7, 8, 9, 11, 16, 25, 27, 1024])
def test_order_identities(n, q):
    assert gl_order(n, q) + z_order(n, q) == q ** (n * n)
    assert gl_order(n, q) == (q - 1) * sl_order(n, q)
    assert sum(rank_count(n, r, q) for r in range(n + 1)) == q ** (n * n)
    assert rank_count(n, n, q) == gl_order(n, q)
    assert rank_count(n, 0, q) == 1


def test_rank_count_small_values():
    assert [rank_count(2, r, 2) for r in range(3)] == [1, 9, 6]
    assert rank_count(3, 1, 2) == 49
    # rank-one n x n matrices are outer products: (q^n - 1)^2 / (q - 1)
    for q in (2, 3, 5, 7):
        assert rank_count(3, 1, q) == (q**3 - 1) ** 2 // (q - 1)


def test_dimension_guard():
    with pytest.raises(ConfigInvalid):
        check_dimension(1)
    with pytest.raises(ConfigInvalid):
        check_dimension(0)
    check_dimension(1, scalar_diagnostic=True)
    check_dimension(2)


def test_scale_and_neg(f5):
    m = MatF.from_rows(f5, [[1, 2], [3, 4]])
    assert m.scale(f5(2)) == MatF.from_rows(f5, [[2, 4], [1, 3]])
    assert m + (-m) == MatF.zero(f5, 2)
