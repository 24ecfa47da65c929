"""Unit and property tests for the GF(3)/GF(9) arithmetic kernels."""

import numpy as np
import pytest

from f4e8 import gf


def test_field_axioms_exhaustive():
    F = gf.GF9
    els = F.elements()
    for x in els:
        assert F.add(x, 0) == x
        assert F.mul(x, 1) == x
        assert F.add(x, F.neg(x)) == 0
        if x:
            assert F.mul(x, F.inv(x)) == 1
        for y in els:
            assert F.add(x, y) == F.add(y, x)
            assert F.mul(x, y) == F.mul(y, x)
            for z in els:
                assert F.add(F.add(x, y), z) == F.add(x, F.add(y, z))
                assert F.mul(F.mul(x, y), z) == F.mul(x, F.mul(y, z))
                assert F.mul(x, F.add(y, z)) == F.add(F.mul(x, y), F.mul(x, z))


def test_frobenius_is_the_gf9_automorphism():
    F = gf.GF9
    for x in range(3):
        assert F.frobenius(x) == x  # fixes the prime field
    fixed = [x for x in range(9) if F.frobenius(x) == x]
    assert fixed == [0, 1, 2]
    for x in range(9):
        for y in range(9):
            assert F.frobenius(F.mul(x, y)) == F.mul(F.frobenius(x), F.frobenius(y))
            assert F.frobenius(F.add(x, y)) == F.add(F.frobenius(x), F.frobenius(y))


@pytest.mark.parametrize("field", [gf.GF3, gf.GF9])
def test_matmul_inverse_rank_roundtrip(field):
    rng = np.random.default_rng(0)
    for _ in range(10):
        A = rng.integers(0, field.order, size=(12, 12)).astype(np.int8)
        if field.rank(A) < 12:
            continue
        Ainv = field.mat_inv(A)
        assert field.mat_equal(field.mat_mul(A, Ainv), field.identity(12))


@pytest.mark.parametrize("field", [gf.GF3, gf.GF9])
def test_nullspace_and_rank_nullity(field):
    rng = np.random.default_rng(1)
    for _ in range(10):
        A = rng.integers(0, field.order, size=(8, 14)).astype(np.int8)
        ns = field.nullspace(A)
        assert not np.any(field.mat_mul(A, ns.T))
        assert field.rank(A) + ns.shape[0] == 14


@pytest.mark.parametrize("field", [gf.GF3, gf.GF9])
def test_solve_particular_solution(field):
    rng = np.random.default_rng(2)
    A = rng.integers(0, field.order, size=(6, 9)).astype(np.int8)
    x0 = rng.integers(0, field.order, size=9).astype(np.int8)
    b = field.mat_vec(A, x0)
    x = field.solve(A, b)
    assert x is not None
    assert np.array_equal(field.mat_vec(A, x), b)


def test_solve_inconsistent_returns_none():
    field = gf.GF3
    A = np.array([[1, 0], [1, 0]], dtype=np.int8)
    b = np.array([1, 2], dtype=np.int8)
    assert field.solve(A, b) is None


def test_jordan_type_of_explicit_jordan_matrix():
    field = gf.GF3
    blocks = (4, 2, 2, 1)
    n = sum(blocks)
    N = field.zeros(n, n)
    pos = 0
    for b in blocks:
        for i in range(b - 1):
            N[pos + i, pos + i + 1] = 1
        pos += b
    assert gf.jordan_type_nilpotent(field, N) == blocks


def test_jordan_type_rejects_non_nilpotent():
    field = gf.GF3
    with pytest.raises(gf.NotNilpotentError):
        gf.jordan_type_nilpotent(field, field.identity(3))


def test_unipotent_order_and_multiplicative_order():
    field = gf.GF3
    N = field.zeros(4, 4)
    for i in range(3):
        N[i, i + 1] = 1
    u = field.add(field.identity(4), N)
    # a single Jordan block of size 4 over GF(3) has order 3^2
    assert gf.unipotent_order(field, u) == 9
    assert gf.multiplicative_order_scalar(2) == 2
    orders = {gf.multiplicative_order_scalar(x) for x in range(1, 9)}
    assert max(orders) == 8  # GF(9)^* is cyclic of order 8
