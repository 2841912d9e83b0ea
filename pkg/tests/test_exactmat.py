import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import elementary_divisors_by_minors
from torimirror.exactmat import (
    ReducedFraction,
    det,
    diag_matrix,
    identity,
    matmul,
    reduce_fraction,
    snf,
)


def assert_certificate(A, cert):
    n = len(A)
    assert matmul(matmul(cert.left, A), cert.right) == diag_matrix(cert.diag)
    assert abs(det(cert.left)) == 1 and abs(det(cert.right)) == 1
    assert matmul(cert.left, cert.left_inv) == identity(n)
    assert matmul(cert.right, cert.right_inv) == identity(n)
    d = cert.diag
    assert all(x >= 0 for x in d)
    for i in range(n - 1):
        if d[i] == 0:
            assert d[i + 1] == 0
        elif d[i + 1]:
            assert d[i + 1] % d[i] == 0


def test_identity():
    cert = snf([[1, 0], [0, 1]])
    assert cert.diag == (1, 1)
    assert_certificate([[1, 0], [0, 1]], cert)


def test_counterexample_matrix():
    cert = snf([[1, 0], [0, 0]])
    assert cert.diag == (1, 0)
    assert cert.s == 1 and cert.divisors == (1,)
    # already in normal form, so the certificate is trivial
    assert cert.left == identity(2) and cert.right == identity(2)


@pytest.mark.parametrize(
    "A, expected",
    [
        ([[2, 1], [0, 2]], (1, 4)),
        ([[12, 6, 4, 8], [3, 9, 6, 12], [2, 16, 14, 28], [20, 10, 10, 20]], (1, 10, 30, 0)),
        ([[2, 4, 4], [-6, 6, 12], [10, -4, -16]], (2, 6, 12)),
        ([[0, 0], [0, 0]], (0, 0)),
        ([[-3]], (3,)),
        ([[0, 4], [6, 0]], (2, 12)),
    ],
)
def test_against_minor_gcds(A, expected):
    # expected values come from oracles.elementary_divisors_by_minors
    assert elementary_divisors_by_minors(A) == expected
    cert = snf(A)
    assert cert.diag == expected
    assert_certificate(A, cert)


def test_random_certificates():
    rng = np.random.default_rng(1)
    for _ in range(300):
        n = int(rng.integers(1, 5))
        A = rng.integers(-5, 6, size=(n, n)).tolist()
        cert = snf(A)
        assert_certificate(A, cert)
        assert cert.diag == elementary_divisors_by_minors(A)


def test_big_entries_stay_exact():
    A = [[10**30 + 1, 2], [3 * 10**30, 7]]
    cert = snf(A)
    assert_certificate(A, cert)
    assert cert.diag[0] * cert.diag[1] == abs(det(A))


def test_rejects_non_square():
    with pytest.raises(ValueError):
        snf([[1, 2]])
    with pytest.raises(ValueError):
        snf([[1.5, 0], [0, 1]])


small_square = st.integers(1, 4).flatmap(
    lambda n: st.lists(st.lists(st.integers(-5, 5), min_size=n, max_size=n), min_size=n, max_size=n)
)


def unimodular(seq, n):
    M = [list(r) for r in identity(n)]
    for i, j, c in seq:
        i, j = i % n, j % n
        if i != j:
            M[i] = [a + c * b for a, b in zip(M[i], M[j])]
    return tuple(map(tuple, M))


ops = st.lists(st.tuples(st.integers(0, 3), st.integers(0, 3), st.integers(-3, 3)), max_size=8)


@settings(max_examples=150, deadline=None)
@given(small_square, ops, ops)
def test_divisors_invariant_under_unimodular_action(A, left_ops, right_ops):
    n = len(A)
    P, Q = unimodular(left_ops, n), unimodular(right_ops, n)
    B = matmul(matmul(P, A), Q)
    assert snf(B).diag == snf(A).diag
    assert_certificate(B, snf(B))


@pytest.mark.parametrize(
    "num, den, expected",
    [(1, 2, (1, 2)), (0, 5, (0, 1)), (4, 6, (2, 3)), (-4, 6, (-2, 3)), (4, -6, (-2, 3)), (7, 7, (1, 1))],
)
def test_reduce_fraction(num, den, expected):
    f = reduce_fraction(num, den)
    assert (f.numerator, f.denominator) == expected


def test_reduce_fraction_rejects_zero():
    with pytest.raises(ZeroDivisionError):
        reduce_fraction(1, 0)


def test_reduced_fraction_invariants():
    with pytest.raises(ValueError):
        ReducedFraction(2, 4)
    with pytest.raises(ValueError):
        ReducedFraction(1, 0)
    assert str(ReducedFraction(-2, 3)) == "-2/3"
