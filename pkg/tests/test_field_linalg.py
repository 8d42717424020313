import itertools
from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from strata_lab import linalg
from strata_lab.errors import FieldMismatchError, ParseError
from strata_lab.field import GF, QQ, Field


def brute_rank(a, p):
    """rank = n - log_p |kernel|, kernel found by enumerating all vectors."""
    rows, n = a.shape
    count = sum(1 for v in itertools.product(range(p), repeat=n) if not (a @ np.array(v) % p).any())
    return n - round(np.log(count) / np.log(p))


small_mats = st.tuples(st.integers(1, 4), st.integers(1, 4), st.sampled_from([2, 3, 5])).flatmap(
    lambda t: st.tuples(
        st.lists(st.lists(st.integers(0, t[2] - 1), min_size=t[1], max_size=t[1]),
                 min_size=t[0], max_size=t[0]),
        st.just(t[2]),
    )
)


def test_field_basics():
    f = GF(7)
    assert f(-1) == 6 and f(Fraction(1, 2)) == 4
    assert f.inv(3) * 3 % 7 == 1
    assert f.to_str(6) == "-1" and f.to_str(3) == "3"
    assert QQ(Fraction(3, 6)) == Fraction(1, 2)
    assert Field.from_json(f.to_json()) == f
    assert Field.from_json("rational") is QQ
    with pytest.raises(ZeroDivisionError):
        f.inv(0)
    with pytest.raises(ParseError):
        f(Fraction(1, 7))
    with pytest.raises(FieldMismatchError):
        f.check_same(GF(11))


@pytest.mark.parametrize("p", [1, 4, 100, 2 ** 31 + 11])
def test_bad_modulus(p):
    with pytest.raises(ValueError):
        GF(p)


def test_large_prime_uses_python_ints():
    f = GF(2_147_483_647)
    assert f.dtype is object
    a = f.array([[2 ** 30, 3], [5, 2 ** 29]])
    assert linalg.rank(a, f) == 2
    assert linalg.det(a, f) == (2 ** 59 - 15) % f.prime


@given(small_mats)
def test_rank_matches_kernel_enumeration(data):
    rows, p = data
    f = GF(p)
    a = f.array(rows)
    assert linalg.rank(a, f) == brute_rank(np.array(rows), p)


@given(small_mats)
def test_rank_transpose_and_nullspace(data):
    rows, p = data
    f = GF(p)
    a = f.array(rows)
    r = linalg.rank(a, f)
    assert linalg.rank(a.T.copy(), f) == r
    ns = linalg.nullspace(a, f)
    assert ns.shape[1] == a.shape[1] - r
    assert not f.reduce(a @ ns).any()
    ln = linalg.left_nullspace(a, f)
    assert ln.shape[0] == a.shape[0] - r
    assert not f.reduce(ln @ a).any()


@given(st.lists(st.lists(st.integers(-5, 5), min_size=3, max_size=3), min_size=3, max_size=3))
def test_rational_rank_and_det_match_sympy(rows):
    a = QQ.array(rows)
    m = sympy.Matrix(rows)
    assert linalg.rank(a, QQ) == m.rank()
    assert linalg.det(a, QQ) == m.det()


@given(st.lists(st.lists(st.integers(0, 100), min_size=4, max_size=4), min_size=4, max_size=4))
def test_inverse_and_solve(rows):
    f = GF(101)
    a = f.array(rows)
    if linalg.rank(a, f) < 4:
        assert linalg.det(a, f) == 0
        return
    inv = linalg.inverse(a, f)
    assert (f.reduce(a @ inv) == f.identity(4)).all()
    b = f.array([1, 2, 3, 4])
    x = linalg.solve(a, b, f)
    assert (f.reduce(a @ x) == b).all()


def test_solve_inconsistent():
    f = GF(5)
    a = f.array([[1, 1], [2, 2]])
    assert linalg.solve(a, f.array([1, 3]), f) is None


def test_complete_basis():
    f = GF(3)
    v = f.array([[1], [1], [0]])
    extra = linalg.complete_basis(v, 3, f)
    assert linalg.rank(np.concatenate([v, extra], axis=1), f) == 3


@given(st.integers(0, 10 ** 6))
def test_batch_rank_agrees(seed):
    rng = np.random.default_rng(seed)
    p = int(rng.choice([2, 3, 7]))
    stack = rng.integers(0, p, size=(20, 3, 4))
    f = GF(p)
    expected = [linalg.rank(f.array(m), f) for m in stack]
    assert list(linalg.batch_rank(stack, p)) == expected
