"""Rank and Smith form checks against hand-computable matrices."""

from hypothesis import given, strategies as st

from graphhom.linalg import (
    f2_is_zero,
    f2_mul,
    f2_rank,
    int_is_zero,
    int_mul,
    int_rank,
    smith_invariant_factors,
)


def test_f2_rank_basic():
    assert f2_rank([]) == 0
    assert f2_rank([0, 0]) == 0
    assert f2_rank([0b11, 0b01, 0b10]) == 2
    assert f2_rank([0b111, 0b011, 0b100]) == 2
    assert f2_rank([1 << 100, 1]) == 2


def test_f2_mul_and_zero():
    # [[1,1],[0,1]] squared over F2 is [[1,0],[0,1]]
    a = [0b11, 0b10]
    assert f2_mul(a, a) == [0b01, 0b10]
    assert f2_is_zero(f2_mul([0b11], [0b1, 0b1]))


@given(st.lists(st.integers(min_value=0, max_value=2**12 - 1), max_size=8))
def test_f2_rank_invariant_under_row_xor(rows):
    r = f2_rank(rows)
    if len(rows) >= 2:
        mixed = rows[:]
        mixed[0] ^= mixed[1]
        assert f2_rank(mixed) == r


def test_smith_known_forms():
    assert smith_invariant_factors([]) == []
    assert smith_invariant_factors([[0, 0], [0, 0]]) == []
    assert smith_invariant_factors([[1, 0], [0, 1]]) == [1, 1]
    assert smith_invariant_factors([[2, 0], [0, 3]]) == [1, 6]
    assert smith_invariant_factors([[2, 4, 4], [-6, 6, 12], [10, 4, 16]]) == [2, 2, 156]
    # presentation of Z/2 + Z/2 inside Z^3
    assert smith_invariant_factors([[2, 0, 0], [0, 2, 0]]) == [2, 2]


def test_smith_rank_matches_obvious_rank():
    assert int_rank([[1, 2], [2, 4]]) == 1
    assert int_rank([[1, 2], [3, 4]]) == 2
    assert int_rank([[0]]) == 0


@given(
    st.lists(
        st.lists(st.integers(min_value=-4, max_value=4), min_size=3, max_size=3),
        min_size=1,
        max_size=4,
    )
)
def test_smith_divisibility_chain(rows):
    factors = smith_invariant_factors(rows)
    assert all(f > 0 for f in factors)
    for a, b in zip(factors, factors[1:]):
        assert b % a == 0
    assert len(factors) <= min(len(rows), 3)


def test_int_mul():
    a = [[1, 2], [3, 4]]
    b = [[0, 1], [1, 0]]
    assert int_mul(a, b) == [[2, 1], [4, 3]]
    assert int_is_zero(int_mul([[1, -1]], [[1, 1], [1, 1]]))
