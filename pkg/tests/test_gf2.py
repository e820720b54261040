import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from holocode import gf2
from holocode.errors import CapacityError
from holocode.gf2 import BitMatrix, BitVector

from oracles import enumerate_solutions, naive_rank, span_size


def bits(draw_shape):
    rows, cols = draw_shape
    return st.lists(st.lists(st.integers(0, 1), min_size=cols, max_size=cols), min_size=rows, max_size=rows)


@st.composite
def matrices(draw, max_rows=12, max_cols=70):
    rows = draw(st.integers(0, max_rows))
    cols = draw(st.integers(1, max_cols))
    return np.array(draw(bits((rows, cols))), dtype=np.uint8).reshape(rows, cols)


def test_bitvector_roundtrip_and_padding():
    v = BitVector.from_str("1011" + "0" * 60 + "11")
    assert v.length == 66
    assert str(v) == "1011" + "0" * 60 + "11"
    assert v.indices() == [0, 2, 3, 64, 65]
    assert v.weight() == 5
    assert (v ^ v) == BitVector.zeros(66)
    assert v.to_int() == 0b1101 + (3 << 64)
    assert BitVector.from_int(66, v.to_int()) == v
    with pytest.raises(ValueError):
        BitVector(3, np.array([0b1000], dtype=np.uint64))


def test_bitvector_capacity():
    with pytest.raises(CapacityError):
        BitVector.zeros(gf2.MAX_BITS + 1)


def test_bitvector_length_mismatch():
    with pytest.raises(ValueError):
        BitVector.from_str("01") ^ BitVector.from_str("011")


def test_rank_identity():
    assert gf2.rank(BitMatrix.identity(3)) == 3


def test_rank_duplicate_rows():
    m = BitMatrix.from_rows([BitVector.from_str("1010"), BitVector.from_str("1010")])
    assert gf2.rank(m) == 1


def test_rank_matches_span_enumeration():
    rng = np.random.default_rng(20)
    a = rng.integers(0, 2, size=(20, 12))
    expected = int(np.log2(span_size(a)))
    m = BitMatrix.from_array(a)
    assert gf2.rank(m) == expected == naive_rank(a)
    # input untouched
    assert np.array_equal(m.to_array(), a)


def test_solve_identity():
    lam = gf2.solve_combination(BitMatrix.identity(4), BitVector.from_str("0101"))
    assert str(lam) == "0101"


def test_solve_two_row_xor():
    rows = BitMatrix.from_rows([BitVector.from_str("110"), BitVector.from_str("011")])
    assert str(gf2.solve_combination(rows, BitVector.from_str("101"))) == "11"


def test_solve_dimension_mismatch():
    with pytest.raises(ValueError):
        gf2.solve_combination(BitMatrix.identity(3), BitVector.from_str("01"))


@pytest.mark.parametrize("seed", range(25))
def test_solve_matches_exhaustive_enumeration(seed):
    rng = np.random.default_rng(seed)
    a = rng.integers(0, 2, size=(6, 10))
    # alternate between reachable and arbitrary targets
    if seed % 2:
        target = rng.integers(0, 2, size=10)
    else:
        target = (rng.integers(0, 2, size=6) @ a) % 2
    m = BitMatrix.from_array(a)
    lam = gf2.solve_combination(m, BitVector.from_bits(target))
    sols = enumerate_solutions(a, target)
    if lam is None:
        assert sols == []
    else:
        assert tuple(lam.to_bits().tolist()) in sols
        assert gf2.combine(m, lam) == BitVector.from_bits(target)


def test_solve_is_deterministic():
    rng = np.random.default_rng(3)
    a = rng.integers(0, 2, size=(9, 5))
    m = BitMatrix.from_array(a)
    t = BitVector.from_bits(a[0] ^ a[4])
    assert gf2.solve_combination(m, t) == gf2.solve_combination(BitMatrix.from_array(a.copy()), t)


def test_kernel_identity_and_zero():
    assert gf2.kernel_basis(BitMatrix.identity(3)) == []
    assert len(gf2.kernel_basis(BitMatrix.from_array(np.zeros((2, 5), dtype=np.uint8)))) == 2


def test_kernel_random_8x8():
    rng = np.random.default_rng(8)
    a = rng.integers(0, 2, size=(8, 8))
    a[5] = a[1] ^ a[2]
    m = BitMatrix.from_array(a)
    basis = gf2.kernel_basis(m)
    assert len(basis) == 8 - naive_rank(a)
    for x in basis:
        assert x.any()
        assert not ((x.to_bits() @ a) % 2).any()
    assert naive_rank(np.array([x.to_bits() for x in basis])) == len(basis)


@settings(max_examples=200, deadline=None)
@given(matrices())
def test_rank_nullity(a):
    m = BitMatrix.from_array(a)
    assert gf2.rank(m) + len(gf2.kernel_basis(m)) == a.shape[0]


@settings(max_examples=200, deadline=None)
@given(matrices(max_rows=8, max_cols=20), st.data())
def test_solve_roundtrip(a, data):
    target = np.array(data.draw(bits((1, a.shape[1])))[0], dtype=np.uint8)
    m = BitMatrix.from_array(a)
    lam = gf2.solve_combination(m, BitVector.from_bits(target))
    if lam is not None:
        assert gf2.combine(m, lam) == BitVector.from_bits(target)
    else:
        assert naive_rank(np.vstack([a, target])) > naive_rank(a) if a.shape[0] else target.any()


def test_packed_agrees_with_naive_on_1000_instances():
    rng = np.random.default_rng(1000)
    for _ in range(1000):
        rows = int(rng.integers(1, 20))
        cols = int(rng.integers(1, 65))
        a = rng.integers(0, 2, size=(rows, cols))
        assert gf2.rank(BitMatrix.from_array(a)) == naive_rank(a)


def test_row_reduce_is_rref_and_tracked():
    rng = np.random.default_rng(5)
    a = rng.integers(0, 2, size=(7, 9))
    ech = gf2.row_reduce(BitMatrix.from_array(a))
    red = ech.reduced.to_array()
    combos = ech.combos.to_array()
    assert np.array_equal((combos @ a) % 2, red)
    for c, p in enumerate(ech.pivots):
        if p >= 0:
            assert red[:, c].sum() == 1 and red[p, c] == 1
    assert ech.rank == naive_rank(a)


def test_row_ops_bounded_by_rows_times_rank():
    # each pivot XORs into at most rows - 1 other rows
    rng = np.random.default_rng(6)
    for a_rows, cols in itertools.product((10, 40), (20, 80)):
        a = rng.integers(0, 2, size=(a_rows, cols))
        ech = gf2.row_reduce(BitMatrix.from_array(a))
        assert ech.row_ops <= (a_rows - 1) * ech.rank
