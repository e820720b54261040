import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from holocode.pauli import (
    PauliString,
    commutes,
    five_qubit_seed,
    multiply,
    steane_seed,
    support,
    symplectic_rank,
)

P = PauliString.from_str

# Dense single-qubit matrices for an independent phase check.
_M = {
    "I": np.eye(2),
    "X": np.array([[0, 1], [1, 0]]),
    "Y": np.array([[0, -1j], [1j, 0]]),
    "Z": np.array([[1, 0], [0, -1]]),
}


def dense(p: PauliString) -> np.ndarray:
    out = np.array([[1j**p.phase]])
    for c in p.symbols():
        out = np.kron(out, _M[c])
    return out


paulis = st.integers(1, 4).flatmap(
    lambda n: st.tuples(*[st.text("IXYZ", min_size=n, max_size=n)] * 3, st.tuples(*[st.integers(0, 3)] * 3))
)


def test_steane_s1_s3():
    s = steane_seed().stabilizers
    assert str(multiply(s[0], s[2])) == "+XXIXXIII"


def test_steane_s4_s5():
    s = steane_seed().stabilizers
    assert str(multiply(s[3], s[4])) == "+ZIZZIZII"


def test_identity_product():
    p = P("-XYZI")
    assert multiply(p, PauliString.identity(4)) == p


def test_square_of_hermitian_is_identity():
    for text in ("XYZ", "-YYI", "ZZZZ"):
        sq = multiply(P(text), P(text))
        assert sq == PauliString.identity(len(text.lstrip("-")))
        assert sq.sign == 1


def test_known_phases():
    assert multiply(P("X"), P("Z")) == P("-iY")
    assert multiply(P("Z"), P("X")) == P("+iY")
    assert multiply(P("XX"), P("ZZ")) == P("-YY")


def test_length_mismatch():
    with pytest.raises(ValueError):
        multiply(P("X"), P("XX"))
    with pytest.raises(ValueError):
        commutes(P("X"), P("XX"))


def test_commutes_basic():
    assert not commutes(P("X"), P("Z"))
    assert commutes(P("XZY"), P("XZY"))


def test_steane_tensor_stabilizers_commute():
    s = steane_seed().stabilizers
    assert all(commutes(a, b) for a in s for b in s)


def test_support_vectors():
    s = steane_seed().stabilizers
    # legs 1 2 3 4 5 6 L 7
    assert str(support(s[0])) == "11000101"
    assert support(PauliString.identity(5)).weight() == 0
    assert str(support(s[6])) == "11111111"


def test_steane_seed_rows():
    seed = steane_seed()
    assert seed.stabilizers[0].symbols() == "XXIIIXIX"
    assert seed.leg_order == ("1", "2", "3", "4", "5", "6", "L", "7")
    assert seed.logical_position == 6
    seed.check_invariants()
    assert symplectic_rank(seed.stabilizers) == 8


def test_five_qubit_seed():
    seed = five_qubit_seed()
    seed.check_invariants()
    assert [s.symbols() for s in seed.code_stabilizers] == ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]


def test_input_legs_flank_logical():
    assert steane_seed().input_physical(1) == (5,)
    assert steane_seed().input_physical(2) == (5, 6)
    assert five_qubit_seed().input_physical(2) == (4, 0)


def test_text_roundtrip():
    for text in ("+XIZY", "-ZZ", "+iY", "-iXI"):
        assert str(P(text)) == text
    with pytest.raises(ValueError):
        P("XQ")


@settings(max_examples=300, deadline=None)
@given(paulis)
def test_multiply_matches_dense(data):
    a, b, _, (pa, pb, _) = data
    p, q = PauliString(P(a).x, P(a).z, pa), PauliString(P(b).x, P(b).z, pb)
    assert np.allclose(dense(multiply(p, q)), dense(p) @ dense(q))


@settings(max_examples=300, deadline=None)
@given(paulis)
def test_multiply_associative(data):
    a, b, c, phases = data
    p, q, r = (PauliString(P(t).x, P(t).z, ph) for t, ph in zip((a, b, c), phases))
    assert multiply(p, multiply(q, r)) == multiply(multiply(p, q), r)


@settings(max_examples=300, deadline=None)
@given(paulis)
def test_commutes_matches_dense(data):
    a, b, _, _ = data
    da, db = dense(P(a)), dense(P(b))
    assert commutes(P(a), P(b)) == np.allclose(da @ db, db @ da)


def test_reordering_moves_columns():
    seed = steane_seed()
    scrambled = seed.with_leg_order(["1", "4", "3", "2", "5", "6", "L", "7"])
    assert scrambled.stabilizers[1].symbols() == "IXXXIIIX"
    assert scrambled.stabilizers[0].symbols() == "XIIXIXIX"
    scrambled.check_invariants()
