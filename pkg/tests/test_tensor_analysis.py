import itertools

import pytest

from holocode.errors import CapacityError
from holocode.pauli import PauliString, SeedCode, bell_seed, five_qubit_seed, steane_seed
from holocode.tensor_analysis import (
    Bipartition,
    block_perfect_failures,
    check_block_perfect,
    check_perfect,
    contiguous_windows,
    dense_isometry_oracle,
    is_cyclic_window,
    is_isometry_for,
)


def product_seed(n=4):
    stabs = tuple(PauliString.from_str("I" * i + "Z" + "I" * (n - i - 1)) for i in range(n))
    return SeedCode(name="product", leg_order=tuple(str(i) for i in range(1, n)) + ("L",), stabilizers=stabs)


def all_parts(n):
    for size in range(n // 2 + 1):
        for a in itertools.combinations(range(n), size):
            yield Bipartition(a)


def test_steane_witness_partition():
    seed = steane_seed()
    part = Bipartition.from_labels(seed, ["3", "4", "5", "L"])
    assert not is_isometry_for(seed, part)
    assert not dense_isometry_oracle(seed, part)


def test_empty_partition_is_isometry():
    for seed in (steane_seed(), five_qubit_seed(), bell_seed()):
        assert is_isometry_for(seed, Bipartition(()))


def test_steane_contiguous_windows():
    seed = steane_seed()
    for w in contiguous_windows(8, 4):
        assert is_isometry_for(seed, Bipartition(w)), w


def test_seed_classification():
    assert check_block_perfect(steane_seed())
    assert check_block_perfect(five_qubit_seed())
    assert check_perfect(five_qubit_seed())
    assert not check_perfect(steane_seed())
    assert check_perfect(bell_seed())


def test_scrambled_steane_matches_dense_oracle():
    seed = steane_seed().with_leg_order(["1", "4", "3", "2", "5", "6", "L", "7"])
    dense_failures = [Bipartition(w) for w in contiguous_windows(8) if not dense_isometry_oracle(seed, Bipartition(w))]
    assert block_perfect_failures(seed) == dense_failures
    assert dense_failures
    assert not check_block_perfect(seed)


@pytest.mark.parametrize("make", [steane_seed, five_qubit_seed, bell_seed])
def test_criterion_matches_dense_on_every_bipartition(make):
    seed = make()
    for part in all_parts(seed.n_legs):
        assert is_isometry_for(seed, part) == dense_isometry_oracle(seed, part), part


def test_product_state_is_not_an_isometry():
    seed = product_seed()
    half = Bipartition((0, 1))
    assert not dense_isometry_oracle(seed, half)
    assert not is_isometry_for(seed, half)


def test_square_cut_symmetry():
    for seed in (steane_seed(), five_qubit_seed()):
        n = seed.n_legs
        for a in itertools.combinations(range(n), n // 2):
            part = Bipartition(a)
            assert is_isometry_for(seed, part) == is_isometry_for(seed, Bipartition(part.complement(n)))


def test_perfect_implies_block_perfect():
    for seed in (steane_seed(), five_qubit_seed(), bell_seed(), product_seed()):
        if check_perfect(seed):
            assert check_block_perfect(seed)


def test_invalid_partitions():
    seed = steane_seed()
    with pytest.raises(ValueError):
        is_isometry_for(seed, Bipartition((0, 0)))
    with pytest.raises(ValueError):
        is_isometry_for(seed, Bipartition((9,)))
    with pytest.raises(ValueError):
        is_isometry_for(seed, Bipartition((0, 1, 2, 3, 4)))


def test_dense_capacity():
    big = product_seed(13)
    with pytest.raises(CapacityError):
        dense_isometry_oracle(big, Bipartition(()))


def test_cyclic_window_detection():
    assert is_cyclic_window((6, 7, 0), 8)
    assert is_cyclic_window((2, 3), 8)
    assert not is_cyclic_window((2, 4), 8)
    assert not is_cyclic_window((2, 3, 4, 6), 8)
