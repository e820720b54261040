"""Isometry checks for seed tensors: perfect and block-perfect.

A stabilizer state viewed as a map from legs ``A`` to the complement is
proportional to an isometry exactly when no stabilizer other than the identity is
supported inside ``A``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterator, Sequence

import numpy as np

from . import gf2
from .errors import CapacityError
from .pauli import SeedCode

DENSE_MAX_LEGS = 12
DENSE_TOL = 1e-9


@dataclass(frozen=True)
class Bipartition:
    """Input legs ``a_legs`` (tensor positions); the rest are outputs."""

    a_legs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "a_legs", tuple(int(i) for i in self.a_legs))

    @classmethod
    def from_labels(cls, seed: SeedCode, labels: Sequence[str]) -> Bipartition:
        return cls(tuple(seed.position(str(lbl)) for lbl in labels))

    def validate(self, n_legs: int) -> None:
        a = self.a_legs
        if len(set(a)) != len(a):
            raise ValueError(f"repeated legs in {a}")
        if any(not 0 <= i < n_legs for i in a):
            raise ValueError(f"leg index out of range in {a}")
        if 2 * len(a) > n_legs:
            raise ValueError(f"{len(a)} inputs exceed half of {n_legs} legs")

    def complement(self, n_legs: int) -> tuple[int, ...]:
        a = set(self.a_legs)
        return tuple(i for i in range(n_legs) if i not in a)


def _out_columns(n_legs: int, outputs: Sequence[int]) -> list[int]:
    return list(outputs) + [n_legs + i for i in outputs]


def is_isometry_for(seed: SeedCode, part: Bipartition) -> bool:
    """Stabilizer criterion: the generator rows restricted to the outputs are independent.

    A dependency among the restricted rows is a stabilizer that acts trivially on
    every output, i.e. one supported inside the inputs.
    """
    n = seed.n_legs
    part.validate(n)
    key = ("iso", part.a_legs)
    if key not in seed._cache:
        restricted = seed.generator_matrix().take_columns(_out_columns(n, part.complement(n)))
        seed._cache[key] = not gf2.kernel_basis(restricted)
    return seed._cache[key]


def contiguous_windows(n_legs: int, max_size: int | None = None) -> Iterator[tuple[int, ...]]:
    """Every cyclic window ``(p, p+1, ..., p+s-1)`` with ``1 <= s <= max_size``."""
    if max_size is None:
        max_size = n_legs // 2
    for size in range(1, max_size + 1):
        for start in range(n_legs):
            yield tuple((start + i) % n_legs for i in range(size))


def is_cyclic_window(legs: Sequence[int], n_legs: int) -> bool:
    s = set(legs)
    if not s or len(s) == n_legs:
        return True
    # exactly one place where the cyclic indicator switches on
    return sum(1 for i in range(n_legs) if i in s and (i - 1) % n_legs not in s) == 1


def block_perfect_failures(seed: SeedCode) -> list[Bipartition]:
    return [
        Bipartition(w)
        for w in contiguous_windows(seed.n_legs)
        if not is_isometry_for(seed, Bipartition(w))
    ]


def check_block_perfect(seed: SeedCode) -> bool:
    return not block_perfect_failures(seed)


def perfect_failures(seed: SeedCode) -> list[Bipartition]:
    n = seed.n_legs
    out = []
    for size in range(1, n // 2 + 1):
        for a in itertools.combinations(range(n), size):
            if not is_isometry_for(seed, Bipartition(a)):
                out.append(Bipartition(a))
    return out


def check_perfect(seed: SeedCode) -> bool:
    return not perfect_failures(seed)


def _apply_pauli(state: np.ndarray, symbols: str, phase: int) -> np.ndarray:
    """Apply ``i**phase * P`` to a state stored as a tensor with one axis per leg."""
    out = state
    for axis, c in enumerate(symbols):
        if c == "I":
            continue
        sl = [slice(None)] * out.ndim
        if c in "ZY":
            sl[axis] = 1
            out = out.copy()
            out[tuple(sl)] *= -1
        if c in "XY":
            out = np.flip(out, axis=axis)
        if c == "Y":
            # Y = i X Z
            out = 1j * out
    return (1j**phase) * out


def dense_state(seed: SeedCode, rng_seed: int = 0) -> np.ndarray:
    """Amplitude tensor of the joint +1 eigenstate of the seed's stabilizers."""
    n = seed.n_legs
    if n > DENSE_MAX_LEGS:
        raise CapacityError(f"dense state on {n} legs exceeds {DENSE_MAX_LEGS}")
    rng = np.random.default_rng(rng_seed)
    for _ in range(8):
        v = rng.normal(size=(2,) * n) + 1j * rng.normal(size=(2,) * n)
        for s in seed.stabilizers:
            v = 0.5 * (v + _apply_pauli(v, s.symbols(), s.phase))
        norm = np.linalg.norm(v)
        if norm > 1e-6:
            return v / norm
    raise RuntimeError("stabilizers do not fix a common state")


def dense_isometry_oracle(seed: SeedCode, part: Bipartition, tol: float = DENSE_TOL) -> bool:
    """Reshape the dense state into a map from ``A`` to its complement and test ``T^H T ~ 1``."""
    n = seed.n_legs
    if n > DENSE_MAX_LEGS:
        raise CapacityError(f"dense oracle limited to {DENSE_MAX_LEGS} legs, got {n}")
    part.validate(n)
    state = dense_state(seed)
    a = list(part.a_legs)
    abar = list(part.complement(n))
    t = np.transpose(state, abar + a).reshape(2 ** len(abar), 2 ** len(a))
    gram = t.conj().T @ t
    scale = np.trace(gram).real / gram.shape[0]
    return bool(np.max(np.abs(gram - scale * np.eye(gram.shape[0]))) < tol)
