"""Pauli strings in symplectic form and the two seed-code presentations."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from . import gf2
from .gf2 import BitMatrix, BitVector

_SYMBOL = {(0, 0): "I", (1, 0): "X", (0, 1): "Z", (1, 1): "Y"}
_BITS = {v: k for k, v in _SYMBOL.items()}
_PHASE_PREFIX = {0: "+", 1: "+i", 2: "-", 3: "-i"}


@dataclass(frozen=True)
class PauliString:
    """``i**phase`` times a tensor product of I, X, Y, Z.

    Qubit ``j`` carries ``X`` if only ``x[j]`` is set, ``Z`` if only ``z[j]``, and
    the Hermitian ``Y`` if both.
    """

    x: BitVector
    z: BitVector
    phase: int = 0

    def __post_init__(self):
        if self.x.length != self.z.length:
            raise ValueError("x and z parts differ in length")
        object.__setattr__(self, "phase", self.phase % 4)

    @classmethod
    def identity(cls, n: int) -> PauliString:
        return cls(BitVector.zeros(n), BitVector.zeros(n))

    @classmethod
    def from_str(cls, text: str) -> PauliString:
        """Parse e.g. ``"XZZXI"``, ``"-XIY"`` or ``"+iZZ"``."""
        text = text.strip()
        phase = 0
        for prefix, p in (("+i", 1), ("-i", 3), ("+", 0), ("-", 2)):
            if text.startswith(prefix):
                phase, text = p, text[len(prefix):]
                break
        if not text or set(text) - set("IXYZ"):
            raise ValueError(f"not a Pauli string: {text!r}")
        return cls(
            BitVector.from_bits(_BITS[c][0] for c in text),
            BitVector.from_bits(_BITS[c][1] for c in text),
            phase,
        )

    @property
    def n(self) -> int:
        return self.x.length

    @property
    def sign(self) -> int:
        if self.phase % 2:
            raise ValueError("operator has an imaginary phase")
        return 1 if self.phase == 0 else -1

    def symbols(self) -> str:
        return "".join(_SYMBOL[(int(a), int(b))] for a, b in zip(self.x.to_bits(), self.z.to_bits()))

    def __str__(self) -> str:
        return _PHASE_PREFIX[self.phase] + self.symbols()

    def __repr__(self) -> str:
        return f"PauliString('{self}')"

    def support(self) -> BitVector:
        return self.x | self.z

    def weight(self) -> int:
        return self.support().weight()

    def symplectic(self) -> BitVector:
        """``x`` followed by ``z``."""
        return self.x.concat(self.z)

    def restrict(self, positions: Sequence[int]) -> PauliString:
        return PauliString(self.x.take(positions), self.z.take(positions), self.phase)

    def __mul__(self, other: PauliString) -> PauliString:
        return multiply(self, other)


def _check_pair(p: PauliString, q: PauliString) -> None:
    if p.n != q.n:
        raise ValueError(f"length mismatch: {p.n} vs {q.n}")


def multiply(p: PauliString, q: PauliString) -> PauliString:
    """Operator product ``p q`` with its exact phase.

    Each factor is rewritten as ``i**(x.z) X^x Z^z``; moving ``Z^z1`` past
    ``X^x2`` costs ``(-1)**(z1.x2)``.
    """
    _check_pair(p, q)
    x = p.x ^ q.x
    z = p.z ^ q.z
    phase = (
        p.phase
        + q.phase
        + (p.x & p.z).weight()
        + (q.x & q.z).weight()
        + 2 * (p.z & q.x).weight()
        - (x & z).weight()
    )
    return PauliString(x, z, phase)


def commutes(p: PauliString, q: PauliString) -> bool:
    _check_pair(p, q)
    return ((p.x & q.z).weight() + (p.z & q.x).weight()) % 2 == 0


def support(p: PauliString) -> BitVector:
    return p.support()


def symplectic_matrix(paulis: Sequence[PauliString], n: int | None = None) -> BitMatrix:
    """Rows ``x | z`` for each operator."""
    if not paulis:
        if n is None:
            raise ValueError("qubit count needed for an empty list")
        return BitMatrix(0, 2 * n)
    return BitMatrix.from_rows([p.symplectic() for p in paulis])


def symplectic_rank(paulis: Sequence[PauliString]) -> int:
    return gf2.rank(symplectic_matrix(paulis)) if paulis else 0


def product(paulis: Sequence[PauliString], n: int) -> PauliString:
    out = PauliString.identity(n)
    for p in paulis:
        out = multiply(out, p)
    return out


@dataclass(frozen=True)
class SeedCode:
    """Stabilizer presentation of a seed tensor.

    ``leg_order`` is the cyclic order of the tensor legs; the logical leg is
    labelled ``"L"``. ``stabilizers`` act on all legs in that order and fix the
    tensor's state. ``code_stabilizers`` and the logicals act on the physical legs
    only, in the same cyclic order with ``L`` removed.
    """

    name: str
    leg_order: tuple[str, ...]
    stabilizers: tuple[PauliString, ...]
    code_stabilizers: tuple[PauliString, ...] = ()
    logical_x: PauliString | None = None
    logical_z: PauliString | None = None
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    @property
    def n_legs(self) -> int:
        return len(self.leg_order)

    @property
    def n_physical(self) -> int:
        return self.n_legs - 1

    @property
    def logical_position(self) -> int:
        return self.leg_order.index("L")

    def physical_positions(self) -> list[int]:
        """Tensor positions of the physical legs, in cyclic order."""
        lp = self.logical_position
        return [i for i in range(self.n_legs) if i != lp]

    def position(self, label: str) -> int:
        return self.leg_order.index(str(label))

    def generator_matrix(self) -> BitMatrix:
        if "generators" not in self._cache:
            self._cache["generators"] = symplectic_matrix(self.stabilizers)
        return self._cache["generators"]

    def input_physical(self, count: int) -> tuple[int, ...]:
        """Physical indices of the ``count`` input legs flanking ``L``.

        One input takes the physical leg just before ``L`` in cyclic order; two
        inputs take the legs on both sides, so inputs plus ``L`` are contiguous.
        """
        n = self.n_physical
        before = (self.logical_position - 1) % n
        if count == 0:
            return ()
        if count == 1:
            return (before,)
        if count == 2:
            return (before, (before + 1) % n)
        raise ValueError(f"unsupported input count {count}")

    def with_leg_order(self, order: Sequence[str]) -> SeedCode:
        """Same tensor with its legs listed in a different cyclic order."""
        order = tuple(str(o) for o in order)
        if sorted(order) != sorted(self.leg_order):
            raise ValueError("order must permute the existing leg labels")
        perm = [self.position(lbl) for lbl in order]
        new_phys = [self.leg_order.index(lbl) for lbl in order if lbl != "L"]
        old_phys = self.physical_positions()
        phys_perm = [old_phys.index(p) for p in new_phys]
        return SeedCode(
            name=f"{self.name}-reordered",
            leg_order=order,
            stabilizers=tuple(s.restrict(perm) for s in self.stabilizers),
            code_stabilizers=tuple(s.restrict(phys_perm) for s in self.code_stabilizers),
            logical_x=None if self.logical_x is None else self.logical_x.restrict(phys_perm),
            logical_z=None if self.logical_z is None else self.logical_z.restrict(phys_perm),
        )

    def check_invariants(self) -> None:
        """Raise ``AssertionError`` if the presentation is not a valid seed."""
        stabs = self.stabilizers
        assert all(s.n == self.n_legs for s in stabs), "tensor stabilizers must span every leg"
        assert all(commutes(p, q) for p in stabs for q in stabs), "tensor stabilizers must commute"
        assert symplectic_rank(stabs) == self.n_legs == len(stabs), "tensor state must be unique"
        assert len(self.code_stabilizers) == self.n_physical - 1
        cs = self.code_stabilizers
        assert all(commutes(p, q) for p in cs for q in cs)
        for lg in (self.logical_x, self.logical_z):
            assert lg is not None and all(commutes(lg, s) for s in cs)
        assert not commutes(self.logical_x, self.logical_z)


def _with_logical_identity(code_ops: Sequence[str], lpos: int) -> list[PauliString]:
    return [PauliString.from_str(s[:lpos] + "I" + s[lpos:]) for s in code_ops]


def steane_seed() -> SeedCode:
    """Steane tensor with legs ordered 1 2 3 4 5 6 L 7."""
    table = [
        "XXIIIXIX",
        "IXXXIIIX",
        "IIIXXXIX",
        "ZZIIIZIZ",
        "IZZZIIIZ",
        "IIIZZZIZ",
        "XXXXXXXX",
        "ZZZZZZZZ",
    ]
    stabs = tuple(PauliString.from_str(s) for s in table)
    lpos = 6
    code = tuple(s.restrict([i for i in range(8) if i != lpos]) for s in stabs[:6])
    return SeedCode(
        name="steane",
        leg_order=("1", "2", "3", "4", "5", "6", "L", "7"),
        stabilizers=stabs,
        code_stabilizers=code,
        logical_x=PauliString.from_str("X" * 7),
        logical_z=PauliString.from_str("Z" * 7),
    )


def five_qubit_seed() -> SeedCode:
    """Five-qubit perfect tensor with legs ordered 1 2 3 4 5 L."""
    code_ops = ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]
    stabs = _with_logical_identity(code_ops, 5) + [PauliString.from_str("X" * 6), PauliString.from_str("Z" * 6)]
    return SeedCode(
        name="five_qubit",
        leg_order=("1", "2", "3", "4", "5", "L"),
        stabilizers=tuple(stabs),
        code_stabilizers=tuple(PauliString.from_str(s) for s in code_ops),
        logical_x=PauliString.from_str("X" * 5),
        logical_z=PauliString.from_str("Z" * 5),
    )


def bell_seed() -> SeedCode:
    """Two-leg tensor of a single EPR pair: one physical leg plus the logical leg."""
    return SeedCode(
        name="bell",
        leg_order=("1", "L"),
        stabilizers=(PauliString.from_str("XX"), PauliString.from_str("ZZ")),
        code_stabilizers=(),
        logical_x=PauliString.from_str("X"),
        logical_z=PauliString.from_str("Z"),
    )


SEEDS = {"steane": steane_seed, "five_qubit": five_qubit_seed}
SIDES = {"steane": 7, "five_qubit": 5}


def seed_by_name(name: str) -> SeedCode:
    try:
        return SEEDS[name]()
    except KeyError:
        raise ValueError(f"unknown seed {name!r}; choose from {sorted(SEEDS)}") from None


def seed_for_sides(n_sides: int) -> SeedCode:
    for name, sides in SIDES.items():
        if sides == n_sides:
            return SEEDS[name]()
    raise ValueError(f"no seed with {n_sides} physical legs")


def from_bits(xbits: np.ndarray, zbits: np.ndarray, phase: int = 0) -> PauliString:
    return PauliString(BitVector.from_bits(xbits), BitVector.from_bits(zbits), phase)
