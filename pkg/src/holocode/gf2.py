"""Packed bit vectors and matrices over GF(2).

Rows are stored row-major in uint64 words, bit ``i`` of a row in word ``i // 64``
at position ``i % 64``. Bits past the logical length are always zero.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .errors import CapacityError

MAX_BITS = 1 << 20
WORD = 64


def n_words(nbits: int) -> int:
    return (nbits + WORD - 1) // WORD


def _check_length(nbits: int) -> None:
    if nbits < 0:
        raise ValueError(f"negative bit length {nbits}")
    if nbits > MAX_BITS:
        raise CapacityError(f"{nbits} bits exceeds the {MAX_BITS}-bit limit")


def _pack(bits: np.ndarray) -> np.ndarray:
    """Pack a 0/1 array along its last axis into little-endian uint64 words."""
    bits = np.asarray(bits, dtype=np.uint8)
    nbits = bits.shape[-1]
    pad = n_words(nbits) * WORD - nbits
    if pad:
        widths = [(0, 0)] * (bits.ndim - 1) + [(0, pad)]
        bits = np.pad(bits, widths)
    as_bytes = np.packbits(bits, axis=-1, bitorder="little")
    return np.ascontiguousarray(as_bytes).view("<u8").astype(np.uint64, copy=False)


def _unpack(words: np.ndarray, nbits: int) -> np.ndarray:
    as_bytes = np.ascontiguousarray(words, dtype="<u8").view(np.uint8)
    return np.unpackbits(as_bytes, axis=-1, count=nbits, bitorder="little")


class BitVector:
    """Immutable fixed-length bit string."""

    __slots__ = ("length", "words")

    def __init__(self, length: int, words: np.ndarray | None = None):
        _check_length(length)
        if words is None:
            words = np.zeros(n_words(length), dtype=np.uint64)
        else:
            words = np.array(words, dtype=np.uint64)
            if words.shape != (n_words(length),):
                raise ValueError(f"expected {n_words(length)} words for {length} bits, got {words.shape}")
            tail = length % WORD
            if tail and words[-1] >> np.uint64(tail):
                raise ValueError("bits set beyond the vector length")
        words.flags.writeable = False
        self.length = length
        self.words = words

    @classmethod
    def zeros(cls, length: int) -> BitVector:
        return cls(length)

    @classmethod
    def from_bits(cls, bits: Iterable[int]) -> BitVector:
        arr = np.fromiter((1 if b else 0 for b in bits), dtype=np.uint8)
        _check_length(arr.size)
        return cls(arr.size, _pack(arr))

    @classmethod
    def from_str(cls, text: str) -> BitVector:
        """Parse ``"0110"``; character ``i`` is bit ``i``."""
        if set(text) - {"0", "1"}:
            raise ValueError(f"not a bit string: {text!r}")
        return cls.from_bits(c == "1" for c in text)

    @classmethod
    def from_indices(cls, length: int, indices: Iterable[int]) -> BitVector:
        arr = np.zeros(length, dtype=np.uint8)
        idx = np.fromiter(indices, dtype=np.int64)
        if idx.size and (idx.min() < 0 or idx.max() >= length):
            raise ValueError("index out of range")
        arr[idx] = 1
        return cls(length, _pack(arr))

    @classmethod
    def from_int(cls, length: int, value: int) -> BitVector:
        if value < 0 or value >> length:
            raise ValueError(f"{value} does not fit in {length} bits")
        return cls.from_bits((value >> i) & 1 for i in range(length))

    def __len__(self) -> int:
        return self.length

    def __getitem__(self, i: int) -> int:
        if i < 0:
            i += self.length
        if not 0 <= i < self.length:
            raise IndexError(i)
        return int((self.words[i >> 6] >> np.uint64(i & 63)) & np.uint64(1))

    def __iter__(self):
        return iter(self.to_bits().tolist())

    def _same_length(self, other: BitVector) -> None:
        if self.length != other.length:
            raise ValueError(f"length mismatch: {self.length} vs {other.length}")

    def __xor__(self, other: BitVector) -> BitVector:
        self._same_length(other)
        return BitVector(self.length, self.words ^ other.words)

    def __and__(self, other: BitVector) -> BitVector:
        self._same_length(other)
        return BitVector(self.length, self.words & other.words)

    def __or__(self, other: BitVector) -> BitVector:
        self._same_length(other)
        return BitVector(self.length, self.words | other.words)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitVector):
            return NotImplemented
        return self.length == other.length and bool(np.array_equal(self.words, other.words))

    def __hash__(self) -> int:
        return hash((self.length, self.words.tobytes()))

    def weight(self) -> int:
        return int(np.bitwise_count(self.words).sum())

    def any(self) -> bool:
        return bool(self.words.any())

    def dot(self, other: BitVector) -> int:
        """Parity of the overlap."""
        return (self & other).weight() & 1

    def to_bits(self) -> np.ndarray:
        return _unpack(self.words, self.length)

    def indices(self) -> list[int]:
        return np.flatnonzero(self.to_bits()).tolist()

    def to_int(self) -> int:
        """Little-endian integer value: bit ``i`` contributes ``2**i``."""
        return int.from_bytes(self.words.astype("<u8").tobytes(), "little")

    def take(self, positions: Sequence[int]) -> BitVector:
        """Sub-vector at ``positions``, in the given order."""
        pos = np.asarray(positions, dtype=np.int64)
        return BitVector(pos.size, _pack(self.to_bits()[pos]))

    def concat(self, other: BitVector) -> BitVector:
        return BitVector.from_bits(np.concatenate([self.to_bits(), other.to_bits()]))

    def __str__(self) -> str:
        return "".join("1" if b else "0" for b in self.to_bits())

    def __repr__(self) -> str:
        return f"BitVector('{self}')"


class BitMatrix:
    """Dense GF(2) matrix, one packed row per matrix row."""

    __slots__ = ("rows", "cols", "data")

    def __init__(self, rows: int, cols: int, data: np.ndarray | None = None):
        _check_length(cols)
        if data is None:
            data = np.zeros((rows, n_words(cols)), dtype=np.uint64)
        else:
            data = np.array(data, dtype=np.uint64).reshape(rows, n_words(cols))
        data.flags.writeable = False
        self.rows = rows
        self.cols = cols
        self.data = data

    @classmethod
    def from_rows(cls, rows: Sequence[BitVector], cols: int | None = None) -> BitMatrix:
        if cols is None:
            if not rows:
                raise ValueError("column count needed for an empty matrix")
            cols = rows[0].length
        for r in rows:
            if r.length != cols:
                raise ValueError(f"row of length {r.length} in a {cols}-column matrix")
        data = np.array([r.words for r in rows], dtype=np.uint64).reshape(len(rows), n_words(cols))
        return cls(len(rows), cols, data)

    @classmethod
    def from_array(cls, array) -> BitMatrix:
        arr = np.asarray(array, dtype=np.uint8) & 1
        if arr.ndim != 2:
            raise ValueError("expected a 2-d array")
        _check_length(arr.shape[1])
        return cls(arr.shape[0], arr.shape[1], _pack(arr))

    @classmethod
    def identity(cls, n: int) -> BitMatrix:
        return cls.from_array(np.eye(n, dtype=np.uint8))

    def row(self, i: int) -> BitVector:
        return BitVector(self.cols, self.data[i])

    def __iter__(self):
        return (self.row(i) for i in range(self.rows))

    def __len__(self) -> int:
        return self.rows

    def to_array(self) -> np.ndarray:
        if self.rows == 0:
            return np.zeros((0, self.cols), dtype=np.uint8)
        return _unpack(self.data, self.cols)

    def take_columns(self, positions: Sequence[int]) -> BitMatrix:
        pos = np.asarray(positions, dtype=np.int64)
        return BitMatrix.from_array(self.to_array()[:, pos]) if self.rows else BitMatrix(0, pos.size)

    def __eq__(self, other) -> bool:
        if not isinstance(other, BitMatrix):
            return NotImplemented
        return (self.rows, self.cols) == (other.rows, other.cols) and bool(np.array_equal(self.data, other.data))

    def __repr__(self) -> str:
        return f"BitMatrix({self.rows}x{self.cols})"


@dataclass(frozen=True)
class Echelon:
    """Result of Gauss-Jordan reduction with a row-operation tracker.

    ``reduced`` is the reduced row echelon form (rows kept in their original
    slots), ``pivots[c]`` the row holding the pivot of column ``c`` or -1, and
    ``combos`` row ``i`` records which original rows sum to ``reduced`` row ``i``.
    """

    reduced: BitMatrix
    combos: BitMatrix
    pivots: tuple[int, ...]
    row_ops: int

    @property
    def rank(self) -> int:
        return sum(p >= 0 for p in self.pivots)


def row_reduce(m: BitMatrix) -> Echelon:
    """Gauss-Jordan reduction; the input is left untouched."""
    wm = n_words(m.cols)
    wt = n_words(m.rows)
    work = np.zeros((m.rows, wm + wt), dtype=np.uint64)
    work[:, :wm] = m.data
    if m.rows:
        work[:, wm:] = _pack(np.eye(m.rows, dtype=np.uint8))
    pivots, ops = _kernels.gauss_jordan(work, m.cols)
    return Echelon(
        reduced=BitMatrix(m.rows, m.cols, work[:, :wm]),
        combos=BitMatrix(m.rows, m.rows, work[:, wm:]),
        pivots=tuple(int(p) for p in pivots),
        row_ops=int(ops),
    )


def rank(m: BitMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    work = np.array(m.data, dtype=np.uint64)
    pivots, _ = _kernels.gauss_jordan(work, m.cols)
    return int((pivots >= 0).sum())


def solve_combination(rows: BitMatrix, target: BitVector) -> BitVector | None:
    """Find ``lam`` with ``sum_j lam[j] * rows[j] == target``, or ``None``.

    Deterministic: pivots are taken lowest column first, lowest row first.
    """
    if target.length != rows.cols:
        raise ValueError(f"target has {target.length} bits, matrix has {rows.cols} columns")
    ech = row_reduce(rows)
    residual = target.to_bits().copy()
    lam = np.zeros(rows.rows, dtype=np.uint8)
    red = ech.reduced.to_array()
    combos = ech.combos.to_array()
    for c in range(rows.cols):
        if not residual[c]:
            continue
        p = ech.pivots[c]
        if p < 0:
            return None
        residual ^= red[p]
        lam ^= combos[p]
    return BitVector.from_bits(lam)


def kernel_basis(m: BitMatrix) -> list[BitVector]:
    """Basis of the left null space ``{x : x^T m = 0}``, size ``rows - rank``."""
    if m.rows == 0:
        return []
    ech = row_reduce(m)
    pivot_rows = {p for p in ech.pivots if p >= 0}
    return [ech.combos.row(i) for i in range(m.rows) if i not in pivot_rows]


def combine(rows: BitMatrix, lam: BitVector) -> BitVector:
    """``sum_j lam[j] * rows[j]``."""
    if lam.length != rows.rows:
        raise ValueError("coefficient length does not match row count")
    sel = np.asarray(lam.to_bits(), dtype=bool)
    words = np.bitwise_xor.reduce(rows.data[sel], axis=0) if sel.any() else np.zeros(n_words(rows.cols), np.uint64)
    return BitVector(rows.cols, words)
