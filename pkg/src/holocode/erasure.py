"""Erasure recoverability of a bulk logical qubit.

Three deciders share one question: after the qubits marked in an erasure
pattern are lost, does each logical operator of the queried tile still have a
representative that avoids them?

* ``is_recoverable_optimal`` answers exactly by linear algebra on the
  generators restricted to the erased qubits.
* ``is_recoverable_greedy`` grows a recovered region of tiles from the boundary
  inward using only local isometry facts; it is sufficient, not necessary.
* ``brute_force_recoverable`` enumerates the stabilizer group (small codes only).

``BatchDecoder`` runs the optimal or greedy rule over many patterns at once in
compiled code.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels, gf2
from .code_builder import HolographicCode, symplectic_arrays
from .errors import CapacityError
from .gf2 import BitMatrix, BitVector
from .pauli import PauliString, SeedCode, seed_for_sides
from .tensor_analysis import Bipartition, check_perfect, is_cyclic_window, is_isometry_for
from .tiling import Tile, Tiling

BRUTE_MAX_GENERATORS = 20
TYPES = ("both", "x", "z")


@dataclass(frozen=True)
class ErasurePattern:
    mask: BitVector  # 1 = erased

    @property
    def n(self) -> int:
        return self.mask.length

    @property
    def weight(self) -> int:
        return self.mask.weight()

    @classmethod
    def from_str(cls, text: str) -> ErasurePattern:
        return cls(BitVector.from_str(text))

    @classmethod
    def from_indices(cls, n: int, erased: Sequence[int]) -> ErasurePattern:
        return cls(BitVector.from_indices(n, erased))

    def erased(self) -> list[int]:
        return self.mask.indices()

    def __str__(self) -> str:
        return str(self.mask)


def filter(v: BitVector, eps: ErasurePattern) -> BitVector:  # noqa: A001
    """Entries of ``v`` at the erased positions, in increasing order."""
    if v.length != eps.n:
        raise ValueError(f"vector of length {v.length} against a {eps.n}-qubit pattern")
    return v.take(eps.erased())


def filter_pauli(p: PauliString, eps: ErasurePattern) -> BitVector:
    """x bits then z bits of ``p`` on the erased qubits."""
    return filter(p.x, eps).concat(filter(p.z, eps))


def _tile_id(tile: Tile | int) -> int:
    return tile.id if isinstance(tile, Tile) else int(tile)


def _check_pattern(code: HolographicCode, eps: ErasurePattern) -> None:
    if eps.n != code.n:
        raise ValueError(f"erasure pattern of length {eps.n} for a code on {code.n} qubits")


def _logicals(code: HolographicCode, tile: Tile | int, types: str) -> list[tuple[str, PauliString]]:
    if types not in TYPES:
        raise ValueError(f"types must be one of {TYPES}, got {types!r}")
    tid = _tile_id(tile)
    if tid not in code.logicals:
        raise ValueError(f"code has no logical for tile {tid}")
    lx, lz = code.logicals[tid]
    return [(name, op) for name, op in (("x", lx), ("z", lz)) if types in ("both", name)]


@dataclass(frozen=True)
class OptimalVerdict:
    recoverable: bool
    witnesses: dict[str, BitVector | None]  # per logical type: lambda, or None when it fails

    def __bool__(self) -> bool:
        return self.recoverable


def is_recoverable_optimal(
    code: HolographicCode,
    eps: ErasurePattern,
    tile: Tile | int = 0,
    types: str = "both",
    witness: bool = False,
) -> bool | OptimalVerdict:
    """Whether a representative of each requested logical type avoids the erasure.

    Solves ``l|eps = sum_j lambda_j s_j|eps`` over GF(2), where ``|eps`` keeps the
    x and z bits on erased qubits. With ``witness=True`` returns an
    ``OptimalVerdict`` carrying each ``lambda``.
    """
    _check_pattern(code, eps)
    logicals = _logicals(code, tile, types)
    rows = BitMatrix.from_rows([filter_pauli(g, eps) for g in code.stabilizer_generators], 2 * eps.weight)
    found: dict[str, BitVector | None] = {}
    for name, op in logicals:
        found[name] = gf2.solve_combination(rows, filter_pauli(op, eps))
        if found[name] is None and not witness:
            return False
    ok = all(v is not None for v in found.values())
    return OptimalVerdict(ok, found) if witness else ok


def _pack_rows(bits: np.ndarray) -> np.ndarray:
    return gf2._pack(bits)


def _span(rows: np.ndarray) -> np.ndarray:
    """Every subset sum of the packed uint64 rows, by doubling."""
    span = np.zeros((1, rows.shape[1]), dtype=np.uint64)
    for g in rows:
        span = np.concatenate([span, span ^ g])
    return span


class _BruteGroup:
    """Enumerated stabilizer group, split by Pauli type when the code is CSS."""

    def __init__(self, code: HolographicCode):
        gens = code.stabilizer_generators
        xs, zs = symplectic_arrays(gens) if gens else (np.zeros((0, code.n), np.uint8),) * 2
        xtype = [i for i, g in enumerate(gens) if not g.z.any()]
        ztype = [i for i, g in enumerate(gens) if not g.x.any()]
        self.css = len(xtype) + len(ztype) == len(gens)
        if self.css:
            largest = max(len(xtype), len(ztype))
            if largest > BRUTE_MAX_GENERATORS:
                raise CapacityError(f"{largest} generators of one type exceeds {BRUTE_MAX_GENERATORS}")
            self.x_span = _span(_pack_rows(xs[xtype].reshape(len(xtype), code.n)))
            self.z_span = _span(_pack_rows(zs[ztype].reshape(len(ztype), code.n)))
        else:
            if len(gens) > BRUTE_MAX_GENERATORS:
                raise CapacityError(f"{len(gens)} generators exceeds {BRUTE_MAX_GENERATORS}")
            self.span = _span(_pack_rows(np.hstack([xs, zs])))

    @staticmethod
    def _avoidable(span: np.ndarray, target: np.ndarray, mask: np.ndarray) -> bool:
        return bool((((span ^ target) & mask) == 0).all(axis=1).any())

    def clears(self, op: PauliString, erased: np.ndarray) -> bool:
        x, z = op.x.to_bits(), op.z.to_bits()
        if self.css:
            m = _pack_rows(erased)
            return self._avoidable(self.x_span, _pack_rows(x), m) and self._avoidable(self.z_span, _pack_rows(z), m)
        m = _pack_rows(np.concatenate([erased, erased]))
        return self._avoidable(self.span, _pack_rows(np.concatenate([x, z])), m)


def brute_force_recoverable(
    code: HolographicCode, eps: ErasurePattern, tile: Tile | int = 0, types: str = "both"
) -> bool:
    """Enumerate the stabilizer group looking for representatives that avoid the erasure.

    For CSS codes the X-type and Z-type subgroups are enumerated separately,
    which is equivalent and squares the reach.
    """
    _check_pattern(code, eps)
    if "brute" not in code._cache:
        code._cache["brute"] = _BruteGroup(code)
    group = code._cache["brute"]
    erased = eps.mask.to_bits()
    return all(group.clears(op, erased) for _, op in _logicals(code, tile, types))


# ---- greedy decoder


@functools.lru_cache(maxsize=None)
def _default_seed(n_sides: int) -> SeedCode:
    return seed_for_sides(n_sides)


def _frame_offset(seed: SeedCode, tile: Tile) -> int:
    return seed.input_physical(1)[0] if tile.input_slots else 0


def admissible_table(seed: SeedCode, offset: int, rule: str | None = None) -> np.ndarray:
    """Which sets of unknown slots still let a tile be recovered, indexed by slot bitmask.

    The unknown slots plus the logical leg form the input side ``A``. The set is
    admissible when ``|A|`` is at most half the legs, the seed maps ``A`` to the
    known legs isometrically, and, unless the seed is perfect (``rule="any"``),
    ``A`` is a cyclic window of the seed's leg order.
    """
    if rule is None:
        rule = "any" if check_perfect(seed) else "contiguous"
    if rule not in ("any", "contiguous"):
        raise ValueError(f"unknown admissibility rule {rule!r}")
    key = ("admissible", offset, rule)
    if key in seed._cache:
        return seed._cache[key]
    n = seed.n_physical
    phys = seed.physical_positions()
    table = np.zeros(1 << n, dtype=np.bool_)
    for mask in range(1 << n):
        a = [phys[(s + offset) % n] for s in range(n) if mask >> s & 1] + [seed.logical_position]
        if 2 * len(a) > seed.n_legs:
            continue
        if rule == "contiguous" and not is_cyclic_window(a, seed.n_legs):
            continue
        table[mask] = is_isometry_for(seed, Bipartition(tuple(sorted(a))))
    table.flags.writeable = False
    seed._cache[key] = table
    return table


@dataclass(frozen=True)
class GreedyPlan:
    """Flat arrays describing a tiling for the greedy kernels."""

    partner_tile: np.ndarray  # (tiles, slots), -1 on boundary slots
    boundary_index: np.ndarray  # (tiles, slots), -1 on contracted slots
    table_of_tile: np.ndarray  # (tiles,) row of ``admissible``
    admissible: np.ndarray  # (kinds, 2**slots)
    n_boundary: int


def greedy_plan(t: Tiling, seed: SeedCode | None = None, rule: str | None = None) -> GreedyPlan:
    if seed is None:
        seed = _default_seed(t.n_sides)
    n = t.n_sides
    partner = np.full((t.n_tiles, n), -1, dtype=np.int64)
    bidx = np.full((t.n_tiles, n), -1, dtype=np.int64)
    bindex = t.boundary_index()
    for tile in t.tiles:
        for s, p in enumerate(tile.partners):
            if p is None:
                bidx[tile.id, s] = bindex[(tile.id, s)]
            else:
                partner[tile.id, s] = p[0]
    offsets = sorted({_frame_offset(seed, tile) for tile in t.tiles})
    kinds = {off: i for i, off in enumerate(offsets)}
    table_of_tile = np.array([kinds[_frame_offset(seed, tile)] for tile in t.tiles], dtype=np.int64)
    admissible = np.stack([admissible_table(seed, off, rule) for off in offsets])
    return GreedyPlan(partner, bidx, table_of_tile, admissible, t.n_boundary)


def is_recoverable_greedy(
    t: Tiling,
    eps: ErasurePattern,
    tile: Tile | int = 0,
    seed: SeedCode | None = None,
    rule: str | None = None,
) -> bool:
    """Grow the recovered region to a fixed point and report whether ``tile`` joined it.

    A boundary slot is known when its qubit is not erased; a contracted slot is
    known once the tile on the other side is in the region. A tile joins when its
    unknown slots, together with its logical leg, form an admissible input set.
    """
    if eps.n != t.n_boundary:
        raise ValueError(f"erasure pattern of length {eps.n} for a boundary of {t.n_boundary}")
    if seed is None:
        seed = _default_seed(t.n_sides)
    tables = {}
    bindex = t.boundary_index()
    erased = set(eps.erased())
    region: set[int] = set()
    target = _tile_id(tile)
    changed = True
    while changed and target not in region:
        changed = False
        for cand in t.tiles:
            if cand.id in region:
                continue
            unknown = 0
            for s, p in enumerate(cand.partners):
                known = (p[0] in region) if p is not None else (bindex[(cand.id, s)] not in erased)
                if not known:
                    unknown |= 1 << s
            off = _frame_offset(seed, cand)
            if off not in tables:
                tables[off] = admissible_table(seed, off, rule)
            if tables[off][unknown]:
                region.add(cand.id)
                changed = True
    return target in region


# ---- batch decoding


def _operator_columns(code: HolographicCode, tid: int) -> tuple[np.ndarray, np.ndarray]:
    """Per-qubit packed columns: bit 0 = Z logical, bit 1 = X logical, bit j+2 = generator j."""
    lx, lz = code.logicals[tid]
    ops = [lz, lx, *code.stabilizer_generators]
    xs, zs = symplectic_arrays(ops)
    return _pack_rows(np.ascontiguousarray(xs.T)), _pack_rows(np.ascontiguousarray(zs.T))


_MODES = {"both": 0, "x": 1, "z": 2}


class BatchDecoder:
    """Decide many erasure patterns (rows of qubit indices) against one code and tile."""

    def __init__(
        self,
        code: HolographicCode,
        tile: Tile | int = 0,
        decoder: str = "optimal",
        types: str = "both",
        seed: SeedCode | None = None,
    ):
        if decoder not in ("optimal", "greedy"):
            raise ValueError(f"unknown decoder {decoder!r}")
        if types not in TYPES:
            raise ValueError(f"types must be one of {TYPES}, got {types!r}")
        self.n = code.n
        self.tile = _tile_id(tile)
        self.decoder = decoder
        self.types = types
        if decoder == "optimal":
            self.xcols, self.zcols = _operator_columns(code, self.tile)
        else:
            self.plan = greedy_plan(code.get_tiling(), seed)

    def __call__(self, patterns: np.ndarray) -> np.ndarray:
        patterns = np.ascontiguousarray(patterns, dtype=np.int64)
        if patterns.ndim != 2:
            raise ValueError("patterns must be a 2-d array of erased qubit indices")
        if patterns.size and (patterns.min() < 0 or patterns.max() >= self.n):
            raise ValueError(f"qubit index out of range for n = {self.n}")
        if self.decoder == "greedy":
            p = self.plan
            return _kernels.greedy_verdicts(
                p.partner_tile, p.boundary_index, p.table_of_tile, p.admissible, self.tile, p.n_boundary, patterns
            )
        bits = _kernels.erasure_verdicts(self.xcols, self.zcols, patterns, _MODES[self.types])
        need = {"both": _kernels.X_OK | _kernels.Z_OK, "x": _kernels.X_OK, "z": _kernels.Z_OK}[self.types]
        return (bits & need) == need
