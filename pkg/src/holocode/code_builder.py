"""Boundary stabilizers and bulk logicals of a holographic code by operator pushing."""

from __future__ import annotations

import heapq
import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from . import gf2
from .errors import ParseError
from .gf2 import BitVector
from .pauli import PauliString, SeedCode, from_bits, multiply, seed_by_name, SIDES
from .tiling import Tile, Tiling, build_tiling

RULES = ("min_support", "first")


def _generator_product(seed: SeedCode, lam: BitVector) -> PauliString:
    out = PauliString.identity(seed.n_legs)
    for j in lam.indices():
        out = multiply(out, seed.stabilizers[j])
    return out


def _in_columns(seed: SeedCode, inputs: Sequence[int]) -> list[int]:
    return list(inputs) + [seed.n_legs + i for i in inputs]


def local_stabilizers(seed: SeedCode, inputs: Sequence[int]) -> list[PauliString]:
    """Generators of the stabilizer subgroup acting as identity on ``inputs``.

    Found as the left kernel of the generator matrix restricted to the input
    columns, so the basis follows the deterministic pivot order of ``gf2``.
    """
    inputs = tuple(sorted(inputs))
    key = ("local", inputs)
    if key not in seed._cache:
        restricted = seed.generator_matrix().take_columns(_in_columns(seed, inputs))
        seed._cache[key] = [_generator_product(seed, lam) for lam in gf2.kernel_basis(restricted)]
    return seed._cache[key]


def _support_key(p: PauliString) -> tuple[int, int, int]:
    return (p.support().to_int(), p.x.to_int(), p.z.to_int())


def push_operator(seed: SeedCode, op: PauliString, inputs: Sequence[int], rule: str = "min_support") -> PauliString:
    """Move ``op`` (supported on the tensor positions ``inputs``) onto the other legs.

    Returns ``O'`` with identity on ``inputs`` such that ``op`` times ``O'`` (up to
    sign) is a stabilizer of the seed state, so ``op`` acting on the inputs equals
    ``O'`` acting on the outputs. Candidates differ by local stabilizers; with
    ``rule="min_support"`` the one whose support, read as a binary number with
    leg position ``i`` worth ``2**i``, is smallest wins. ``rule="first"`` keeps the
    solution found by elimination.
    """
    if rule not in RULES:
        raise ValueError(f"unknown representative rule {rule!r}")
    if op.n != seed.n_legs:
        raise ValueError(f"operator on {op.n} legs, seed has {seed.n_legs}")
    inputs = tuple(sorted(inputs))
    outside = [i for i in range(seed.n_legs) if i not in inputs]
    if op.support().take(outside).any():
        raise ValueError(f"operator {op} acts outside the input legs {inputs}")
    key = ("push", inputs, str(op), rule)
    if key in seed._cache:
        return seed._cache[key]
    restricted = seed.generator_matrix().take_columns(_in_columns(seed, inputs))
    target = op.restrict(inputs).symplectic()
    lam = gf2.solve_combination(restricted, target)
    if lam is None:
        raise RuntimeError(f"no stabilizer extends {op} on legs {inputs}")
    g = _generator_product(seed, lam)
    # g = c * (op-part on inputs) (x) (rest); pushing op gives phase(op) + phase(g) on the rest
    mask = np.zeros(seed.n_legs, dtype=np.uint8)
    mask[outside] = 1
    xb = g.x.to_bits() & mask
    zb = g.z.to_bits() & mask
    best = from_bits(xb, zb, op.phase + g.phase)
    if rule == "min_support":
        locals_ = local_stabilizers(seed, inputs)
        candidates = []
        for bits in itertools.product((0, 1), repeat=len(locals_)):
            cand = best
            for b, h in zip(bits, locals_):
                if b:
                    cand = multiply(cand, h)
            candidates.append(cand)
        best = min(candidates, key=_support_key)
    seed._cache[key] = best
    return best


# single-leg Pauli codes: bit 0 = x, bit 1 = z
_CODE_SYMBOL = "IXZY"


@dataclass(frozen=True)
class TileFrame:
    """Where each tile slot sits among the seed's tensor legs."""

    positions: tuple[int, ...]  # tensor position of each slot
    inputs: tuple[int, ...]  # tensor positions of input slots plus the logical leg


def tile_frame(seed: SeedCode, tile: Tile) -> TileFrame:
    """Rotate the seed so the tile's input slots land on the legs flanking ``L``."""
    n = seed.n_physical
    if tile.n_sides != n:
        raise ValueError(f"{tile.n_sides}-sided tile with a {n}-leg seed")
    phys = seed.physical_positions()
    offset = seed.input_physical(1)[0] if tile.input_slots else 0
    positions = tuple(phys[(s + offset) % n] for s in range(n))
    inputs = tuple(sorted([positions[s] for s in tile.input_slots] + [seed.logical_position]))
    return TileFrame(positions, inputs)


@dataclass
class _Pusher:
    tiling: Tiling
    seed: SeedCode
    rule: str

    def __post_init__(self):
        self.frames = [tile_frame(self.seed, t) for t in self.tiling.tiles]
        self.bindex = self.tiling.boundary_index()

    def _leg_op(self, tile: Tile, codes: dict[int, int], logical: int = 0) -> PauliString:
        frame = self.frames[tile.id]
        sym = ["I"] * self.seed.n_legs
        for slot, c in codes.items():
            sym[frame.positions[slot]] = _CODE_SYMBOL[c]
        sym[self.seed.logical_position] = _CODE_SYMBOL[logical]
        return PauliString.from_str("".join(sym))

    def to_boundary(self, tile_id: int, out_op: PauliString) -> PauliString:
        """Carry an operator on ``tile_id``'s output legs out to the boundary."""
        n = self.tiling.n_boundary
        xb = np.zeros(n, dtype=np.uint8)
        zb = np.zeros(n, dtype=np.uint8)
        phase = out_op.phase
        pending: dict[int, dict[int, int]] = {}
        heap: list[int] = []

        def emit(tile: Tile, op: PauliString) -> int:
            frame = self.frames[tile.id]
            extra = 0
            x, z = op.x.to_bits(), op.z.to_bits()
            for slot in tile.output_slots:
                pos = frame.positions[slot]
                code = int(x[pos]) | (int(z[pos]) << 1)
                if not code:
                    continue
                partner = tile.partners[slot]
                if partner is None:
                    b = self.bindex[(tile.id, slot)]
                    xb[b], zb[b] = code & 1, code >> 1
                    continue
                child, cslot = partner
                if code == 3:
                    extra += 2  # Y^T = -Y across a contraction
                if child not in pending:
                    pending[child] = {}
                    heapq.heappush(heap, child)
                pending[child][cslot] = code
            return extra

        phase += emit(self.tiling.tiles[tile_id], out_op)
        while heap:
            tid = heapq.heappop(heap)
            tile = self.tiling.tiles[tid]
            op = self._leg_op(tile, pending.pop(tid))
            pushed = push_operator(self.seed, op, self.frames[tid].inputs, self.rule)
            phase += pushed.phase
            phase += emit(tile, pushed)
        return from_bits(xb, zb, phase)


@dataclass(frozen=True, eq=True)
class HolographicCode:
    seed_name: str
    radius: int
    n: int
    k: int
    stabilizer_generators: tuple[PauliString, ...]
    logicals: dict[int, tuple[PauliString, PauliString]]
    provenance: tuple[int, ...]
    tiling: Tiling | None = field(default=None, compare=False, repr=False)
    _cache: dict = field(default_factory=dict, compare=False, repr=False)

    @property
    def n_sides(self) -> int:
        return SIDES[self.seed_name]

    def get_tiling(self) -> Tiling:
        return self.tiling if self.tiling is not None else build_tiling(self.n_sides, self.radius)


def boundary_stabilizers(t: Tiling, seed: SeedCode, rule: str = "min_support") -> tuple[list[PauliString], list[int]]:
    """Every tile's local stabilizers pushed to the boundary, with originating tiles."""
    pusher = _Pusher(t, seed, rule)
    gens, origin = [], []
    for tile in t.tiles:
        for h in local_stabilizers(seed, pusher.frames[tile.id].inputs):
            gens.append(pusher.to_boundary(tile.id, h))
            origin.append(tile.id)
    return gens, origin


def logical_operators(t: Tiling, seed: SeedCode, tile: Tile, rule: str = "min_support") -> tuple[PauliString, PauliString]:
    """Boundary X and Z logicals of the bulk qubit on ``tile``.

    The central tile uses the seed's own logical representatives; other tiles
    push X or Z from the logical leg with identity on their physical inputs.
    """
    if tile.id >= t.n_tiles or t.tiles[tile.id] != tile:
        raise ValueError(f"tile {tile.id} is not part of this tiling")
    pusher = _Pusher(t, seed, rule)
    frame = pusher.frames[tile.id]
    out = []
    for code, seed_logical in ((1, seed.logical_x), (2, seed.logical_z)):
        if not tile.input_slots:
            sym = ["I"] * seed.n_legs
            for c, pos in zip(seed_logical.symbols(), seed.physical_positions()):
                sym[pos] = c
            body = PauliString.from_str("".join(sym))
            first = PauliString(body.x, body.z, seed_logical.phase)
        else:
            op = pusher._leg_op(tile, {}, logical=code)
            first = push_operator(seed, op, frame.inputs, rule)
        out.append(pusher.to_boundary(tile.id, first))
    return out[0], out[1]


def build_code(seed: str | SeedCode, radius: int, rule: str = "min_support") -> HolographicCode:
    if isinstance(seed, str):
        seed = seed_by_name(seed)
    t = build_tiling(seed.n_physical, radius)
    gens, origin = boundary_stabilizers(t, seed, rule)
    logicals = {tile.id: logical_operators(t, seed, tile, rule) for tile in t.tiles}
    return HolographicCode(
        seed_name=seed.name,
        radius=radius,
        n=t.n_boundary,
        k=t.n_tiles,
        stabilizer_generators=tuple(gens),
        logicals=logicals,
        provenance=tuple(origin),
        tiling=t,
    )


def asymptotic_rate(n_sides: int) -> float:
    """Limit of tiles per boundary leg from the layer transfer matrix.

    Per layer, one-input tiles ``a`` and two-input tiles ``b`` evolve as
    ``a' = (n-3) a + (n-4) b`` and ``b' = a + b``.
    """
    if n_sides not in (5, 7):
        raise ValueError(f"unsupported n_sides {n_sides}")
    n = n_sides
    tr, det = (n - 3) + 1, (n - 3) - (n - 4)
    lam = (tr + math.sqrt(tr * tr - 4 * det)) / 2
    return lam * lam / ((lam - 1) * ((lam - 1) * (n - 1) + (n - 2)))


def code_rate(c: HolographicCode) -> Fraction:
    return Fraction(c.k, c.n)


def _sign_and_body(p: PauliString) -> tuple[str, str]:
    return ("+" if p.sign == 1 else "-"), p.symbols()


def format_code(c: HolographicCode) -> str:
    lines = [f"n={c.n} k={c.k} seed={c.seed_name} R={c.radius}"]
    for g, origin in zip(c.stabilizer_generators, c.provenance):
        sign, body = _sign_and_body(g)
        lines.append(f"S {sign} {body} tile={origin}")
    for tid in sorted(c.logicals):
        for tag, op in zip(("LX", "LZ"), c.logicals[tid]):
            sign, body = _sign_and_body(op)
            lines.append(f"{tag} {tid} {sign} {body}")
    return "\n".join(lines) + "\n"


def export_code(c: HolographicCode, destination) -> None:
    path = Path(destination)
    try:
        path.write_text(format_code(c), encoding="ascii")
    except OSError as exc:
        raise OSError(f"cannot write code file {path}: {exc}") from exc


def _parse_op(sign: str, body: str, n: int, lineno: int) -> PauliString:
    if sign not in ("+", "-"):
        raise ParseError(f"bad sign {sign!r}", lineno)
    if len(body) != n or set(body) - set("IXYZ"):
        raise ParseError(f"expected a {n}-qubit string over IXYZ, got {body!r}", lineno)
    return PauliString.from_str(sign + body)


def parse_code(text: str) -> HolographicCode:
    lines = text.splitlines()
    if not lines:
        raise ParseError("empty code file", 1)
    header = {}
    for tok in lines[0].split():
        key, sep, val = tok.partition("=")
        if not sep:
            raise ParseError(f"bad header field {tok!r}", 1)
        header[key] = val
    try:
        n, k, radius, seed_name = int(header["n"]), int(header["k"]), int(header["R"]), header["seed"]
    except (KeyError, ValueError) as exc:
        raise ParseError(f"header needs integer n, k, R and a seed: {exc}", 1) from None
    if seed_name not in SIDES:
        raise ParseError(f"unknown seed {seed_name!r}", 1)
    gens, origin = [], []
    logicals: dict[int, list] = {}
    for lineno, line in enumerate(lines[1:], start=2):
        tok = line.split()
        if not tok:
            continue
        if tok[0] == "S":
            if len(tok) not in (3, 4):
                raise ParseError("generator line needs 'S <sign> <string> [tile=<id>]'", lineno)
            gens.append(_parse_op(tok[1], tok[2], n, lineno))
            if len(tok) == 4:
                if not tok[3].startswith("tile="):
                    raise ParseError(f"unexpected field {tok[3]!r}", lineno)
                try:
                    origin.append(int(tok[3][5:]))
                except ValueError:
                    raise ParseError(f"bad tile id in {tok[3]!r}", lineno) from None
            else:
                origin.append(-1)
        elif tok[0] in ("LX", "LZ"):
            if len(tok) != 4:
                raise ParseError(f"logical line needs '{tok[0]} <tile> <sign> <string>'", lineno)
            try:
                tid = int(tok[1])
            except ValueError:
                raise ParseError(f"bad tile id {tok[1]!r}", lineno) from None
            slot = 0 if tok[0] == "LX" else 1
            logicals.setdefault(tid, [None, None])[slot] = _parse_op(tok[2], tok[3], n, lineno)
        else:
            raise ParseError(f"unknown record {tok[0]!r}", lineno)
    for tid, pair in logicals.items():
        if None in pair:
            raise ParseError(f"tile {tid} lacks an LX or LZ line", len(lines))
    return HolographicCode(
        seed_name=seed_name,
        radius=radius,
        n=n,
        k=k,
        stabilizer_generators=tuple(gens),
        logicals={tid: (p[0], p[1]) for tid, p in logicals.items()},
        provenance=tuple(origin),
    )


def import_code(source) -> HolographicCode:
    path = Path(source)
    try:
        text = path.read_text(encoding="ascii")
    except OSError as exc:
        raise OSError(f"cannot read code file {path}: {exc}") from exc
    return parse_code(text)


def symplectic_arrays(ops: Sequence[PauliString]) -> tuple[np.ndarray, np.ndarray]:
    """Dense ``(m, n)`` uint8 x and z parts."""
    xs = np.array([p.x.to_bits() for p in ops], dtype=np.uint8)
    zs = np.array([p.z.to_bits() for p in ops], dtype=np.uint8)
    return xs, zs


def _commutation(ax, az, bx, bz) -> np.ndarray:
    return (ax.astype(np.int64) @ bz.T.astype(np.int64) + az.astype(np.int64) @ bx.T.astype(np.int64)) & 1


def check_code(c: HolographicCode) -> list[str]:
    """Consistency problems with a code; an empty list means it is a valid [[n, k]] stabilizer code."""
    problems = []
    gens = c.stabilizer_generators
    if len(gens) != c.n - c.k:
        problems.append(f"{len(gens)} generators, expected n - k = {c.n - c.k}")
    gx, gz = symplectic_arrays(gens)
    if gens and _commutation(gx, gz, gx, gz).any():
        problems.append("generators do not commute")
    if gens and gf2.rank(gf2.BitMatrix.from_array(np.hstack([gx, gz]))) != len(gens):
        problems.append("generators are dependent")
    if sorted(c.logicals) != list(range(c.k)):
        problems.append(f"logicals for tiles {sorted(c.logicals)}, expected 0..{c.k - 1}")
        return problems
    lx, lz = symplectic_arrays([c.logicals[t][0] for t in range(c.k)])
    mx, mz = symplectic_arrays([c.logicals[t][1] for t in range(c.k)])
    if gens and (_commutation(gx, gz, lx, lz).any() or _commutation(gx, gz, mx, mz).any()):
        problems.append("a logical fails to commute with the stabilizers")
    if not np.array_equal(_commutation(lx, lz, mx, mz), np.eye(c.k, dtype=np.int64)):
        problems.append("logical X and Z do not pair up tile by tile")
    if _commutation(lx, lz, lx, lz).any() or _commutation(mx, mz, mx, mz).any():
        problems.append("logicals of one type do not commute")
    return problems
