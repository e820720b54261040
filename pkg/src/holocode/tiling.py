"""Layered construction of {4,n} tilings (four n-gons around every vertex).

Tiles that share an edge always sit in adjacent layers, so every contraction
joins an output slot of a layer-``l`` tile to an input slot of a layer-``l+1``
tile. The boundary of layers ``0..l`` is a cycle of edges whose vertices touch
either one enclosed tile (inside a tile's run of outer edges) or three (where
two runs meet). The next layer puts a two-input tile on every three-tile
vertex and a one-input tile on every edge flanked by one-tile vertices.

Slots of a tile are numbered in the same rotational sense as the boundary
cycle. Inputs occupy slots ``0`` (and ``1``); for a two-input tile slot ``0``
faces the later of its two parent edges along the cycle.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterable

from .errors import CapacityError

Leg = tuple[int, int]  # (tile id, slot)

SUPPORTED_SIDES = (5, 7)
MAX_BOUNDARY = 1 << 20


def predicted_counts(n_sides: int, radius: int) -> tuple[int, int]:
    """``(tiles, boundary legs)`` from the per-layer recurrence, without building anything."""
    n = n_sides
    tiles, ones, twos = 1, 0, 0
    boundary = n
    for layer in range(1, radius):
        ones, twos = (n, 0) if layer == 1 else ((n - 3) * ones + (n - 4) * twos, ones + twos)
        tiles += ones + twos
        boundary = (n - 1) * ones + (n - 2) * twos
    return tiles, boundary


@dataclass(frozen=True)
class Tile:
    id: int
    layer: int
    n_sides: int
    input_slots: tuple[int, ...]
    partners: tuple[Leg | None, ...]

    @property
    def output_slots(self) -> tuple[int, ...]:
        return tuple(s for s in range(self.n_sides) if s not in self.input_slots)

    @property
    def parents(self) -> tuple[int, ...]:
        return tuple(self.partners[s][0] for s in self.input_slots)


@dataclass(frozen=True)
class Tiling:
    n_sides: int
    radius: int
    tiles: tuple[Tile, ...]
    contractions: tuple[tuple[Leg, Leg], ...]  # (output leg, input leg)
    boundary: tuple[Leg, ...]

    @property
    def n_boundary(self) -> int:
        return len(self.boundary)

    @property
    def n_tiles(self) -> int:
        return len(self.tiles)

    def boundary_index(self) -> dict[Leg, int]:
        return {leg: i for i, leg in enumerate(self.boundary)}

    def layer(self, l: int) -> list[Tile]:
        return [t for t in self.tiles if t.layer == l]

    def rate(self) -> float:
        return self.n_tiles / self.n_boundary


def build_tiling(n_sides: int, radius: int) -> Tiling:
    """Central tile plus ``radius - 1`` layers; radius 1 is the bare seed."""
    if n_sides not in SUPPORTED_SIDES:
        raise ValueError(f"unsupported n_sides {n_sides}; supported: {SUPPORTED_SIDES}")
    if radius < 1:
        raise ValueError(f"radius must be at least 1, got {radius}")
    tiles, boundary = predicted_counts(n_sides, radius)
    if boundary > MAX_BOUNDARY:
        raise CapacityError(f"radius {radius} gives {boundary} boundary legs, limit {MAX_BOUNDARY}")
    n = n_sides
    layers = [0]
    inputs: list[tuple[int, ...]] = [()]
    partners: list[list[Leg | None]] = [[None] * n]
    contractions: list[tuple[Leg, Leg]] = []
    ring: list[Leg] = [(0, s) for s in range(n)]

    def new_tile(layer: int, parent_legs: Iterable[Leg]) -> int:
        tid = len(layers)
        parent_legs = list(parent_legs)
        layers.append(layer)
        inputs.append(tuple(range(len(parent_legs))))
        partners.append([None] * n)
        for slot, (pt, ps) in enumerate(parent_legs):
            partners[tid][slot] = (pt, ps)
            partners[pt][ps] = (tid, slot)
            contractions.append(((pt, ps), (tid, slot)))
        return tid

    for layer in range(1, radius):
        m = len(ring)
        concave_after = [ring[i][0] != ring[(i + 1) % m][0] for i in range(m)]
        new_ring: list[Leg] = []
        for i in range(m):
            if not concave_after[i - 1] and not concave_after[i]:
                tid = new_tile(layer, [ring[i]])
                new_ring.extend((tid, s) for s in range(1, n))
            if concave_after[i]:
                tid = new_tile(layer, [ring[(i + 1) % m], ring[i]])
                new_ring.extend((tid, s) for s in range(2, n))
        ring = new_ring

    tiles = tuple(
        Tile(id=i, layer=layers[i], n_sides=n, input_slots=inputs[i], partners=tuple(partners[i]))
        for i in range(len(layers))
    )
    return Tiling(n_sides=n, radius=radius, tiles=tiles, contractions=tuple(contractions), boundary=tuple(ring))


def tile_census(t: Tiling) -> dict[int, int]:
    """Number of tiles with 0, 1 and 2 input slots."""
    counts = Counter(len(tile.input_slots) for tile in t.tiles)
    return {k: counts.get(k, 0) for k in (0, 1, 2)}


def boundary_legs(t: Tiling) -> list[Leg]:
    return list(t.boundary)


@dataclass(frozen=True)
class Vertex:
    tiles: frozenset[int]
    corners: tuple[Leg, ...]  # (tile, corner index)
    closed: bool  # every incident edge is a contraction


def vertices(t: Tiling) -> list[Vertex]:
    """Identify polygon corners glued by contractions.

    Slot ``s`` runs from corner ``s`` to corner ``s + 1``; a glued edge is
    traversed in opposite directions by its two tiles.
    """
    n = t.n_sides
    parent: dict[Leg, Leg] = {}

    def find(c: Leg) -> Leg:
        parent.setdefault(c, c)
        while parent[c] != c:
            parent[c] = parent[parent[c]]
            c = parent[c]
        return c

    def union(a: Leg, b: Leg) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)

    for tile in t.tiles:
        for c in range(n):
            find((tile.id, c))
    for (ta, sa), (tb, sb) in t.contractions:
        union((ta, sa), (tb, (sb + 1) % n))
        union((ta, (sa + 1) % n), (tb, sb))

    groups: dict[Leg, list[Leg]] = {}
    for corner in list(parent):
        groups.setdefault(find(corner), []).append(corner)
    out = []
    for corners in groups.values():
        closed = all(
            t.tiles[tid].partners[(c - 1) % n] is not None and t.tiles[tid].partners[c] is not None
            for tid, c in corners
        )
        out.append(Vertex(frozenset(tid for tid, _ in corners), tuple(sorted(corners)), closed))
    return sorted(out, key=lambda v: v.corners)


def euler_characteristic(t: Tiling) -> int:
    n_edges = len(t.contractions) + t.n_boundary
    return len(vertices(t)) - n_edges + t.n_tiles


def to_text(t: Tiling) -> str:
    """Adjacency listing: ``id layer`` then each slot's partner ``tile.slot`` or ``BOUNDARY``."""
    lines = [f"# n_sides={t.n_sides} radius={t.radius} tiles={t.n_tiles} boundary={t.n_boundary}"]
    for tile in t.tiles:
        cells = ["BOUNDARY" if p is None else f"{p[0]}.{p[1]}" for p in tile.partners]
        lines.append(" ".join([str(tile.id), str(tile.layer)] + cells))
    return "\n".join(lines) + "\n"
