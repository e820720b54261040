import math
from fractions import Fraction
from pathlib import Path

import numpy as np
import pytest

from holocode.code_builder import (
    asymptotic_rate,
    build_code,
    check_code,
    code_rate,
    export_code,
    format_code,
    import_code,
    local_stabilizers,
    parse_code,
    push_operator,
    symplectic_arrays,
    tile_frame,
)
from holocode.errors import ParseError
from holocode.pauli import PauliString, commutes, five_qubit_seed, steane_seed
from holocode.tiling import build_tiling
from oracles import naive_rank, network_group, signed_member

GOLDEN = Path(__file__).parent / "golden"


def labelled(seed, symbol, labels):
    return PauliString.from_str("".join(symbol if lbl in labels else "I" for lbl in seed.leg_order))


def labels_of(seed, p):
    return [seed.leg_order[i] for i in p.support().indices()]


def test_radius_one_is_steane():
    c = build_code("steane", 1)
    assert (c.n, c.k) == (7, 1)
    assert [str(g) for g in c.stabilizer_generators] == [
        "+XXIIIXX", "+IXXXIIX", "+IIIXXXX", "+ZZIIIZZ", "+IZZZIIZ", "+IIIZZZZ",
    ]
    assert str(c.logicals[0][0]) == "+XXXXXXX"
    assert str(c.logicals[0][1]) == "+ZZZZZZZ"


def test_radius_one_is_five_qubit_code():
    c = build_code("five_qubit", 1)
    assert [g.symbols() for g in c.stabilizer_generators] == ["XZZXI", "IXZZX", "XIXZZ", "ZXIXZ"]
    assert check_code(c) == []


def test_golden_steane_file():
    assert format_code(build_code("steane", 1)) == (GOLDEN / "code_steane_1.txt").read_text()


def test_local_stabilizers_of_tile_kinds():
    seed = steane_seed()
    S = seed.stabilizers
    L = seed.logical_position
    pos = seed.position
    assert local_stabilizers(seed, [L]) == list(S[:6])
    one = local_stabilizers(seed, [pos("6"), L])
    assert one == [S[1], S[0] * S[2], S[4], S[3] * S[5]]
    two = local_stabilizers(seed, [pos("6"), pos("7"), L])
    assert two == [S[0] * S[2], S[3] * S[5]]


def test_known_push_representatives():
    seed = steane_seed()
    pos, L = seed.position, seed.logical_position
    r = push_operator(seed, labelled(seed, "X", ["6"]), [pos("6"), L])
    assert labels_of(seed, r) == ["1", "3", "4"]
    r = push_operator(seed, labelled(seed, "X", ["7"]), [pos("6"), pos("7"), L])
    assert labels_of(seed, r) == ["2", "3", "4"]
    r = push_operator(seed, labelled(seed, "X", ["6", "7"]), [pos("6"), pos("7"), L])
    assert labels_of(seed, r) == ["1", "2"]


def test_push_rejects_operator_outside_inputs():
    seed = steane_seed()
    with pytest.raises(ValueError):
        push_operator(seed, labelled(seed, "X", ["1"]), [seed.position("6")])
    with pytest.raises(ValueError):
        push_operator(seed, PauliString.from_str("X"), [0])
    with pytest.raises(ValueError):
        push_operator(seed, labelled(seed, "X", ["6"]), [seed.position("6")], rule="best")


@pytest.mark.parametrize("rule", ["min_support", "first"])
def test_push_product_is_a_stabilizer(rule):
    seed = five_qubit_seed()
    L = seed.logical_position
    ins = [seed.position("5"), seed.position("1"), L]
    for sym in "XYZ":
        op = labelled(seed, sym, ["5"])
        out = push_operator(seed, op, ins, rule)
        assert out.restrict(ins).weight() == 0
        # op * out must commute with every seed stabilizer and be in their span
        prod = op * out
        assert all(commutes(prod, s) for s in seed.stabilizers)


@pytest.mark.parametrize("name,radius", [("steane", r) for r in (1, 2, 3, 4)] + [("five_qubit", r) for r in (1, 2, 3, 4)])
def test_codes_are_valid(name, radius):
    c = build_code(name, radius)
    t = build_tiling(c.n_sides, radius)
    assert (c.n, c.k) == (t.n_boundary, t.n_tiles)
    assert check_code(c) == []


@pytest.mark.parametrize("name,radius", [("steane", 2), ("five_qubit", 2), ("steane", 3)])
def test_generator_rank_against_naive_elimination(name, radius):
    c = build_code(name, radius)
    gx, gz = symplectic_arrays(c.stabilizer_generators)
    assert naive_rank(np.hstack([gx, gz])) == c.n - c.k


@pytest.mark.parametrize("radius", [1, 2, 3])
def test_steane_codes_are_self_dual_css(radius):
    c = build_code("steane", radius)
    xs = {g.x for g in c.stabilizer_generators if not g.z.any()}
    zs = {g.z for g in c.stabilizer_generators if not g.x.any()}
    assert len(xs) + len(zs) == c.n - c.k
    assert xs == zs
    assert all(g.sign == 1 for g in c.stabilizer_generators)


@pytest.mark.parametrize("name,radius", [("steane", 2), ("five_qubit", 2), ("five_qubit", 3)])
def test_signs_match_network_contraction(name, radius):
    c = build_code(name, radius)
    seed = five_qubit_seed() if name == "five_qubit" else steane_seed()
    t = c.tiling
    frames = [tile_frame(seed, tile) for tile in t.tiles]
    ox, oz, osigns = network_group(t, seed, frames)
    assert naive_rank(np.hstack([ox, oz])) == c.n - c.k
    for g in c.stabilizer_generators:
        assert signed_member(g.x.to_bits(), g.z.to_bits(), g.sign, ox, oz, osigns), g
    # a logical times the matching Pauli on its bulk leg is a network stabilizer
    lx, lz, lsigns = network_group(t, seed, frames, keep_logicals=True)
    for tid, pair in c.logicals.items():
        for code, op in zip((0, 1), pair):
            bulk = np.zeros(c.k, dtype=np.uint8)
            bulk[tid] = 1
            x = np.concatenate([op.x.to_bits(), bulk if code == 0 else 0 * bulk])
            z = np.concatenate([op.z.to_bits(), bulk if code == 1 else 0 * bulk])
            assert signed_member(x, z, op.sign, lx, lz, lsigns), (tid, op)


def test_layer_one_logical_lives_in_its_wedge():
    c = build_code("steane", 3)
    t = c.tiling
    bindex = t.boundary_index()
    for tile in t.layer(1):
        below, stack = set(), [tile.id]
        while stack:
            tid = stack.pop()
            below.add(tid)
            for s in t.tiles[tid].output_slots:
                p = t.tiles[tid].partners[s]
                if p is not None:
                    stack.append(p[0])
        wedge = {bindex[leg] for leg in t.boundary if leg[0] in below}
        for op in c.logicals[tile.id]:
            assert set(op.support().indices()) <= wedge


def test_provenance_points_at_tiles():
    c = build_code("five_qubit", 3)
    assert len(c.provenance) == len(c.stabilizer_generators)
    assert list(c.provenance) == sorted(c.provenance)
    assert set(c.provenance) <= set(range(c.k))


def test_rates():
    assert asymptotic_rate(5) == pytest.approx(1 / math.sqrt(5), abs=1e-12)
    assert asymptotic_rate(7) == pytest.approx(1 / math.sqrt(21), abs=1e-12)
    assert code_rate(build_code("steane", 2)) == Fraction(8, 42)
    with pytest.raises(ValueError):
        asymptotic_rate(6)


def test_round_trip(tmp_path):
    for name, radius in (("steane", 2), ("five_qubit", 3)):
        c = build_code(name, radius)
        path = tmp_path / f"{name}.txt"
        export_code(c, path)
        back = import_code(path)
        assert back == c
        assert format_code(back) == path.read_text()


@pytest.mark.parametrize(
    "text,line",
    [
        ("", 1),
        ("n=7 k=1 seed=steane\n", 1),
        ("n=7 k=1 seed=hexagon R=1\n", 1),
        ("n=7 k=1 seed=steane R=1\nS + XXQIIXX\n", 2),
        ("n=7 k=1 seed=steane R=1\nS + XXIIIXX\nS * XXIIIXX\n", 3),
        ("n=7 k=1 seed=steane R=1\nS + XXIIIX\n", 2),
        ("n=7 k=1 seed=steane R=1\nLX zero + XXXXXXX\n", 2),
        ("n=7 k=1 seed=steane R=1\nQ + XXXXXXX\n", 2),
        ("n=7 k=1 seed=steane R=1\nS + XXIIIXX tile=a\n", 2),
    ],
)
def test_parse_errors_carry_line_numbers(text, line):
    with pytest.raises(ParseError) as info:
        parse_code(text)
    assert info.value.line == line
    assert str(info.value).startswith(f"line {line}:")


def test_missing_file():
    with pytest.raises(OSError):
        import_code("/nonexistent/code.txt")
