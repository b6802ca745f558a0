import io
from itertools import permutations

import numpy as np
import pytest

from combinatorics.errors import InputError, ParseError, StructuralError
from instances.builder import AtspInstance, build_atsp, random_atsp
from instances.symmetrize import desymmetrize_tour, parse_tsplib_tsp, symmetrize, write_tsplib_tsp
from solver.exact import held_karp
from solver.tour import Tour, tour_weight


def _brute_force(weights):
    size = len(weights)
    return min(tour_weight(weights, (0,) + rest) for rest in permutations(range(1, size)))


def test_layout():
    inst = build_atsp(3)
    sym = symmetrize(inst)
    M = sym.big_m
    assert sym.dimension == 12
    assert M == 6 * 3 + 1
    assert sym.offset == 6 * M
    assert sym.forbidden == 10 * M
    W = sym.weights
    assert np.array_equal(W, W.T)
    assert np.all(np.diag(W) == 0)
    for i in range(6):
        assert W[i, sym.ghost(i)] == 0
        for j in range(6):
            if i != j:
                assert W[sym.ghost(i), j] == inst.weights[i, j] + M
                assert W[i, j] == sym.forbidden
                assert W[sym.ghost(i), sym.ghost(j)] == sym.forbidden


def test_asymmetric_weights_recovered():
    inst = build_atsp(3)
    recovered = symmetrize(inst).asymmetric_weights()
    off = ~np.eye(6, dtype=bool)
    assert np.array_equal(recovered[off], inst.weights.astype(np.int64)[off])


def test_big_m_precondition():
    inst = build_atsp(3)
    with pytest.raises(InputError):
        symmetrize(inst, big_m=18)
    assert symmetrize(inst, big_m=19).big_m == 19
    with pytest.raises(InputError):
        symmetrize(build_atsp(1))


def test_default_big_m_uses_alphabet_size(rng):
    assert symmetrize(build_atsp(2)).big_m == 2 * 2 + 1
    assert symmetrize(build_atsp(4)).big_m == 24 * 4 + 1
    inst = random_atsp(5, rng)
    assert symmetrize(inst).big_m == 5 * inst.max_weight() + 1


def test_optimum_preserved_on_random_instances():
    rng = np.random.default_rng(7)
    for trial in range(50):
        inst = random_atsp(int(rng.integers(4, 7)), rng)
        asym_opt = _brute_force(inst.weights)
        sym = symmetrize(inst)
        sym_tour = held_karp(AtspInstance(weights=sym.weights))
        assert sym_tour.weight - sym.offset == asym_opt
        # an optimal symmetric tour alternates original and ghost vertices
        order = sym_tour.order
        for a, b in zip(order, order[1:] + order[:1]):
            assert (a < sym.N) != (b < sym.N)
        assert desymmetrize_tour(sym_tour, sym).weight == asym_opt


def test_desymmetrize_either_direction():
    inst = build_atsp(3)
    sym = symmetrize(inst)
    asym = Tour.from_order(inst.weights, [0, 3, 4, 1, 5, 2])
    forward = []
    for v in asym.order:
        forward += [v, sym.ghost(v)]
    t = Tour.from_order(sym.weights, forward)
    assert t.weight == asym.weight + sym.offset
    assert desymmetrize_tour(t, sym) == asym
    backward = Tour.from_order(sym.weights, forward[::-1])
    assert desymmetrize_tour(backward, sym).weight == asym.weight


def test_desymmetrize_rejects_forbidden_edge():
    sym = symmetrize(build_atsp(2))
    with pytest.raises(StructuralError):
        desymmetrize_tour(Tour.from_order(sym.weights, [0, 1, 2, 3]), sym)


def test_tsplib_round_trip():
    sym = symmetrize(build_atsp(3))
    sink = io.StringIO()
    write_tsplib_tsp(sym, sink)
    text = sink.getvalue()
    assert "TYPE: TSP\n" in text
    assert f"COMMENT: jv-transform M={sym.big_m} OFFSET={sym.offset}\n" in text
    parsed = parse_tsplib_tsp(io.StringIO(text))
    assert np.array_equal(parsed.weights, sym.weights)
    assert (parsed.N, parsed.big_m, parsed.offset, parsed.forbidden) == (sym.N, sym.big_m, sym.offset, sym.forbidden)


def test_parse_rejects_missing_transform_comment():
    sym = symmetrize(build_atsp(2))
    sink = io.StringIO()
    write_tsplib_tsp(sym, sink)
    text = "\n".join(line for line in sink.getvalue().splitlines() if not line.startswith("COMMENT")) + "\n"
    with pytest.raises(ParseError):
        parse_tsplib_tsp(io.StringIO(text))


def test_two_symbol_example():
    sym = symmetrize(build_atsp(2), big_m=100)
    assert sym.dimension == 4
    assert sym.weights[sym.ghost(0), 1] == 101
    assert sym.weights[0, sym.ghost(0)] == 0
    best = held_karp(AtspInstance(weights=sym.weights))
    asym = desymmetrize_tour(best, sym)
    assert asym.order == (0, 1)
    assert asym.weight == 1
