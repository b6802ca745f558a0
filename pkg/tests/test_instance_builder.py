import io
from itertools import permutations
from math import factorial

import numpy as np
import pytest
from pydantic import ValidationError

from combinatorics.errors import InputError, ParseError
from combinatorics.perm_core import overlap_weight, unrank
from instances.builder import (
    AtspInstance,
    build_atsp,
    infer_alphabet_size,
    length_from_circuit_weight,
    parse_tsplib_atsp,
    random_atsp,
    write_tsplib_atsp,
)
from solver.tour import tour_weight

HEADER = (
    "NAME: tiny\n"
    "TYPE: ATSP\n"
    "DIMENSION: 2\n"
    "EDGE_WEIGHT_TYPE: EXPLICIT\n"
    "EDGE_WEIGHT_FORMAT: FULL_MATRIX\n"
    "EDGE_WEIGHT_SECTION\n"
)


def _round_trip(inst):
    sink = io.StringIO()
    write_tsplib_atsp(inst, sink)
    return sink.getvalue(), parse_tsplib_atsp(io.StringIO(sink.getvalue()))


@pytest.mark.parametrize("n", range(1, 5))
def test_weights_are_overlaps(n):
    inst = build_atsp(n)
    assert inst.N == factorial(n)
    assert inst.n == n
    assert inst.home == 0
    for i in range(inst.N):
        assert inst.weights[i, i] == 9999
        for j in range(inst.N):
            if i == j:
                continue
            expected = 0 if j == inst.home else overlap_weight(unrank(i, n), unrank(j, n))
            assert inst.weights[i, j] == expected


def test_three_symbol_row_of_home():
    w = build_atsp(3).weights
    # 123 -> 132, 213, 231, 312, 321
    assert w[0, 1:].tolist() == [3, 3, 1, 2, 2]


def test_weights_are_read_only():
    inst = build_atsp(3)
    with pytest.raises(ValueError):
        inst.weights[0, 1] = 5


def test_six_symbol_instance_shape():
    inst = build_atsp(6)
    assert inst.weights.shape == (720, 720)
    assert inst.max_weight() == 6
    assert int(inst.weights[:, 0].sum()) == 9999


@pytest.mark.parametrize("n", [0, 9])
def test_build_rejects_unsupported_n(n):
    with pytest.raises(InputError):
        build_atsp(n)


def test_length_from_circuit_weight():
    assert length_from_circuit_weight(6, 866) == 872
    with pytest.raises(InputError):
        length_from_circuit_weight(3, -1)


@pytest.mark.parametrize("n", range(1, 6))
def test_tsplib_round_trip(n):
    inst = build_atsp(n)
    text, parsed = _round_trip(inst)
    assert parsed == inst
    assert f"DIMENSION: {inst.N}\n" in text
    assert f"COMMENT: superpermutation n={n}\n" in text
    assert text.endswith("EOF\n")


def test_matrix_rows_wrap_at_twenty_values():
    text, _ = _round_trip(build_atsp(4))
    body = text.split("EDGE_WEIGHT_SECTION\n")[1].splitlines()[:-1]
    assert [len(line.split()) for line in body[:4]] == [20, 4, 20, 4]
    assert len(body) == 48


def test_parse_without_comment_has_unknown_n():
    inst = parse_tsplib_atsp(io.StringIO(HEADER + "9999 1\n2 9999\nEOF\n"))
    assert inst.n is None
    assert inst.weights.tolist() == [[9999, 1], [2, 9999]]


def test_parse_infers_n_from_superpermutation_weights():
    text, _ = _round_trip(build_atsp(3))
    stripped = text.replace("COMMENT: superpermutation n=3\n", "")
    parsed = parse_tsplib_atsp(io.StringIO(stripped))
    assert parsed.n == 3
    assert parsed == build_atsp(3)


def test_infer_alphabet_size(rng):
    assert infer_alphabet_size(build_atsp(4).weights) == 4
    zero_diagonal = build_atsp(3).weights.astype(np.int64)
    np.fill_diagonal(zero_diagonal, 0)
    assert infer_alphabet_size(zero_diagonal) == 3
    assert infer_alphabet_size(random_atsp(6, rng).weights) is None
    assert infer_alphabet_size(random_atsp(7, rng).weights) is None


def test_random_instance_round_trip(rng):
    inst = random_atsp(7, rng)
    _, parsed = _round_trip(inst)
    assert parsed.n is None
    assert np.array_equal(parsed.weights, inst.weights)
    off = ~np.eye(7, dtype=bool)
    assert inst.weights[off].min() >= 1 and inst.weights[off].max() <= 9


@pytest.mark.parametrize("body, line", [
    ("9999 1 0\n2 9999\nEOF\n", 7),
    ("9999 1\n2 x\nEOF\n", 8),
    ("9999 1\n2 9999\n", 8),
    ("9999 1\nEOF\n", 8),
    ("9999 1\n2 9999\n3 3\nEOF\n", 9),
    ("9999\n2 9999\nEOF\n", 7),
    ("9999 1\n2\nEOF\n", 8),
])
def test_malformed_matrix_reports_line(body, line):
    with pytest.raises(ParseError) as exc:
        parse_tsplib_atsp(io.StringIO(HEADER + body))
    assert exc.value.line_number == line
    assert str(exc.value).startswith(f"line {line}: ")


def test_parse_rejects_wrong_type():
    with pytest.raises(ParseError):
        parse_tsplib_atsp(io.StringIO(HEADER.replace("ATSP", "TSP") + "0 1\n1 0\nEOF\n"))


def test_parse_rejects_inconsistent_comment():
    text = HEADER.replace("NAME: tiny\n", "NAME: tiny\nCOMMENT: superpermutation n=3\n")
    with pytest.raises(ParseError):
        parse_tsplib_atsp(io.StringIO(text + "9999 1\n1 9999\nEOF\n"))


def test_instance_validation():
    with pytest.raises(ValidationError):
        AtspInstance(weights=np.zeros((2, 3)))
    with pytest.raises(ValidationError):
        AtspInstance(weights=np.zeros((2, 2)), n=3)
    with pytest.raises(ValidationError):
        AtspInstance(weights=np.zeros((2, 2)), home=2)


def test_two_symbol_file():
    text, _ = _round_trip(build_atsp(2))
    assert "DIMENSION: 2\n" in text
    assert "EDGE_WEIGHT_SECTION\n9999 1\n0 9999\nEOF\n" in text


def test_only_home_column_has_zero_weights():
    w = build_atsp(4).weights
    off = ~np.eye(24, dtype=bool)
    rows, cols = np.nonzero((w == 0) & off)
    assert set(cols.tolist()) == {0}
    assert len(rows) == 23


def test_optimal_circuit_is_optimal_path_from_home():
    w = build_atsp(3).weights
    circuits = min(tour_weight(w, (0,) + rest) for rest in permutations(range(1, 6)))
    paths = min(sum(int(w[a, b]) for a, b in zip((0,) + rest, rest)) for rest in permutations(range(1, 6)))
    assert circuits == paths == 6
