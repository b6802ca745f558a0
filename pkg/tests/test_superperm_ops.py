import numpy as np
import pytest

from combinatorics.errors import InputError
from combinatorics.superperm_ops import (
    Superpermutation,
    first_appearances,
    normalize,
    split,
    superperm_to_tour,
    tour_to_superperm,
    verify,
)
from instances.builder import AtspInstance, build_atsp
from solver.tour import Tour, parse_tsplib_tour


@pytest.fixture(scope="module")
def atsp6():
    return build_atsp(6)


def test_verify_short_six_symbol_string(superperm_872):
    report = verify(superperm_872, 6)
    assert report.valid
    assert report.summary() == "valid length=872 covered=720 path_weight=866"


def test_verify_reports_missing():
    report = verify("112", 2)
    assert not report.valid
    assert report.missing == 1
    assert report.summary() == "invalid missing=1"


def test_verify_rejects_foreign_symbol():
    with pytest.raises(InputError):
        verify("1234567", 6)


def test_verify_strips_trailing_newline():
    assert verify("121\n", 2).length == 3


def test_split_lists_windows_with_positions():
    assert [(i, str(p)) for i, p in split("121", 2)] == [(0, "12"), (1, "21")]
    assert split("111", 2) == []


def test_split_covers_every_permutation(superperm_872):
    windows = split(superperm_872, 6)
    assert len(windows) >= 720
    assert len({str(p) for _, p in windows}) == 720


def test_first_appearances_skips_repeats():
    assert first_appearances("12121", 2) == ["12", "21"]


def test_normalize_relabels_first_window():
    sp = normalize("212", 2)
    assert sp.text == "121"
    with pytest.raises(InputError):
        normalize("111", 2)


def test_superpermutation_model():
    sp = Superpermutation(text=" 123121321\n", n=3)
    assert sp.length == 9
    assert str(sp) == "123121321"
    assert sp.report().valid
    with pytest.raises(ValueError):
        Superpermutation(text="124", n=3)


def test_fixture_tour_gives_fixture_string(atsp6, superperm_872, tour_866_path):
    with open(tour_866_path, "r", encoding="ascii") as f:
        order = parse_tsplib_tour(f)
    t = Tour.from_order(atsp6.weights, order)
    assert t.weight == 866
    assert tour_to_superperm(t, atsp6).text == superperm_872


def test_fixture_string_gives_fixture_tour(atsp6, superperm_872, tour_866_path):
    t = superperm_to_tour(Superpermutation(text=superperm_872, n=6), atsp6)
    with open(tour_866_path, "r", encoding="ascii") as f:
        assert list(t.order) == parse_tsplib_tour(f)
    assert t.weight == 866


def test_tour_is_rotated_to_home(atsp6, superperm_872):
    t = superperm_to_tour(Superpermutation(text=superperm_872, n=6), atsp6)
    shifted = t.rotated(t.order[100])
    assert tour_to_superperm(shifted, atsp6).text == superperm_872


@pytest.mark.parametrize("n", [3, 4])
def test_random_tours_round_trip(n):
    inst = build_atsp(n)
    rng = np.random.default_rng(n)
    for _ in range(100):
        order = [0] + list(rng.permutation(np.arange(1, inst.N)))
        t = Tour.from_order(inst.weights, order)
        sp = tour_to_superperm(t, inst)
        assert sp.length == n + t.weight
        assert sp.report().valid
        back = superperm_to_tour(sp, inst)
        assert back.weight <= t.weight
        assert tour_to_superperm(back, inst).length <= sp.length


def test_superperm_to_tour_needs_home_prefix():
    inst = build_atsp(2)
    with pytest.raises(InputError):
        superperm_to_tour(Superpermutation(text="212", n=2), inst)
    assert superperm_to_tour(normalize("212", 2), inst).weight == 1


def test_superperm_to_tour_rejects_invalid_string():
    with pytest.raises(InputError):
        superperm_to_tour(Superpermutation(text="1212", n=3), build_atsp(3))


def test_conversions_need_known_n():
    inst = AtspInstance(weights=np.array([[0, 1], [1, 0]]))
    with pytest.raises(InputError):
        tour_to_superperm(Tour.from_order(inst.weights, [0, 1]), inst)


def test_split_examples():
    assert [(i, str(p)) for i, p in split("112", 2)] == [(1, "12")]
    windows = split("123121321", 3)
    assert [i for i, _ in windows] == [0, 1, 2, 4, 5, 6]
    assert len({str(p) for _, p in windows}) == 6


@pytest.mark.parametrize("text, n, length", [("121", 2, 3), ("1221", 2, 4), ("1", 1, 1)])
def test_verify_valid_strings(text, n, length):
    report = verify(text, n)
    assert report.valid
    assert report.length == length
    assert report.path_weight + n == report.length


@pytest.mark.parametrize("text, n, weight", [("121", 2, 1), ("123121321", 3, 6)])
def test_superperm_to_tour_small(text, n, weight):
    inst = build_atsp(n)
    t = superperm_to_tour(Superpermutation(text=text, n=n), inst)
    assert t.weight == weight
    assert t.order[0] == inst.home
    assert tour_to_superperm(t, inst).text == text
