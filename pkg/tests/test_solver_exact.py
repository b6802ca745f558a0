from itertools import permutations

import numpy as np
import pytest

from combinatorics.errors import CapabilityError
from instances.builder import build_atsp, random_atsp
from solver.exact import assignment_lower_bound, branch_and_bound, held_karp
from solver.tour import tour_weight


def _brute_force(weights):
    size = len(weights)
    return min(tour_weight(weights, (0,) + rest) for rest in permutations(range(1, size)))


@pytest.mark.parametrize("n, weight", [(1, 0), (2, 1), (3, 6)])
def test_held_karp_on_small_superperm_instances(n, weight):
    inst = build_atsp(n)
    t = held_karp(inst)
    assert t.weight == weight
    t.check(inst.weights)


def test_held_karp_matches_brute_force(rng):
    for _ in range(20):
        inst = random_atsp(int(rng.integers(3, 8)), rng)
        assert held_karp(inst).weight == _brute_force(inst.weights)


def test_held_karp_refuses_large_instances():
    with pytest.raises(CapabilityError):
        held_karp(build_atsp(4))


def test_assignment_lower_bound():
    assert assignment_lower_bound(build_atsp(1)) == 0
    assert assignment_lower_bound(build_atsp(2)) == 1
    assert assignment_lower_bound(build_atsp(3)) <= 6


def test_assignment_bound_below_optimum(rng):
    for _ in range(20):
        inst = random_atsp(5, rng)
        assert assignment_lower_bound(inst) <= _brute_force(inst.weights)


def test_branch_and_bound_agrees_with_held_karp():
    rng = np.random.default_rng(11)
    for _ in range(50):
        inst = random_atsp(int(rng.integers(3, 11)), rng)
        result = branch_and_bound(inst, time_limit=60)
        assert result.optimal
        assert result.tour.weight == held_karp(inst).weight
        result.tour.check(inst.weights)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_branch_and_bound_on_small_superperm_instances(n):
    inst = build_atsp(n)
    result = branch_and_bound(inst)
    assert result.optimal
    assert result.tour.weight == held_karp(inst).weight


def test_branch_and_bound_without_budget():
    inst = build_atsp(3)
    result = branch_and_bound(inst, time_limit=0)
    assert not result.optimal
    result.tour.check(inst.weights)


def test_branch_and_bound_refuses_large_instances():
    with pytest.raises(CapabilityError):
        branch_and_bound(build_atsp(5), time_limit=1)


@pytest.mark.slow
def test_branch_and_bound_proves_four_symbol_optimum():
    result = branch_and_bound(build_atsp(4), time_limit=600)
    assert result.optimal
    assert result.tour.weight == 29
