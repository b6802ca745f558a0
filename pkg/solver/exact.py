"""
Exact ATSP methods: Held-Karp dynamic programming, assignment-bound
branch and bound, and the assignment relaxation itself.
"""
import time
from typing import Dict, List, Optional, Tuple

import numpy as np
from loguru import logger
from pydantic import BaseModel
from scipy.optimize import linear_sum_assignment

from combinatorics.errors import CapabilityError
from config.settings import settings
from instances.builder import AtspInstance
from solver.heuristic import nearest_neighbor, search_once
from solver.models import SolverConfig, restart_stream
from solver.tour import Tour

_INF = 1 << 40


class ExactResult(BaseModel):
    tour: Tour
    optimal: bool
    nodes: int = 0
    elapsed: float = 0.0


def _assignment_value(cost: np.ndarray) -> int:
    rows, cols = linear_sum_assignment(cost)
    return int(cost[rows, cols].sum())


def assignment_lower_bound(inst: AtspInstance) -> int:
    """Optimal assignment value with self-assignment excluded."""
    if inst.N == 1:
        return 0
    cost = inst.weights.astype(np.int64)
    np.fill_diagonal(cost, _INF)
    return _assignment_value(cost)


def held_karp(inst: AtspInstance) -> Tour:
    size = inst.N
    if size > settings.HELD_KARP_MAX_VERTICES:
        raise CapabilityError(
            f"Held-Karp is limited to {settings.HELD_KARP_MAX_VERTICES} vertices (got {size}); "
            f"use branch_and_bound or the heuristic solver"
        )
    if size <= 2:
        return Tour.from_order(inst.weights, range(size))

    W = inst.weights.astype(np.int64)
    home = inst.home
    others = [v for v in range(size) if v != home]
    m = len(others)
    sub = W[np.ix_(others, others)]
    np.fill_diagonal(sub, _INF)

    dp = np.full((1 << m, m), _INF, dtype=np.int64)
    parent = np.full((1 << m, m), -1, dtype=np.int8)
    for j, v in enumerate(others):
        dp[1 << j, j] = W[home, v]

    bits = np.arange(m)
    for mask in range(1, 1 << m):
        row = dp[mask]
        outside = np.flatnonzero(((mask >> bits) & 1) == 0)
        if outside.size == 0 or row.min() >= _INF:
            continue
        cand = row[:, None] + sub[:, outside]
        best_i = cand.argmin(axis=0)
        best = cand[best_i, np.arange(outside.size)]
        targets = mask | (1 << outside)
        better = best < dp[targets, outside]
        dp[targets[better], outside[better]] = best[better]
        parent[targets[better], outside[better]] = best_i[better]

    full = (1 << m) - 1
    closing = dp[full] + W[others, home]
    last = int(closing.argmin())

    path: List[int] = []
    mask, j = full, last
    while j != -1:
        path.append(others[j])
        prev = int(parent[mask, j])
        mask ^= 1 << j
        j = prev
    tour = Tour.from_order(inst.weights, [home] + path[::-1])
    logger.debug(f"Held-Karp optimum on {size} vertices: {tour.weight}")
    return tour


class _BranchAndBound:

    def __init__(self, inst: AtspInstance, incumbent: Tour, deadline: float):
        self.W = inst.weights.astype(np.int64)
        self.rows = self.W.tolist()
        self.size = inst.N
        self.home = inst.home
        self.best = incumbent
        self.deadline = deadline
        self.nodes = 0
        self.timed_out = False
        self.seen: Dict[Tuple[int, int], int] = {}

    def remaining_bound(self, current: int, unvisited: List[int]) -> int:
        """Assignment bound for a path current -> (all of unvisited) -> home."""
        if not unvisited:
            return self.rows[current][self.home]
        sources = [current] + unvisited
        sinks = unvisited + [self.home]
        cost = self.W[np.ix_(sources, sinks)]
        k = len(unvisited)
        cost[np.arange(1, k + 1), np.arange(k)] = _INF  # v -> v
        cost[0, k] = _INF                               # current -> home too early
        return _assignment_value(cost)

    def search(self, path: List[int], mask: int, cost: int) -> None:
        if self.timed_out:
            return
        self.nodes += 1
        if time.perf_counter() > self.deadline:
            self.timed_out = True
            return

        current = path[-1]
        unvisited = [v for v in range(self.size) if not mask >> v & 1]
        if not unvisited:
            total = cost + self.rows[current][self.home]
            if total < self.best.weight:
                self.best = Tour.from_order(self.W, path)
                logger.debug(f"branch and bound: new incumbent {total} after {self.nodes} nodes")
            return

        row = self.rows[current]
        for v in sorted(unvisited, key=lambda x: (row[x], x)):
            new_cost = cost + row[v]
            if new_cost >= self.best.weight:
                continue
            new_mask = mask | (1 << v)
            key = (new_mask, v)
            if self.seen.get(key, _INF) <= new_cost:
                continue
            self.seen[key] = new_cost
            rest = [u for u in unvisited if u != v]
            if new_cost + self.remaining_bound(v, rest) >= self.best.weight:
                continue
            path.append(v)
            self.search(path, new_mask, new_cost)
            path.pop()
            if self.timed_out:
                return


def branch_and_bound(inst: AtspInstance, time_limit: Optional[float] = None,
                     incumbent: Optional[Tour] = None) -> ExactResult:
    """
    Depth-first search from the home vertex with assignment-relaxation
    pruning and (visited set, last vertex) dominance. ``optimal`` is True
    only if the search completed within ``time_limit`` seconds.
    """
    started = time.perf_counter()
    if inst.N > settings.EXACT_MAX_VERTICES:
        raise CapabilityError(
            f"branch and bound is limited to {settings.EXACT_MAX_VERTICES} vertices (got {inst.N})"
        )
    if time_limit is None:
        time_limit = settings.EXACT_TIME_LIMIT

    if incumbent is None:
        if time_limit > 0:
            incumbent = search_once(inst, SolverConfig(), 0)
        else:
            incumbent = nearest_neighbor(inst, inst.home, restart_stream(settings.SOLVER_SEED, 0))
    if time_limit <= 0:
        return ExactResult(tour=incumbent, optimal=False, elapsed=time.perf_counter() - started)
    if inst.N <= 2:
        return ExactResult(tour=Tour.from_order(inst.weights, range(inst.N)), optimal=True,
                           elapsed=time.perf_counter() - started)

    search = _BranchAndBound(inst, incumbent, started + time_limit)
    root = [v for v in range(inst.N) if v != inst.home]
    if search.remaining_bound(inst.home, root) < incumbent.weight:
        search.search([inst.home], 1 << inst.home, 0)

    elapsed = time.perf_counter() - started
    optimal = not search.timed_out
    logger.info(
        f"branch and bound: weight={search.best.weight} optimal={optimal} "
        f"nodes={search.nodes} elapsed={elapsed:.1f}s"
    )
    return ExactResult(tour=search.best, optimal=optimal, nodes=search.nodes, elapsed=elapsed)
