"""
Local search for the asymmetric TSP.

Only direction-preserving moves are used, since reversing a path changes
its weight on a directed instance:

  * Or-opt: move a segment of 1..3 vertices elsewhere, keeping its direction.
  * segment exchange: the pure 3-opt reconnection a->d..e->b..c->f that
    swaps two adjacent segments without reversing either.
  * double bridge (perturbation only): reorder A B C D E into A D C B E.
    Four edges change, so no single segment exchange undoes it.

Neighbourhoods are scanned through per-vertex candidate lists of the
cheapest successors; a queue of active vertices keeps rescans local.
"""
import time
from collections import deque
from typing import Deque, Iterable, List, Optional, Sequence, Tuple

import numpy as np
from loguru import logger

from combinatorics.errors import InputError
from instances.builder import AtspInstance
from solver.models import SolverConfig, restart_stream
from solver.tour import Tour, tour_weight

# new order, vertices whose edges changed, weight gain
Move = Tuple[List[int], Tuple[int, ...], int]
Kick = Tuple[List[int], Tuple[int, ...]]

_DEADLINE_CHECK_EVERY = 64


def candidate_lists(inst: AtspInstance, k: int) -> List[List[int]]:
    """The k cheapest successors of every vertex, ties broken by vertex index."""
    size = inst.N
    if size == 1:
        return [[]]
    masked = inst.weights.astype(np.int64)
    np.fill_diagonal(masked, np.iinfo(np.int64).max)
    return np.argsort(masked, axis=1, kind="stable")[:, : min(k, size - 1)].tolist()


class SearchContext:
    """Plain-list copies of the weights and candidate lists for fast scanning."""

    def __init__(self, weights: List[List[int]], candidates: List[List[int]]):
        self.W = weights
        self.cand = candidates
        self.N = len(weights)

    @classmethod
    def for_instance(cls, inst: AtspInstance, max_candidates: int) -> "SearchContext":
        return cls(inst.weights.astype(np.int64).tolist(), candidate_lists(inst, max_candidates))


def nearest_neighbor(inst: AtspInstance, start: int, rng: np.random.Generator) -> Tour:
    size = inst.N
    if not 0 <= start < size:
        raise InputError(f"start vertex {start} outside 0..{size - 1}")
    W = inst.weights.astype(np.int64)
    blocked = np.iinfo(np.int64).max
    visited = np.zeros(size, dtype=bool)
    visited[start] = True
    order = [start]
    current = start
    for _ in range(size - 1):
        row = np.where(visited, blocked, W[current])
        ties = np.flatnonzero(row == row.min())
        current = int(ties[rng.integers(ties.size)]) if ties.size > 1 else int(ties[0])
        visited[current] = True
        order.append(current)
    return Tour.from_order(inst.weights, order)


def _or_opt(W, cand, order: List[int], pos: List[int], s: int) -> Optional[Move]:
    N = len(order)
    p = pos[s]
    prev = order[p - 1]
    for length in range(1, min(3, N - 2) + 1):
        e = order[(p + length - 1) % N]
        nxt = order[(p + length) % N]
        removal = W[prev][s] + W[e][nxt] - W[prev][nxt]
        for v in cand[e]:
            q = pos[v]
            if (q - p) % N < length or (q - 1 - p) % N < length:
                continue
            u = order[q - 1]
            gain = removal + W[u][v] - W[u][s] - W[e][v]
            if gain > 0:
                rot = order[p:] + order[:p]
                segment, rest = rot[:length], rot[length:]
                cut = rest.index(u) + 1
                return rest[:cut] + segment + rest[cut:], (prev, s, e, nxt, u, v), gain
    return None


def _segment_exchange(W, cand, order: List[int], pos: List[int], a: int) -> Optional[Move]:
    N = len(order)
    pa = pos[a]
    b = order[(pa + 1) % N]
    wab = W[a][b]
    for d in cand[a]:
        rd = (pos[d] - pa) % N
        if rd < 2:
            continue
        c = order[(pa + rd - 1) % N]
        partial = wab + W[c][d] - W[a][d]
        for f in cand[c]:
            rf = (pos[f] - pa) % N or N
            if rf <= rd:
                continue
            e = order[(pa + rf - 1) % N]
            gain = partial + W[e][f] - W[c][f] - W[e][b]
            if gain > 0:
                rot = order[pa:] + order[:pa]
                return [a] + rot[rd:rf] + rot[1:rd] + rot[rf:], (a, b, c, d, e, f), gain
    return None


def descend(ctx: SearchContext, order: List[int], active: Iterable[int],
            move_depth: int) -> Tuple[List[int], int]:
    """Apply improving moves until no active vertex yields one; returns the order and the total gain."""
    N = ctx.N
    if N < 3:
        return list(order), 0
    W, cand = ctx.W, ctx.cand
    order = list(order)
    pos = [0] * N
    for i, v in enumerate(order):
        pos[v] = i
    queue: Deque[int] = deque()
    queued = [False] * N
    for v in active:
        if not queued[v]:
            queued[v] = True
            queue.append(v)

    moves = 0
    total = 0
    while queue:
        a = queue.popleft()
        queued[a] = False
        move = _or_opt(W, cand, order, pos, a)
        if move is None and move_depth >= 3:
            move = _segment_exchange(W, cand, order, pos, a)
        if move is None:
            continue
        order, touched, gain = move
        moves += 1
        total += gain
        for i, v in enumerate(order):
            pos[v] = i
        for v in touched:
            if not queued[v]:
                queued[v] = True
                queue.append(v)
    logger.trace(f"descent applied {moves} improving moves, gain {total}")
    return order, total


def local_search(inst: AtspInstance, t: Tour, cfg: SolverConfig, rng: np.random.Generator,
                 ctx: Optional[SearchContext] = None) -> Tour:
    ctx = ctx or SearchContext.for_instance(inst, cfg.max_candidates)
    active = list(t.order)
    rng.shuffle(active)
    order, gain = descend(ctx, list(t.order), active, cfg.move_depth)
    result = Tour.from_order(inst.weights, order)
    assert result.weight == tour_weight(ctx.W, t.order) - gain, "local search lost track of the tour weight"
    return result


def perturb(order: Sequence[int], rng: np.random.Generator, span: Optional[int] = None) -> Kick:
    """
    Double bridge: three consecutive segments B C D, each at most ``span``
    vertices long (no bound when None), are written back as D C B. The first
    vertex stays in front.

    ``touched`` lists the endpoints of the four removed edges as
    (end A, start B, end B, start C, end C, start D, end D, start E); start E
    wraps to the first vertex when E is empty.
    """
    N = len(order)
    order = list(order)
    if N < 4:
        return order, ()
    longest = (N - 1) // 3 if span is None else max(1, min(span, (N - 1) // 3))
    lb, lc, ld = (int(x) for x in rng.integers(1, longest + 1, size=3))
    i = int(rng.integers(1, N - (lb + lc + ld) + 1))
    j, k, m = i + lb, i + lb + lc, i + lb + lc + ld
    kicked = order[:i] + order[k:m] + order[j:k] + order[i:j] + order[m:]
    touched = (order[i - 1], order[i], order[j - 1], order[j], order[k - 1], order[k], order[m - 1], order[m % N])
    return kicked, touched


def kick_delta(W, touched: Tuple[int, ...]) -> int:
    """Weight change of a perturb() kick, read off its touched endpoints."""
    a_end, b_start, b_end, c_start, c_end, d_start, d_end, e_start = touched
    removed = W[a_end][b_start] + W[b_end][c_start] + W[c_end][d_start] + W[d_end][e_start]
    added = W[a_end][d_start] + W[d_end][c_start] + W[c_end][b_start] + W[b_end][e_start]
    return added - removed


def search_once(inst: AtspInstance, cfg: SolverConfig, restart_index: int,
                ctx: Optional[SearchContext] = None, deadline: Optional[float] = None) -> Tour:
    """
    One restart: nearest neighbour from home and local search, then an
    iterated local search of ``cfg.kicks_for(N)`` double-bridge kicks. Each
    kick is repaired by a descent from its eight endpoints and kept when the
    result is not worse. ``deadline`` is a ``time.time()`` value.
    """
    ctx = ctx or SearchContext.for_instance(inst, cfg.max_candidates)
    rng = restart_stream(cfg.seed, restart_index)
    current = list(local_search(inst, nearest_neighbor(inst, inst.home, rng), cfg, rng, ctx).order)
    current_weight = tour_weight(ctx.W, current)

    accepted = 0
    for round_index in range(cfg.kicks_for(ctx.N)):
        if cfg.target_weight is not None and current_weight <= cfg.target_weight:
            break
        if deadline is not None and round_index % _DEADLINE_CHECK_EVERY == 0 and time.time() >= deadline:
            break
        kicked, touched = perturb(current, rng, cfg.kick_span)
        if not touched:
            break
        repaired, gain = descend(ctx, kicked, touched, cfg.move_depth)
        weight = current_weight + kick_delta(ctx.W, touched) - gain
        if weight <= current_weight:
            current, current_weight = repaired, weight
            accepted += 1

    logger.trace(f"restart {restart_index}: {accepted} kicks kept, weight {current_weight}")
    result = Tour.from_order(inst.weights, current)
    assert result.weight == current_weight, "iterated local search lost track of the tour weight"
    return result
