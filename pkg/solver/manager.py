"""
Multi-restart driver.

Restart i draws only from restart_stream(seed, i), and results are consumed
in restart order whatever the number of workers, so the best tour (ties to
the lowest restart index) does not depend on parallelism. Runs are counted
from 1 in progress lines and in runs_to_best.
"""
import time
from concurrent.futures import ProcessPoolExecutor
from typing import Iterator, List, Optional

from loguru import logger

from instances.builder import AtspInstance
from solver.heuristic import SearchContext, search_once
from solver.models import SolverConfig, SolveResult
from solver.tour import Tour

# per-process state for pool workers
_worker_inst: Optional[AtspInstance] = None
_worker_cfg: Optional[SolverConfig] = None
_worker_ctx: Optional[SearchContext] = None
_worker_deadline: Optional[float] = None


def _init_worker(inst: AtspInstance, cfg: SolverConfig, deadline: Optional[float]) -> None:
    global _worker_inst, _worker_cfg, _worker_ctx, _worker_deadline
    _worker_inst = inst
    _worker_cfg = cfg
    _worker_ctx = SearchContext.for_instance(inst, cfg.max_candidates)
    _worker_deadline = deadline


def _run_in_worker(restart_index: int) -> Tour:
    return search_once(_worker_inst, _worker_cfg, restart_index, _worker_ctx, _worker_deadline)


class SolveManager:
    """Runs restarts serially or on a process pool and keeps the running best."""

    def __init__(self, inst: AtspInstance, cfg: SolverConfig):
        self.inst = inst
        self.cfg = cfg
        self.best: Optional[Tour] = None
        self.runs_to_best = 0
        self.history: List[int] = []
        # wall clock, shared with pool workers
        self.deadline: Optional[float] = None

    def _serial(self) -> Iterator[Tour]:
        ctx = SearchContext.for_instance(self.inst, self.cfg.max_candidates)
        for index in range(self.cfg.restarts):
            yield search_once(self.inst, self.cfg, index, ctx, self.deadline)

    def _should_stop(self) -> bool:
        cfg = self.cfg
        if cfg.target_weight is not None and self.best.weight <= cfg.target_weight:
            logger.info(f"target weight {cfg.target_weight} reached after {len(self.history)} runs")
            return True
        if self.deadline is not None and time.time() >= self.deadline:
            logger.info(f"time limit {cfg.time_limit}s reached after {len(self.history)} runs")
            return True
        return False

    def _record(self, index: int, tour: Tour) -> None:
        self.history.append(tour.weight)
        if self.best is None or tour.weight < self.best.weight:
            self.best = tour
            self.runs_to_best = index + 1
        logger.info(f"run={index + 1} weight={tour.weight} best={self.best.weight}")

    def run(self) -> SolveResult:
        started = time.perf_counter()
        cfg = self.cfg
        if cfg.time_limit is not None:
            self.deadline = time.time() + cfg.time_limit
        if cfg.workers > 1 and cfg.restarts > 1:
            executor = ProcessPoolExecutor(
                max_workers=cfg.workers,
                initializer=_init_worker,
                initargs=(self.inst, cfg, self.deadline),
            )
            try:
                for index, tour in enumerate(executor.map(_run_in_worker, range(cfg.restarts))):
                    self._record(index, tour)
                    if self._should_stop():
                        break
            finally:
                executor.shutdown(wait=True, cancel_futures=True)
        else:
            for index, tour in enumerate(self._serial()):
                self._record(index, tour)
                if self._should_stop():
                    break

        return SolveResult(
            best=self.best,
            weight_history=self.history,
            runs_to_best=self.runs_to_best,
            elapsed=time.perf_counter() - started,
        )


def solve(inst: AtspInstance, cfg: Optional[SolverConfig] = None) -> SolveResult:
    cfg = cfg or SolverConfig()
    logger.debug(
        f"solving {inst.N} vertices: seed={cfg.seed} restarts={cfg.restarts} "
        f"candidates={cfg.max_candidates} depth={cfg.move_depth} kicks={cfg.kicks_for(inst.N)} "
        f"span={cfg.kick_span} workers={cfg.workers}"
    )
    return SolveManager(inst, cfg).run()
