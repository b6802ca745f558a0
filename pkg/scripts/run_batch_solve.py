import sys
import os
sys.path.append(os.getcwd())
import argparse
import time

from loguru import logger

from instances.builder import build_atsp
from solver.manager import solve
from solver.models import SolverConfig

# Configure logger to file and stdout
logger.remove()
logger.add("batch_solve_logs.txt", format="{time:HH:mm:ss} | {level: <8} | {name}:{function}:{line} - {message}", rotation="10 MB")
logger.add(sys.stdout, format="<green>{time:HH:mm:ss}</green> | <level>{level: <8}</level> | {message}", level="SUCCESS")


def run_batch(n: int, seeds: int, restarts: int, target_length: int, time_limit: float, workers: int):
    logger.success(f"Solving n={n} for {seeds} seeds (restarts={restarts}, target length {target_length})...")
    inst = build_atsp(n)

    rows = []
    for seed in range(1, seeds + 1):
        cfg = SolverConfig(
            seed=seed,
            restarts=restarts,
            target_weight=target_length - n,
            time_limit=time_limit,
            workers=workers,
        )
        start = time.time()
        result = solve(inst, cfg)
        length = n + result.best.weight
        hit = length <= target_length
        rows.append((seed, length, result.runs_to_best, time.time() - start, hit))
        logger.success(f"seed={seed} {result.summary(n)} elapsed={time.time() - start:.1f}s {'HIT' if hit else 'miss'}")

    logger.success("-" * 50)
    logger.success(f"{'seed':>4} {'length':>7} {'runs':>6} {'secs':>7}  target")
    for seed, length, runs, secs, hit in rows:
        logger.success(f"{seed:>4} {length:>7} {runs:>6} {secs:>7.1f}  {'yes' if hit else 'no'}")
    hits = sum(1 for row in rows if row[-1])
    logger.success(f"Reached length <= {target_length} on {hits}/{len(rows)} seeds")
    return hits


if __name__ == "__main__":
    parser = argparse.ArgumentParser(description="Multi-seed heuristic runs on the superpermutation ATSP")
    parser.add_argument("--n", type=int, default=5)
    parser.add_argument("--seeds", type=int, default=10)
    parser.add_argument("--restarts", type=int, default=1000)
    parser.add_argument("--target-length", type=int, default=153)
    parser.add_argument("--time-limit", type=float, default=120.0)
    parser.add_argument("--workers", type=int, default=1)
    args = parser.parse_args()
    run_batch(args.n, args.seeds, args.restarts, args.target_length, args.time_limit, args.workers)
