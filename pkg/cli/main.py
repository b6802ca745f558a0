"""
Command-line front end.

    python -m cli gen-atsp --n 5 --out 5.atsp
    python -m cli solve --in 5.atsp --restarts 1000 --out 5.tour
    python -m cli tour-to-superperm --tour 5.tour --n 5 | python -m cli verify --n 5

Exit codes: 0 success, 1 checked and false (invalid superpermutation),
2 usage, parse or input errors.
"""
import argparse
import sys
from contextlib import contextmanager
from math import factorial
from typing import Any, Dict, Iterator, List, Optional, TextIO

from loguru import logger
from pydantic import BaseModel, ValidationError

from combinatorics.constructions import extend, palindromic
from combinatorics.errors import InputError, SuperpermError
from combinatorics.perm_core import check_alphabet_size
from combinatorics.superperm_ops import (
    Superpermutation,
    normalize,
    split,
    superperm_to_tour,
    tour_to_superperm,
    verify,
)
from config.settings import settings
from instances.builder import AtspInstance, build_atsp, parse_tsplib_atsp, write_tsplib_atsp
from instances.symmetrize import symmetrize, write_tsplib_tsp
from solver.exact import branch_and_bound, held_karp
from solver.manager import solve
from solver.models import SolverConfig, SolveResult
from solver.tour import Tour, parse_tsplib_tour, write_tsplib_tour

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_USAGE = 2


class CommandInvocation(BaseModel):
    subcommand: str
    flags: Dict[str, Any]
    exit_code: int = EXIT_OK


@contextmanager
def _open_in(path: Optional[str]) -> Iterator[TextIO]:
    name = "standard input" if path is None or path == "-" else path
    try:
        if name == "standard input":
            yield sys.stdin
            return
        with open(path, "r", encoding="ascii") as handle:
            yield handle
    except UnicodeDecodeError as exc:
        raise InputError(f"{name}: byte {exc.start} is not ASCII; symbols must be the digits 1..n") from None


@contextmanager
def _open_out(path: Optional[str]) -> Iterator[TextIO]:
    if path is None or path == "-":
        yield sys.stdout
        return
    with open(path, "w", encoding="ascii", newline="\n") as handle:
        yield handle


def _read_text(path: Optional[str]) -> str:
    with _open_in(path) as source:
        return source.read().strip()


def _load_instance(args: argparse.Namespace) -> AtspInstance:
    if args.n is not None:
        return build_atsp(args.n)
    with _open_in(args.input) as source:
        return parse_tsplib_atsp(source)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_gen_atsp(args: argparse.Namespace) -> int:
    inst = build_atsp(args.n)
    with _open_out(args.out) as sink:
        write_tsplib_atsp(inst, sink)
    return EXIT_OK


def cmd_symmetrise(args: argparse.Namespace) -> int:
    with _open_in(args.input) as source:
        inst = parse_tsplib_atsp(source)
    sym = symmetrize(inst, args.big_m)
    with _open_out(args.out) as sink:
        write_tsplib_tsp(sym, sink)
    return EXIT_OK


def cmd_palindromic(args: argparse.Namespace) -> int:
    print(palindromic(args.n))
    return EXIT_OK


def cmd_extend(args: argparse.Namespace) -> int:
    print(extend(_read_text(args.file), args.n))
    return EXIT_OK


def cmd_tour_to_superperm(args: argparse.Namespace) -> int:
    n = check_alphabet_size(args.n)
    with _open_in(args.tour) as source:
        order = parse_tsplib_tour(source)
    if len(order) != factorial(n):
        raise InputError(f"tour has {len(order)} vertices but n={n} needs {factorial(n)}")
    inst = build_atsp(n)
    print(tour_to_superperm(Tour.from_order(inst.weights, order), inst))
    return EXIT_OK


def cmd_superperm_to_tour(args: argparse.Namespace) -> int:
    text = _read_text(args.file)
    sp = normalize(text, args.n) if args.normalize else Superpermutation(text=text, n=args.n)
    inst = build_atsp(args.n)
    t = superperm_to_tour(sp, inst)
    with _open_out(args.out) as sink:
        write_tsplib_tour(
            t, sink, name=f"superperm-{args.n}-{t.weight}.tour",
            comment=f"first-appearance order of the {sp.length}-character superpermutation",
        )
    return EXIT_OK


def cmd_verify(args: argparse.Namespace) -> int:
    report = verify(_read_text(args.file), args.n)
    print(report.summary())
    return EXIT_OK if report.valid else EXIT_INVALID


def cmd_split(args: argparse.Namespace) -> int:
    for position, perm in split(_read_text(args.file), args.n):
        print(f"{position} {perm}")
    return EXIT_OK


def _solve_exact(inst: AtspInstance, time_limit: Optional[float]):
    if inst.N <= settings.HELD_KARP_MAX_VERTICES:
        return held_karp(inst), True
    result = branch_and_bound(inst, time_limit)
    return result.tour, result.optimal


def cmd_solve(args: argparse.Namespace) -> int:
    inst = _load_instance(args)
    target_weight = None
    if args.target_length is not None:
        if inst.n is None:
            raise InputError("--target-length needs an instance with known n (use --n or a generated file)")
        target_weight = args.target_length - inst.n

    if args.exact:
        tour, optimal = _solve_exact(inst, args.time_limit)
        result = SolveResult(best=tour, weight_history=[tour.weight], runs_to_best=1, elapsed=0.0)
        summary = f"{result.summary(inst.n)} optimal={str(optimal).lower()}"
    else:
        overrides = {
            "seed": args.seed, "restarts": args.restarts, "kicks": args.kicks, "kick_span": args.kick_span,
            "max_candidates": args.max_candidates, "workers": args.workers,
            "time_limit": args.time_limit, "target_weight": target_weight,
        }
        cfg = SolverConfig(**{k: v for k, v in overrides.items() if v is not None})
        result = solve(inst, cfg)
        summary = result.summary(inst.n)

    if args.out:
        with _open_out(args.out) as sink:
            write_tsplib_tour(result.best, sink, name=f"{inst.name}.tour", comment=f"weight={result.best.weight}")
    print(summary)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="superperm",
        description="Minimal superpermutations as an asymmetric TSP.",
    )
    sub = parser.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("gen-atsp", help="write the ATSP instance for n symbols")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    p.set_defaults(handler=cmd_gen_atsp)

    p = sub.add_parser("symmetrise", help="apply the Jonker-Volgenant transform to an ATSP file")
    p.add_argument("--in", dest="input")
    p.add_argument("--out")
    p.add_argument("--big-m", type=int, default=None)
    p.set_defaults(handler=cmd_symmetrise)

    p = sub.add_parser("palindromic", help="print the palindromic superpermutation")
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=cmd_palindromic)

    p = sub.add_parser("extend", help="build an (n+1)-symbol superpermutation from an n-symbol one")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("file", nargs="?")
    p.set_defaults(handler=cmd_extend)

    p = sub.add_parser("tour-to-superperm", help="print the superpermutation of a TOUR file")
    p.add_argument("--tour", required=True)
    p.add_argument("--n", type=int, required=True)
    p.set_defaults(handler=cmd_tour_to_superperm)

    p = sub.add_parser("superperm-to-tour", help="write the TOUR file of a superpermutation")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--normalize", action="store_true", help="relabel so the string starts with 12...n")
    p.add_argument("file", nargs="?")
    p.set_defaults(handler=cmd_superperm_to_tour)

    p = sub.add_parser("verify", help="check that a string contains every permutation")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("file", nargs="?")
    p.set_defaults(handler=cmd_verify)

    p = sub.add_parser("split", help="list the permutation windows of a string")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("file", nargs="?")
    p.set_defaults(handler=cmd_split)

    p = sub.add_parser("solve", help="search for a short circuit")
    source = p.add_mutually_exclusive_group(required=True)
    source.add_argument("--in", dest="input")
    source.add_argument("--n", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--restarts", type=int)
    p.add_argument("--target-length", type=int)
    p.add_argument("--time-limit", type=float)
    p.add_argument("--workers", type=int)
    p.add_argument("--kicks", type=int)
    p.add_argument("--kick-span", type=int)
    p.add_argument("--max-candidates", type=int)
    p.add_argument("--exact", action="store_true")
    p.add_argument("--out")
    p.set_defaults(handler=cmd_solve)

    return parser


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)

    flags = {k: v for k, v in vars(args).items() if k not in ("handler", "subcommand")}
    invocation = CommandInvocation(subcommand=args.subcommand, flags=flags)

    logger.remove()
    sink_id = logger.add(sys.stderr, format=settings.LOG_FORMAT, level=settings.LOG_LEVEL)
    try:
        invocation.exit_code = args.handler(args)
    except (SuperpermError, ValidationError, OSError) as exc:
        logger.error(f"error: {exc}")
        invocation.exit_code = EXIT_USAGE
    finally:
        logger.debug(f"{invocation.subcommand} exited with {invocation.exit_code}")
        logger.remove(sink_id)
    return invocation.exit_code


if __name__ == "__main__":
    sys.exit(main())
