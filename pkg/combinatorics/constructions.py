"""
Recursive palindromic construction.

A superpermutation on n-1 symbols is turned into one on n symbols by
listing its permutations in order of first appearance, replacing each
permutation s by the n cyclic shifts of sn (from sn leftwards to ns) and
finally eliminating the overlap between neighbours.
"""
from math import factorial
from typing import List, Sequence

from loguru import logger

from combinatorics.errors import InputError
from combinatorics.perm_core import Permutation, check_alphabet_size, shift_distance
from combinatorics.superperm_ops import first_appearances

PermSequence = List[Permutation]


def _common_n(seq: Sequence[Permutation]) -> int:
    if not seq:
        raise InputError("permutation sequence is empty")
    n = seq[0].n
    for p in seq:
        if p.n != n:
            raise InputError(f"mixed alphabet sizes in sequence: {n} and {p.n}")
    return n


def expand(seq: Sequence[Permutation]) -> PermSequence:
    """Replace each permutation s of n-1 symbols by the n cyclic shifts of sn."""
    m = _common_n(seq)
    if len(seq) != factorial(m) or len(set(seq)) != len(seq):
        raise InputError(
            f"expected each of the {factorial(m)} permutations of {m} symbols exactly once, "
            f"got {len(seq)} entries ({len(set(seq))} distinct)"
        )
    n = m + 1
    check_alphabet_size(n)
    out: PermSequence = []
    for s in seq:
        sn = s.symbols + (n,)
        for k in range(n):
            out.append(Permutation(symbols=sn[k:] + sn[:k]))
    return out


def compress(seq: Sequence[Permutation]) -> str:
    """Concatenate permutations, appending only the non-overlapping tail of each."""
    n = _common_n(seq)
    parts = [str(seq[0])]
    for s, t in zip(seq, seq[1:]):
        k = shift_distance(s.symbols, t.symbols)
        if k:
            parts.append(str(t)[n - k:])
    return "".join(parts)


def first_appearance_order(sp: str, n: int) -> PermSequence:
    n = check_alphabet_size(n)
    order = first_appearances(sp, n)
    if len(order) != factorial(n):
        raise InputError(f"not a superpermutation: covers {len(order)} of {factorial(n)} permutations")
    return [Permutation.parse(w) for w in order]


def extend(seed: str, n: int) -> str:
    """
    Build a superpermutation on n+1 symbols from any superpermutation on n
    symbols. The result is at most len(seed) + (n+1)! long.
    """
    result = compress(expand(first_appearance_order(seed, n)))
    logger.debug(f"extended {len(seed)}-symbol seed on n={n} to length {len(result)}")
    return result


def palindromic(n: int) -> str:
    """The palindromic superpermutation of length 1! + 2! + ... + n!."""
    n = check_alphabet_size(n)
    sp = "1"
    for m in range(1, n):
        sp = extend(sp, m)
    return sp
