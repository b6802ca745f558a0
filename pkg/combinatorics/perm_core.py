"""
Permutation primitives: representation, lexicographic ranking and the
overlap weight that defines every edge of the superpermutation graph.
"""
from functools import lru_cache
from itertools import permutations
from math import factorial
from typing import List, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, field_validator

from combinatorics.errors import InputError
from config.settings import settings

DIGITS = "123456789"


def check_alphabet_size(n: int, minimum: int = 1) -> int:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise InputError(f"alphabet size must be an integer, got {n!r}")
    if not minimum <= n <= settings.MAX_SYMBOLS:
        raise InputError(f"alphabet size {n} outside supported range {minimum}..{settings.MAX_SYMBOLS}")
    return int(n)


class Permutation(BaseModel):
    """An arrangement of the symbols 1..n, rendered as a digit string."""

    model_config = ConfigDict(frozen=True)

    symbols: Tuple[int, ...]

    @field_validator("symbols")
    @classmethod
    def _distinct_symbols(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        if not value:
            raise ValueError("a permutation needs at least one symbol")
        if sorted(value) != list(range(1, len(value) + 1)):
            raise ValueError(f"{value} is not a permutation of 1..{len(value)}")
        return value

    @property
    def n(self) -> int:
        return len(self.symbols)

    @classmethod
    def parse(cls, text: str) -> "Permutation":
        """Build from a digit string such as ``"1423"``."""
        if not is_permutation_window(text, len(text)):
            raise InputError(f"{text!r} is not a permutation string")
        return cls(symbols=tuple(int(c) for c in text))

    @classmethod
    def identity(cls, n: int) -> "Permutation":
        return cls(symbols=tuple(range(1, check_alphabet_size(n) + 1)))

    def __str__(self) -> str:
        return "".join(DIGITS[s - 1] for s in self.symbols)


def rank(p: Permutation) -> int:
    """0-based position of ``p`` among the n! permutations in lexicographic order."""
    remaining = list(range(1, p.n + 1))
    index = 0
    for position, symbol in enumerate(p.symbols):
        smaller = remaining.index(symbol)
        index += smaller * factorial(p.n - position - 1)
        remaining.pop(smaller)
    return index


def unrank(i: int, n: int) -> Permutation:
    """Inverse of :func:`rank` (Lehmer code decoding)."""
    n = check_alphabet_size(n)
    total = factorial(n)
    if not 0 <= i < total:
        raise InputError(f"index {i} out of range 0..{total - 1} for n={n}")
    remaining = list(range(1, n + 1))
    symbols = []
    for position in range(n):
        block = factorial(n - position - 1)
        digit, i = divmod(i, block)
        symbols.append(remaining.pop(digit))
    return Permutation(symbols=tuple(symbols))


def overlap_weight(s: Permutation, t: Permutation) -> int:
    """
    Least k in [0, n] such that the (n-k)-suffix of s equals the (n-k)-prefix
    of t: the number of symbols appended when t follows s.
    """
    if s.n != t.n:
        raise InputError(f"permutations over different alphabets: n={s.n} and n={t.n}")
    return shift_distance(s.symbols, t.symbols)


def shift_distance(a, b) -> int:
    """overlap_weight on raw symbol sequences."""
    n = len(a)
    for k in range(n + 1):
        if a[k:] == b[: n - k]:
            return k
    return n


def is_permutation_window(w: str, n: int) -> bool:
    return len(w) == n and sorted(w) == list(DIGITS[:n])


@lru_cache(maxsize=None)
def permutation_table(n: int) -> np.ndarray:
    """All n! permutations as rows of an (n!, n) array, in rank order."""
    n = check_alphabet_size(n)
    table = np.array(list(permutations(range(1, n + 1))), dtype=np.int8).reshape(factorial(n), n)
    table.setflags(write=False)
    return table


def all_permutations(n: int) -> List[Permutation]:
    return [Permutation(symbols=tuple(int(v) for v in row)) for row in permutation_table(n)]
