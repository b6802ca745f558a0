"""
Superpermutation verification, splitting and conversion between TSP tours
and symbol strings.
"""
from math import factorial
from typing import List, Tuple

from loguru import logger
from pydantic import BaseModel, ConfigDict, field_validator, model_validator

from combinatorics.errors import InputError, StructuralError
from combinatorics.perm_core import (
    DIGITS,
    Permutation,
    check_alphabet_size,
    is_permutation_window,
    rank,
    shift_distance,
    unrank,
)
from instances.builder import AtspInstance
from solver.tour import Tour


class Superpermutation(BaseModel):
    model_config = ConfigDict(frozen=True)

    text: str
    n: int

    @field_validator("text")
    @classmethod
    def _strip(cls, value: str) -> str:
        return value.strip()

    @model_validator(mode="after")
    def _alphabet(self) -> "Superpermutation":
        check_alphabet(self.text, self.n)
        return self

    @property
    def length(self) -> int:
        return len(self.text)

    def report(self) -> "VerifyReport":
        return verify(self.text, self.n)

    def __str__(self) -> str:
        return self.text


class VerifyReport(BaseModel):
    valid: bool
    length: int
    distinct_covered: int
    missing: int
    path_weight: int

    def summary(self) -> str:
        if self.valid:
            return f"valid length={self.length} covered={self.distinct_covered} path_weight={self.path_weight}"
        return f"invalid missing={self.missing}"


def check_alphabet(text: str, n: int) -> None:
    n = check_alphabet_size(n)
    allowed = set(DIGITS[:n])
    for position, char in enumerate(text):
        if char not in allowed:
            raise InputError(f"character {char!r} at position {position} is outside the alphabet 1..{n}")


def split(text: str, n: int) -> List[Tuple[int, Permutation]]:
    """Every length-n window that is a permutation, with its position."""
    return [
        (i, Permutation.parse(text[i:i + n]))
        for i in range(len(text) - n + 1)
        if is_permutation_window(text[i:i + n], n)
    ]


def first_appearances(text: str, n: int) -> List[str]:
    """Distinct permutation windows in order of first occurrence."""
    seen = {}
    for i in range(len(text) - n + 1):
        window = text[i:i + n]
        if window not in seen and is_permutation_window(window, n):
            seen[window] = i
    return list(seen)


def verify(text: str, n: int) -> VerifyReport:
    text = text.strip()
    check_alphabet(text, n)
    covered = len({str(p) for _, p in split(text, n)})
    missing = factorial(n) - covered
    return VerifyReport(
        valid=missing == 0,
        length=len(text),
        distinct_covered=covered,
        missing=missing,
        path_weight=len(text) - n,
    )


def normalize(text: str, n: int) -> Superpermutation:
    """Relabel symbols so that the first permutation window reads 12...n."""
    text = text.strip()
    check_alphabet(text, n)
    for i in range(len(text) - n + 1):
        window = text[i:i + n]
        if is_permutation_window(window, n):
            table = str.maketrans(window, DIGITS[:n])
            return Superpermutation(text=text.translate(table), n=n)
    raise InputError(f"no permutation of 1..{n} occurs in the string")


def _require_n(inst: AtspInstance) -> int:
    if inst.n is None:
        raise InputError("instance does not describe a superpermutation problem (unknown n)")
    return inst.n


def tour_to_superperm(t: Tour, inst: AtspInstance) -> Superpermutation:
    n = _require_n(inst)
    if t.N != inst.N:
        raise StructuralError(f"tour has {t.N} vertices, instance has {inst.N}")
    t = t.rotated(inst.home)
    perms = [unrank(v, n).symbols for v in t.order]
    parts = [str(unrank(inst.home, n))]
    for prev, cur in zip(perms, perms[1:]):
        k = shift_distance(prev, cur)
        if k:
            parts.append("".join(DIGITS[s - 1] for s in cur[n - k:]))
    sp = Superpermutation(text="".join(parts), n=n)
    logger.debug(f"tour of weight {t.weight} -> superpermutation of length {sp.length}")
    return sp


def superperm_to_tour(sp: Superpermutation, inst: AtspInstance) -> Tour:
    n = _require_n(inst)
    if sp.n != n:
        raise InputError(f"superpermutation is over n={sp.n}, instance over n={n}")
    report = sp.report()
    if not report.valid:
        raise InputError(f"not a superpermutation: {report.missing} permutation(s) missing")
    order = first_appearances(sp.text, n)
    home = str(unrank(inst.home, n))
    if order[0] != home:
        raise InputError(f"superpermutation must begin with {home}; relabel it with normalize() first")
    return Tour.from_order(inst.weights, [rank(Permutation.parse(w)) for w in order])
