"""
The superpermutation ATSP instance: one vertex per permutation, overlap
weights on every edge and zero-weight edges into the identity permutation.
"""
import re
from math import factorial
from typing import Optional, TextIO

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict, model_validator

from combinatorics.errors import InputError, ParseError
from combinatorics.perm_core import check_alphabet_size, permutation_table
from config.settings import settings
from instances.tsplib import read_document, write_document

_N_COMMENT = re.compile(r"superpermutation n=(\d+)")
_BLOCK_ROWS = 1024


class AtspInstance(BaseModel):
    """Dense directed instance; ``weights[i][j]`` is the cost of edge i -> j."""

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    weights: np.ndarray
    n: Optional[int] = None
    home: int = 0
    diagonal_sentinel: int = 9999
    name: str = "atsp"

    @model_validator(mode="after")
    def _check_shape(self) -> "AtspInstance":
        w = self.weights
        if w.ndim != 2 or w.shape[0] != w.shape[1] or w.shape[0] < 1:
            raise ValueError(f"weights must be a non-empty square matrix, got shape {w.shape}")
        if not 0 <= self.home < w.shape[0]:
            raise ValueError(f"home vertex {self.home} outside 0..{w.shape[0] - 1}")
        if self.n is not None and factorial(self.n) != w.shape[0]:
            raise ValueError(f"n={self.n} implies {factorial(self.n)} vertices, matrix has {w.shape[0]}")
        w.setflags(write=False)
        return self

    @property
    def N(self) -> int:
        return self.weights.shape[0]

    def max_weight(self) -> int:
        """Largest off-diagonal weight (0 for a single vertex)."""
        if self.N == 1:
            return 0
        off = ~np.eye(self.N, dtype=bool)
        return int(self.weights[off].max())

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, AtspInstance):
            return NotImplemented
        return (
            self.n == other.n
            and self.home == other.home
            and self.diagonal_sentinel == other.diagonal_sentinel
            and np.array_equal(self.weights, other.weights)
        )

    __hash__ = None


def _encode(block: np.ndarray, base: int) -> np.ndarray:
    codes = np.zeros(block.shape[0], dtype=np.int64)
    for column in range(block.shape[1]):
        codes = codes * base + block[:, column]
    return codes


def build_atsp(n: int) -> AtspInstance:
    n = check_alphabet_size(n)
    table = permutation_table(n).astype(np.int64)
    size = table.shape[0]
    base = n + 1
    weights = np.full((size, size), n, dtype=np.int16)

    # Overwrite from the longest shift down so the least k wins.
    for k in range(n - 1, 0, -1):
        suffix = _encode(table[:, k:], base)
        prefix = _encode(table[:, : n - k], base)
        for start in range(0, size, _BLOCK_ROWS):
            stop = min(size, start + _BLOCK_ROWS)
            hit = suffix[start:stop, None] == prefix[None, :]
            weights[start:stop][hit] = k

    home = 0
    weights[:, home] = 0
    np.fill_diagonal(weights, settings.DIAGONAL_SENTINEL)
    logger.info(f"Built ATSP instance for n={n}: {size} vertices")
    return AtspInstance(
        weights=weights, n=n, home=home,
        diagonal_sentinel=settings.DIAGONAL_SENTINEL, name=f"superperm-{n}",
    )


def length_from_circuit_weight(n: int, w: int) -> int:
    if w < 0:
        raise InputError(f"circuit weight must be non-negative, got {w}")
    return n + w


def random_atsp(size: int, rng: np.random.Generator, low: int = 1, high: int = 9) -> AtspInstance:
    """Uniform integer weights in [low, high]; used for cross-validation."""
    if size < 1:
        raise InputError(f"instance size must be positive, got {size}")
    weights = rng.integers(low, high + 1, size=(size, size)).astype(np.int64)
    np.fill_diagonal(weights, settings.DIAGONAL_SENTINEL)
    return AtspInstance(weights=weights, diagonal_sentinel=settings.DIAGONAL_SENTINEL, name=f"random-{size}")


def infer_alphabet_size(weights: np.ndarray) -> Optional[int]:
    """n for a matrix whose off-diagonal entries equal build_atsp(n), else None."""
    size = weights.shape[0]
    n = next((k for k in range(1, settings.MAX_SYMBOLS + 1) if factorial(k) == size), None)
    if n is None:
        return None
    off = ~np.eye(size, dtype=bool)
    if not np.array_equal(weights[off], build_atsp(n).weights[off]):
        return None
    logger.debug(f"Matrix without a superpermutation comment matches n={n}")
    return n


def write_tsplib_atsp(inst: AtspInstance, sink: TextIO) -> None:
    headers = [("NAME", inst.name), ("TYPE", "ATSP")]
    if inst.n is not None:
        headers.append(("COMMENT", f"superpermutation n={inst.n}"))
    headers += [
        ("DIMENSION", inst.N),
        ("EDGE_WEIGHT_TYPE", "EXPLICIT"),
        ("EDGE_WEIGHT_FORMAT", "FULL_MATRIX"),
    ]
    write_document(sink, headers, matrix=inst.weights)


def parse_tsplib_atsp(source: TextIO) -> AtspInstance:
    doc = read_document(source)
    doc.expect("TYPE", "ATSP")
    doc.expect("EDGE_WEIGHT_TYPE", "EXPLICIT")
    doc.expect("EDGE_WEIGHT_FORMAT", "FULL_MATRIX")
    size = doc.dimension()
    if doc.matrix is None:
        raise ParseError("missing EDGE_WEIGHT_SECTION", doc.last_line)

    n = None
    match = _N_COMMENT.search(doc.headers.get("COMMENT", ""))
    if match:
        n = int(match.group(1))
        if factorial(n) != size:
            raise ParseError(f"COMMENT says n={n} but DIMENSION is {size}", doc.header_lines["COMMENT"])
    else:
        n = infer_alphabet_size(doc.matrix)

    weights = doc.matrix
    if n is not None:
        weights = weights.astype(np.int16)
    logger.debug(f"Parsed ATSP instance {doc.headers.get('NAME', '?')} with {size} vertices")
    return AtspInstance(
        weights=weights, n=n, home=0,
        diagonal_sentinel=int(weights[0, 0]), name=doc.headers.get("NAME", "atsp"),
    )
