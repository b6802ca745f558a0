"""
Jonker-Volgenant transformation of an ATSP instance into a symmetric TSP
instance on twice the vertices.

Vertex i < N is the original, ghost(i) = i + N. Layout of the symmetric
matrix (A[i][j] = w(i, j) + M off the diagonal, 0 on it):

    [ F    A^T ]
    [ A    F   ]

F holds the forbidden sentinel, so an optimal tour alternates
original/ghost and uses every pairing edge (i, ghost(i)).
"""
import re
from typing import List, Optional, TextIO

import numpy as np
from loguru import logger
from pydantic import BaseModel, ConfigDict

from combinatorics.errors import InputError, ParseError, StructuralError
from config.settings import settings
from instances.builder import AtspInstance
from instances.tsplib import read_document, write_document
from solver.tour import Tour

_JV_COMMENT = re.compile(r"jv-transform M=(\d+) OFFSET=(\d+)")


class SymInstance(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    N: int
    weights: np.ndarray
    big_m: int
    offset: int
    forbidden: int
    name: str = "tsp"

    @property
    def dimension(self) -> int:
        return 2 * self.N

    def ghost(self, i: int) -> int:
        return i + self.N

    def asymmetric_weights(self) -> np.ndarray:
        """Recover the original ATSP weights (diagonal set to 0)."""
        recovered = self.weights[self.N:, : self.N].astype(np.int64) - self.big_m
        np.fill_diagonal(recovered, 0)
        return recovered


def symmetrize(inst: AtspInstance, big_m: Optional[int] = None) -> SymInstance:
    size = inst.N
    if size < 2:
        raise InputError("the transformation needs at least two vertices")
    floor = size * inst.max_weight()
    if big_m is None:
        big_m = size * (inst.n if inst.n is not None else inst.max_weight()) + 1
    if big_m <= floor:
        raise InputError(f"big_m={big_m} too small: must exceed N * max weight = {floor}")

    forbidden = settings.forbidden_multiplier * big_m
    real = inst.weights.astype(np.int64) + big_m
    np.fill_diagonal(real, 0)

    weights = np.full((2 * size, 2 * size), forbidden, dtype=np.int64)
    weights[size:, :size] = real
    weights[:size, size:] = real.T
    np.fill_diagonal(weights, 0)
    weights.setflags(write=False)

    logger.info(f"Symmetrized {size}-vertex instance: dimension {2 * size}, M={big_m}")
    return SymInstance(
        N=size, weights=weights, big_m=big_m, offset=size * big_m,
        forbidden=forbidden, name=f"{inst.name}-sym",
    )


def desymmetrize_tour(t: Tour, sym: SymInstance) -> Tour:
    size, dim = sym.N, sym.dimension
    order: List[int] = list(t.order)
    if sorted(order) != list(range(dim)):
        raise StructuralError(f"tour is not a Hamiltonian circuit on {dim} vertices")

    for a, b in zip(order, order[1:] + order[:1]):
        if (a < size) == (b < size):
            raise StructuralError(f"tour uses forbidden edge ({a}, {b})")

    start = order.index(0)
    order = order[start:] + order[:start]
    if order[1] != sym.ghost(0):
        order = order[:1] + order[1:][::-1]
        if order[1] != sym.ghost(0):
            raise StructuralError("pairing edge of vertex 0 is not used")
    for k in range(0, dim, 2):
        if order[k + 1] != sym.ghost(order[k]):
            raise StructuralError(f"vertex {order[k]} is not followed by its ghost")

    asym = Tour.from_order(sym.asymmetric_weights(), order[0::2])
    if asym.weight != t.weight - sym.offset:
        raise StructuralError(
            f"recovered weight {asym.weight} differs from symmetric weight minus offset {t.weight - sym.offset}"
        )
    return asym


def write_tsplib_tsp(sym: SymInstance, sink: TextIO) -> None:
    headers = [
        ("NAME", sym.name),
        ("TYPE", "TSP"),
        ("COMMENT", f"jv-transform M={sym.big_m} OFFSET={sym.offset}"),
        ("DIMENSION", sym.dimension),
        ("EDGE_WEIGHT_TYPE", "EXPLICIT"),
        ("EDGE_WEIGHT_FORMAT", "FULL_MATRIX"),
    ]
    write_document(sink, headers, matrix=sym.weights)


def parse_tsplib_tsp(source: TextIO) -> SymInstance:
    doc = read_document(source)
    doc.expect("TYPE", "TSP")
    doc.expect("EDGE_WEIGHT_FORMAT", "FULL_MATRIX")
    dim = doc.dimension()
    if dim % 2 or dim < 4:
        raise ParseError(f"DIMENSION {dim} is not twice an ATSP size", doc.header_lines["DIMENSION"])
    match = _JV_COMMENT.search(doc.headers.get("COMMENT", ""))
    if not match:
        raise ParseError("missing 'COMMENT: jv-transform M=<m> OFFSET=<o>' header", doc.last_line)
    if doc.matrix is None:
        raise ParseError("missing EDGE_WEIGHT_SECTION", doc.last_line)
    if not np.array_equal(doc.matrix, doc.matrix.T):
        raise ParseError("weight matrix is not symmetric", doc.last_line)

    big_m, offset = int(match.group(1)), int(match.group(2))
    size = dim // 2
    if offset != size * big_m:
        raise ParseError(f"OFFSET {offset} != N * M = {size * big_m}", doc.header_lines["COMMENT"])
    weights = doc.matrix
    weights.setflags(write=False)
    return SymInstance(
        N=size, weights=weights, big_m=big_m, offset=offset,
        forbidden=int(weights[0, 1]), name=doc.headers.get("NAME", "tsp"),
    )
