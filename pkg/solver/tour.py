"""
Tour value object and the TSPLIB TOUR file format.
"""
from typing import List, Sequence, TextIO, Tuple

from pydantic import BaseModel, ConfigDict, model_validator

from combinatorics.errors import ParseError, StructuralError
from instances.tsplib import read_document, write_document


def tour_weight(weights, order: Sequence[int]) -> int:
    """Circuit weight including the closing edge; a single vertex costs 0."""
    if len(order) < 2:
        return 0
    total = 0
    prev = order[-1]
    for v in order:
        assert prev != v, "self-loop in tour"
        total += int(weights[prev][v])
        prev = v
    return total


class Tour(BaseModel):
    """Hamiltonian circuit given as a vertex order plus its weight."""

    model_config = ConfigDict(frozen=True)

    order: Tuple[int, ...]
    weight: int

    @model_validator(mode="after")
    def _hamiltonian(self) -> "Tour":
        if sorted(self.order) != list(range(len(self.order))):
            raise ValueError("tour must visit each vertex 0..N-1 exactly once")
        return self

    @property
    def N(self) -> int:
        return len(self.order)

    @classmethod
    def from_order(cls, weights, order: Sequence[int]) -> "Tour":
        order = tuple(int(v) for v in order)
        size = len(weights)
        if sorted(order) != list(range(size)):
            raise StructuralError(f"order is not a Hamiltonian circuit on {size} vertices")
        return cls(order=order, weight=tour_weight(weights, order))

    def check(self, weights) -> "Tour":
        """Raise unless the stored weight matches the recomputed one."""
        if len(self.order) != len(weights):
            raise StructuralError(f"tour has {len(self.order)} vertices, instance has {len(weights)}")
        actual = tour_weight(weights, self.order)
        if actual != self.weight:
            raise StructuralError(f"stored weight {self.weight} != recomputed {actual}")
        return self

    def rotated(self, start: int) -> "Tour":
        if start not in self.order:
            raise StructuralError(f"vertex {start} is not on the tour")
        i = self.order.index(start)
        return Tour(order=self.order[i:] + self.order[:i], weight=self.weight)


def write_tsplib_tour(t: Tour, sink: TextIO, name: str = "tour", comment: str = "") -> None:
    headers = [("NAME", name)]
    if comment:
        headers.append(("COMMENT", comment))
    headers += [("TYPE", "TOUR"), ("DIMENSION", t.N)]
    write_document(sink, headers, tour=t.order)


def parse_tsplib_tour(source: TextIO) -> List[int]:
    """Return the 0-based vertex order stored in a TOUR file."""
    doc = read_document(source)
    doc.expect("TYPE", "TOUR")
    size = doc.dimension()
    if doc.tour is None:
        raise ParseError("missing TOUR_SECTION", doc.last_line)
    if len(doc.tour) != size:
        raise ParseError(f"DIMENSION is {size} but TOUR_SECTION lists {len(doc.tour)} vertices", doc.last_line)
    order = [v - 1 for v in doc.tour]
    bad = [v + 1 for v in order if not 0 <= v < size]
    if bad:
        raise ParseError(f"vertex index {bad[0]} outside 1..{size}", doc.last_line)
    if len(set(order)) != size:
        raise ParseError("TOUR_SECTION repeats a vertex", doc.last_line)
    return order
