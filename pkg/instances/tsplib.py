"""
TSPLIB reader/writer for the explicit FULL_MATRIX and TOUR flavours.

Keyword lines are written as ``KEY: VALUE``; the reader also accepts
``KEY : VALUE``. Matrix rows are wrapped at settings.TSPLIB_VALUES_PER_LINE
values and a wrapped line never straddles two matrix rows.
"""
import re
from typing import Dict, Iterable, List, Optional, TextIO, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict

from combinatorics.errors import ParseError
from config.settings import settings

_KEYWORD = re.compile(r"^([A-Z_]+)\s*:\s*(.*)$")
_SECTIONS = {"EDGE_WEIGHT_SECTION", "TOUR_SECTION"}


class TsplibDocument(BaseModel):
    """Raw contents of a TSPLIB file before type-specific interpretation."""

    model_config = ConfigDict(arbitrary_types_allowed=True)

    headers: Dict[str, str]
    header_lines: Dict[str, int]
    matrix: Optional[np.ndarray] = None
    tour: Optional[List[int]] = None
    last_line: int = 0

    def require(self, key: str) -> str:
        if key not in self.headers:
            raise ParseError(f"missing {key} header", self.last_line)
        return self.headers[key]

    def expect(self, key: str, *allowed: str) -> str:
        value = self.require(key)
        if value.upper() not in allowed:
            raise ParseError(f"{key} is {value!r}, expected {' or '.join(allowed)}", self.header_lines[key])
        return value.upper()

    def dimension(self) -> int:
        return _positive(self.require("DIMENSION"), self.header_lines["DIMENSION"])


def write_document(sink: TextIO, headers: Iterable[Tuple[str, object]],
                   matrix: Optional[np.ndarray] = None, tour: Optional[Iterable[int]] = None) -> None:
    width = max(1, settings.TSPLIB_VALUES_PER_LINE)
    for key, value in headers:
        sink.write(f"{key}: {value}\n")
    if matrix is not None:
        sink.write("EDGE_WEIGHT_SECTION\n")
        for row in matrix.tolist():
            for start in range(0, len(row), width):
                sink.write(" ".join(str(v) for v in row[start:start + width]) + "\n")
    if tour is not None:
        sink.write("TOUR_SECTION\n")
        for vertex in tour:
            sink.write(f"{vertex + 1}\n")
        sink.write("-1\n")
    sink.write("EOF\n")


def read_document(source: TextIO) -> TsplibDocument:
    headers: Dict[str, str] = {}
    header_lines: Dict[str, int] = {}
    matrix: Optional[np.ndarray] = None
    tour: Optional[List[int]] = None
    section: Optional[str] = None
    rows: List[List[int]] = []
    current: List[int] = []
    row_line = 0
    size = 0
    saw_eof = False
    line_number = 0

    for line_number, raw in enumerate(source, start=1):
        line = raw.strip()
        if not line:
            continue
        if line == "EOF":
            saw_eof = True
            break

        if section == "EDGE_WEIGHT_SECTION" and len(rows) < size:
            values = _integers(line, line_number)
            if not current:
                row_line = line_number
            remaining = size - len(current)
            if len(values) > remaining:
                if current:
                    raise ParseError(
                        f"matrix row {len(rows) + 1} is short: {len(current)} of {size} value(s)",
                        row_line,
                    )
                raise ParseError(
                    f"matrix row {len(rows) + 1} expects {size} value(s) but the line holds {len(values)}",
                    line_number,
                )
            current.extend(values)
            if len(current) == size:
                rows.append(current)
                current = []
            continue

        if section == "TOUR_SECTION" and tour is not None and (not tour or tour[-1] != -1):
            for value in _integers(line, line_number):
                if tour and tour[-1] == -1:
                    raise ParseError("values after tour terminator -1", line_number)
                tour.append(value)
            continue

        if line in _SECTIONS:
            section = line
            if line == "EDGE_WEIGHT_SECTION":
                if "DIMENSION" not in headers:
                    raise ParseError("EDGE_WEIGHT_SECTION before DIMENSION", line_number)
                size = _positive(headers["DIMENSION"], header_lines["DIMENSION"])
            else:
                tour = []
            continue

        match = _KEYWORD.match(line)
        if not match:
            if section == "EDGE_WEIGHT_SECTION":
                raise ParseError(f"matrix already has {size} rows; unexpected data {line[:30]!r}", line_number)
            raise ParseError(f"unrecognised line {line[:30]!r}", line_number)
        key, value = match.group(1), match.group(2).strip()
        headers[key] = value
        header_lines[key] = line_number

    if not saw_eof:
        raise ParseError("missing EOF line", line_number)
    if section == "EDGE_WEIGHT_SECTION" or size:
        if current:
            raise ParseError(f"matrix row {len(rows) + 1} is short: {len(current)} of {size} value(s)", row_line)
        if len(rows) != size:
            raise ParseError(
                f"DIMENSION is {size} but the matrix has {len(rows)} complete row(s)", line_number
            )
        matrix = np.array(rows, dtype=np.int64).reshape(size, size)
    if tour is not None:
        if not tour or tour[-1] != -1:
            raise ParseError("TOUR_SECTION not terminated by -1", line_number)
        tour = tour[:-1]

    return TsplibDocument(
        headers=headers, header_lines=header_lines, matrix=matrix, tour=tour, last_line=line_number
    )


def _integers(line: str, line_number: int) -> List[int]:
    try:
        return [int(tok) for tok in line.split()]
    except ValueError:
        raise ParseError(f"non-integer value in {line[:30]!r}", line_number) from None


def _positive(raw: str, line_number: int) -> int:
    try:
        value = int(raw)
    except ValueError:
        raise ParseError(f"DIMENSION {raw!r} is not an integer", line_number) from None
    if value < 1:
        raise ParseError(f"DIMENSION must be positive, got {value}", line_number)
    return value
