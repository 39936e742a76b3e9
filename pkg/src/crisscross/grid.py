"""Binary arrays with 1-based row/column addressing.

A grid stores each row as a Python int whose most significant bit is column 1,
so ``format_grid`` prints exactly ``bin(row)`` padded to the row width.  Rows as
ints make whole-row operations (parity, equality, xor) single machine ops,
which matters for the exhaustive enumerations in :mod:`crisscross.verify`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InputError, ParseError

__all__ = [
    "BitGrid",
    "DeletionSpec",
    "delete_rows_cols",
    "delete_cross",
    "insert_rows_cols",
    "parse_grid",
    "format_grid",
]


@dataclass(frozen=True, slots=True)
class BitGrid:
    """An immutable ``n_rows x n_cols`` binary array.

    ``rows[i-1]`` holds row ``i``; bit ``n_cols - j`` of it is entry ``(i, j)``.
    """

    n_rows: int
    n_cols: int
    rows: tuple[int, ...]

    def __post_init__(self):
        if self.n_rows < 1 or self.n_cols < 1:
            raise InputError(f"grid dimensions must be positive, got {self.n_rows}x{self.n_cols}")
        if len(self.rows) != self.n_rows:
            raise InputError(f"expected {self.n_rows} rows, got {len(self.rows)}")
        limit = 1 << self.n_cols
        for r in self.rows:
            if not 0 <= r < limit:
                raise InputError(f"row value {r} does not fit in {self.n_cols} bits")

    # -- construction -----------------------------------------------------

    @classmethod
    def _raw(cls, n_rows: int, n_cols: int, rows: tuple[int, ...]) -> BitGrid:
        # hot-path constructor; callers guarantee the invariants
        obj = object.__new__(cls)
        object.__setattr__(obj, "n_rows", n_rows)
        object.__setattr__(obj, "n_cols", n_cols)
        object.__setattr__(obj, "rows", rows)
        return obj

    @classmethod
    def from_lists(cls, values: Sequence[Sequence[int]]) -> BitGrid:
        if not values or not values[0]:
            raise InputError("grid must have at least one row and one column")
        n_cols = len(values[0])
        rows = []
        for i, row in enumerate(values, start=1):
            if len(row) != n_cols:
                raise InputError(f"row {i} has length {len(row)}, expected {n_cols}")
            v = 0
            for b in row:
                if b not in (0, 1):
                    raise InputError(f"entry {b!r} in row {i} is not 0 or 1")
                v = (v << 1) | int(b)
            rows.append(v)
        return cls(len(rows), n_cols, tuple(rows))

    @classmethod
    def from_numpy(cls, array) -> BitGrid:
        a = np.asarray(array)
        if a.ndim != 2:
            raise InputError("expected a 2-d array")
        return cls.from_lists(a.astype(int).tolist())

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> BitGrid:
        return cls(n_rows, n_cols, (0,) * n_rows)

    @classmethod
    def from_int(cls, value: int, n_rows: int, n_cols: int) -> BitGrid:
        """Grid whose row-major bit string (row 1 first) is the binary of ``value``."""
        mask = (1 << n_cols) - 1
        rows = tuple((value >> (n_cols * (n_rows - 1 - i))) & mask for i in range(n_rows))
        return cls(n_rows, n_cols, rows)

    # -- access -----------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    def __getitem__(self, index: tuple[int, int]) -> int:
        i, j = index
        if not (1 <= i <= self.n_rows and 1 <= j <= self.n_cols):
            raise IndexError(f"({i}, {j}) outside {self.n_rows}x{self.n_cols} grid")
        return (self.rows[i - 1] >> (self.n_cols - j)) & 1

    def row(self, i: int) -> tuple[int, ...]:
        r = self.rows[i - 1]
        return tuple((r >> (self.n_cols - j)) & 1 for j in range(1, self.n_cols + 1))

    def col(self, j: int) -> tuple[int, ...]:
        shift = self.n_cols - j
        return tuple((r >> shift) & 1 for r in self.rows)

    def to_lists(self) -> list[list[int]]:
        return [list(self.row(i)) for i in range(1, self.n_rows + 1)]

    def to_numpy(self) -> np.ndarray:
        return np.array(self.to_lists(), dtype=np.uint8)

    def to_int(self) -> int:
        v = 0
        for r in self.rows:
            v = (v << self.n_cols) | r
        return v

    def subgrid(self, i1: int, i2: int, j1: int, j2: int) -> BitGrid:
        """Rows ``i1..i2`` and columns ``j1..j2``, inclusive."""
        if not (1 <= i1 <= i2 <= self.n_rows and 1 <= j1 <= j2 <= self.n_cols):
            raise InputError(f"invalid subgrid [{i1}:{i2}]x[{j1}:{j2}]")
        width = j2 - j1 + 1
        mask = (1 << width) - 1
        shift = self.n_cols - j2
        rows = tuple((r >> shift) & mask for r in self.rows[i1 - 1 : i2])
        return BitGrid._raw(i2 - i1 + 1, width, rows)

    def transpose(self) -> BitGrid:
        rows = []
        for j in range(1, self.n_cols + 1):
            shift = self.n_cols - j
            v = 0
            for r in self.rows:
                v = (v << 1) | ((r >> shift) & 1)
            rows.append(v)
        return BitGrid._raw(self.n_cols, self.n_rows, tuple(rows))

    def __xor__(self, other: BitGrid) -> BitGrid:
        if self.shape != other.shape:
            raise InputError(f"shape mismatch {self.shape} vs {other.shape}")
        return BitGrid._raw(self.n_rows, self.n_cols, tuple(a ^ b for a, b in zip(self.rows, other.rows)))

    def flip(self, i: int, j: int) -> BitGrid:
        """Copy with entry ``(i, j)`` inverted."""
        self[i, j]
        rows = list(self.rows)
        rows[i - 1] ^= 1 << (self.n_cols - j)
        return BitGrid._raw(self.n_rows, self.n_cols, tuple(rows))

    def __str__(self) -> str:
        return "\n".join(format(r, f"0{self.n_cols}b") for r in self.rows)


@dataclass(frozen=True)
class DeletionSpec:
    """Rows and columns to remove; both are unordered sets of 1-based indices."""

    row_indices: frozenset[int] = frozenset()
    col_indices: frozenset[int] = frozenset()

    def __init__(self, row_indices: Iterable[int] = (), col_indices: Iterable[int] = ()):
        rows = list(row_indices)
        cols = list(col_indices)
        if len(set(rows)) != len(rows) or len(set(cols)) != len(cols):
            raise InputError("duplicate deletion index")
        object.__setattr__(self, "row_indices", frozenset(rows))
        object.__setattr__(self, "col_indices", frozenset(cols))

    @property
    def t_r(self) -> int:
        return len(self.row_indices)

    @property
    def t_c(self) -> int:
        return len(self.col_indices)

    def check(self, grid: BitGrid) -> None:
        for i in self.row_indices:
            if not 1 <= i <= grid.n_rows:
                raise InputError(f"row index {i} outside [1, {grid.n_rows}]")
        for j in self.col_indices:
            if not 1 <= j <= grid.n_cols:
                raise InputError(f"column index {j} outside [1, {grid.n_cols}]")
        if self.t_r >= grid.n_rows or self.t_c >= grid.n_cols:
            raise InputError("deletion would leave an empty grid")


def _drop_bit(row: int, width: int, j: int) -> int:
    # remove column j (1-based) from a width-bit row
    low_bits = width - j
    return ((row >> (low_bits + 1)) << low_bits) | (row & ((1 << low_bits) - 1))


def _put_bit(row: int, width: int, j: int, bit: int) -> int:
    # insert `bit` so it becomes column j of a (width+1)-bit row
    low_bits = width + 1 - j
    return ((row >> low_bits) << (low_bits + 1)) | (bit << low_bits) | (row & ((1 << low_bits) - 1))


def _delete_unchecked(grid: BitGrid, rows: Iterable[int], cols: Iterable[int]) -> BitGrid:
    drop = set(rows)
    kept = [r for i, r in enumerate(grid.rows, start=1) if i not in drop]
    width = grid.n_cols
    for j in sorted(cols, reverse=True):
        kept = [_drop_bit(r, width, j) for r in kept]
        width -= 1
    return BitGrid._raw(len(kept), width, tuple(kept))


def delete_rows_cols(grid: BitGrid, spec: DeletionSpec) -> BitGrid:
    """Remove the rows and columns named in ``spec``; survivors keep their order."""
    spec.check(grid)
    return _delete_unchecked(grid, spec.row_indices, spec.col_indices)


def delete_cross(grid: BitGrid, i: int, j: int) -> BitGrid:
    """``X^{i,j}``: remove row ``i`` and column ``j``."""
    return delete_rows_cols(grid, DeletionSpec((i,), (j,)))


def _bits_to_int(bits: Sequence[int]) -> int:
    v = 0
    for b in bits:
        if b not in (0, 1):
            raise InputError(f"content entry {b!r} is not 0 or 1")
        v = (v << 1) | int(b)
    return v


def insert_rows_cols(
    grid: BitGrid,
    rows: Iterable[tuple[int, Sequence[int]]] = (),
    cols: Iterable[tuple[int, Sequence[int]]] = (),
) -> BitGrid:
    """Insert rows, then columns.

    Positions are indices in the *result*, so ``delete_rows_cols`` with the same
    positions undoes the insertion.  Row contents have the original width
    ``grid.n_cols``; column contents have the final height.
    """
    rows = sorted(rows)
    cols = sorted(cols)
    row_pos = [p for p, _ in rows]
    col_pos = [p for p, _ in cols]
    if len(set(row_pos)) != len(row_pos) or len(set(col_pos)) != len(col_pos):
        raise InputError("duplicate insertion position")
    final_rows = grid.n_rows + len(rows)
    final_cols = grid.n_cols + len(cols)
    for p in row_pos:
        if not 1 <= p <= final_rows:
            raise InputError(f"row position {p} outside [1, {final_rows}]")
    for p in col_pos:
        if not 1 <= p <= final_cols:
            raise InputError(f"column position {p} outside [1, {final_cols}]")

    body = list(grid.rows)
    for p, content in rows:
        if len(content) != grid.n_cols:
            raise InputError(f"row content has length {len(content)}, expected {grid.n_cols}")
        body.insert(p - 1, _bits_to_int(content))
    width = grid.n_cols
    for p, content in cols:
        if len(content) != final_rows:
            raise InputError(f"column content has length {len(content)}, expected {final_rows}")
        for b in content:
            if b not in (0, 1):
                raise InputError(f"content entry {b!r} is not 0 or 1")
        body = [_put_bit(r, width, p, int(b)) for r, b in zip(body, content)]
        width += 1
    return BitGrid._raw(final_rows, width, tuple(body))


def format_grid(grid: BitGrid) -> str:
    lines = [f"{grid.n_rows} {grid.n_cols}"]
    lines.extend(format(r, f"0{grid.n_cols}b") for r in grid.rows)
    return "\n".join(lines) + "\n"


def parse_grid(text: str) -> BitGrid:
    """Parse the ``"<rows> <cols>\\n"`` + one ``[01]*`` line per row format."""
    if not text.endswith("\n"):
        raise ParseError("missing trailing newline", line=text.count("\n") + 1)
    lines = text[:-1].split("\n")
    header = lines[0].split(" ")
    if len(header) != 2 or not all(h.isdigit() for h in header):
        raise ParseError("header must be '<n_rows> <n_cols>'", line=1)
    n_rows, n_cols = int(header[0]), int(header[1])
    if n_rows < 1 or n_cols < 1:
        raise ParseError("dimensions must be positive", line=1)
    body = lines[1:]
    for k, line in enumerate(body[:n_rows], start=2):
        if len(line) != n_cols:
            raise ParseError(f"expected {n_cols} characters, got {len(line)}", line=k)
        bad = set(line) - {"0", "1"}
        if bad:
            raise ParseError(f"invalid character {sorted(bad)[0]!r}", line=k)
    if len(body) != n_rows:
        raise ParseError(f"expected {n_rows} rows, got {len(body)}", line=min(len(body), n_rows) + 2)
    return BitGrid._raw(n_rows, n_cols, tuple(int(line, 2) for line in body))
