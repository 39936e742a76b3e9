"""Structure of single criss-cross deletions on square arrays.

Covers when two different deletions of the same array coincide, good
rows/columns, deletion-ball sizes and the good/bad array census.  Scalar
functions take a :class:`BitGrid`; the ``*_batch`` helpers work on numpy
arrays of row integers, shape ``(count, n)``, with column 1 as the most
significant bit of each row.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import limits
from .channel import deletion_ball
from .errors import EnumerationRefused, InputError
from .grid import BitGrid

__all__ = [
    "collision_constraints",
    "collision_structure",
    "collision_structure_batch",
    "is_good_column",
    "good_columns",
    "good_rows",
    "GoodIndexSets",
    "good_index_sets",
    "good_counts_batch",
    "ball_size",
    "ball_sizes_batch",
    "rows_from_ints",
    "CensusReport",
    "census",
    "bad_array_bound",
    "bad_array_bound_log2",
    "column_choice_fractions",
    "column_choice_bound",
    "deletion_keys_batch",
]

Cell = tuple[int, int]


def _check_pair(n: int, i1: int, j1: int, i2: int, j2: int) -> None:
    if n < 2:
        raise InputError(f"need n >= 2, got {n}")
    for v in (i1, j1, i2, j2):
        if not 1 <= v <= n:
            raise IndexError(f"index {v} outside [1, {n}]")
    if (i1, j1) == (i2, j2):
        raise InputError("the two deletions must differ")


def collision_constraints(n: int, i1: int, j1: int, i2: int, j2: int) -> list[tuple[Cell, Cell]]:
    """Cell equalities that hold iff deleting ``(i1, j1)`` and ``(i2, j2)`` give the same array.

    The array splits into bands around the two crosses: above and below both
    deleted rows, columns between ``j1`` and ``j2`` shift horizontally; left
    and right of both deleted columns, rows between ``i1`` and ``i2`` shift
    vertically; the centre block shifts diagonally.  Corner blocks are free.
    """
    _check_pair(n, i1, j1, i2, j2)
    if (j1, i1) > (j2, i2):
        i1, j1, i2, j2 = i2, j2, i1, j1
    lo, hi = min(i1, i2), max(i1, i2)
    out: list[tuple[Cell, Cell]] = []
    for i in list(range(1, lo)) + list(range(hi + 1, n + 1)):
        out.extend(((i, j), (i, j + 1)) for j in range(j1, j2))
    for j in list(range(1, j1)) + list(range(j2 + 1, n + 1)):
        out.extend(((i, j), (i + 1, j)) for i in range(lo, hi))
    for i in range(lo, hi):
        if i1 <= i2:
            out.extend(((i, j), (i + 1, j + 1)) for j in range(j1, j2))
        else:
            out.extend(((i, j), (i + 1, j - 1)) for j in range(j1 + 1, j2 + 1))
    return out


def collision_structure(grid: BitGrid, i1: int, j1: int, i2: int, j2: int) -> bool:
    if grid.n_rows != grid.n_cols:
        raise InputError("collision structure is defined for square arrays")
    return all(grid[a] == grid[b] for a, b in collision_constraints(grid.n_rows, i1, j1, i2, j2))


def rows_from_ints(values: np.ndarray, n: int) -> np.ndarray:
    """Split row-major grid integers (as from :meth:`BitGrid.to_int`) into row integers."""
    values = np.asarray(values, dtype=np.uint64)
    shifts = np.arange(n - 1, -1, -1, dtype=np.uint64) * np.uint64(n)
    return (values[:, None] >> shifts) & np.uint64((1 << n) - 1)


def _cell_bits(rows: np.ndarray, n: int, cell: Cell) -> np.ndarray:
    i, j = cell
    return (rows[:, i - 1] >> np.uint64(n - j)) & np.uint64(1)


def collision_structure_batch(rows: np.ndarray, i1: int, j1: int, i2: int, j2: int) -> np.ndarray:
    n = rows.shape[1]
    ok = np.ones(rows.shape[0], dtype=bool)
    for a, b in collision_constraints(n, i1, j1, i2, j2):
        ok &= _cell_bits(rows, n, a) == _cell_bits(rows, n, b)
    return ok


def deletion_keys_batch(rows: np.ndarray, i: int, j: int) -> np.ndarray:
    """Row-major integer of each array after deleting row ``i`` and column ``j``."""
    n = rows.shape[1]
    w = np.uint64(n)
    low = np.uint64((1 << (n - j)) - 1)
    kept = np.delete(rows, i - 1, axis=1)
    kept = ((kept >> np.uint64(n - j + 1)) << np.uint64(n - j)) | (kept & low)
    key = np.zeros(rows.shape[0], dtype=np.uint64)
    step = w - np.uint64(1)
    for k in range(n - 1):
        key = (key << step) | kept[:, k]
    return key


# -- good columns and rows ------------------------------------------------------

def column_choice_bound(n: int) -> float:
    """Stated cap on the bad fraction of a column given its left neighbour: 3*C(n,2)/2**n."""
    return 3 * math.comb(n, 2) / 2**n


def _column_bad_literal(left: tuple[int, ...], col: tuple[int, ...]) -> bool:
    n = len(col)
    for i1 in range(n):
        for i2 in range(i1 + 1, n):
            if all(left[i] == col[i] for i in range(i1, i2 + 1)):
                return True
            if all(left[i] == col[i + 1] for i in range(i1, i2)):
                return True
            if all(left[i + 1] == col[i] for i in range(i1, i2)):
                return True
    return False


def is_good_column(grid: BitGrid, j: int) -> bool:
    """Column ``j`` (``2 <= j <= n``) against column ``j-1``, checking every interval."""
    if not 2 <= j <= grid.n_cols:
        raise IndexError(f"column {j} outside [2, {grid.n_cols}]")
    return not _column_bad_literal(grid.col(j - 1), grid.col(j))


def good_columns(grid: BitGrid) -> frozenset[int]:
    return frozenset(j for j in range(2, grid.n_cols + 1) if is_good_column(grid, j))


def good_rows(grid: BitGrid) -> frozenset[int]:
    return good_columns(grid.transpose())


@dataclass(frozen=True)
class GoodIndexSets:
    good_cols: tuple[int, ...]
    good_rows: tuple[int, ...]


def good_index_sets(grid: BitGrid) -> GoodIndexSets:
    return GoodIndexSets(tuple(sorted(good_columns(grid))), tuple(sorted(good_rows(grid))))


def _bad_pair_batch(left: np.ndarray, col: np.ndarray, n: int) -> np.ndarray:
    # left/col: n-bit line values, line position 1 at the most significant bit.
    # Any relation on a long interval also holds on a length-2 sub-interval,
    # so it suffices to look at adjacent positions.
    full = np.uint64((1 << n) - 1)
    eq = ~(left ^ col) & full
    zero_shift = (eq & (eq >> np.uint64(1))) != 0
    pair = np.uint64((1 << (n - 1)) - 1)
    down = (~((left >> np.uint64(1)) ^ col) & pair) != 0  # left_i == col_{i+1}
    up = (~(left ^ (col >> np.uint64(1))) & pair) != 0  # left_{i+1} == col_i
    return zero_shift | down | up


def _columns_batch(rows: np.ndarray) -> np.ndarray:
    n = rows.shape[1]
    cols = np.zeros_like(rows)
    for j in range(n):
        bits = (rows >> np.uint64(n - 1 - j)) & np.uint64(1)
        for i in range(n):
            cols[:, j] |= bits[:, i] << np.uint64(n - 1 - i)
    return cols


def good_counts_batch(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """``(|good columns|, |good rows|)`` for each array."""
    n = rows.shape[1]
    cols = _columns_batch(rows)
    good_c = np.zeros(rows.shape[0], dtype=np.int64)
    good_r = np.zeros(rows.shape[0], dtype=np.int64)
    for j in range(1, n):
        good_c += ~_bad_pair_batch(cols[:, j - 1], cols[:, j], n)
        good_r += ~_bad_pair_batch(rows[:, j - 1], rows[:, j], n)
    return good_c, good_r


def column_choice_fractions(n: int) -> np.ndarray:
    """For each left column value, the fraction of right columns that are bad."""
    if n > 12:
        raise EnumerationRefused(f"4**{n} column pairs is too many")
    values = np.arange(1 << n, dtype=np.uint64)
    left = np.repeat(values, 1 << n)
    right = np.tile(values, 1 << n)
    bad = _bad_pair_batch(left, right, n).reshape(1 << n, 1 << n)
    return bad.mean(axis=1)


# -- ball sizes and census --------------------------------------------------------


def ball_size(grid: BitGrid) -> int:
    return len(deletion_ball(grid, 1, 1))


def ball_sizes_batch(rows: np.ndarray) -> np.ndarray:
    n = rows.shape[1]
    keys = np.stack([deletion_keys_batch(rows, i, j) for i in range(1, n + 1) for j in range(1, n + 1)], axis=1)
    keys.sort(axis=1)
    return 1 + np.count_nonzero(np.diff(keys, axis=1), axis=1)


def bad_array_bound_log2(n: int) -> float:
    return n * n - 3 * n + 0.5


def bad_array_bound(n: int) -> tuple[float, bool]:
    """``sqrt(2) * 2**(n*n - 3n)`` and whether the bound is stated to apply (``n >= 54``).

    The value is ``inf`` once it leaves the float range; use
    :func:`bad_array_bound_log2` there.
    """
    exponent = n * n - 3 * n
    value = math.inf if exponent > 1022 else math.sqrt(2) * 2.0**exponent
    return value, n >= 54


@dataclass(frozen=True)
class CensusReport:
    n: int
    num_good: int
    num_bad: int
    bad_bound_formula: float
    bad_bound_applicable: bool

    def line(self) -> str:
        return f"n={self.n} good={self.num_good} bad={self.num_bad}"


def _all_grid_chunks(n: int, chunk: int) -> Iterator[np.ndarray]:
    total = 1 << (n * n)
    for start in range(0, total, chunk):
        yield rows_from_ints(np.arange(start, min(total, start + chunk), dtype=np.uint64), n)


def census(n: int) -> CensusReport:
    """Count arrays with ``|D_1(X)| >= n**2 / 2`` (good) and the rest (bad), exhaustively."""
    if n < 2:
        raise InputError(f"need n >= 2, got {n}")
    if 1 << (n * n) > limits.MAX_CENSUS_ARRAYS:
        raise EnumerationRefused(f"2**{n * n} arrays exceed {limits.MAX_CENSUS_ARRAYS}")
    good = 0
    total = 0
    for rows in _all_grid_chunks(n, limits.CENSUS_CHUNK):
        sizes = ball_sizes_batch(rows)
        good += int(np.count_nonzero(2 * sizes >= n * n))
        total += rows.shape[0]
    bound, applicable = bad_array_bound(n)
    return CensusReport(n, good, total - good, bound, applicable)
