"""Explicit decoder for one criss-cross deletion in ``C_n(a, b, c, d)``.

The received ``(n-1) x (n-1)`` grid is classified by its last column, then the
deleted row and column are located with the two VT codes and refilled from the
parities.  When the row position is ambiguous between the parity row and a V
row, every hypothesis is tried.  If the valid ones disagree the received grid
lies in the deletion balls of several codewords and
:class:`~crisscross.errors.AmbiguousDecoding` is raised.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

from .code import CodeParams, is_codeword, u_symbols
from .errors import AmbiguousDecoding, DecodeFailure, InputError
from .grid import BitGrid, _put_bit, delete_cross
from .vt import VtLabel, vt_decode_deletion

__all__ = ["Case", "DecodeTrace", "classify", "decode"]

LAST_COL_DELETED = "last_col_deleted"
ROW_DELETED_IN_U = "row_deleted_in_U"
U_INTACT = "U_intact"


class Case(NamedTuple):
    kind: str
    row: int | None = None  # deleted row, for ROW_DELETED_IN_U


@dataclass(frozen=True)
class DecodeTrace:
    case_taken: str  # "1a", "1b" or "2"
    row_index: int
    col_index: int
    hypothesis_notes: tuple[str, ...] = ()


def _alt(i: int) -> int:
    return (i - 1) & 1


def _check_received(received: BitGrid, n: int) -> int:
    if n < 8 or n & (n - 1):
        raise InputError(f"n must be a power of two >= 8, got {n}")
    if received.shape != (n - 1, n - 1):
        raise InputError(f"expected a {n - 1}x{n - 1} received grid, got {received.n_rows}x{received.n_cols}")
    return n.bit_length() - 1


def classify(received: BitGrid, n: int) -> Case:
    ell = _check_received(received, n)
    e = [r & 1 for r in received.rows[: ell + 1]]
    if e[0] == e[1] == e[2] == 0:
        return Case(LAST_COL_DELETED)
    if e[0] == 1:
        return Case(ROW_DELETED_IN_U, 1)
    for p in range(1, ell + 1):
        if e[p - 1] == e[p]:
            return Case(ROW_DELETED_IN_U, p + 1)
    return Case(U_INTACT)


def _xor_all(rows) -> int:
    acc = 0
    for r in rows:
        acc ^= r
    return acc


def _finish(rows: list[int], n: int, params: CodeParams, received: BitGrid, i: int, j: int) -> BitGrid | None:
    grid = BitGrid._raw(n, n, tuple(rows))
    if is_codeword(grid, params) and delete_cross(grid, i, j) == received:
        return grid
    return None


def _locate_column(top_rows: list[int], n: int, ell: int, label: VtLabel) -> tuple[int, int]:
    """VT-decode the U word from rows 1..ell of width n-1; return (j, symbol)."""
    word = u_symbols(BitGrid._raw(ell, n - 1, tuple(top_rows)), ell)
    result = vt_decode_deletion(word, n, n, label)
    return result.position, result.symbol


def _v_word(rows: list[int], ell: int, masked: int) -> list[int]:
    # rows are full width; the first `masked` rows get the W prefix removed
    low = (1 << ell) - 1
    return [((r ^ _alt(k)) if k <= masked else r) & low for k, r in enumerate(rows, start=1)]


def _rebuild_row(rows: list[int], i: int, n: int, j: int, bit_j: int | None) -> list[int]:
    """Insert row ``i`` (xor of the others outside column ``j``) and patch the parity row.

    ``rows`` holds the other ``n-1`` full-width rows, parity row last, with the
    parity row's column ``j`` entry not yet trusted.  ``bit_j`` is row ``i``'s
    column-``j`` entry, or ``None`` to take it from the row parity.
    """
    col = 1 << (n - j)
    body = _xor_all(rows) & ~col
    if bit_j is None:
        bit_j = body.bit_count() & 1
    new = rows[: i - 1] + [body | (col if bit_j else 0)] + rows[i - 1 :]
    parity = _xor_all(new[: n - 1]) & col
    new[n - 1] = (new[n - 1] & ~col) | parity
    return new


def _case_1a(received: BitGrid, params: CodeParams, i: int) -> tuple[BitGrid, DecodeTrace]:
    n, ell = params.n, params.ell
    rows = list(received.rows)
    rows.insert(i - 1, _xor_all(rows))
    j, symbol = _locate_column(rows[:ell], n, ell, VtLabel(params.a, params.b))
    w = n - 1
    full = []
    for r, row in enumerate(rows, start=1):
        if r <= ell:
            bit = (symbol >> (ell - r)) & 1
        elif r < n:
            bit = row.bit_count() & 1
        else:
            bit = 0  # fixed below from the column parity
        full.append(_put_bit(row, w, j, bit))
    col = 1 << (n - j)
    full[n - 1] |= _xor_all(full[: n - 1]) & col
    notes = ("parity_col_deleted",) if j == 1 else ()
    out = _finish(full, n, params, received, i, j)
    if out is None:
        raise DecodeFailure(f"case 1a reconstruction at ({i}, {j}) is not a codeword")
    return out, DecodeTrace("1a", i, j, notes)


def _agree(found: list[tuple[BitGrid, int, tuple[str, ...]]], case: str, j: int) -> tuple[BitGrid, DecodeTrace]:
    if not found:
        raise DecodeFailure(f"no row hypothesis yields a codeword (case {case})")
    first = found[0][0]
    distinct = {}
    for grid, i, _ in found:
        distinct.setdefault(grid, (grid, i, j))
    if len(distinct) > 1:
        raise AmbiguousDecoding(
            f"{len(distinct)} codewords explain the received grid (case {case})",
            tuple(distinct.values()),
        )
    _, i, notes = found[0]
    if j == 1:
        notes = notes + ("parity_col_deleted",)
    return first, DecodeTrace(case, i, j, notes)


def _case_1b(received: BitGrid, params: CodeParams) -> tuple[BitGrid, DecodeTrace]:
    n, ell = params.n, params.ell
    w = n - 1
    rec = list(received.rows)
    j, symbol = _locate_column(rec[:ell], n, ell, VtLabel(params.a, params.b))
    # rows 1..n-2 of the received grid are C rows in [1, n-1]: fill column j
    filled = []
    for k, row in enumerate(rec[: n - 2], start=1):
        bit = (symbol >> (ell - k)) & 1 if k <= ell else row.bit_count() & 1
        filled.append(_put_bit(row, w, j, bit))
    last = rec[n - 2]
    cd = VtLabel(params.c, params.d)
    found = []

    # A: the parity row was deleted; the last received row is C row n-1
    rows = filled + [_put_bit(last, w, j, last.bit_count() & 1)]
    rows.append(_xor_all(rows))
    out = _finish(rows, n, params, received, n, j)
    if out is not None:
        found.append((out, n, ("parity_row_deleted",)))

    # B: a V row i in [ell+1, n-1] was deleted; the last received row is C row n
    base = filled + [_put_bit(last, w, j, 0)]
    for masked, accept in ((ell + 1, lambda p: p >= ell + 2), (ell, lambda p: p == ell + 1)):
        try:
            res = vt_decode_deletion(_v_word(filled, ell, masked), n - 1, n, cd)
        except DecodeFailure:
            continue
        i = res.position
        if not accept(i):
            continue
        out = _finish(_rebuild_row(base, i, n, j, None), n, params, received, i, j)
        if out is not None:
            found.append((out, i, ()))
    return _agree(found, "1b", j)


def _case_2(received: BitGrid, params: CodeParams) -> tuple[BitGrid, DecodeTrace]:
    n, ell = params.n, params.ell
    rec = list(received.rows)
    cd = VtLabel(params.c, params.d)
    found = []

    def extend(k_c: int, row: int) -> int:
        # append column n to a received row that is C row k_c (k_c < n)
        bit = _alt(k_c) if k_c <= ell + 1 else row.bit_count() & 1
        return (row << 1) | bit

    # A: the parity row was deleted
    rows = [extend(k, r) for k, r in enumerate(rec, start=1)]
    rows.append(_xor_all(rows))
    out = _finish(rows, n, params, received, n, n)
    if out is not None:
        found.append((out, n, ("parity_row_deleted",)))

    # B_hi: a row in [ell+2, n-1]; received rows 1..n-2 are C rows 1..n-1 minus it
    body = [extend(k, r) for k, r in enumerate(rec[: n - 2], start=1)]
    try:
        res = vt_decode_deletion(_v_word(body, ell, ell + 1), n - 1, n, cd)
    except DecodeFailure:
        res = None
    if res is not None and res.position >= ell + 2:
        i = res.position
        base = body + [rec[n - 2] << 1]
        out = _finish(_rebuild_row(base, i, n, n, None), n, params, received, i, n)
        if out is not None:
            found.append((out, i, ()))

    # B_lo: a row in [1, ell+1]; received rows 1..ell are C rows of the prefix
    vframe = [(r << 1) if k <= ell else extend(k + 1, r) for k, r in enumerate(rec[: n - 2], start=1)]
    try:
        res = vt_decode_deletion(_v_word(vframe, ell, 0), n - 1, n, cd)
    except DecodeFailure:
        res = None
    if res is not None and res.position <= ell + 1:
        i = res.position
        base = [extend(k if k < i else k + 1, r) for k, r in enumerate(rec[: n - 2], start=1)]
        base.append(rec[n - 2] << 1)
        out = _finish(_rebuild_row(base, i, n, n, _alt(i)), n, params, received, i, n)
        if out is not None:
            found.append((out, i, ()))
    return _agree(found, "2", n)


def decode(received: BitGrid, params: CodeParams) -> tuple[BitGrid, DecodeTrace]:
    """Recover the codeword of ``C_n(params)`` whose ``(1,1)`` deletion is ``received``.

    Raises :class:`DecodeFailure` when no codeword of the coset explains the
    received grid, and its subclass :class:`AmbiguousDecoding` when more than
    one does.
    """
    n = params.n
    case = classify(received, n)
    if case.kind == LAST_COL_DELETED:
        return _case_2(received, params)
    if case.kind == ROW_DELETED_IN_U:
        return _case_1a(received, params, case.row)
    return _case_1b(received, params)
