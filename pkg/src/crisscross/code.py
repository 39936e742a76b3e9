"""The CrissCross code ``C_n(a, b, c, d)`` on ``n x n`` binary arrays, ``n = 2**ell``.

Layout of a codeword (rows/columns 1-based):

* U band, rows ``1..ell``: each column is an ``ell``-bit symbol (row 1 is the
  MSB).  Consecutive symbols differ, the ``n``-symbol word has VT label
  ``(a, b)`` with ``q = n``.  Column ``n-1`` starts with four zeros, column
  ``n`` starts with the alternating prefix ``0101...`` of length ``ell + 1``.
* V band, rows ``1..n-1``, last ``ell`` columns: each row is a symbol (column
  ``n-ell+1`` is the MSB) read after xor with the mask ``W``, which clears the
  alternating prefix.  Consecutive symbols differ and the ``(n-1)``-symbol word
  has VT label ``(c, d)``.
* Column 1, rows ``ell+1..n-1``: row parities.  Row ``n``: column parities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterator

import numpy as np

from . import limits
from .errors import EnumerationRefused, InputError, ParseError
from .grid import BitGrid
from .vt import VtLabel, vt_label

__all__ = [
    "CodeParams",
    "StructuralReport",
    "check_length",
    "mask_w",
    "u_symbols",
    "v_symbols",
    "structural_check",
    "is_codeword",
    "sample_codeword",
    "count_structural",
    "structural_formula",
    "redundancy_bounds",
    "RedundancyBounds",
]


def check_length(n: int) -> int:
    """Validate ``n`` and return ``ell = log2(n)``."""
    if not isinstance(n, (int, np.integer)) or n < 8 or n & (n - 1):
        raise InputError(f"n must be a power of two >= 8, got {n}")
    return int(n).bit_length() - 1


def _alt(i: int) -> int:
    # entry i (1-based) of the alternating prefix 0,1,0,1,...
    return (i - 1) & 1


@dataclass(frozen=True)
class CodeParams:
    n: int
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        check_length(self.n)
        n = self.n
        for name, value, hi in (("a", self.a, n - 1), ("b", self.b, n - 1), ("c", self.c, n - 2), ("d", self.d, n - 1)):
            if not 0 <= value <= hi:
                raise InputError(f"{name}={value} outside [0, {hi}] for n={n}")

    @property
    def ell(self) -> int:
        return self.n.bit_length() - 1

    @property
    def labels(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def to_text(self) -> str:
        return f"{self.n} {self.a} {self.b} {self.c} {self.d}\n"

    @classmethod
    def from_text(cls, text: str) -> CodeParams:
        fields = text.split()
        if len(fields) != 5 or not all(f.isdigit() for f in fields):
            raise ParseError("params must be 'n a b c d' as non-negative integers", line=1)
        return cls(*(int(f) for f in fields))


def mask_w(n: int) -> BitGrid:
    """All zeros except column ``n``, rows ``1..ell+1``, which alternate starting at 0."""
    ell = check_length(n)
    rows = tuple(_alt(i) if i <= ell + 1 else 0 for i in range(1, n + 1))
    return BitGrid._raw(n, n, rows)


def u_symbols(grid: BitGrid, ell: int) -> list[int]:
    """Column symbols of the top ``ell`` rows (row 1 is the most significant bit)."""
    top = grid.rows[:ell]
    out = []
    for shift in range(grid.n_cols - 1, -1, -1):
        s = 0
        for r in top:
            s = (s << 1) | ((r >> shift) & 1)
        out.append(s)
    return out


def v_symbols(grid: BitGrid, ell: int) -> list[int]:
    """Row symbols of ``X xor W`` over the last ``ell`` columns, rows ``1..n-1``."""
    mask = (1 << ell) - 1
    return [
        (r ^ _alt(i)) & mask if i <= ell + 1 else r & mask
        for i, r in enumerate(grid.rows[: grid.n_rows - 1], start=1)
    ]


@dataclass(frozen=True)
class StructuralReport:
    u_cols_distinct: bool
    u_fixed_bits: bool
    v_rows_distinct: bool
    v_fixed_zero_col: bool
    pc_ok: bool
    pr_ok: bool
    params: CodeParams | None = None

    @property
    def ok(self) -> bool:
        return (
            self.u_cols_distinct
            and self.u_fixed_bits
            and self.v_rows_distinct
            and self.v_fixed_zero_col
            and self.pc_ok
            and self.pr_ok
        )


def structural_check(grid: BitGrid, n: int) -> StructuralReport:
    """Evaluate every constraint of the construction except the coset labels.

    When all hold, the report carries the labels ``(a, b, c, d)`` of ``grid``.
    """
    ell = check_length(n)
    if grid.shape != (n, n):
        raise InputError(f"expected an {n}x{n} grid, got {grid.n_rows}x{grid.n_cols}")
    rows = grid.rows

    u = u_symbols(grid, ell)
    u_distinct = all(u[k] != u[k + 1] for k in range(n - 1))
    bit_n1 = 2  # column n-1 sits at bit 1 of a row int, column n at bit 0
    zeros_ok = all(not rows[i] & bit_n1 for i in range(4))
    alt_ok = all((rows[i - 1] & 1) == _alt(i) for i in range(1, ell + 2))

    v = v_symbols(grid, ell)
    v_distinct = all(v[k] != v[k + 1] for k in range(n - 2))
    v_zero = all((rows[i - 1] ^ _alt(i)) & 1 == 0 for i in range(1, ell + 2))

    pc_ok = all(rows[i - 1].bit_count() % 2 == 0 for i in range(ell + 1, n))
    total = 0
    for r in rows:
        total ^= r
    pr_ok = total == 0

    report = StructuralReport(u_distinct, zeros_ok and alt_ok, v_distinct, v_zero, pc_ok, pr_ok)
    if report.ok:
        ab = vt_label(u, n)
        cd = vt_label(v, n)
        report = StructuralReport(*(True,) * 6, params=CodeParams(n, ab.a, ab.b, cd.a, cd.b))
    return report


def is_codeword(grid: BitGrid, params: CodeParams) -> bool:
    report = structural_check(grid, params.n)
    return report.params == params


# -- sampling ---------------------------------------------------------------


def _draw_distinct(rng: np.random.Generator, size: int, avoid: tuple[int, ...]) -> int:
    for _ in range(limits.MAX_SAMPLER_ATTEMPTS):
        s = int(rng.integers(size))
        if s not in avoid:
            return s
    raise RuntimeError("sampler exceeded its attempt cap")


def _sample_square(rng: np.random.Generator, n: int, ell: int) -> list[int]:
    """Top-right ``ell x ell`` block as the low ``ell`` bits of rows ``1..ell``."""
    free_mask = ((1 << ell) - 1) & ~1
    for _ in range(limits.MAX_SAMPLER_ATTEMPTS):
        sq = []
        for i in range(1, ell + 1):
            s = int(rng.integers(1 << ell)) & free_mask
            if i <= 4:
                s &= ~2
            sq.append(s | _alt(i))
        vframe = [s ^ _alt(i) for i, s in enumerate(sq, start=1)]
        if any(vframe[k] == vframe[k + 1] for k in range(ell - 1)):
            continue
        cols = [_col_of(sq, ell, c) for c in range(ell)]
        if any(cols[k] == cols[k + 1] for k in range(ell - 1)):
            continue
        return sq
    raise RuntimeError("sampler exceeded its attempt cap")


def _sample_u_prefix(rng: np.random.Generator, n: int, ell: int, right: int) -> list[int]:
    # symbols of columns 1..n-ell, consecutive distinct, last one != `right`
    size = 1 << ell
    syms: list[int] = []
    for j in range(n - ell):
        avoid = (syms[-1],) if syms else ()
        if j == n - ell - 1:
            avoid += (right,)
        syms.append(_draw_distinct(rng, size, avoid))
    return syms


def _sample_v_suffix(rng: np.random.Generator, n: int, ell: int, above: int) -> list[int]:
    # V-frame symbols of rows ell+1..n-1, consecutive distinct, first != `above`
    size = 1 << ell
    syms: list[int] = []
    prev = above
    for i in range(ell + 1, n):
        for _ in range(limits.MAX_SAMPLER_ATTEMPTS):
            s = int(rng.integers(size))
            if i <= ell + 1:
                s &= ~1
            if i <= 4:
                s &= ~2
            if s != prev:
                break
        else:
            raise RuntimeError("sampler exceeded its attempt cap")
        syms.append(s)
        prev = s
    return syms


def _col_of(square: list[int], ell: int, c: int) -> int:
    # column c (0-based, left to right) of the block, row 1 as MSB
    return sum(((s >> (ell - 1 - c)) & 1) << (ell - 1 - r) for r, s in enumerate(square))


def _draw_band(tries: int, draw, head: list[int], tail: list[int], n: int, target) -> list[int] | None:
    # word = head + draw() + tail; retry until its label is `target` (any label if None)
    for _ in range(tries):
        word = head + draw() + tail
        if target is None or vt_label(word, n) == target:
            return word
    return None


def sample_codeword(
    n: int,
    seed: int | None = None,
    *,
    params: CodeParams | None = None,
    rng: np.random.Generator | None = None,
) -> tuple[BitGrid, CodeParams]:
    """Draw a random codeword of some coset, or of the coset ``params`` if given.

    Randomness comes from numpy's PCG64 generator seeded with ``seed`` (or the
    generator passed as ``rng``).  Targeted draws resample the U and V bands
    until their labels match, restarting from a new top-right block when a
    band keeps missing.
    """
    ell = check_length(n)
    if params is not None and params.n != n:
        raise InputError(f"params are for n={params.n}, not n={n}")
    if rng is None:
        rng = np.random.default_rng(seed)
    low_mask = (1 << ell) - 1

    # a given top-right block may rule out some labels, so targeted draws
    # retry each band a bounded number of times and then start over
    tries = 1 if params is None else 20 * n * n
    for _ in range(limits.MAX_SAMPLER_ATTEMPTS):
        square = _sample_square(rng, n, ell)
        u = _draw_band(
            tries,
            lambda: _sample_u_prefix(rng, n, ell, _col_of(square, ell, 0)),
            [],
            [_col_of(square, ell, c) for c in range(ell)],
            n,
            None if params is None else (params.a, params.b),
        )
        if u is None:
            continue
        v = _draw_band(
            tries,
            lambda: _sample_v_suffix(rng, n, ell, square[-1] ^ _alt(ell)),
            [s ^ _alt(i) for i, s in enumerate(square, start=1)],
            [],
            n,
            None if params is None else (params.c, params.d),
        )
        if v is not None:
            break
    else:
        raise RuntimeError("sampler could not hit the requested coset")

    rows = [0] * n
    for i in range(1, ell + 1):
        r = 0
        for sym in u:
            r = (r << 1) | ((sym >> (ell - i)) & 1)
        rows[i - 1] = r
    middle_bits = n - ell - 1  # columns 2..n-ell
    for i in range(ell + 1, n):
        tail = v[i - 1] ^ (_alt(i) if i == ell + 1 else 0)
        data = int(rng.integers(1 << middle_bits))
        r = (data << ell) | (tail & low_mask)
        parity = r.bit_count() & 1
        rows[i - 1] = (parity << (n - 1)) | r
    last = 0
    for r in rows[: n - 1]:
        last ^= r
    rows[n - 1] = last

    grid = BitGrid._raw(n, n, tuple(rows))
    report = structural_check(grid, n)
    if not report.ok:
        raise RuntimeError(f"sampler produced an invalid grid: {report}")
    if params is not None and report.params != params:
        raise RuntimeError("sampler missed the requested coset")
    return grid, report.params


# -- exact structural counts --------------------------------------------------


def structural_formula(kind: str, n: int | None = None, ell: int | None = None) -> int | None:
    """Closed-form size of the constrained region, where one is known."""
    if kind == "Uperp":
        return 2**ell * (2**ell - 1) ** (n - ell - 1)
    if kind == "Vperp":
        return 2 ** (ell - 1) * (2**ell - 1) ** (n - ell - 2)
    if kind in ("Scr", "Sint"):
        return None
    raise InputError(f"unknown structural kind {kind!r}")


def _line_chunks(n_lines: int, width: int, fixed: dict[tuple[int, int], int]) -> Iterator[np.ndarray]:
    """Every filling of ``n_lines`` lines of ``width`` bits, honouring ``fixed``.

    ``fixed`` maps ``(line, bit)`` (bit 0 = least significant) to its value.
    Yields arrays of shape ``(n_lines, chunk)`` holding line values.
    """
    free = [(ln, bit) for ln in range(n_lines) for bit in range(width) if (ln, bit) not in fixed]
    states = 1 << len(free)
    if states > limits.MAX_STRUCTURAL_STATES:
        raise EnumerationRefused(f"{states} states exceed {limits.MAX_STRUCTURAL_STATES}")
    base = np.zeros(n_lines, dtype=np.int64)
    for (ln, bit), value in fixed.items():
        base[ln] |= value << bit
    step = 1 << 22
    for start in range(0, states, step):
        idx = np.arange(start, min(states, start + step), dtype=np.int64)
        lines = np.repeat(base[:, None], idx.size, axis=1)
        k = 0
        for ln in range(n_lines):
            bits = [bit for line, bit in free if line == ln]
            if len(bits) == width:  # whole line free: one shift instead of a scatter
                lines[ln] |= (idx >> k) & ((1 << width) - 1)
            else:
                for j, bit in enumerate(bits):
                    lines[ln] |= ((idx >> (k + j)) & 1) << bit
            k += len(bits)
        yield lines


def _consecutive_distinct(lines: np.ndarray) -> np.ndarray:
    return np.all(lines[1:] != lines[:-1], axis=0) if len(lines) > 1 else np.ones(lines.shape[1], bool)


def _columns_of(lines: np.ndarray, width: int) -> np.ndarray:
    # treat lines as rows (MSB = first column); return column values, first row = MSB
    n_rows = lines.shape[0]
    cols = np.zeros((width, lines.shape[1]), dtype=np.int64)
    for c in range(width):
        shift = width - 1 - c
        for r in range(n_rows):
            cols[c] |= ((lines[r] >> shift) & 1) << (n_rows - 1 - r)
    return cols


def count_structural(kind: str, n: int | None = None, ell: int | None = None, *, masked: bool = True) -> int:
    """Exact size of one constrained sub-region, by enumeration.

    * ``Uperp``: top ``ell`` rows of columns ``1..n-ell`` with consecutive
      columns distinct.
    * ``Vperp``: last ``ell`` columns of rows ``ell+1..n-1`` with consecutive
      rows distinct and ``X[ell+1, n] = ell mod 2``.
    * ``Scr``: ``ell x ell`` arrays with consecutive rows and consecutive
      columns distinct.
    * ``Sint``: the top-right ``ell x ell`` block of a codeword with its fixed
      bits and in-block distinctness; rows are compared after the ``W`` mask
      unless ``masked=False``.

    Unconstrained bits outside the region are not counted.
    """
    if ell is None:
        if n is None:
            raise InputError("need n or ell")
        ell = int(n).bit_length() - 1
    if ell < 1:
        raise InputError(f"ell must be >= 1, got {ell}")
    total = 0
    if kind == "Uperp":
        if n is None or n - ell < 1:
            raise InputError("Uperp needs n > ell")
        for lines in _line_chunks(n - ell, ell, {}):
            total += int(_consecutive_distinct(lines).sum())
    elif kind == "Vperp":
        if n is None or n - ell - 1 < 1:
            raise InputError("Vperp needs n > ell + 1")
        for lines in _line_chunks(n - ell - 1, ell, {(0, 0): ell % 2}):
            total += int(_consecutive_distinct(lines).sum())
    elif kind == "Scr":
        for lines in _line_chunks(ell, ell, {}):
            ok = _consecutive_distinct(lines) & _consecutive_distinct(_columns_of(lines, ell))
            total += int(ok.sum())
    elif kind == "Sint":
        fixed = {(r, 0): _alt(r + 1) for r in range(ell)}
        if ell >= 2:
            fixed.update({(r, 1): 0 for r in range(min(4, ell))})
        for lines in _line_chunks(ell, ell, fixed):
            rows = lines
            if masked:
                rows = lines ^ np.array([_alt(r + 1) for r in range(ell)], dtype=np.int64)[:, None]
            ok = _consecutive_distinct(rows) & _consecutive_distinct(_columns_of(lines, ell))
            total += int(ok.sum())
    else:
        raise InputError(f"unknown structural kind {kind!r}")
    return total


# -- redundancy ---------------------------------------------------------------


@dataclass(frozen=True)
class RedundancyBounds:
    n: int
    lower: float  # any (1,1)-criss-cross deletion code, asymptotically
    uv_bound: float  # U(a,b) & V'(c,d) for the best coset
    parity: float  # bits fixed by p_c and p_r
    construction: float  # uv_bound + parity
    upper: float  # loosened closed form for the construction
    gap: float  # upper - lower
    gap_bound: float


def redundancy_bounds(n: int) -> RedundancyBounds:
    ell = check_length(n)
    log_e = math.log2(math.e)
    lower = 2 * n - 2 + 2 * ell
    uv = (2 * n - 2 * ell - 3) * math.log2(n / (n - 1)) + 5 * ell + 6
    parity = 2 * n - ell - 1
    upper = 2 * n + 4 * ell + 7 + 2 * log_e
    return RedundancyBounds(
        n=n,
        lower=float(lower),
        uv_bound=uv,
        parity=float(parity),
        construction=uv + parity,
        upper=upper,
        gap=upper - lower,
        gap_bound=2 * ell + 9 + 2 * log_e,
    )
