"""Criss-cross deletion and insertion balls.

Balls are exact: every deletion (or every insertion position and content) is
enumerated and results are deduplicated.  Multi-row/column balls are built as
repeated single-row then single-column steps, which reaches the same set.
"""

from __future__ import annotations

import itertools
from functools import lru_cache
from math import comb

import numpy as np

from . import limits
from .errors import EnumerationRefused, InputError
from .grid import BitGrid, _drop_bit, _put_bit

__all__ = [
    "deletion_ball",
    "insertion_ball",
    "balls_intersect",
    "insertion_candidates",
]

GridSet = frozenset  # frozenset[BitGrid], all members share dimensions


def _check_t(t_r: int, t_c: int) -> None:
    if t_r < 0 or t_c < 0:
        raise InputError(f"deletion/insertion counts must be non-negative, got ({t_r}, {t_c})")


def deletion_ball(grid: BitGrid, t_r: int = 1, t_c: int = 1) -> frozenset[BitGrid]:
    """``D_{t_r,t_c}(X)``: every grid reachable by deleting ``t_r`` rows and ``t_c`` columns."""
    _check_t(t_r, t_c)
    if (t_r and t_r >= grid.n_rows) or (t_c and t_c >= grid.n_cols):
        raise InputError(f"cannot delete ({t_r}, {t_c}) from a {grid.n_rows}x{grid.n_cols} grid")
    candidates = comb(grid.n_rows, t_r) * comb(grid.n_cols, t_c)
    if candidates > limits.MAX_BALL_CANDIDATES:
        raise EnumerationRefused(f"{candidates} deletions exceed {limits.MAX_BALL_CANDIDATES}")

    row_sets = {
        tuple(r for i, r in enumerate(grid.rows) if i not in drop)
        for drop in itertools.combinations(range(grid.n_rows), t_r)
    }
    width = grid.n_cols
    out = set()
    for rows in row_sets:
        for drop in itertools.combinations(range(width, 0, -1), t_c):
            kept = rows
            w = width
            for j in drop:  # descending, so earlier removals don't shift later ones
                kept = tuple(_drop_bit(r, w, j) for r in kept)
                w -= 1
            out.add(kept)
    n_rows, n_cols = grid.n_rows - t_r, grid.n_cols - t_c
    return frozenset(BitGrid._raw(n_rows, n_cols, rows) for rows in out)


def insertion_candidates(n_rows: int, n_cols: int, t_r: int, t_c: int) -> int:
    """Upper bound on grids generated (before dedup) by :func:`insertion_ball`."""
    total, level = 0, 1
    r, c = n_rows, n_cols
    for _ in range(t_r):
        level *= (r + 1) * 2**c
        total += level
        r += 1
    for _ in range(t_c):
        level *= (c + 1) * 2**r
        total += level
        c += 1
    return total


def insertion_ball(grid: BitGrid, t_r: int = 1, t_c: int = 1) -> frozenset[BitGrid]:
    """``I_{t_r,t_c}(X)``: every grid from which ``X`` is a ``(t_r, t_c)`` deletion."""
    _check_t(t_r, t_c)
    if max(grid.n_rows + t_r, grid.n_cols + t_c) > limits.MAX_INSERTION_DIM:
        raise EnumerationRefused(
            f"insertion ball of dimension {grid.n_rows + t_r}x{grid.n_cols + t_c} "
            f"exceeds {limits.MAX_INSERTION_DIM}"
        )
    candidates = insertion_candidates(grid.n_rows, grid.n_cols, t_r, t_c)
    if candidates > limits.MAX_BALL_CANDIDATES:
        raise EnumerationRefused(f"{candidates} insertion candidates exceed {limits.MAX_BALL_CANDIDATES}")

    level = {grid.rows}
    r, c = grid.n_rows, grid.n_cols
    for _ in range(t_r):
        contents = range(1 << c)
        level = {
            rows[:p] + (v,) + rows[p:]
            for rows in level
            for p in range(r + 1)
            for v in contents
        }
        r += 1
    for _ in range(t_c):
        nxt = set()
        for rows in level:
            for p in range(1, c + 2):
                choices = [(_put_bit(x, c, p, 0), _put_bit(x, c, p, 1)) for x in rows]
                nxt.update(itertools.product(*choices))
        level = nxt
        c += 1
    return frozenset(BitGrid._raw(r, c, rows) for rows in level)


@lru_cache(maxsize=None)
def _embedding_incidence(total: int, nx: int, ny: int) -> np.ndarray:
    """Row ``(ex, ey)`` marks which ``(x_index, y_index)`` pairs share a line of the big grid.

    ``ex``/``ey`` run over the ways to place ``nx``/``ny`` lines inside ``total``.
    """
    emb_x = list(itertools.combinations(range(total), nx))
    emb_y = list(itertools.combinations(range(total), ny))
    inc = np.zeros((len(emb_x) * len(emb_y), nx * ny), dtype=np.int32)
    for k, (ex, ey) in enumerate(itertools.product(emb_x, emb_y)):
        pos_y = {z: b for b, z in enumerate(ey)}
        for a, z in enumerate(ex):
            b = pos_y.get(z)
            if b is not None:
                inc[k, a * ny + b] = 1
    return inc


def _insertion_balls_meet(x: BitGrid, y: BitGrid, total_rows: int, total_cols: int) -> bool:
    # Z exists iff some placement of X and of Y inside a total_rows x total_cols
    # grid agrees on every cell both of them cover.
    row_inc = _embedding_incidence(total_rows, x.n_rows, y.n_rows)
    col_inc = _embedding_incidence(total_cols, x.n_cols, y.n_cols)
    xa = x.to_numpy().astype(np.int32)
    ya = y.to_numpy().astype(np.int32)
    # clash[(rx, ry), (cx, cy)] = X[rx, cx] != Y[ry, cy]
    clash = (xa[:, None, :, None] != ya[None, :, None, :]).astype(np.int32)
    clash = clash.reshape(x.n_rows * y.n_rows, x.n_cols * y.n_cols)
    conflicts = row_inc @ clash @ col_inc.T
    return bool((conflicts == 0).any())


def balls_intersect(
    x: BitGrid,
    y: BitGrid,
    mode: str = "deletion",
    t_r: int = 1,
    t_c: int = 1,
    y_t: tuple[int, int] | None = None,
) -> bool:
    """Whether the balls of ``x`` (radius ``(t_r, t_c)``) and ``y`` (radius ``y_t``) meet.

    ``y_t`` defaults to ``(t_r, t_c)``; mixed radii cover statements such as
    ``D_{1,0}(X) & D_{0,1}(Y)``.  Insertion mode never materialises the balls.
    """
    _check_t(t_r, t_c)
    ty_r, ty_c = (t_r, t_c) if y_t is None else y_t
    _check_t(ty_r, ty_c)
    if mode == "deletion":
        if (x.n_rows - t_r, x.n_cols - t_c) != (y.n_rows - ty_r, y.n_cols - ty_c):
            raise InputError("deletion balls have different dimensions")
        return not deletion_ball(x, t_r, t_c).isdisjoint(deletion_ball(y, ty_r, ty_c))
    if mode == "insertion":
        dims = (x.n_rows + t_r, x.n_cols + t_c)
        if dims != (y.n_rows + ty_r, y.n_cols + ty_c):
            raise InputError("insertion balls have different dimensions")
        return _insertion_balls_meet(x, y, *dims)
    raise InputError(f"mode must be 'deletion' or 'insertion', got {mode!r}")
