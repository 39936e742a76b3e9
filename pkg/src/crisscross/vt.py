"""q-ary Tenengolts single-deletion codes.

A word ``x`` of length ``m`` over ``{0..q-1}`` gets the label ``(a, b)`` with

    a = sum_{i=1..m} (i-1) * s_i  mod m,      b = sum_i x_i  mod q,

where the signature ``s`` has ``s_1 = 1`` and ``s_i = [x_i >= x_{i-1}]``.  Words
sharing a label form a coset, and every coset corrects one deletion.
"""

from __future__ import annotations

import itertools
from collections import Counter
from typing import NamedTuple, Sequence

from . import limits
from .errors import DecodeFailure, EnumerationRefused, InputError

__all__ = [
    "VtLabel",
    "VtDecodeResult",
    "signature",
    "vt_label",
    "vt_decode_deletion",
    "vt_decode_bruteforce",
    "single_deletion_ball",
    "vt_coset_census",
    "CosetCensus",
]


class VtLabel(NamedTuple):
    a: int
    b: int


class VtDecodeResult(NamedTuple):
    word: tuple[int, ...]
    position: int  # 1-based
    symbol: int


def _check_word(x: Sequence[int], q: int) -> None:
    if q < 2:
        raise InputError(f"alphabet size must be >= 2, got {q}")
    for s in x:
        if not 0 <= s < q:
            raise InputError(f"symbol {s} outside [0, {q - 1}]")


def signature(x: Sequence[int]) -> tuple[int, ...]:
    if not x:
        raise InputError("word must be non-empty")
    return (1,) + tuple(int(x[i] >= x[i - 1]) for i in range(1, len(x)))


def _a_syndrome(x: Sequence[int]) -> int:
    total = 0
    prev = x[0]
    for i in range(1, len(x)):
        cur = x[i]
        if cur >= prev:
            total += i
        prev = cur
    return total % len(x)


def vt_label(x: Sequence[int], q: int) -> VtLabel:
    _check_word(x, q)
    if not x:
        raise InputError("word must be non-empty")
    return VtLabel(_a_syndrome(x), sum(x) % q)


def _check_label(label: VtLabel, m: int, q: int) -> None:
    a, b = label
    if not (0 <= a < m and 0 <= b < q):
        raise InputError(f"label {tuple(label)} out of range for m={m}, q={q}")


def vt_decode_deletion(y: Sequence[int], m: int, q: int, label: VtLabel) -> VtDecodeResult:
    """Recover the word of coset ``label`` that ``y`` came from by one deletion.

    The deleted symbol is pinned by the sum syndrome, so only the ``m`` insertion
    points need checking.  ``position`` is the smallest index whose deletion
    turns the word into ``y``; it is the true index whenever the word has no
    two equal adjacent symbols.
    """
    if len(y) != m - 1 or m < 2:
        raise InputError(f"received word must have length m-1={m - 1}, got {len(y)}")
    _check_word(y, q)
    _check_label(label, m, q)
    a, b = label
    y = tuple(y)
    symbol = (b - sum(y)) % q
    found: tuple[int, ...] | None = None
    position = 0
    for p in range(m):
        # inserting into a run of `symbol` gives the same word; take the first slot only
        if p > 0 and y[p - 1] == symbol:
            continue
        x = y[:p] + (symbol,) + y[p:]
        if _a_syndrome(x) == a:
            if found is not None and x != found:
                raise AssertionError(f"two completions of {y} in coset {tuple(label)}")
            if found is None:
                found, position = x, p + 1
    if found is None:
        raise DecodeFailure(f"no word in coset {tuple(label)} yields {y} by one deletion")
    return VtDecodeResult(found, position, symbol)


def single_deletion_ball(x: Sequence[int]) -> set[tuple[int, ...]]:
    x = tuple(x)
    return {x[:p] + x[p + 1 :] for p in range(len(x))}


def vt_decode_bruteforce(y: Sequence[int], m: int, q: int, label: VtLabel) -> VtDecodeResult:
    """Reference decoder: scan all of ``{0..q-1}^m``.  Only for small ``q**m``."""
    if q**m > limits.MAX_VT_WORDS:
        raise EnumerationRefused(f"q**m = {q**m} exceeds {limits.MAX_VT_WORDS}")
    y = tuple(y)
    hits = [
        x
        for x in itertools.product(range(q), repeat=m)
        if vt_label(x, q) == tuple(label) and y in single_deletion_ball(x)
    ]
    if not hits:
        raise DecodeFailure(f"no word in coset {tuple(label)} yields {y} by one deletion")
    if len(hits) > 1:
        raise AssertionError(f"coset {tuple(label)} has {len(hits)} completions of {y}")
    x = hits[0]
    position = next(p + 1 for p in range(m) if x[:p] + x[p + 1 :] == y)
    return VtDecodeResult(x, position, x[position - 1])


class CosetCensus(NamedTuple):
    m: int
    q: int
    sizes: dict[VtLabel, int]

    @property
    def total(self) -> int:
        return sum(self.sizes.values())

    @property
    def largest(self) -> tuple[VtLabel, int]:
        return max(self.sizes.items(), key=lambda kv: (kv[1], -kv[0].a, -kv[0].b))

    @property
    def pigeonhole_bound(self) -> float:
        return self.q**self.m / (self.q * self.m)


def vt_coset_census(m: int, q: int) -> CosetCensus:
    """Count words per label over all of ``{0..q-1}^m``.  Empty cosets are listed with 0."""
    if m < 1 or q < 2:
        raise InputError(f"need m >= 1 and q >= 2, got m={m}, q={q}")
    if q**m > limits.MAX_VT_WORDS:
        raise EnumerationRefused(f"q**m = {q**m} exceeds {limits.MAX_VT_WORDS}")
    counts = Counter(vt_label(x, q) for x in itertools.product(range(q), repeat=m))
    sizes = {VtLabel(a, b): counts.get(VtLabel(a, b), 0) for a in range(m) for b in range(q)}
    return CosetCensus(m, q, sizes)
