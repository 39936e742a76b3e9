import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from crisscross.errors import DecodeFailure, EnumerationRefused, InputError
from crisscross.vt import (
    VtLabel,
    signature,
    single_deletion_ball,
    vt_coset_census,
    vt_decode_bruteforce,
    vt_decode_deletion,
    vt_label,
)


@pytest.mark.parametrize(
    "x, q, sig, label",
    [
        ((2, 0, 3, 3), 4, (1, 0, 1, 1), (1, 0)),
        ((0, 0, 0, 0), 4, (1, 1, 1, 1), (2, 0)),
        ((1, 0), 2, (1, 0), (0, 1)),
    ],
)
def test_signature_and_label_examples(x, q, sig, label):
    assert signature(x) == sig
    assert vt_label(x, q) == label


def test_label_rejects_bad_symbols():
    with pytest.raises(InputError):
        vt_label((0, 3), 3)
    with pytest.raises(InputError):
        vt_label((), 3)


def test_decode_examples():
    assert vt_decode_deletion((0, 1, 0), 4, 3, VtLabel(1, 0)) == ((0, 2, 1, 0), 2, 2)
    assert vt_decode_deletion((0, 0, 0), 4, 2, VtLabel(2, 0)) == ((0, 0, 0, 0), 1, 0)


def test_decode_without_completion():
    # frozen from exhaustive search: (2,2,2) has no completion in these cosets
    for label in [(0, 2), (1, 2), (3, 2)]:
        with pytest.raises(DecodeFailure):
            vt_decode_deletion((2, 2, 2), 4, 3, VtLabel(*label))
        with pytest.raises(DecodeFailure):
            vt_decode_bruteforce((2, 2, 2), 4, 3, VtLabel(*label))


def test_decode_input_errors():
    with pytest.raises(InputError):
        vt_decode_deletion((0, 1), 4, 3, VtLabel(0, 0))
    with pytest.raises(InputError):
        vt_decode_deletion((0, 1, 0), 4, 3, VtLabel(4, 0))


@pytest.mark.parametrize("m, q", [(3, 2), (4, 3), (5, 2), (4, 4)])
def test_fast_decoder_matches_bruteforce(m, q):
    for y in itertools.product(range(q), repeat=m - 1):
        for a in range(m):
            for b in range(q):
                label = VtLabel(a, b)
                try:
                    ref = vt_decode_bruteforce(y, m, q, label)
                except DecodeFailure:
                    with pytest.raises(DecodeFailure):
                        vt_decode_deletion(y, m, q, label)
                    continue
                assert vt_decode_deletion(y, m, q, label) == ref


@given(st.integers(2, 9), st.integers(2, 8), st.data())
def test_exact_position_when_adjacent_distinct(m, q, data):
    x = [data.draw(st.integers(0, q - 1))]
    for _ in range(m - 1):
        x.append(data.draw(st.integers(0, q - 1).filter(lambda s, prev=x[-1]: s != prev)))
    p = data.draw(st.integers(1, m))
    y = x[: p - 1] + x[p:]
    res = vt_decode_deletion(y, m, q, vt_label(x, q))
    assert res == (tuple(x), p, x[p - 1])


@given(st.integers(2, 9), st.integers(2, 5), st.data())
def test_run_position_is_smallest(m, q, data):
    x = data.draw(st.lists(st.integers(0, q - 1), min_size=m, max_size=m))
    p = data.draw(st.integers(1, m))
    y = x[: p - 1] + x[p:]
    res = vt_decode_deletion(y, m, q, vt_label(x, q))
    assert res.word == tuple(x)
    start = p
    while start > 1 and x[start - 2] == x[p - 1]:
        start -= 1
    assert res.position == start


def test_census_examples():
    small = vt_coset_census(2, 2)
    assert small.total == 4
    big = vt_coset_census(6, 4)
    assert big.total == 4**6
    label, size = big.largest
    assert size >= 171 > big.pigeonhole_bound
    # frozen from the exhaustive census
    assert (label, size) == (VtLabel(3, 0), 178)


def test_census_guard():
    with pytest.raises(EnumerationRefused):
        vt_coset_census(13, 4)


def test_every_coset_corrects_one_deletion_m4_q3():
    census = vt_coset_census(4, 3)
    words = {}
    for x in itertools.product(range(3), repeat=4):
        words.setdefault(vt_label(x, 3), []).append(x)
    assert {k: len(v) for k, v in words.items()} == {k: v for k, v in census.sizes.items() if v}
    for members in words.values():
        for x, y in itertools.combinations(members, 2):
            assert single_deletion_ball(x).isdisjoint(single_deletion_ball(y))
