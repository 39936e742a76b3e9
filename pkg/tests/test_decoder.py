import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from crisscross.channel import deletion_ball
from crisscross.code import CodeParams, is_codeword, sample_codeword
from crisscross.decoder import LAST_COL_DELETED, ROW_DELETED_IN_U, U_INTACT, classify, decode
from crisscross.errors import AmbiguousDecoding, DecodeFailure, InputError
from crisscross.grid import BitGrid, delete_cross
from crisscross.verify import completion_search


def G(text):
    return BitGrid.from_lists([[int(c) for c in row] for row in text.split("|")])


def _with_last_column(bits, n=8):
    rows = [[0] * (n - 2) + [b] for b in bits]
    return BitGrid.from_lists(rows)


def test_classify_examples():
    assert classify(_with_last_column([0, 1, 0, 1, 0, 1, 0]), 8).kind == U_INTACT
    assert classify(_with_last_column([0, 0, 1, 0, 1, 0, 0]), 8) == (ROW_DELETED_IN_U, 2)
    assert classify(_with_last_column([1, 0, 1, 0, 0, 0, 0]), 8) == (ROW_DELETED_IN_U, 1)
    assert classify(_with_last_column([0, 0, 0, 1, 1, 0, 1]), 8).kind == LAST_COL_DELETED


def test_classify_rejects_bad_shapes():
    with pytest.raises(InputError):
        classify(BitGrid.zeros(8, 8), 8)
    with pytest.raises(InputError):
        classify(BitGrid.zeros(5, 5), 6)


@pytest.mark.parametrize("seed", [1, 2, 3, 4])
def test_parity_row_and_column(seed):
    x, params = sample_codeword(8, seed)
    y, trace = decode(delete_cross(x, 8, 1), params)
    assert y == x
    assert (trace.case_taken, trace.row_index, trace.col_index) == ("1b", 8, 1)
    assert trace.hypothesis_notes == ("parity_row_deleted", "parity_col_deleted")


@pytest.mark.parametrize("seed", [1, 2, 3, 4])
def test_last_column_path(seed):
    x, params = sample_codeword(8, seed)
    y, trace = decode(delete_cross(x, 3, 8), params)
    assert y == x and trace.case_taken == "2" and (trace.row_index, trace.col_index) == (3, 8)


@pytest.mark.parametrize("seed", [1, 2, 3, 4])
def test_full_round_trip_on_clean_seeds(seed):
    x, params = sample_codeword(8, seed)
    for i in range(1, 9):
        for j in range(1, 9):
            y, trace = decode(delete_cross(x, i, j), params)
            assert y == x
            assert delete_cross(y, trace.row_index, trace.col_index) == delete_cross(x, i, j)


def test_classification_soundness():
    n, ell = 8, 3
    for seed in range(20):
        x, _ = sample_codeword(n, seed)
        for i in range(1, n + 1):
            for j in range(1, n + 1):
                case = classify(delete_cross(x, i, j), n)
                assert (case.kind == LAST_COL_DELETED) == (j == n)
                if case.kind == ROW_DELETED_IN_U:
                    # the reported row carries the same top band as the true one
                    assert delete_cross(x, case.row, j).rows[:ell] == delete_cross(x, i, j).rows[:ell]
                elif case.kind == U_INTACT:
                    assert i >= ell + 1


def test_wrong_params_fail():
    x, params = sample_codeword(8, 1)
    wrong = CodeParams(8, (params.a + 1) % 8, params.b, params.c, params.d)
    with pytest.raises(DecodeFailure):
        decode(delete_cross(x, 4, 4), wrong)
    with pytest.raises(InputError):
        decode(BitGrid.zeros(6, 6), params)


# Two codewords of one coset whose deletion balls meet.  Found by sampling,
# confirmed with full ball enumeration and the completion-search oracle.
AMBIGUOUS = [
    (
        CodeParams(8, 3, 0, 4, 5),
        G("00001100|01100001|00100100|00111001|11111100|01100110|10010011|01111001"),
        (8, 7),
        G("00001100|01100001|00100100|00111001|11111100|01100110|01111011|10010001"),
        (7, 7),
    ),
    (
        CodeParams(8, 6, 7, 4, 0),
        G("01111100|01101001|10100100|11111001|11010001|00100100|11101011|01010110"),
        (5, 1),
        G("01111100|01101001|10100100|11010001|11111001|00100100|11101011|01010110"),
        (4, 1),
    ),
]


@pytest.mark.parametrize("params, y, dy, x, dx", AMBIGUOUS)
def test_ambiguous_witnesses(params, y, dy, x, dx):
    assert x != y and is_codeword(x, params) and is_codeword(y, params)
    received = delete_cross(y, *dy)
    assert received == delete_cross(x, *dx)
    assert received in deletion_ball(x) and received in deletion_ball(y)
    assert {g for g, _, _ in completion_search(received, params)} == {x, y}
    with pytest.raises(AmbiguousDecoding) as info:
        decode(received, params)
    assert {c[0] for c in info.value.candidates} == {x, y}


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 8), st.integers(1, 8))
def test_decode_returns_source_or_reports_it(seed, i, j):
    x, params = sample_codeword(8, seed)
    received = delete_cross(x, i, j)
    try:
        y, trace = decode(received, params)
    except AmbiguousDecoding as exc:
        assert x in {c[0] for c in exc.candidates}
        for cand, ci, cj in exc.candidates:
            assert is_codeword(cand, params) and delete_cross(cand, ci, cj) == received
        return
    assert y == x
    assert is_codeword(y, params) and delete_cross(y, trace.row_index, trace.col_index) == received


@settings(max_examples=5, deadline=None)
@given(st.integers(0, 2**32 - 1), st.integers(1, 16), st.integers(1, 16))
def test_decode_n16(seed, i, j):
    x, params = sample_codeword(16, seed)
    received = delete_cross(x, i, j)
    try:
        assert decode(received, params)[0] == x
    except AmbiguousDecoding as exc:
        assert x in {c[0] for c in exc.candidates}


def test_decode_is_deterministic():
    x, params = sample_codeword(16, 2)
    received = delete_cross(x, 9, 5)
    assert decode(received, params) == decode(received, params)
