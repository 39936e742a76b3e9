import io
import json

import pytest

from crisscross import channel
from crisscross.analysis import column_choice_fractions
from crisscross.code import CodeParams, is_codeword, sample_codeword
from crisscross.decoder import decode
from crisscross.errors import AmbiguousDecoding, EnumerationRefused, InputError
from crisscross.grid import BitGrid, delete_cross, parse_grid
from crisscross.verify import (
    VerificationResult,
    completion_search,
    emit_jsonl,
    verify_ball_bound,
    verify_code,
    verify_column_choice,
    verify_counts,
    verify_delpattern,
    verify_equivalence,
    verify_equivalence_sampled,
    verify_t_equivalence,
    verify_vt,
)


def test_record_format():
    r = VerificationResult("s", {"m": 2}, False, {"X": "1 1\n0\n"}, {"k": 1})
    assert json.loads(r.to_json()) == {
        "statement": "s",
        "scope": {"m": 2},
        "passed": False,
        "witness": {"X": "1 1\n0\n"},
        "details": {"k": 1},
    }
    buf = io.StringIO()
    emit_jsonl([r, r], buf)
    assert buf.getvalue().count("\n") == 2


def test_equivalence_m2():
    results = verify_equivalence(2)
    assert [r.statement_id for r in results] == [
        "row-equivalence",
        "column-equivalence",
        "deletion-insertion-equivalence",
        "mixed-equivalence",
    ]
    assert all(r.passed for r in results)
    assert results[2].details["pairs"] == 256


def test_equivalence_guard():
    with pytest.raises(EnumerationRefused):
        verify_equivalence(4)
    with pytest.raises(EnumerationRefused):
        verify_equivalence_sampled(5, 10)


def test_planted_counterexample_is_caught():
    def broken(grid, t_r=1, t_c=1):
        ball = sorted(channel.insertion_ball(grid, t_r, t_c), key=BitGrid.to_int)
        return frozenset(ball[:1])

    results = verify_equivalence(2, insertion_ball=broken)
    failed = [r for r in results if not r.passed]
    assert failed
    for r in failed:
        w = r.counterexample
        assert w is not None
        x, y = parse_grid(w["X"]), parse_grid(w["Y"])
        # re-check the witness against the real balls
        if r.statement_id == "mixed-equivalence":
            real = channel.balls_intersect(x, y, "deletion", 1, 0, y_t=(0, 1))
        else:
            t = {"row-equivalence": (1, 0), "column-equivalence": (0, 1), "deletion-insertion-equivalence": (1, 1)}[r.statement_id]
            real = channel.balls_intersect(x, y, "deletion", *t)
        assert real == w["deletion_balls_meet"] != w["insertion_balls_meet"]


def test_t_equivalence_examples():
    r = verify_t_equivalence(4, 2, 200, seed=3)
    assert r.passed and r.details["intersecting"] > 0 and r.details["disjoint"] > 0
    x = BitGrid.from_lists([[0, 1, 1, 0], [1, 0, 0, 1], [0, 0, 1, 1], [1, 1, 0, 0]])
    assert channel.balls_intersect(x, x, "deletion", 2, 2)
    assert channel.balls_intersect(x, x, "insertion", 2, 2)
    z, o = BitGrid.zeros(4, 4), BitGrid.from_lists([[1] * 4] * 4)
    assert not channel.balls_intersect(z, o, "deletion", 2, 2)
    assert not channel.balls_intersect(z, o, "insertion", 2, 2)
    with pytest.raises(InputError):
        verify_t_equivalence(2, 2, 10)


def test_sampled_runs_are_reproducible():
    assert verify_t_equivalence(4, 2, 50, seed=9).to_json() == verify_t_equivalence(4, 2, 50, seed=9).to_json()
    assert verify_delpattern(5, 200, seed=4).to_json() == verify_delpattern(5, 200, seed=4).to_json()


def test_delpattern_small():
    r = verify_delpattern(3)
    assert r.passed and r.scope["arrays"] == 512
    assert verify_delpattern(5, 500, seed=1).passed
    with pytest.raises(EnumerationRefused):
        verify_delpattern(5)


def test_ball_bound_small():
    r = verify_ball_bound(3)
    assert r.passed
    assert verify_ball_bound(6, 2000, seed=2).passed


def test_column_choice_witness_rechecks():
    r = verify_column_choice(5)
    assert not r.passed
    left = int(r.counterexample["left_column"], 2)
    assert column_choice_fractions(5)[left] == r.counterexample["bad_fraction"] > r.details["bound"]


def test_vt_suite():
    r = verify_vt(4, 3)
    assert r.passed and r.details["largest_coset"] >= 81 / 12
    s = verify_vt(5, 2, coset_samples=4, seed=1)
    assert s.passed and s.scope["cosets"] == 4


def test_counts_suite_small_cap():
    r = verify_counts(max_states_log2=12)
    assert r.passed
    assert r.details["scr"] == {2: 10, 3: 322, 4: 46090}
    assert r.details["chain_4(l-1)>=2^l_holds_for_l_in_0..10"] == [2, 3]


def test_completion_search_finds_source():
    x, params = sample_codeword(8, 1)
    for i, j in [(1, 1), (8, 8), (4, 6)]:
        survivors = completion_search(delete_cross(x, i, j), params)
        assert [g for g, _, _ in survivors] == [x]
    with pytest.raises(InputError):
        completion_search(BitGrid.zeros(8, 8), params)


def test_completion_search_empty_for_wrong_params():
    x, params = sample_codeword(8, 1)
    wrong = CodeParams(8, (params.a + 1) % 8, params.b, params.c, params.d)
    assert completion_search(delete_cross(x, 2, 2), wrong) == []


def test_verify_code_small_run_and_witness():
    r = verify_code(8, 10, seed=3, pair_checks=3, oracle_cases=5)
    d = r.details
    assert d["oracle_mismatches"] == 0 and d["oracle_checked"] == 5
    # every round-trip failure is an ambiguity, never a wrong answer
    assert d["round_trip_failures"] == d["ambiguous_cases"]
    if not r.passed:
        w = r.counterexample
        params = CodeParams.from_text(w["params"])
        x = parse_grid(w["codeword"])
        received = delete_cross(x, w["row"], w["col"])
        with pytest.raises(AmbiguousDecoding):
            decode(received, params)
        other = parse_grid(w["other_codeword"])
        assert other != x and is_codeword(other, params)
        assert delete_cross(other, w["other_row"], w["other_col"]) == received


def test_verify_code_range():
    with pytest.raises(InputError):
        verify_code(32, 1)
