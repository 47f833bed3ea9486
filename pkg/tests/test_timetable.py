from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import random_orientation, scrambled
from irrsched.samples import EXAMPLE_8_5
from irrsched.timetable import (
    AWAY,
    HOME,
    UNCOLORED,
    DuplicatePairing,
    RangeError,
    RoundClash,
    Timetable,
    home_status,
    imbalance,
    new_timetable,
    opponent,
    team_deltas,
    total_delta,
    validate,
)


def test_fix8_is_valid(fix8):
    assert validate(fix8).feasible
    assert (fix8.n, fix8.r) == (8, 5)


def test_single_matching():
    t = new_timetable(4, 1, [(0, 0, 1), (0, 2, 3)])
    assert validate(t).feasible


def test_team_playing_twice_in_a_round():
    with pytest.raises(RoundClash):
        new_timetable(4, 1, [(0, 0, 1), (0, 1, 2)])


def test_idle_team_rejected_unless_lenient():
    with pytest.raises(RoundClash):
        new_timetable(4, 1, [(0, 0, 1)])
    t = new_timetable(4, 1, [(0, 0, 1)], strict=False)
    rep = validate(t)
    assert not rep.c2
    assert {(v.team, v.round) for v in rep.violations if v.constraint == "C2"} >= {(3, 0), (2, 0)}


def test_duplicate_pairing():
    with pytest.raises(DuplicatePairing):
        new_timetable(6, 2, [(0, 0, 1), (0, 2, 3), (0, 4, 5), (1, 1, 0), (1, 2, 4), (1, 3, 5)])


@pytest.mark.parametrize("n,r", [(5, 1), (4, 3), (6, 0)])
def test_range_errors(n, r):
    with pytest.raises(RangeError):
        new_timetable(n, r, [])


def test_opponents_from_table(fix8):
    # ids in the table are 1-based
    assert opponent(fix8, 0, 0) == 2
    assert opponent(fix8, 4, 4) == 2


def test_statuses_from_table(fix8):
    assert home_status(fix8, 0, 0) == AWAY
    assert home_status(fix8, 0, 2) == HOME
    assert home_status(fix8, 2, 0) == HOME


def test_fix8_deltas_counted_from_table(fix8):
    homes = [0] * 8
    for col in EXAMPLE_8_5:
        for tok in col:
            homes[int(tok.split("-")[0]) - 1] += 1
    expected = [2 * h - 5 for h in homes]
    assert team_deltas(fix8) == expected
    plus = {i + 1 for i, d in enumerate(expected) if d == 1}
    assert plus == {1, 2, 5, 7}
    assert imbalance(fix8).total_delta == 0


def test_double_home_counts_two():
    t = new_timetable(4, 2, [(0, 0, 1), (0, 2, 3), (1, 0, 2), (1, 1, 3)])
    rep = imbalance(t)
    assert rep.delta_per_team[0] == 2
    assert rep.total_delta == 4
    assert not validate(t).c3


def test_flipping_one_game_stays_balanced_for_odd_r(fix8):
    t = fix8.copy()
    t.flip(0, 5)
    assert team_deltas(t)[0] == -1 and team_deltas(t)[5] == 1
    assert validate(t).feasible


def test_table_round_trip(fix8):
    assert Timetable.from_table(8, fix8.to_table()) == fix8


def test_games_and_colors_agree(fix8):
    for s, h, a in fix8.games():
        assert fix8.color[h][a] == fix8.color[a][h] == s
    assert sum(1 for i in range(8) for j in range(8) if i != j and fix8.color[i][j] == UNCOLORED) == 8 * 2


def test_copy_is_independent(fix8):
    t = fix8.copy()
    t.flip(0, 2)
    assert t != fix8 and fix8 == Timetable.from_table(8, EXAMPLE_8_5)


def test_rollback_restores_state(fix8):
    t = fix8.copy()
    t.begin()
    t.flip(0, 2)
    t.unplay(4, 5)
    t.rollback()
    assert t == fix8


def _delta_rule(deltas, r):
    if r % 2 == 0:
        return sum(abs(d) for d in deltas)
    return sum(abs(d) for d in deltas if abs(d) > 1)


@settings(max_examples=60, deadline=None)
@given(n=st.sampled_from([4, 6, 8, 10]), data=st.data(), seed=st.integers(0, 10**6))
def test_random_orientation_invariants(n, data, seed):
    r = data.draw(st.integers(1, n - 2))
    t = random_orientation(n, r, seed)
    d = team_deltas(t)
    assert sum(d) == 0
    assert total_delta(d, r) == _delta_rule(d, r)
    if r % 2 == 0:
        assert total_delta(d, r) % 4 == 0
    rep = validate(t)
    assert rep.c1 and rep.c2
    assert rep.feasible == (imbalance(t).total_delta == 0)


@settings(max_examples=40, deadline=None)
@given(n=st.sampled_from([4, 6, 8, 10]), data=st.data(), seed=st.integers(0, 10**6))
def test_rounds_are_disjoint_perfect_matchings(n, data, seed):
    r = data.draw(st.integers(1, n - 2))
    t = scrambled(n, r, seed, steps=5)
    seen = set()
    for s in range(r):
        edges = t.round_edges(s)
        assert sorted(v for e in edges for v in e) == list(range(n))
        for e in edges:
            key = tuple(sorted(e))
            assert key not in seen
            seen.add(key)
        for i in range(n):
            assert opponent(t, opponent(t, i, s), s) == i
            assert home_status(t, i, s) != home_status(t, opponent(t, i, s), s)


def test_nested_journals(fix8):
    t = fix8.copy()
    t.begin()
    t.flip(0, 2)
    t.begin()
    t.flip(4, 5)
    inner = t.end()
    assert inner  # inner changes are returned and kept by the outer journal
    t.begin()
    t.flip(1, 6)
    t.rollback()  # drops only the innermost journal
    assert t.home[1] == fix8.home[1]
    outer = t.end()
    assert t.home[4] != fix8.home[4]
    t.rollback(outer)
    assert t == fix8
