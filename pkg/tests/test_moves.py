from __future__ import annotations

import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from helpers import permuted, random_orientation, scrambled
from irrsched import moves as mv
from irrsched.cycles import DirectedPath, NoCycle, all_balanced_cycles, bichromatic_cycles, find_balanced_cycle
from irrsched.timetable import UNCOLORED, Timetable, team_deltas, total_delta, validate


def table(*rounds):
    return Timetable.from_table(8, [r.split() for r in rounds])


def games_of(t):
    return {(s, h, a) for s, h, a in t.games()}


# -- worked examples on the 8-team fixture --------------------------------------
def test_round_swap_example(fix8):
    out = mv.round_swap(fix8, 1, 2)
    assert out.timetable == table(
        "3-1 4-5 7-2 8-6",
        "1-4 3-2 5-8 6-7",
        "2-1 4-3 5-6 8-7",
        "1-8 2-5 6-4 7-3",
        "1-6 2-8 5-3 7-4",
    )
    assert out.touched_rounds == {1, 2} and out.touched_teams == set(range(8))
    assert not out.new_pairings and not out.dropped_pairings


def test_partial_round_swap_example(fix8):
    out = mv.partial_round_swap(fix8, 1, 2, cycle=[4, 5, 6, 7])
    assert out.timetable == table(
        "3-1 4-5 7-2 8-6",
        "2-1 4-3 5-8 6-7",
        "1-4 3-2 5-6 8-7",
        "1-8 2-5 6-4 7-3",
        "1-6 2-8 5-3 7-4",
    )
    assert out.touched_teams == {4, 5, 6, 7}


def test_partial_round_swap_rejects_non_cycle(fix8):
    with pytest.raises(mv.NotACycle):
        mv.partial_round_swap(fix8, 1, 2, cycle=[0, 1, 4, 5])


def test_team_swap_example(fix8):
    out = mv.team_swap(fix8, 0, 3)
    assert out.timetable == table(
        "1-5 3-4 7-2 8-6",
        "1-3 2-4 5-6 8-7",
        "3-2 4-1 5-8 6-7",
        "2-5 4-8 6-1 7-3",
        "2-8 4-6 5-3 7-1",
    )
    assert out.relabel == (0, 3)
    assert out.timetable == permuted(fix8, [3, 1, 2, 0, 4, 5, 6, 7])


def test_cycle_reversal_example(fix8):
    out = mv.cycle_reversal(fix8, [0, 1, 2, 3, 5])
    assert out.timetable == table(
        "3-1 4-5 7-2 8-6",
        "1-2 3-4 5-6 8-7",
        "1-4 2-3 5-8 6-7",
        "1-8 2-5 4-6 7-3",
        "2-8 5-3 6-1 7-4",
    )
    assert team_deltas(out.timetable) == team_deltas(fix8)
    assert out.touched_teams == {0, 1, 2, 3, 5}


def test_cycle_reversal_rejects_undirected_cycle(fix8):
    with pytest.raises(mv.NotACycle):
        mv.cycle_reversal(fix8, [0, 5, 3, 2, 1])


def test_path_reversal_rejects_non_path(fix8):
    with pytest.raises(mv.NotAPath):
        mv.path_reversal(fix8, [2, 0])


def test_same_round_and_team_errors(fix8):
    with pytest.raises(mv.SameRound):
        mv.round_swap(fix8, 2, 2)
    with pytest.raises(mv.SameTeam):
        mv.team_swap(fix8, 4, 4)


def test_colorful_lantern_swap(fix8):
    expected = table(
        "2-1 4-5 7-3 8-6",
        "1-8 4-3 5-6 7-2",
        "1-4 3-2 5-8 6-7",
        "2-5 3-1 6-4 8-7",
        "1-6 2-8 5-3 7-4",
    )
    for s in (0, 1, 3):
        out = mv.ipts(fix8, 0, 6, s)
        assert out.details["lantern"].kind is mv.LanternKind.COLORFUL_CHORDLESS
        assert out.details["paths"] == []
        assert out.timetable == expected
        assert not out.new_pairings and not out.dropped_pairings


def test_incomplete_lantern_swap_with_repair(fix8):
    out = mv.ipts(fix8, 0, 3, 1)
    assert out.timetable == table(
        "1-5 4-3 7-2 8-6",
        "2-4 3-1 5-6 8-7",
        "3-2 4-1 5-8 6-7",
        "1-8 2-5 6-4 7-3",
        "1-6 2-8 5-3 7-4",
    )
    lan = out.details["lantern"]
    assert lan.kind is mv.LanternKind.INCOMPLETE and lan.W == {1, 2, 4}
    assert out.details["paths"] == [DirectedPath((3, 0))]
    assert out.new_pairings == {(0, 4), (1, 3)} and out.dropped_pairings == {(0, 1), (3, 4)}


def test_lantern_on_meeting_round_is_rejected(fix8):
    assert mv.ipts(fix8, 0, 2, 0) is None
    with pytest.raises(mv.DegenerateChain):
        mv.build_lantern(fix8, 0, 2, 0)


def test_balanced_alternating_swap_example(fix8):
    out = mv.iprs_b(fix8, 1, cycle=[0, 1, 5, 4])
    assert out.timetable == table(
        "3-1 4-5 7-2 8-6",
        "2-6 4-3 5-1 8-7",
        "1-4 3-2 5-8 6-7",
        "1-8 2-5 6-4 7-3",
        "1-6 2-8 5-3 7-4",
    )
    assert out.touched_rounds == {1}
    assert [row[1] for row in out.timetable.home] == [row[1] for row in fix8.home]


def test_unbalanced_alternating_swap_example(fix8):
    base = mv.path_reversal(fix8, DirectedPath((7, 4, 3, 6))).timetable
    homes = {frozenset((1, 3)): 3, frozenset((0, 6)): 0}
    cycle = [6, 7, 2, 3, 1, 0]
    mid = mv.iprs_u(base, 1, cycle=cycle, homes=homes, repair=[]).timetable
    assert mid == table(
        "3-1 5-4 7-2 8-6",
        "1-7 4-2 5-6 8-3",
        "1-4 3-2 6-7 8-5",
        "1-8 2-5 6-4 7-3",
        "1-6 2-8 4-7 5-3",
    )
    d = team_deltas(mid)
    assert d == [3, -1, -1, -1, 1, -1, -1, 1] and total_delta(d, 5) == 3
    out = mv.iprs_u(base, 1, cycle=cycle, homes=homes, repair=[[1, 6, 5, 7, 0]])
    assert out.timetable == table(
        "2-7 3-1 5-4 6-8",
        "1-7 4-2 5-6 8-3",
        "1-4 3-2 7-6 8-5",
        "2-5 6-4 7-3 8-1",
        "1-6 2-8 4-7 5-3",
    )
    assert validate(out.timetable).feasible
    # the automatic repair must also end balanced, whatever path it picks
    auto = mv.iprs_u(base, 1, random.Random(0), cycle=cycle, homes=homes)
    assert validate(auto.timetable).feasible
    assert auto.details["w_minus"] or auto.details["w_plus"]


# -- involutions and undo ---------------------------------------------------------
def test_round_swap_twice_is_identity(fix8):
    assert mv.round_swap(mv.round_swap(fix8, 0, 4).timetable, 0, 4).timetable == fix8


def test_team_swap_twice_is_identity(fix8):
    assert mv.team_swap(mv.team_swap(fix8, 2, 6).timetable, 2, 6).timetable == fix8


def test_cycle_reversal_twice_is_identity(fix8):
    once = mv.cycle_reversal(fix8, [0, 1, 2, 3, 5]).timetable
    back = mv.cycle_reversal(once, [0, 5, 3, 2, 1]).timetable
    assert back == fix8


def test_undo_of_in_place_move(fix8):
    t = fix8.copy()
    out = mv.ipts(t, 0, 3, 1, inplace=True)
    assert t != fix8
    out.undo()
    assert t == fix8


def test_copying_moves_leave_input_alone(fix8):
    snapshot = fix8.copy()
    mv.ipts(fix8, 0, 3, 1)
    mv.iprs_u(fix8, 2, random.Random(1))
    assert fix8 == snapshot


# -- restore_balance --------------------------------------------------------------
def test_restore_balance_steps_down():
    t = random_orientation(10, 6, seed=4)
    hist: list = []
    fixed = mv.restore_balance(t, random.Random(0), history=hist)
    assert hist[0] == total_delta(team_deltas(t), 6) and hist[-1] == 0
    # each reversed path moves two units at each end
    assert all(a - b == 4 for a, b in zip(hist, hist[1:]))
    assert validate(fixed).feasible and fixed.color == t.color


@settings(max_examples=50, deadline=None)
@given(n=st.sampled_from([4, 6, 8, 10, 12]), data=st.data(), seed=st.integers(0, 10**6))
def test_restore_balance_keeps_coloring(n, data, seed):
    r = data.draw(st.integers(1, n - 2))
    t = random_orientation(n, r, seed)
    hist: list = []
    fixed = mv.restore_balance(t, random.Random(seed), history=hist)
    assert fixed.color == t.color and validate(fixed).feasible
    assert hist == sorted(hist, reverse=True) and hist[-1] == 0


# -- properties over random feasible timetables -----------------------------------
def _random_move(t, rng, name):
    n, r = t.n, t.r
    if name == "RS":
        return mv.round_swap(t, *rng.sample(range(r), 2))
    if name == "PRS":
        return mv.partial_round_swap(t, *rng.sample(range(r), 2), rng)
    if name == "TS":
        return mv.team_swap(t, *rng.sample(range(n), 2))
    if name == "CR":
        try:
            return mv.cycle_reversal(t, find_balanced_cycle(t, rng))
        except NoCycle:
            return None
    i, j = rng.sample(range(n), 2)
    s = rng.randrange(r)
    if name == "iPTS":
        return mv.ipts(t, i, j, s, rng)
    if name == "iPTS-CR":
        return mv.ipts_cr(t, i, j, s, rng)
    if name == "iPRS-B":
        return mv.iprs_b(t, s, rng)
    return mv.iprs_u(t, s, rng)


_NAMES = ["RS", "PRS", "TS", "CR", "iPTS", "iPTS-CR", "iPRS-B", "iPRS-U"]


def _diff(a, b):
    rounds, teams = set(), set()
    for i in range(a.n):
        for s in range(a.r):
            if a.opp[i][s] != b.opp[i][s] or a.home[i][s] != b.home[i][s]:
                rounds.add(s)
                teams.add(i)
    return rounds, teams


def _pairings(t):
    return {(i, j) for i in range(t.n) for j in range(i + 1, t.n) if t.color[i][j] != UNCOLORED}


@settings(max_examples=120, deadline=None)
@given(
    n=st.sampled_from([4, 6, 8, 10, 12]),
    data=st.data(),
    seed=st.integers(0, 10**6),
    name=st.sampled_from(_NAMES),
)
def test_moves_keep_feasibility_and_report_exact_changes(n, data, seed, name):
    r = data.draw(st.integers(2, n - 2)) if n > 4 else 2
    t = scrambled(n, r, seed, steps=3)
    snapshot = t.copy()
    out = _random_move(t, random.Random(seed), name)
    assert t == snapshot
    if out is None:
        return
    u = out.timetable
    assert validate(u).feasible
    rounds, teams = _diff(t, u)
    assert out.touched_rounds == rounds and out.touched_teams == teams
    before, after = _pairings(t), _pairings(u)
    assert out.new_pairings == after - before and out.dropped_pairings == before - after


@settings(max_examples=60, deadline=None)
@given(n=st.sampled_from([4, 6, 8, 10]), data=st.data(), seed=st.integers(0, 10**6))
def test_base_moves_keep_the_pairing_graph_up_to_relabeling(n, data, seed):
    r = data.draw(st.integers(2, n - 2)) if n > 4 else 2
    t = scrambled(n, r, seed, steps=3)
    rng = random.Random(seed)
    name = data.draw(st.sampled_from(["RS", "PRS", "TS", "CR"]))
    out = _random_move(t, rng, name)
    if out is None:
        return
    if name == "TS":
        i, j = out.relabel
        perm = list(range(n))
        perm[i], perm[j] = j, i
        assert out.timetable == permuted(t, perm)
    else:
        assert _pairings(out.timetable) == _pairings(t)


@settings(max_examples=80, deadline=None)
@given(n=st.sampled_from([6, 8, 10, 12]), data=st.data(), seed=st.integers(0, 10**6))
def test_lantern_swap_changes_two_pairings_or_none(n, data, seed):
    r = data.draw(st.integers(2, n - 2))
    t = scrambled(n, r, seed, steps=3)
    i, j = data.draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=2, unique=True))
    s = data.draw(st.integers(0, r - 1))
    out = mv.ipts(t, i, j, s, random.Random(seed))
    if out is None:
        assert s == t.color[i][j]
        return
    lan = out.details["lantern"]
    k = 0 if lan.kind is mv.LanternKind.COLORFUL_CHORDLESS else 2
    assert len(out.new_pairings) == len(out.dropped_pairings) == k
    # middle teams keep their home count unless a repair path ends there
    ends = {x for p in out.details["paths"] for x in (p.vertices[0], p.vertices[-1])}
    for w in lan.W - ends:
        assert sum(out.timetable.home[w]) == sum(t.home[w])


@settings(max_examples=80, deadline=None)
@given(n=st.sampled_from([6, 8, 10, 12]), data=st.data(), seed=st.integers(0, 10**6))
def test_alternating_swap_changes_half_the_cycle(n, data, seed):
    r = data.draw(st.integers(1, n - 3))
    t = scrambled(n, r, seed, steps=3)
    s = data.draw(st.integers(0, r - 1))
    out = mv.iprs_u(t, s, random.Random(seed))
    k = len(out.details["cycle"].vertices) // 2
    assert len(out.new_pairings) == len(out.dropped_pairings) == k
    assert all(t.color[a][b] == s for a, b in out.dropped_pairings)
    assert all(out.timetable.color[a][b] == s for a, b in out.new_pairings)


@settings(max_examples=80, deadline=None)
@given(n=st.sampled_from([6, 8, 10, 12]), data=st.data(), seed=st.integers(0, 10**6))
def test_balanced_alternating_swap_keeps_round_statuses(n, data, seed):
    r = data.draw(st.integers(1, n - 3))
    t = scrambled(n, r, seed, steps=3)
    s = data.draw(st.integers(0, r - 1))
    out = mv.iprs_b(t, s, random.Random(seed))
    if out is None:
        return
    assert out.touched_rounds <= {s}
    assert out.timetable.home == t.home


@settings(max_examples=120, deadline=None)
@given(n=st.sampled_from([6, 8, 10, 12]), data=st.data(), seed=st.integers(0, 10**6))
def test_internal_cycles_restore_paired_statuses(n, data, seed):
    r = data.draw(st.integers(2, n - 2))
    t = scrambled(n, r, seed, steps=3)
    i, j = data.draw(st.lists(st.integers(0, n - 1), min_size=2, max_size=2, unique=True))
    s = data.draw(st.integers(0, r - 1))
    out = mv.ipts_cr(t, i, j, s, random.Random(seed))
    if out is None:
        return
    u = out.timetable
    on_paths = {x for p in out.details["paths"] for x in p.vertices}
    for a, b in out.details["pairs"]:
        assert a not in on_paths and b not in on_paths
        assert u.home[a] == t.home[a] and u.home[b] == t.home[b]
    lan = out.details["lantern"]
    plain = mv.ipts(t, i, j, s, repair=[]).timetable
    w1, w2, _ = mv.internal_sets(plain, lan)
    assert len(out.details["pairs"]) == min(len(w1), len(w2))


def test_internal_cycle_pairs_are_checked(fix8):
    with pytest.raises(mv.MoveError):
        mv.ipts_cr(fix8, 0, 3, 1, pairs=[(6, 7)])


def test_every_bichromatic_cycle_is_swappable(fix8):
    for q in range(5):
        for s in range(q + 1, 5):
            for c in bichromatic_cycles(fix8, q, s):
                out = mv.partial_round_swap(fix8, q, s, cycle=c.vertices)
                assert validate(out.timetable).feasible
                assert out.touched_teams == set(c.vertices)


def test_every_balanced_cycle_reversal_keeps_deltas(fix8):
    cycles = all_balanced_cycles(fix8)
    assert cycles
    for c in cycles:
        out = mv.cycle_reversal(fix8, c)
        assert team_deltas(out.timetable) == team_deltas(fix8)
        assert games_of(out.timetable) != games_of(fix8)
