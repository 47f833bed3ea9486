from __future__ import annotations

import itertools
import random
from collections import defaultdict

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from irrsched import moves as mv
from irrsched.construct import construct_circle
from irrsched.cycles import all_alternating_cycles
from irrsched.lab import (
    COLORINGS,
    FULL,
    SizeLimit,
    brute_force_coloring_key,
    canonical_coloring_key,
    check_connectivity,
    closure,
    component_report,
    enumerate_space,
    escaping_moves,
    hamiltonian_r2,
    is_perfect,
    neighbors,
    verify_counterexample_r2,
    verify_orientation_connectivity,
)
from irrsched.timetable import team_deltas, total_delta, validate


# -- an independent enumerator: all matchings first, then ordered disjoint tuples --
def _all_matchings(n):
    pairs = list(itertools.combinations(range(n), 2))
    return [frozenset(c) for c in itertools.combinations(pairs, n // 2)
            if len({v for e in c for v in e}) == n]


def _count_colorings(n, r):
    ms = _all_matchings(n)
    return sum(1 for combo in itertools.permutations(ms, r)
               if sum(len(m) for m in combo) == len(frozenset().union(*combo)))


@pytest.mark.parametrize("n,r,expected", [(4, 1, 3), (4, 2, 6), (6, 2, 120), (6, 3, 480), (6, 4, 720)])
def test_coloring_counts(n, r, expected):
    space = enumerate_space(n, r, COLORINGS)
    assert len(space) == expected == _count_colorings(n, r)
    assert len({t.coloring_key() for t in space.states}) == expected
    assert all(validate(t).feasible for t in space.states)


def _balanced_by_brute_force(n, r):
    count = 0
    for t in enumerate_space(n, r, COLORINGS).states:
        games = list(t.games())
        for bits in itertools.product((0, 1), repeat=len(games)):
            homes = [0] * n
            for (s, h, a), b in zip(games, bits):
                homes[a if b else h] += 1
            count += all(r // 2 <= x <= (r + 1) // 2 for x in homes)
    return count


@pytest.mark.parametrize("n,r", [(4, 1), (4, 2), (6, 1), (6, 2)])
def test_full_space_counts(n, r):
    space = enumerate_space(n, r, FULL)
    assert len(space) == _balanced_by_brute_force(n, r)
    assert len({t.key() for t in space.states}) == len(space)
    assert all(total_delta(team_deltas(t), r) == 0 for t in space.states)


def test_size_limit():
    with pytest.raises(SizeLimit):
        enumerate_space(10, 2)
    with pytest.raises(SizeLimit):
        enumerate_space(6, 4, FULL, max_states=100)


# -- canonical keys ----------------------------------------------------------------
def _partition(states, key):
    groups = defaultdict(set)
    for k, t in enumerate(states):
        groups[key(t)].add(k)
    return sorted(sorted(g) for g in groups.values())


@pytest.mark.parametrize("n,r", [(4, 2), (6, 2), (6, 3)])
def test_canonical_key_agrees_with_brute_force(n, r):
    states = enumerate_space(n, r).states
    assert _partition(states, canonical_coloring_key) == _partition(states, brute_force_coloring_key)


def test_all_colorings_with_four_rounds_of_k6_are_isomorphic():
    # K6 has a single 1-factorization up to isomorphism, so any four of its
    # factors (with the fifth left uncolored) are isomorphic
    states = enumerate_space(6, 4).states
    assert len({canonical_coloring_key(t) for t in states}) == 1
    assert all(is_perfect(t) for t in states)


@settings(max_examples=40, deadline=None)
@given(n=st.sampled_from([6, 8, 10]), data=st.data(), seed=st.integers(0, 10**6))
def test_canonical_key_ignores_relabeling(n, data, seed):
    r = data.draw(st.integers(2, min(n - 2, 5)))
    rng = random.Random(seed)
    t = construct_circle(n, r, rng)
    for _ in range(4):
        t = mv.iprs_u(t, rng.randrange(r), rng).timetable
    key = canonical_coloring_key(t)
    i, j = rng.sample(range(n), 2)
    q, s = rng.sample(range(r), 2)
    assert canonical_coloring_key(mv.team_swap(t, i, j).timetable) == key
    assert canonical_coloring_key(mv.round_swap(t, q, s).timetable) == key


def test_perfect_and_non_perfect_factorizations_of_k8_differ():
    perfect = construct_circle(8, 6)
    assert is_perfect(perfect)
    other = next(u for u in neighbors(perfect, "iPTS") if not is_perfect(u))
    assert canonical_coloring_key(other) != canonical_coloring_key(perfect)


# -- connectivity ------------------------------------------------------------------
@pytest.mark.parametrize("n,r", [(4, 1), (4, 2), (6, 1), (6, 2), (6, 3)])
def test_unbalanced_alternating_swaps_connect_small_colorings(n, r):
    rep = check_connectivity(n, r, ("iPRS-U",))
    assert rep.connected and rep.n_states == len(enumerate_space(n, r))


def test_alternating_swaps_stay_perfect_when_one_factor_is_left():
    for t in enumerate_space(6, 4).states:
        for u in neighbors(t, "iPRS-U"):
            assert is_perfect(u)


def test_base_moves_never_leave_an_isomorphism_class():
    # two rounds on 8 teams: the union is an 8-cycle or two 4-cycles
    space = enumerate_space(8, 2)
    keys = {canonical_coloring_key(t) for t in space.states}
    assert len(keys) == 2
    for t in space.states[::25]:
        key = canonical_coloring_key(t)
        for name in ("RS", "PRS", "TS"):
            assert all(canonical_coloring_key(u) == key for u in neighbors(t, name))


def test_base_moves_on_six_teams_and_two_rounds():
    # every two-round coloring of K6 is a 6-cycle, so there is one class and
    # the Base moves connect it
    rep = check_connectivity(6, 2, "Base")
    assert rep.n_states == 120 and rep.connected


def test_involutive_moves_give_symmetric_graphs():
    space = enumerate_space(4, 2, FULL)
    assert component_report(space, ("RS", "TS", "CR")).symmetric
    space = enumerate_space(6, 2, FULL)
    assert component_report(space, ("CR",)).symmetric


def test_two_round_hamiltonian_instance():
    t = hamiltonian_r2(8)
    assert validate(t).feasible
    assert len(list(t.games())) == 8
    # odd 1-based ids (even 0-based) host in the first round
    assert all(t.home[v][0] == (v % 2 == 0) for v in range(8))
    assert all(t.home[v][1] == (v % 2 == 1) for v in range(8))


def test_closure_from_two_round_hamiltonian_instance():
    rep = verify_counterexample_r2(6)
    # balanced alternating cycles do exist here (through an uncolored chord)
    assert rep.balanced_cycle_rounds == [0, 1]
    for s in (0, 1):
        assert any(c.balanced for c in all_alternating_cycles(hamiltonian_r2(6), s))
    assert rep.total_colorings == 120
    assert rep.closure_colorings == 6 and rep.missing_colorings == 114
    assert rep.closure_states == 12
    assert not rep.same_parity_pairing


def test_cycle_reversal_closure_keeps_pairings():
    t = hamiltonian_r2(6)
    reach = closure(t, ("CR",))
    assert len(reach) >= 2
    assert {u.pairings() == t.pairings() for u in reach.values()} == {True}


def test_orientation_connectivity():
    even = verify_orientation_connectivity(6, 2)
    assert even.connected and even.suite == ("CR",) and even.n_states == 2
    odd = verify_orientation_connectivity(6, 3)
    assert odd.connected and odd.suite == ("CR", "PR") and odd.n_states == 104
    pr = verify_orientation_connectivity(6, 2, suite=("PR",))
    assert pr.n_arcs == 0


def test_moves_escape_the_perfect_factorization_of_k8():
    start = construct_circle(8, 5)
    assert is_perfect(start)
    assert len(escaping_moves(start, "iPTS")) >= 1
    assert len(escaping_moves(start, "iPRS-U")) >= 1
    # relabeling and round moves cannot escape
    assert escaping_moves(start, "TS") == [] and escaping_moves(start, "PRS") == []


def test_report_output():
    rep = check_connectivity(4, 2, "iPRS-U")
    assert "components=1" in rep.summary()
    row = rep.csv_row()
    assert row[:4] == [4, 2, "iPRS-U", "colorings"] and row[4] == 6
