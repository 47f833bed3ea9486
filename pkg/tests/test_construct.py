from __future__ import annotations

import random

import numpy as np
import pytest

from irrsched.construct import (
    ConstructionFailed,
    circle_pairs,
    construct_circle,
    construct_ittp_initial,
    construct_ystp_initial,
)
from irrsched.io import generate_family, random_ystp
from irrsched.lab import is_perfect
from irrsched.objective import YSTPInstance, ittp_evaluate, ystp_evaluate
from irrsched.timetable import validate


def factors(t):
    return {frozenset(frozenset(e) for e in t.round_edges(s)) for s in range(t.r)}


def one_based_factor(*tokens):
    return frozenset(frozenset(int(x) - 1 for x in tok.split("-")) for tok in tokens)


def test_circle_rounds_of_eight_teams():
    # the five factors of the perfect 1-factorization of K8 drawn in the worked example
    expected = {
        one_based_factor("2-6", "3-5", "4-8", "7-1"),
        one_based_factor("1-8", "2-7", "4-5", "6-3"),
        one_based_factor("1-6", "2-5", "3-4", "7-8"),
        one_based_factor("1-2", "3-7", "6-4", "8-5"),
        one_based_factor("3-1", "5-6", "7-4", "8-2"),
    }
    t = construct_circle(8, 5)
    assert factors(t) == expected
    assert is_perfect(t)


def test_circle_pairs_sum_rule():
    # 1-based labels a + b = k (mod 7), team 8 takes the label with 2a = k
    for k in range(7):
        for a, b in circle_pairs(8, k):
            if b == 7:
                assert (2 * (a + 1)) % 7 == k % 7
            else:
                assert (a + 1 + b + 1) % 7 == k % 7


@pytest.mark.parametrize("n", range(4, 18, 2))
def test_circle_is_feasible_for_every_round_count(n):
    seen = set()
    for r in range(1, n - 1):
        t = construct_circle(n, r, random.Random(r))
        assert validate(t).feasible
        seen.add(frozenset(factors(t)))
    full = construct_circle(n, n - 2)
    # n - 2 rounds leave exactly one perfect matching uncolored
    rest = [(i, j) for i in range(n) for j in range(i + 1, n) if full.color[i][j] < 0]
    assert len(rest) == n // 2 and sorted(v for e in rest for v in e) == list(range(n))


@pytest.mark.parametrize("n,r", [(3, 1), (6, 5), (6, 0)])
def test_circle_rejects_bad_sizes(n, r):
    with pytest.raises(ValueError):
        construct_circle(n, r)


@pytest.mark.parametrize("family", ["CON", "CIRC", "LINE", "INCR", "GAL"])
@pytest.mark.parametrize("n,r", [(8, 5), (12, 7), (16, 6), (20, 10)])
def test_ittp_start_is_feasible(family, n, r):
    inst = generate_family(family, n, r)
    t, log = construct_ittp_initial(inst, seed=3, return_log=True)
    assert ittp_evaluate(t, inst).feasible
    assert log.repair_steps >= 0 and log.elapsed >= 0


@pytest.mark.parametrize("seed", range(8))
def test_ystp_start_is_feasible(seed):
    inst = random_ystp(10 + 2 * (seed % 3), 5 + seed % 3, seed, eligible_density=0.6, v_plus=2)
    t, log = construct_ystp_initial(inst, seed, return_log=True)
    ev = ystp_evaluate(t, inst)
    assert ev.feasible and validate(t).feasible


def test_ystp_start_uses_ineligible_pairs_only_when_forced():
    inst = random_ystp(10, 5, 0, eligible_density=0.6, v_plus=2)
    degree = inst.eligible.sum(axis=1)
    assert degree.min() < inst.r  # some team cannot meet r eligible opponents
    t = construct_ystp_initial(inst)
    ev = ystp_evaluate(t, inst)
    assert ev.feasible and 1 <= ev.ineligible
    assert ev.ineligible <= sum(max(0, inst.r - int(k)) for k in degree)


def test_ystp_unit_distances():
    n, r = 8, 4
    inst = random_ystp(n, r, 2, v_plus=n * r)
    unit = YSTPInstance(n, r, np.ones((n, n), int) - np.eye(n, dtype=int), inst.club_of, inst.capacity,
                        inst.eligible, v_plus=n * r)
    t = construct_ystp_initial(unit)
    assert ystp_evaluate(t, unit).travel_cost == n * r // 2


def test_ystp_odd_eligibility_component_is_reported():
    n, r = 6, 2
    el = np.zeros((n, n), dtype=bool)
    for a, b in [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)]:
        el[a, b] = el[b, a] = True
    inst = YSTPInstance(n, r, np.ones((n, n), int), (0,) * n, np.full((1, r), 3), el)
    with pytest.raises(ConstructionFailed) as exc:
        construct_ystp_initial(inst)
    assert exc.value.diagnostics["odd_component"] in ([0, 1, 2], [3, 4, 5])


def test_ystp_strict_failure_carries_best_attempt():
    # no capacity anywhere and no allowance: every timetable is infeasible
    inst = random_ystp(8, 4, 1, capacity=0, v_plus=0)
    with pytest.raises(ConstructionFailed) as exc:
        construct_ystp_initial(inst)
    assert exc.value.best is not None and validate(exc.value.best).c1
    t, log = construct_ystp_initial(inst, strict=False, return_log=True)
    assert any("residual" in note for note in log.notes)
