"""Shared builders and slow reference implementations for the tests."""
from __future__ import annotations

import itertools
import random

from irrsched import moves as mv
from irrsched.construct import construct_circle
from irrsched.cycles import NoCycle, find_balanced_cycle
from irrsched.timetable import Timetable, new_timetable


def legal_rounds(n: int) -> range:
    return range(1, n - 1)


def scrambled(n: int, r: int, seed: int, steps: int = 15) -> Timetable:
    """A feasible timetable reached from the circle method by random moves."""
    rng = random.Random(seed)
    t = construct_circle(n, r, rng)
    for _ in range(steps):
        k = rng.randrange(4)
        if k == 0:
            mv.iprs_u(t, rng.randrange(r), rng, inplace=True)
        elif k == 1:
            i, j = rng.sample(range(n), 2)
            s = rng.choice([q for q in range(r) if q != t.color[i][j]] or [0])
            if s != t.color[i][j]:
                mv.ipts(t, i, j, s, rng, inplace=True)
        elif k == 2 and r >= 2:
            q, s = rng.sample(range(r), 2)
            mv.partial_round_swap(t, q, s, rng, inplace=True)
        else:
            try:
                mv.cycle_reversal(t, find_balanced_cycle(t, rng), inplace=True)
            except NoCycle:
                pass
    return t


def random_orientation(n: int, r: int, seed: int) -> Timetable:
    """Circle-method coloring with independently random orientations."""
    rng = random.Random(seed)
    base = construct_circle(n, r)
    games = []
    for s, h, a in base.games():
        games.append((s, h, a) if rng.random() < 0.5 else (s, a, h))
    return new_timetable(n, r, games)


def status_table(t: Timetable) -> list[list[bool]]:
    return [list(row) for row in t.home]


def tour_cost(t: Timetable, d, i: int) -> int:
    """Walk team ``i``'s season venue by venue (slow reference)."""
    where = i
    cost = 0
    for s in range(t.r):
        j = t.opp[i][s]
        venue = i if t.home[i][s] else j
        cost += d[where][venue]
        where = venue
    return cost + d[where][i]


def all_directed_paths(t: Timetable):
    """Every simple directed path with at least one arc (exhaustive)."""
    n = t.n
    outs = [t.out_neighbors(v) for v in range(n)]

    def rec(path):
        yield tuple(path)
        for v in outs[path[-1]]:
            if v not in path:
                path.append(v)
                yield from rec(path)
                path.pop()

    for w in range(n):
        for p in rec([w]):
            if len(p) > 1:
                yield p


def permuted(t: Timetable, perm) -> Timetable:
    return new_timetable(t.n, t.r, [(s, perm[h], perm[a]) for s, h, a in t.games()])


def brute_force_pairing_iso(a: Timetable, b: Timetable) -> bool:
    pa, pb = a.pairings(), b.pairings()
    return any({tuple(sorted((p[x], p[y]))) for x, y in pa} == pb for p in itertools.permutations(range(a.n)))
