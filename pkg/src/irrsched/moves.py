"""Neighborhood moves.

Classic round robin moves:

* :func:`round_swap` (RS), :func:`partial_round_swap` (PRS),
  :func:`team_swap` (TS), :func:`cycle_reversal` (CR), :func:`path_reversal` (PR)

Moves that change which pairs meet:

* :func:`ipts` and :func:`ipts_cr` (partial team swap on a lantern)
* :func:`iprs_b` and :func:`iprs_u` (partial round swap on an alternating cycle)

Every move takes ``inplace=False`` by default and then works on a copy.  With
``inplace=True`` the caller's timetable is modified and the returned
:class:`MoveOutcome` can :meth:`~MoveOutcome.undo` it.  A move that finds no
applicable structure returns ``None`` and leaves the input untouched.
"""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass, field
from typing import Callable, Sequence

from .cycles import (
    BREADTH_FIRST,
    DEPTH_FIRST,
    AlternatingCycle,
    BalancedCycle,
    DirectedPath,
    Strategy,
    _pick_repair,
    alternating_cycle,
    bichromatic_cycles,
    find_alternating_cycle,
    find_balanced_alternating_cycle,
    find_directed_path,
    find_path_to_repair,
    is_balanced_cycle,
    is_directed_path,
)
from .timetable import _COLOR, _HOME, _OPP, UNCOLORED, Timetable, team_deltas, total_delta


class MoveError(ValueError):
    pass


class SameRound(MoveError):
    pass


class SameTeam(MoveError):
    pass


class NotACycle(MoveError):
    pass


class NotAPath(MoveError):
    pass


class DegenerateChain(MoveError):
    pass


@dataclass
class MoveOutcome:
    timetable: Timetable
    move: str
    touched_rounds: frozenset[int]
    touched_teams: frozenset[int]
    new_pairings: frozenset[tuple[int, int]]
    dropped_pairings: frozenset[tuple[int, int]]
    details: dict = field(default_factory=dict)
    journal: list = field(default_factory=list, repr=False)
    relabel: tuple[int, int] | None = None

    def undo(self) -> None:
        """Revert an in-place move."""
        self.timetable.rollback(self.journal)
        self.journal = []


def _summarize(t: Timetable, log: list) -> tuple:
    first: dict = {}
    for kind, a, b, old in log:
        first.setdefault((kind, a, b), old)
    rounds, teams, new, dropped = set(), set(), set(), set()
    for (kind, a, b), old in first.items():
        if kind == _COLOR:
            if a < b:
                cur = t.color[a][b]
                if old == UNCOLORED and cur != UNCOLORED:
                    new.add((a, b))
                elif old != UNCOLORED and cur == UNCOLORED:
                    dropped.add((a, b))
        else:
            cur = t.opp[a][b] if kind == _OPP else t.home[a][b]
            if cur != old:
                teams.add(a)
                rounds.add(b)
    return frozenset(rounds), frozenset(teams), frozenset(new), frozenset(dropped)


def _run(name: str, t: Timetable, inplace: bool, body: Callable[[Timetable], dict | None]) -> MoveOutcome | None:
    if not inplace:
        t = t.copy()
    t.begin()
    try:
        details = body(t)
    except BaseException:
        t.rollback()
        raise
    if details is None:
        t.rollback()
        return None
    log = t.end()
    rounds, teams, new, dropped = _summarize(t, log)
    relabel = details.pop("_relabel", None)
    return MoveOutcome(t, name, rounds, teams, new, dropped, details, log, relabel)


def _recolor(t: Timetable, plan: Sequence[tuple[int, int, int, int]], drop: Sequence[tuple[int, int]] = ()) -> None:
    """Uncolor ``drop`` and every planned edge, then play ``(round, home, away)``."""
    for i, j in drop:
        t.unplay(i, j)
    for _, h, a in plan:
        if t.color[h][a] != UNCOLORED:
            t.unplay(h, a)
    for s, h, a in plan:
        t.play(s, h, a)


# -- classic moves ------------------------------------------------------------
def round_swap(t: Timetable, q: int, s: int, *, inplace: bool = False) -> MoveOutcome:
    if q == s:
        raise SameRound(f"round {q} swapped with itself")

    def body(t):
        plan = []
        for i in range(t.n):
            if t.home[i][q]:
                plan.append((s, i, t.opp[i][q]))
            if t.home[i][s]:
                plan.append((q, i, t.opp[i][s]))
        _recolor(t, plan)
        return {"rounds": (q, s)}

    return _run("RS", t, inplace, body)


def partial_round_swap(
    t: Timetable,
    q: int,
    s: int,
    rng: random.Random | None = None,
    *,
    cycle: Sequence[int] | None = None,
    inplace: bool = False,
) -> MoveOutcome:
    """Exchange rounds ``q`` and ``s`` on one ``q,s``-bichromatic cycle.

    The cycle is uniform among the partition unless ``cycle`` (a set or
    sequence of its teams) is given.
    """
    if q == s:
        raise SameRound(f"round {q} swapped with itself")
    cycles = bichromatic_cycles(t, q, s)
    if cycle is not None:
        want = set(cycle)
        match = [c for c in cycles if set(c.vertices) == want]
        if not match:
            raise NotACycle(f"{sorted(want)} is not a bichromatic cycle of rounds {q},{s}")
        chosen = match[0]
    else:
        rng = rng or random.Random()
        chosen = cycles[rng.randrange(len(cycles))]

    def body(t):
        plan = []
        for i in chosen.vertices:
            if t.home[i][q]:
                plan.append((s, i, t.opp[i][q]))
            if t.home[i][s]:
                plan.append((q, i, t.opp[i][s]))
        _recolor(t, plan)
        return {"cycle": chosen}

    return _run("PRS", t, inplace, body)


def team_swap(t: Timetable, i: int, j: int, *, inplace: bool = False) -> MoveOutcome:
    if i == j:
        raise SameTeam(f"team {i} swapped with itself")

    def body(t):
        sw = {i: j, j: i}
        plan = []
        for s in range(t.r):
            for a in (i, j):
                b = t.opp[a][s]
                h, w = (a, b) if t.home[a][s] else (b, a)
                plan.append((s, sw.get(h, h), sw.get(w, w)))
        drop = [(a, t.opp[a][s]) for s in range(t.r) for a in (i, j)]
        _recolor(t, sorted(set(plan)), drop)
        return {"_relabel": (i, j)}

    return _run("TS", t, inplace, body)


def _reverse_arcs(t: Timetable, arcs) -> None:
    for u, v in arcs:
        t.flip(u, v)


def cycle_reversal(t: Timetable, cyc: BalancedCycle | Sequence[int], *, inplace: bool = False) -> MoveOutcome:
    vs = cyc.vertices if isinstance(cyc, BalancedCycle) else tuple(cyc)
    if not is_balanced_cycle(t, vs):
        raise NotACycle(f"{vs} is not a directed cycle of the match graph")
    cyc = BalancedCycle.of(vs)

    def body(t):
        _reverse_arcs(t, cyc.arcs())
        return {"cycle": cyc}

    return _run("CR", t, inplace, body)


def path_reversal(t: Timetable, p: DirectedPath | Sequence[int], *, inplace: bool = False) -> MoveOutcome:
    vs = p.vertices if isinstance(p, DirectedPath) else tuple(p)
    if not is_directed_path(t, vs):
        raise NotAPath(f"{vs} is not a directed path of the match graph")
    p = DirectedPath(vs)

    def body(t):
        _reverse_arcs(t, p.arcs())
        return {"path": p}

    return _run("PR", t, inplace, body)


def _strategy(rng: random.Random | None, bfs_probability: float) -> Strategy:
    if rng is None or rng.random() < bfs_probability:
        return BREADTH_FIRST
    return DEPTH_FIRST


def _restore(t: Timetable, rng: random.Random | None, bfs_probability: float, deltas: list | None = None) -> list:
    """Reverse repair paths in place until balanced; returns the paths."""
    paths = []
    while True:
        if deltas is not None:
            deltas.append(total_delta(team_deltas(t), t.r))
        p = find_path_to_repair(t, _strategy(rng, bfs_probability), rng)
        if p is None:
            return paths
        _reverse_arcs(t, p.arcs())
        paths.append(p)


def restore_balance(
    t: Timetable,
    rng: random.Random | None = None,
    *,
    bfs_probability: float = 0.9,
    history: list | None = None,
) -> Timetable:
    """Copy of ``t`` with the same coloring and imbalance zero.

    ``history``, if given, receives the imbalance before each repair step and
    the final zero.
    """
    t = t.copy()
    _restore(t, rng, bfs_probability, history)
    return t


# -- lanterns -----------------------------------------------------------------
class LanternKind(enum.Enum):
    COLORFUL_CHORDLESS = "colorful_chordless"
    INCOMPLETE = "incomplete"


@dataclass(frozen=True)
class Lantern:
    i: int
    j: int
    W: frozenset[int]
    kind: LanternKind
    rounds: frozenset[int]
    w_i: int | None = None
    w_j: int | None = None
    c_i: int | None = None
    c_j: int | None = None


def build_lantern(t: Timetable, i: int, j: int, s: int) -> Lantern:
    """Lantern of poles ``i``, ``j`` grown from round ``s``.

    Raises :class:`DegenerateChain` when the construction reaches a pole or
    loops without closing; neither happens on a valid timetable with
    ``s != color(i, j)``, the guard only protects against misuse.
    """
    if i == j:
        raise SameTeam(f"lantern poles coincide: {i}")
    if s == t.color[i][j]:
        raise DegenerateChain(f"round {s} is the round in which {i} and {j} meet")
    col, opp = t.color, t.opp
    W: list[int] = []
    rounds: list[int] = []
    x = s
    for _ in range(t.r + 1):
        w = opp[i][x]
        if w == j:
            raise DegenerateChain("chain reached a pole")
        rounds.append(x)
        W.append(w)
        x = col[j][w]
        if x == s:
            return Lantern(i, j, frozenset(W), LanternKind.COLORFUL_CHORDLESS, frozenset(rounds))
        if x == UNCOLORED:
            break
    else:
        raise DegenerateChain("chain did not close")
    w_j = W[-1]
    x = s
    for _ in range(t.r + 1):
        w = opp[j][x]
        if w == i:
            raise DegenerateChain("chain reached a pole")
        if x not in rounds:
            rounds.append(x)
        W.append(w)
        x = col[i][w]
        if x == UNCOLORED:
            break
        if x == s:
            raise DegenerateChain("second chain closed")
    else:
        raise DegenerateChain("chain did not close")
    w_i = W[-1]
    return Lantern(
        i, j, frozenset(W), LanternKind.INCOMPLETE, frozenset(rounds),
        w_i=w_i, w_j=w_j, c_i=col[i][w_j], c_j=col[j][w_i],
    )


def _lantern_swap(t: Timetable, lan: Lantern) -> None:
    """Swap the colors of ``{i,w}`` and ``{j,w}`` for every middle team ``w``.

    Colored edges keep their orientation.  When one of the two edges is
    uncolored, the new edge keeps ``w``'s status in that round, so every
    middle team keeps its home-away count.
    """
    i, j = lan.i, lan.j
    home = t.home
    plan, drop = [], []
    for w in lan.W:
        a, b = t.color[i][w], t.color[j][w]
        if a != UNCOLORED:
            drop.append((i, w))
            # {j,w} takes round a: with its own orientation if it existed
            w_home = home[w][b] if b != UNCOLORED else home[w][a]
            plan.append((a, w, j) if w_home else (a, j, w))
        if b != UNCOLORED:
            drop.append((j, w))
            w_home = home[w][a] if a != UNCOLORED else home[w][b]
            plan.append((b, w, i) if w_home else (b, i, w))
    _recolor(t, plan, drop)


def _pole_repair(t, i, j, rng, bfs_probability, avoid=()) -> list | None:
    """Rebalance after a lantern swap; only the poles can be unbalanced."""
    d = team_deltas(t)
    if total_delta(d, t.r) == 0:
        return []
    src, dst = (i, j) if d[i] < d[j] else (j, i)
    p = find_directed_path(t, src, dst, _strategy(rng, bfs_probability), rng, forbidden=avoid)
    if p is not None:
        _reverse_arcs(t, p.arcs())
        if total_delta(team_deltas(t), t.r) == 0:
            return [p]
        rest = [p]
    else:
        rest = []
    if avoid:
        return None
    return rest + _restore(t, rng, bfs_probability)


def ipts(
    t: Timetable,
    i: int,
    j: int,
    s: int,
    rng: random.Random | None = None,
    *,
    bfs_probability: float = 0.9,
    repair: Sequence[Sequence[int]] | None = None,
    inplace: bool = False,
) -> MoveOutcome | None:
    """Partial team swap of ``i`` and ``j`` on the lantern grown from round ``s``.

    ``repair`` optionally fixes the repair paths (for reproducing a known
    outcome); otherwise a path is searched from the pole with surplus away
    games to the pole with surplus home games.
    """
    if i == j or s == t.color[i][j]:
        return None
    try:
        lan = build_lantern(t, i, j, s)
    except DegenerateChain:
        return None

    def body(t):
        _lantern_swap(t, lan)
        if repair is not None:
            paths = [DirectedPath(tuple(p)) for p in repair]
            for p in paths:
                if not is_directed_path(t, p.vertices):
                    raise NotAPath(f"{p.vertices} is not a directed path")
                _reverse_arcs(t, p.arcs())
        else:
            paths = _pole_repair(t, i, j, rng, bfs_probability)
        return {"lantern": lan, "paths": paths}

    return _run("iPTS", t, inplace, body)


def internal_sets(t: Timetable, lan: Lantern) -> tuple[list[int], list[int], list[int]]:
    """Split the middle teams by their statuses against the two poles.

    ``W1``: away against ``i`` and home against ``j``; ``W2``: the reverse;
    ``W3``: the rest (including teams on an uncolored lantern edge).
    """
    i, j = lan.i, lan.j
    w1, w2, w3 = [], [], []
    for w in sorted(lan.W):
        a, b = t.color[i][w], t.color[j][w]
        if a == UNCOLORED or b == UNCOLORED:
            w3.append(w)
        elif not t.home[w][a] and t.home[w][b]:
            w1.append(w)
        elif t.home[w][a] and not t.home[w][b]:
            w2.append(w)
        else:
            w3.append(w)
    return w1, w2, w3


def ipts_cr(
    t: Timetable,
    i: int,
    j: int,
    s: int,
    rng: random.Random | None = None,
    *,
    bfs_probability: float = 0.9,
    pairs: Sequence[tuple[int, int]] | None = None,
    inplace: bool = False,
) -> MoveOutcome | None:
    """iPTS followed by reversals of internal 4-cycles ``i -> w2 -> j -> w1 -> i``.

    The sets are taken on the swapped lantern, ``min(|W1|, |W2|)`` disjoint
    ``(w1, w2)`` pairs are reversed (random pairing unless ``pairs`` is
    given), which gives each paired team back its old status in every round.
    A repair path, if needed, avoids the paired teams; the move is dropped
    when no such path exists.
    """
    if i == j or s == t.color[i][j]:
        return None
    try:
        lan = build_lantern(t, i, j, s)
    except DegenerateChain:
        return None
    rng_ = rng or random.Random()

    def body(t):
        _lantern_swap(t, lan)
        w1, w2, _ = internal_sets(t, lan)
        if pairs is not None:
            chosen = [tuple(p) for p in pairs]
            for a, b in chosen:
                if a not in w1 or b not in w2:
                    raise MoveError(f"({a},{b}) is not a W1 x W2 pair")
        else:
            rng_.shuffle(w1)
            rng_.shuffle(w2)
            chosen = list(zip(w1, w2))
        for a, b in chosen:
            _reverse_arcs(t, [(i, b), (b, j), (j, a), (a, i)])
        avoid = {x for p in chosen for x in p}
        paths = _pole_repair(t, i, j, rng, bfs_probability, avoid=avoid)
        if paths is None:
            return None
        return {"lantern": lan, "pairs": chosen, "paths": paths}

    return _run("iPTS-CR", t, inplace, body)


# -- partial round swaps on alternating cycles --------------------------------
def _alternating_swap(t: Timetable, cyc: AlternatingCycle, pick_home) -> tuple[list[int], list[int]]:
    """Swap colored and uncolored edges of ``cyc``; returns (W-, W+)."""
    s = cyc.color
    status = {v: t.home[v][s] for v in cyc.vertices}
    plan, w_minus, w_plus = [], [], []
    for u, v in cyc.uncolored_edges():
        if status[u] != status[v]:
            h, a = (u, v) if status[u] else (v, u)
        else:
            h = pick_home(u, v)
            a = v if h == u else u
            if status[u]:
                w_minus.append(a)  # both were home, ``a`` loses a home game
            else:
                w_plus.append(h)
        plan.append((s, h, a))
    _recolor(t, plan, cyc.colored_edges())
    return w_minus, w_plus


def iprs_b(
    t: Timetable,
    s: int,
    rng: random.Random | None = None,
    *,
    cycle: Sequence[int] | None = None,
    inplace: bool = False,
) -> MoveOutcome | None:
    """Swap a balanced ``s``-alternating cycle; every round-``s`` status is kept."""
    if cycle is not None:
        cyc = alternating_cycle(t, s, cycle)
        if not cyc.balanced:
            raise NotACycle(f"{cycle} is not balanced")
    else:
        cyc = find_balanced_alternating_cycle(t, s, rng)
        if cyc is None:
            return None

    def body(t):
        _alternating_swap(t, cyc, None)
        return {"cycle": cyc}

    return _run("iPRS-B", t, inplace, body)


def _set_repair(t, neg_pool, pos_pool, rng, bfs_probability):
    """A repair path from ``neg_pool`` to ``pos_pool``, or None."""
    d = team_deltas(t)
    neg = [v for v in neg_pool if d[v] < 0]
    pos = {v for v in pos_pool if d[v] > 0}
    return _pick_repair(t, d, neg, pos, _strategy(rng, bfs_probability), rng)


def iprs_u(
    t: Timetable,
    s: int,
    rng: random.Random | None = None,
    *,
    cycle: Sequence[int] | None = None,
    homes: dict | None = None,
    repair: Sequence[Sequence[int]] | None = None,
    bfs_probability: float = 0.9,
    inplace: bool = False,
) -> MoveOutcome:
    """Swap any ``s``-alternating cycle, then repair the balance.

    A new edge between two teams of equal round-``s`` status gets a random
    home team (or the one given in ``homes``, keyed by ``frozenset`` of the
    pair).  Repair paths run from the teams that lost a home game toward the
    teams that gained one, falling back to any repair path.
    """
    rng_ = rng or random.Random()
    cyc = alternating_cycle(t, s, cycle) if cycle is not None else find_alternating_cycle(t, s, rng)

    def pick_home(u, v):
        if homes is not None and frozenset((u, v)) in homes:
            return homes[frozenset((u, v))]
        return u if rng_.random() < 0.5 else v

    def body(t):
        w_minus, w_plus = _alternating_swap(t, cyc, pick_home)
        if repair is not None:
            paths = [DirectedPath(tuple(p)) for p in repair]
            for p in paths:
                if not is_directed_path(t, p.vertices):
                    raise NotAPath(f"{p.vertices} is not a directed path")
                _reverse_arcs(t, p.arcs())
        else:
            paths = []
            while total_delta(team_deltas(t), t.r):
                p = _set_repair(t, w_minus, w_plus, rng, bfs_probability)
                if p is None:
                    p = find_path_to_repair(t, _strategy(rng, bfs_probability), rng)
                _reverse_arcs(t, p.arcs())
                paths.append(p)
        return {"cycle": cyc, "w_minus": w_minus, "w_plus": w_plus, "paths": paths}

    return _run("iPRS-U", t, inplace, body)


MOVE_NAMES = ("RS", "PRS", "TS", "CR", "PR", "iPTS", "iPTS-CR", "iPRS-B", "iPRS-U")
