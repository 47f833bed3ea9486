"""Cycle and path discovery on a timetable's graph.

Arcs of the match graph go from the away team to the home team.  All finders
take a ``random.Random`` so that repeated calls explore different structures;
returned cycles are rotated to start at their smallest team.
"""
from __future__ import annotations

import enum
import random
from dataclasses import dataclass

from .timetable import UNCOLORED, Timetable, team_deltas, total_delta


class NoCycle(RuntimeError):
    pass


class Strategy(enum.Enum):
    BREADTH_FIRST = "bfs"
    DEPTH_FIRST = "dfs"


BREADTH_FIRST = Strategy.BREADTH_FIRST
DEPTH_FIRST = Strategy.DEPTH_FIRST


def _rotate_min(vs: list[int]) -> tuple[int, ...]:
    k = vs.index(min(vs))
    return tuple(vs[k:] + vs[:k])


@dataclass(frozen=True)
class BalancedCycle:
    """Directed cycle ``v0 -> v1 -> ... -> v0`` of the match graph."""

    vertices: tuple[int, ...]

    @classmethod
    def of(cls, vs) -> BalancedCycle:
        return cls(_rotate_min(list(vs)))

    def arcs(self) -> list[tuple[int, int]]:
        vs = self.vertices
        return [(vs[k], vs[(k + 1) % len(vs)]) for k in range(len(vs))]


@dataclass(frozen=True)
class BichromaticCycle:
    """Cycle whose edges alternate between rounds ``colors[0]`` and ``colors[1]``."""

    vertices: tuple[int, ...]
    colors: tuple[int, int]

    def edges(self) -> list[tuple[int, int]]:
        vs = self.vertices
        return [(vs[k], vs[(k + 1) % len(vs)]) for k in range(len(vs))]


@dataclass(frozen=True)
class AlternatingCycle:
    """Cycle alternating between round-``color`` edges and uncolored edges.

    ``vertices[0] - vertices[1]`` is always a round-``color`` edge.
    """

    vertices: tuple[int, ...]
    color: int
    balanced: bool

    def colored_edges(self) -> list[tuple[int, int]]:
        vs = self.vertices
        return [(vs[k], vs[k + 1]) for k in range(0, len(vs), 2)]

    def uncolored_edges(self) -> list[tuple[int, int]]:
        vs = self.vertices
        return [(vs[k], vs[(k + 1) % len(vs)]) for k in range(1, len(vs), 2)]

    def edge_set(self) -> set[frozenset[int]]:
        vs = self.vertices
        return {frozenset((vs[k], vs[(k + 1) % len(vs)])) for k in range(len(vs))}


@dataclass(frozen=True)
class DirectedPath:
    """Directed path ``v0 -> ... -> vk`` in the match graph."""

    vertices: tuple[int, ...]

    def arcs(self) -> list[tuple[int, int]]:
        vs = self.vertices
        return [(vs[k], vs[k + 1]) for k in range(len(vs) - 1)]

    def __len__(self) -> int:
        return len(self.vertices) - 1


def is_arc(t: Timetable, u: int, v: int) -> bool:
    """True when ``u`` visits ``v`` (``v`` is home)."""
    s = t.color[u][v]
    return s != UNCOLORED and t.home[v][s]


# -- balanced cycles ----------------------------------------------------------
def find_balanced_cycle(t: Timetable, rng: random.Random) -> BalancedCycle:
    """Random walk along arcs until a team repeats; return the closed loop."""
    if t.r < 2:
        raise NoCycle("a balanced cycle needs at least two rounds")
    v = rng.randrange(t.n)
    pos = {v: 0}
    walk = [v]
    while True:
        outs = t.out_neighbors(v)
        if not outs:
            raise NoCycle(f"team {v} has no outgoing arc")
        v = outs[rng.randrange(len(outs))]
        if v in pos:
            return BalancedCycle.of(walk[pos[v]:])
        pos[v] = len(walk)
        walk.append(v)


def is_balanced_cycle(t: Timetable, vs) -> bool:
    vs = list(vs)
    if len(vs) < 3 or len(set(vs)) != len(vs):
        return False
    return all(is_arc(t, vs[k], vs[(k + 1) % len(vs)]) for k in range(len(vs)))


def all_balanced_cycles(t: Timetable) -> list[BalancedCycle]:
    """Every simple directed cycle (exhaustive; small instances only)."""
    out = []
    n = t.n
    outs = [t.out_neighbors(v) for v in range(n)]
    for start in range(n):
        # cycles whose minimum vertex is ``start``
        stack = [(start, iter(outs[start]))]
        path = [start]
        on = {start}
        while stack:
            v, it = stack[-1]
            for w in it:
                if w == start and len(path) >= 3:
                    out.append(BalancedCycle(tuple(path)))
                elif w > start and w not in on:
                    path.append(w)
                    on.add(w)
                    stack.append((w, iter(outs[w])))
                    break
            else:
                stack.pop()
                on.discard(path.pop())
    return out


# -- bichromatic cycles -------------------------------------------------------
def bichromatic_cycles(t: Timetable, q: int, s: int) -> list[BichromaticCycle]:
    """Partition of the teams into ``q,s``-bichromatic cycles."""
    if q == s:
        raise ValueError("bichromatic cycles need two distinct rounds")
    seen = [False] * t.n
    out = []
    for v0 in range(t.n):
        if seen[v0]:
            continue
        vs = [v0]
        seen[v0] = True
        v, c = t.opp[v0][q], s
        while v != v0:
            seen[v] = True
            vs.append(v)
            v = t.opp[v][c]
            c = q if c == s else s
        out.append(BichromaticCycle(tuple(vs), (q, s)))
    return out


# -- repair paths -------------------------------------------------------------
def _bfs_level(t: Timetable, sources, targets, forward: bool, rng: random.Random | None, forbidden=()):
    """Multi-source BFS stopping at the first level that contains a target.

    Returns one path (source first, following the search direction) per
    target found on that level.
    """
    srcs = list(sources)
    if rng is not None:
        rng.shuffle(srcs)
    parent = {v: None for v in srcs}
    for v in forbidden:
        parent.setdefault(v, -1)
    frontier = srcs
    while frontier:
        nxt, hits = [], []
        for v in frontier:
            nbrs = t.out_neighbors(v) if forward else t.in_neighbors(v)
            if rng is not None:
                rng.shuffle(nbrs)
            for w in nbrs:
                if w in parent:
                    continue
                parent[w] = v
                (hits if w in targets else nxt).append(w)
        if hits:
            out = []
            for w in hits:
                path = [w]
                while parent[path[-1]] is not None:
                    path.append(parent[path[-1]])
                out.append(path[::-1])
            return out
        frontier = nxt
    return []


def _dfs(t: Timetable, source: int, targets, forward: bool, rng: random.Random | None, forbidden=()):
    """Randomized DFS from ``source``; returns the tree path to a target."""
    seen = {source, *forbidden}

    def nbrs(v):
        ns = t.out_neighbors(v) if forward else t.in_neighbors(v)
        if rng is not None:
            rng.shuffle(ns)
        return iter(ns)

    path = [source]
    stack = [nbrs(source)]
    while stack:
        for w in stack[-1]:
            if w in seen:
                continue
            seen.add(w)
            path.append(w)
            if w in targets:
                return path
            stack.append(nbrs(w))
            break
        else:
            stack.pop()
            path.pop()
    return None


def find_directed_path(
    t: Timetable,
    source: int,
    target: int,
    strategy: Strategy = BREADTH_FIRST,
    rng: random.Random | None = None,
    forbidden=(),
) -> DirectedPath | None:
    if source == target:
        return None
    if strategy is Strategy.BREADTH_FIRST:
        paths = _bfs_level(t, [source], {target}, True, rng, forbidden)
        p = paths[0] if paths else None
    else:
        p = _dfs(t, source, {target}, True, rng, forbidden)
    return DirectedPath(tuple(p)) if p else None


def _excess(x: int, r: int) -> int:
    return abs(x) if abs(x) > r % 2 else 0


def repair_gain(deltas, r: int, w: int, v: int) -> int:
    """Drop in imbalance when a path from ``w`` to ``v`` is reversed."""
    return (_excess(deltas[w], r) - _excess(deltas[w] + 2, r)
            + _excess(deltas[v], r) - _excess(deltas[v] - 2, r))


def _pick_repair(t: Timetable, d, neg, pos, strategy: Strategy, rng: random.Random | None) -> DirectedPath | None:
    """Repair path from a team in ``neg`` (negative delta) to one in ``pos``.

    Only endpoint pairs that lower the imbalance qualify: with ``r`` even every
    pair does, with ``r`` odd one endpoint needs ``|delta| >= 3``.
    """
    r = t.r
    pos = set(pos)
    neg_set = set(neg)
    lim = r % 2
    big_neg = [v for v in neg if d[v] < -lim]
    big_pos = [v for v in pos if d[v] > lim]
    if strategy is Strategy.DEPTH_FIRST:
        pool = big_neg + sorted(big_pos)
        if not pool:
            return None
        order = pool[:]
        if rng is not None:
            rng.shuffle(order)
        for v in order:
            if d[v] < 0:
                p = _dfs(t, v, pos, True, rng)
            else:
                p = _dfs(t, v, neg_set, False, rng)
                p = p[::-1] if p else None
            if p:
                return DirectedPath(tuple(p))
        return None
    cands = []
    if big_neg:
        cands += _bfs_level(t, big_neg, pos, True, rng)
    if big_pos and r % 2:
        cands += [p[::-1] for p in _bfs_level(t, big_pos, neg_set, False, rng)]
    if not cands:
        return None
    shortest = min(len(p) for p in cands)
    cands = [p for p in cands if len(p) == shortest]
    top = max(repair_gain(d, r, p[0], p[-1]) for p in cands)
    cands = [p for p in cands if repair_gain(d, r, p[0], p[-1]) == top]
    p = cands[rng.randrange(len(cands))] if rng is not None else cands[0]
    return DirectedPath(tuple(p))


def find_path_to_repair(
    t: Timetable, strategy: Strategy = BREADTH_FIRST, rng: random.Random | None = None
) -> DirectedPath | None:
    """A directed path whose reversal strictly lowers the imbalance, or None.

    The path runs from a team with negative delta to a team with positive
    delta.  For even ``r`` both endpoints are unbalanced; for odd ``r`` at
    least one endpoint has ``|delta| >= 3``.  Breadth-first search returns a
    globally shortest such path (ties broken toward the larger imbalance drop,
    then at random); depth-first search starts from a random unbalanced team.
    """
    d = team_deltas(t)
    if total_delta(d, t.r) == 0:
        return None
    n = t.n
    neg = [v for v in range(n) if d[v] < 0]
    pos = [v for v in range(n) if d[v] > 0]
    return _pick_repair(t, d, neg, pos, strategy, rng)


def is_directed_path(t: Timetable, vs) -> bool:
    vs = list(vs)
    if len(vs) < 2 or len(set(vs)) != len(vs):
        return False
    return all(is_arc(t, vs[k], vs[k + 1]) for k in range(len(vs) - 1))


# -- alternating cycles -------------------------------------------------------
def _alternating(t: Timetable, s: int, vs: list[int]) -> AlternatingCycle:
    """Normalize a cycle (any rotation/direction) so it starts at its minimum
    team and its first edge has color ``s``."""
    k = vs.index(min(vs))
    vs = vs[k:] + vs[:k]
    if t.color[vs[0]][vs[1]] != s:
        vs = [vs[0]] + vs[1:][::-1]
    home = t.home
    bal = all(home[vs[k]][s] != home[vs[(k + 1) % len(vs)]][s] for k in range(1, len(vs), 2))
    return AlternatingCycle(tuple(vs), s, bal)


def is_alternating_cycle(t: Timetable, s: int, vs) -> bool:
    vs = list(vs)
    m = len(vs)
    if m < 4 or m % 2 or len(set(vs)) != m:
        return False
    cols = [t.color[vs[k]][vs[(k + 1) % m]] for k in range(m)]
    a = all(cols[k] == s for k in range(0, m, 2)) and all(cols[k] == UNCOLORED for k in range(1, m, 2))
    b = all(cols[k] == UNCOLORED for k in range(0, m, 2)) and all(cols[k] == s for k in range(1, m, 2))
    return a or b


def alternating_cycle(t: Timetable, s: int, vs) -> AlternatingCycle:
    """Wrap a user-given team cycle, checking the alternation."""
    vs = list(vs)
    if not is_alternating_cycle(t, s, vs):
        raise ValueError(f"{vs} is not an alternating cycle for round {s}")
    return _alternating(t, s, vs)


def find_balanced_alternating_cycle(t: Timetable, s: int, rng: random.Random | None = None) -> AlternatingCycle | None:
    """Any directed cycle of the auxiliary digraph for round ``s``, or None.

    The auxiliary digraph has an arc from each team away in round ``s`` to its
    round-``s`` host, and an arc from each team home in round ``s`` to every
    team it never meets that is away in round ``s``.
    """
    n = t.n
    home = [t.home[v][s] for v in range(n)]
    opp = [t.opp[v][s] for v in range(n)]

    def succ(v):
        if not home[v]:
            return [opp[v]]
        row = t.color[v]
        ns = [u for u in range(n) if u != v and row[u] == UNCOLORED and not home[u]]
        if rng is not None:
            rng.shuffle(ns)
        return ns

    state = [0] * n  # 0 new, 1 on stack, 2 done
    order = list(range(n))
    if rng is not None:
        rng.shuffle(order)
    for root in order:
        if state[root]:
            continue
        path = [root]
        state[root] = 1
        stack = [iter(succ(root))]
        while stack:
            for w in stack[-1]:
                if state[w] == 1:
                    return _alternating(t, s, path[path.index(w):])
                if state[w] == 0:
                    state[w] = 1
                    path.append(w)
                    stack.append(iter(succ(w)))
                    break
            else:
                stack.pop()
                state[path.pop()] = 2
    return None


def find_alternating_cycle(
    t: Timetable, s: int, rng: random.Random | None = None, counter: list[int] | None = None
) -> AlternatingCycle:
    """Labeled depth-first search for an ``s``-alternating cycle.

    A team with an even label continues along its round-``s`` edge, a team
    with an odd label along its uncolored edges (in shuffled order).  Meeting
    an even-labeled team closes a cycle; labels are cleared on backtrack.
    Returning to the root along a colored edge also closes a cycle, which is
    what makes the search complete when the uncolored graph is a matching.
    ``counter[0]`` is incremented once per examined successor.
    """
    n = t.n
    if counter is None:
        counter = [0]
    label = [0] * n
    parent = [-1] * n
    opp = [t.opp[v][s] for v in range(n)]
    order = list(range(n))
    if rng is not None:
        rng.shuffle(order)

    def uncolored(v):
        ns = t.uncolored_neighbors(v)
        if rng is not None:
            rng.shuffle(ns)
        return iter(ns)

    def close(v, w):
        vs = [v]
        while vs[-1] != w:
            vs.append(parent[vs[-1]])
        return _alternating(t, s, vs[::-1])

    for root in order:
        label[root] = 1
        parent[root] = -1
        stack = [(root, uncolored(root))]
        while stack:
            v, it = stack[-1]
            if label[v] % 2 == 0:
                # single successor: the round-s partner
                if it is not None:
                    stack[-1] = (v, None)
                    w = opp[v]
                    counter[0] += 1
                    if label[w] == 0:
                        label[w] = label[v] + 1
                        parent[w] = v
                        stack.append((w, uncolored(w)))
                        continue
                    if label[w] == 1 and w == root:
                        return close(v, w)
                label[v] = 0
                stack.pop()
                continue
            advanced = False
            for w in it:
                counter[0] += 1
                if label[w] == 0:
                    label[w] = label[v] + 1
                    parent[w] = v
                    stack.append((w, 0))
                    advanced = True
                    break
                if label[w] % 2 == 0:
                    return close(v, w)
            if not advanced:
                label[v] = 0
                stack.pop()
    raise NoCycle(f"no alternating cycle for round {s}")


def all_alternating_cycles(t: Timetable, s: int) -> list[AlternatingCycle]:
    """Every ``s``-alternating cycle (exhaustive; small instances only)."""
    n = t.n
    out = []
    seen = set()
    unc = [t.uncolored_neighbors(v) for v in range(n)]
    opp = [t.opp[v][s] for v in range(n)]
    for start in range(n):
        # paths start at ``start`` with its colored edge and only use larger teams
        first = opp[start]
        if first < start:
            continue
        path = [start, first]
        on = {start, first}
        stack = [iter(unc[first])]
        while stack:
            v = path[-1]
            advanced = False
            for w in stack[-1]:
                if w == start and len(path) >= 4:
                    key = frozenset(frozenset((path[k], path[(k + 1) % len(path)])) for k in range(len(path)))
                    if key not in seen:
                        seen.add(key)
                        out.append(_alternating(t, s, list(path)))
                    continue
                if w < start or w in on:
                    continue
                x = opp[w]
                if x in on or x < start:
                    continue
                path += [w, x]
                on.update((w, x))
                stack.append(iter(unc[x]))
                advanced = True
                break
            if not advanced:
                stack.pop()
                if len(path) > 2:
                    on.discard(path.pop())
                    on.discard(path.pop())
    return out
