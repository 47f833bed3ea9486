"""Feasible starting timetables.

``construct_circle`` takes the first ``r`` rounds of the circle method.  The
problem-specific constructors start from there (iTTP) or from a round-by-round
matching (YSTP) and repair hard violations with orientation moves, which leave
the pairings, and hence the YSTP travel cost, unchanged.
"""
from __future__ import annotations

import math
import random
import time
from dataclasses import dataclass, field

import networkx as nx

from .cycles import NoCycle, find_balanced_cycle
from .moves import _restore, _reverse_arcs, bichromatic_cycles, partial_round_swap
from .objective import ITTPInstance, ITTPScorer, YSTPInstance, YSTPScorer, ystp_evaluate
from .timetable import Timetable, new_timetable


class ConstructionFailed(RuntimeError):
    def __init__(self, message: str, diagnostics: dict | None = None, best: Timetable | None = None):
        super().__init__(message)
        self.diagnostics = diagnostics or {}
        self.best = best


@dataclass
class ConstructionLog:
    method: str
    repair_steps: int = 0
    restarts: int = 0
    elapsed: float = 0.0
    notes: list[str] = field(default_factory=list)


def circle_pairs(n: int, k: int) -> list[tuple[int, int]]:
    """Round ``k`` of the circle method as 0-based pairs.

    With 1-based labels, teams ``1..n-1`` sit on a circle modulo ``n-1`` and
    meet when their labels sum to ``k``; team ``n`` meets the team ``a`` with
    ``2a = k``.
    """
    m = n - 1
    out = []
    for a in range(1, m + 1):
        b = (k - a) % m or m
        if a == b:
            out.append((a - 1, n - 1))
        elif a < b:
            out.append((a - 1, b - 1))
    return out


def construct_circle(n: int, r: int, rng: random.Random | None = None) -> Timetable:
    """First ``r`` rounds of the circle method, balanced.

    Orientations alternate along the circle: in round ``k`` the team ``c``
    facing the fixed team sits at the center, the pair ``(c+d, c-d)`` is
    hosted by ``c+d`` for odd ``d`` and by ``c-d`` for even ``d``, and the
    fixed team is home in even rounds.  A final balance repair handles the
    few teams this leaves unbalanced.
    """
    if n % 2 or not 1 <= r < n - 1:
        raise ValueError(f"need even n and 1 <= r < n-1, got n={n}, r={r}")
    m = n - 1
    inv2 = (m + 1) // 2  # inverse of 2 modulo the odd m
    lab = lambda x: (x - 1) % m + 1  # 1-based circle label
    games = []
    for k in range(r):
        c = lab(k * inv2)  # team facing the fixed team: 2c = k (mod m)
        fixed = n - 1
        games.append((k, fixed, c - 1) if k % 2 == 0 else (k, c - 1, fixed))
        for d in range(1, m // 2 + 1):
            a, b = lab(c + d) - 1, lab(c - d) - 1
            games.append((k, a, b) if d % 2 else (k, b, a))
    t = new_timetable(n, r, games)
    _restore(t, rng, 1.0)
    return t


def _bipartite_alternating(n: int, r: int) -> Timetable:
    """Timetable without breaks for ``r <= n/2``: halves meet across, the first
    half is home in even rounds."""
    h = n // 2
    games = []
    for s in range(r):
        for a in range(h):
            b = h + (a + s) % h
            games.append((s, a, b) if s % 2 == 0 else (s, b, a))
    return new_timetable(n, r, games)


def _orientation_repair(t: Timetable, scorer, rng: random.Random, budget: int, log: ConstructionLog) -> bool:
    """Local search on the violation count with cycle reversals and, for odd
    ``r``, balance-preserving path reversals; sideways steps allowed."""
    scorer.reset(t)
    steps = 0
    while scorer.violations and steps < budget:
        steps += 1
        t.begin()
        try:
            if t.r % 2 and rng.random() < 0.5:
                moved = _random_balanced_path(t, rng)
            elif rng.random() < 0.2 and t.r >= 2:
                q, s = rng.sample(range(t.r), 2)
                cyc = bichromatic_cycles(t, q, s)
                partial_round_swap(t, q, s, rng, cycle=cyc[rng.randrange(len(cyc))].vertices, inplace=True)
                moved = True
            else:
                _reverse_arcs(t, find_balanced_cycle(t, rng).arcs())
                moved = True
        except NoCycle:
            moved = False
        log_ = t.end()
        if not moved:
            continue
        touched_t, touched_r = _touched(log_)
        before = scorer.infeasibility
        scorer.update(t, touched_t, touched_r)
        if scorer.infeasibility > before:
            scorer.revert()
            t.rollback(log_)
    log.repair_steps += steps
    return scorer.violations == 0


def _touched(log) -> tuple[set, set]:
    teams, rounds = set(), set()
    for kind, a, b, _ in log:
        if kind:
            teams.add(a)
            rounds.add(b)
    return teams, rounds


def _random_balanced_path(t: Timetable, rng: random.Random) -> bool:
    """Reverse a path from a team with one surplus away game to one with a
    surplus home game (keeps balance for odd ``r``)."""
    from .timetable import team_deltas

    d = team_deltas(t)
    w = rng.randrange(t.n)
    if d[w] >= 0:
        return False
    walk, seen, v = [w], {w}, w
    for _ in range(t.n):
        outs = [u for u in t.out_neighbors(v) if u not in seen]
        if not outs:
            return False
        v = outs[rng.randrange(len(outs))]
        walk.append(v)
        seen.add(v)
        if d[v] > 0:
            _reverse_arcs(t, list(zip(walk, walk[1:])))
            return True
    return False


def _randomize_orientation(t: Timetable, rng: random.Random) -> None:
    for s, h, a in list(t.games()):
        if rng.random() < 0.5:
            t.flip(h, a)
    _restore(t, rng, 0.9)


def construct_ittp_initial(inst: ITTPInstance, seed: int = 0, *, return_log: bool = False):
    """Circle method plus window repair; randomized restarts on failure."""
    t0 = time.perf_counter()
    rng = random.Random(seed)
    log = ConstructionLog("circle method + orientation repair")
    n, r = inst.n, inst.r
    budget = 10 * n * r
    scorer = ITTPScorer(inst)
    t = construct_circle(n, r, rng)
    for attempt in range(21):
        if attempt:
            log.restarts += 1
            _randomize_orientation(t, rng)
        if _orientation_repair(t, scorer, rng, budget, log):
            break
    else:
        if 2 * r <= n:
            log.notes.append("fell back to the break-free bipartite construction")
            t = _bipartite_alternating(n, r)
        else:
            raise ConstructionFailed(
                f"window repair failed after {log.restarts} restarts",
                {"violations": scorer.violations}, t,
            )
    log.elapsed = time.perf_counter() - t0
    return (t, log) if return_log else t


# -- YSTP ---------------------------------------------------------------------
def _odd_component(inst: YSTPInstance) -> list[int] | None:
    g = nx.Graph()
    g.add_nodes_from(range(inst.n))
    el = inst.eligible
    g.add_edges_from((i, j) for i in range(inst.n) for j in range(i + 1, inst.n) if el[i, j])
    for comp in nx.connected_components(g):
        if len(comp) % 2:
            return sorted(comp)
    return None


def _club_sizes(inst: YSTPInstance) -> list[int]:
    sizes = [0] * inst.n_clubs
    for c in inst.club_of:
        sizes[c] += 1
    return sizes


def _ystp_matchings(inst: YSTPInstance, rng: random.Random, noise: float) -> list[list[tuple[int, int]]] | None:
    """Round-by-round minimum-weight perfect matchings on unused pairs.

    Weight: distance, minus a bonus for same-club pairs in rounds where the
    club's teams exceed its capacity, plus random noise.  Ineligible pairs
    enter a round only when its unused eligible pairs admit no perfect
    matching, and then carry a penalty larger than any eligible matching.
    """
    n, r = inst.n, inst.r
    d, el, cap = inst.distances, inst.eligible, inst.capacity
    sizes = _club_sizes(inst)
    dmax = float(d.max()) or 1.0
    penalty = 4 * n * dmax
    top = penalty + 4 * dmax * (n + 1)
    used = set()
    rounds = []
    for s in range(r):
        for with_ineligible in (False, True):
            g = nx.Graph()
            g.add_nodes_from(range(n))
            for i in range(n):
                for j in range(i + 1, n):
                    if (i, j) in used or not (el[i, j] or with_ineligible):
                        continue
                    w = float(d[i, j])
                    ci, cj = inst.club_of[i], inst.club_of[j]
                    if ci == cj:
                        tight = max(0.0, sizes[ci] / 2 - cap[ci, s])
                        w -= dmax * tight
                    w += noise * dmax * rng.random()
                    if not el[i, j]:
                        w += penalty
                    g.add_edge(i, j, weight=top - w)
            mate = nx.max_weight_matching(g, maxcardinality=True)
            if len(mate) * 2 == n:
                break
        else:
            return None
        pairs = sorted(tuple(sorted(e)) for e in mate)
        used.update(pairs)
        rounds.append(pairs)
    return rounds


def _greedy_orient(inst: YSTPInstance, rounds, rng: random.Random) -> Timetable:
    """Pick home teams round by round, avoiding breaks and capacity excess."""
    n, r = inst.n, inst.r
    cap = inst.capacity
    homes_so_far = [0] * n
    last = [None] * n
    run = [0] * n
    games = []
    for s, pairs in enumerate(rounds):
        club_use = [0] * inst.n_clubs
        order = pairs[:]
        rng.shuffle(order)
        for a, b in order:
            def score(h, w):
                sc = 0.0
                for x, st in ((h, True), (w, False)):
                    if last[x] == st:
                        sc += 4 + 10 * (run[x] >= 2)
                        if inst.no_edge_breaks and (s == 1 or s == r - 1):
                            sc += 10
                target = (s + 1) / 2
                sc += (homes_so_far[h] + 1 - target) - (homes_so_far[w] - target)
                c = inst.club_of[h]
                if club_use[c] + 1 > cap[c, s]:
                    sc += 3
                return sc + 0.01 * rng.random()

            h, w = (a, b) if score(a, b) <= score(b, a) else (b, a)
            games.append((s, h, w))
            club_use[inst.club_of[h]] += 1
            homes_so_far[h] += 1
            for x, st in ((h, True), (w, False)):
                run[x] = run[x] + 1 if last[x] == st else 1
                last[x] = st
    return new_timetable(n, r, games)


def construct_ystp_initial(inst: YSTPInstance, seed: int = 0, *, return_log: bool = False, strict: bool = True):
    """Greedy matching, greedy orientation, balance and violation repair.

    Raises :class:`ConstructionFailed` (with the best attempt attached) when
    no attempt removes all hard violations; with ``strict=False`` the best
    attempt is returned instead and the residual violations are listed in the
    log notes.
    """
    t0 = time.perf_counter()
    odd = _odd_component(inst)
    if odd is not None:
        raise ConstructionFailed(
            f"eligible pairs split the teams into a component of odd size {len(odd)}",
            {"odd_component": odd},
        )
    rng = random.Random(seed)
    log = ConstructionLog("greedy matching (own weights) + orientation repair")
    scorer = YSTPScorer(inst)
    budget = 50 * inst.n * inst.r
    best, best_v = None, math.inf
    for attempt in range(21):
        if attempt:
            log.restarts += 1
        rounds = _ystp_matchings(inst, rng, 0.0 if attempt == 0 else 0.5)
        if rounds is None:
            continue
        t = _greedy_orient(inst, rounds, rng)
        _restore(t, rng, 0.9)
        ok = _orientation_repair(t, scorer, rng, budget, log)
        if scorer.infeasibility < best_v:
            best, best_v = t, scorer.infeasibility
        if ok:
            break
    log.elapsed = time.perf_counter() - t0
    if best is None:
        raise ConstructionFailed("no round could be matched", {"restarts": log.restarts})
    if best_v:
        residual = ystp_evaluate(best, inst).hard_violations
        if strict:
            raise ConstructionFailed("repair budget exhausted", {"violations": list(residual)}, best)
        log.notes.append(f"residual violations: {list(residual)}")
    return (best, log) if return_log else best
