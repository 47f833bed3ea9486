"""Cost and hard-constraint evaluation for iTTP and YSTP.

iTTP: each team leaves home before round 1, travels directly from venue to
venue, and returns home after round ``r``.  Every window of four consecutive
rounds must hold between one and three home games.

YSTP: each game costs ``d[home][away]``.  Teams belong to clubs whose venues
have per-round capacities; total capacity excess is capped by ``v_plus``.
Pairings outside the eligibility relation cost ``ineligible_penalty`` each.
Hard rules: at most two consecutive home or away games, and optionally no
break at the start or end (D1), half-season home balance (D2) and at most
``b_plus`` breaks per team (D3).

Both problems require the home-away balance of every team.
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .timetable import Timetable


@dataclass(frozen=True, eq=False)
class ITTPInstance:
    n: int
    r: int
    distances: np.ndarray
    name: str = ""

    def __post_init__(self):
        d = np.asarray(self.distances)
        if d.shape != (self.n, self.n):
            raise ValueError(f"distance matrix must be {self.n}x{self.n}, got {d.shape}")
        if not 1 <= self.r < self.n - 1:
            raise ValueError(f"need 1 <= r < n-1, got r={self.r}, n={self.n}")
        object.__setattr__(self, "distances", d)

    @property
    def symmetric(self) -> bool:
        return bool(np.array_equal(self.distances, self.distances.T))


@dataclass(frozen=True, eq=False)
class YSTPInstance:
    n: int
    r: int
    distances: np.ndarray
    club_of: tuple[int, ...]
    capacity: np.ndarray  # clubs x rounds
    eligible: np.ndarray  # n x n bool, symmetric
    v_plus: int = 0
    b_plus: int | None = None
    half_balance: bool = False  # D2
    no_edge_breaks: bool = False  # D1
    ineligible_penalty: int | None = None
    name: str = ""

    def __post_init__(self):
        d = np.asarray(self.distances)
        cap = np.asarray(self.capacity)
        el = np.asarray(self.eligible, dtype=bool)
        if d.shape != (self.n, self.n) or el.shape != (self.n, self.n):
            raise ValueError("distance and eligibility matrices must be n x n")
        if len(self.club_of) != self.n:
            raise ValueError("every team needs a club")
        if cap.ndim != 2 or cap.shape[1] != self.r or cap.shape[0] <= max(self.club_of):
            raise ValueError("capacity must be clubs x rounds")
        if (cap < 0).any():
            raise ValueError("capacities must be nonnegative")
        if not np.array_equal(el, el.T):
            raise ValueError("eligibility must be symmetric")
        object.__setattr__(self, "distances", d)
        object.__setattr__(self, "capacity", cap)
        object.__setattr__(self, "eligible", el)
        object.__setattr__(self, "club_of", tuple(int(c) for c in self.club_of))

    @property
    def n_clubs(self) -> int:
        return int(self.capacity.shape[0])

    @property
    def penalty(self) -> int:
        if self.ineligible_penalty is not None:
            return int(self.ineligible_penalty)
        return int(10 * max(1, int(self.distances.max())) * self.n * self.r)


@dataclass(frozen=True)
class HardViolation:
    kind: str  # window, consecutive, capacity, start_end_break, half_balance, breaks, balance
    team: int | None = None
    round: int | None = None
    amount: int = 1


@dataclass(frozen=True)
class Evaluation:
    travel_cost: int
    penalty_cost: int = 0
    hard_violations: tuple[HardViolation, ...] = field(default_factory=tuple)
    ineligible: int = 0

    @property
    def total(self) -> int:
        return self.travel_cost + self.penalty_cost

    @property
    def feasible(self) -> bool:
        return not self.hard_violations


@dataclass(frozen=True)
class Breaks:
    count: int
    rounds: tuple[int, ...]


def breaks_of(t: Timetable, i: int) -> Breaks:
    """Rounds ``s >= 1`` in which team ``i`` repeats its previous status."""
    h = t.home[i]
    pos = tuple(s for s in range(1, t.r) if h[s] == h[s - 1])
    return Breaks(len(pos), pos)


# -- per-team terms shared by full and incremental evaluation -----------------
def _ittp_travel(d, opp_i, home_i, i: int) -> int:
    prev, c = i, 0
    for s in range(len(opp_i)):
        v = i if home_i[s] else opp_i[s]
        c += d[prev][v]
        prev = v
    return c + d[prev][i]


def _balance_bad(home_i, r: int) -> int:
    h = sum(home_i)
    return 0 if r // 2 <= h <= (r + 1) // 2 else 1


def _window_bad(home_i, r: int) -> list[int]:
    """Start rounds of 4-windows with zero or four home games."""
    out = []
    if r < 4:
        return out
    c = home_i[0] + home_i[1] + home_i[2] + home_i[3]
    for s in range(r - 3):
        if s:
            c += home_i[s + 3] - home_i[s - 1]
        if c == 0 or c == 4:
            out.append(s)
    return out


def _ittp_team(d, t: Timetable, i: int) -> tuple[int, list[HardViolation]]:
    h = t.home[i]
    viol = [HardViolation("window", i, s) for s in _window_bad(h, t.r)]
    if _balance_bad(h, t.r):
        viol.append(HardViolation("balance", i))
    return _ittp_travel(d, t.opp[i], h, i), viol


def ittp_evaluate(t: Timetable, inst: ITTPInstance) -> Evaluation:
    d = inst.distances.tolist()
    cost, viol = 0, []
    for i in range(t.n):
        c, v = _ittp_team(d, t, i)
        cost += c
        viol += v
    return Evaluation(int(cost), 0, tuple(viol))


def _run_violations(h, r: int) -> list[int]:
    """Rounds ending a run of three equal statuses."""
    return [s for s in range(2, r) if h[s] == h[s - 1] == h[s - 2]]


def _ystp_team(inst: YSTPInstance, d, el, pen: int, t: Timetable, i: int) -> tuple[int, int, int, list[HardViolation]]:
    r = t.r
    h, o = t.home[i], t.opp[i]
    travel = inel = 0
    for s in range(r):
        j = o[s]
        if h[s]:
            travel += d[i][j]
            if not el[i][j]:
                inel += 1
    viol = [HardViolation("consecutive", i, s) for s in _run_violations(h, r)]
    if inst.no_edge_breaks and r >= 2:
        if h[0] == h[1]:
            viol.append(HardViolation("start_end_break", i, 1))
        if r >= 3 and h[r - 1] == h[r - 2]:
            viol.append(HardViolation("start_end_break", i, r - 1))
    if inst.half_balance:
        lo, hi = r // 4, (r + 3) // 4
        half = r // 2
        for part, rng_ in ((0, range(0, half)), (1, range(r - half, r))):
            c = sum(h[s] for s in rng_)
            if not lo <= c <= hi:
                viol.append(HardViolation("half_balance", i, part))
    if inst.b_plus is not None:
        b = sum(1 for s in range(1, r) if h[s] == h[s - 1])
        if b > inst.b_plus:
            viol.append(HardViolation("breaks", i, amount=b - inst.b_plus))
    if _balance_bad(h, r):
        viol.append(HardViolation("balance", i))
    return travel, inel, inel * pen, viol


def _round_excess(inst: YSTPInstance, cap, t: Timetable, s: int) -> int:
    homes = [0] * len(cap)
    for i in range(t.n):
        if t.home[i][s]:
            homes[inst.club_of[i]] += 1
    return sum(max(0, homes[c] - cap[c][s]) for c in range(len(cap)))


def ystp_evaluate(t: Timetable, inst: YSTPInstance) -> Evaluation:
    d = inst.distances.tolist()
    el = inst.eligible.tolist()
    cap = inst.capacity.tolist()
    pen = inst.penalty
    travel = inel = penalty = 0
    viol: list[HardViolation] = []
    for i in range(t.n):
        a, b, c, v = _ystp_team(inst, d, el, pen, t, i)
        travel += a
        inel += b
        penalty += c
        viol += v
    excess = [_round_excess(inst, cap, t, s) for s in range(t.r)]
    if sum(excess) > inst.v_plus:
        viol.append(HardViolation("capacity", amount=sum(excess) - inst.v_plus))
    return Evaluation(int(travel), int(penalty), tuple(viol), inel)


# -- incremental scoring ------------------------------------------------------
class Scorer:
    """Incremental evaluation over the touched teams and rounds of a move.

    ``reset`` evaluates from scratch, ``update`` re-evaluates the touched part
    after an in-place move, and ``revert`` restores the state before the last
    ``update``.  ``cost`` is the total objective and ``violations`` the number
    of hard violations (zero means feasible).
    """

    cost: int
    violations: int

    def reset(self, t: Timetable) -> None:
        raise NotImplementedError

    def update(self, t: Timetable, teams, rounds) -> None:
        raise NotImplementedError

    def revert(self) -> None:
        raise NotImplementedError

    def evaluate(self, t: Timetable) -> Evaluation:
        raise NotImplementedError

    @property
    def feasible(self) -> bool:
        return self.violations == 0

    @property
    def infeasibility(self) -> int:
        """Graded violation measure for repair searches; zero iff feasible."""
        return self.violations


class ITTPScorer(Scorer):
    def __init__(self, inst: ITTPInstance):
        self.inst = inst
        self.d = inst.distances.tolist()

    def _team(self, t, i):
        h = t.home[i]
        bad = len(_window_bad(h, t.r)) + _balance_bad(h, t.r)
        return _ittp_travel(self.d, t.opp[i], h, i), bad

    def reset(self, t):
        terms = [self._team(t, i) for i in range(t.n)]
        self.team_cost = [c for c, _ in terms]
        self.team_bad = [b for _, b in terms]
        self.cost = sum(self.team_cost)
        self.violations = sum(self.team_bad)
        self._saved = None

    def update(self, t, teams, rounds=()):
        saved = [(self.cost, self.violations)]
        tc, tb = self.team_cost, self.team_bad
        for i in teams:
            c, b = self._team(t, i)
            saved.append((i, tc[i], tb[i]))
            self.cost += c - tc[i]
            self.violations += b - tb[i]
            tc[i], tb[i] = c, b
        self._saved = saved

    def revert(self):
        saved = self._saved
        self.cost, self.violations = saved[0]
        for i, c, b in saved[1:]:
            self.team_cost[i], self.team_bad[i] = c, b
        self._saved = None

    def evaluate(self, t):
        return ittp_evaluate(t, self.inst)


class YSTPScorer(Scorer):
    """Scorer whose violation count also includes capacity excess over
    ``v_plus``.  Ineligible pairings are part of the cost, not violations."""

    def __init__(self, inst: YSTPInstance):
        self.inst = inst
        self.d = inst.distances.tolist()
        self.el = inst.eligible.tolist()
        self.cap = inst.capacity.tolist()
        self.pen = inst.penalty

    def _team(self, t, i):
        travel, _, pen, viol = _ystp_team(self.inst, self.d, self.el, self.pen, t, i)
        return travel + pen, len(viol)

    def _cap_bad(self):
        return 1 if self.cap_total > self.inst.v_plus else 0

    @property
    def infeasibility(self) -> int:
        # counts each unit of capacity excess over the allowance
        return self.violations - self._cap_bad() + max(0, self.cap_total - self.inst.v_plus)

    def reset(self, t):
        terms = [self._team(t, i) for i in range(t.n)]
        self.team_cost = [c for c, _ in terms]
        self.team_bad = [b for _, b in terms]
        self.round_excess = [_round_excess(self.inst, self.cap, t, s) for s in range(t.r)]
        self.cap_total = sum(self.round_excess)
        self.cost = sum(self.team_cost)
        self.violations = sum(self.team_bad) + self._cap_bad()
        self._saved = None

    def update(self, t, teams, rounds):
        saved = [(self.cost, self.violations, self.cap_total)]
        tc, tb = self.team_cost, self.team_bad
        viol = self.violations - self._cap_bad()
        for i in teams:
            c, b = self._team(t, i)
            saved.append((0, i, tc[i], tb[i]))
            self.cost += c - tc[i]
            viol += b - tb[i]
            tc[i], tb[i] = c, b
        ex = self.round_excess
        for s in rounds:
            e = _round_excess(self.inst, self.cap, t, s)
            saved.append((1, s, ex[s], None))
            self.cap_total += e - ex[s]
            ex[s] = e
        self.violations = viol + self._cap_bad()
        self._saved = saved

    def revert(self):
        saved = self._saved
        self.cost, self.violations, self.cap_total = saved[0]
        for kind, k, a, b in saved[1:]:
            if kind == 0:
                self.team_cost[k], self.team_bad[k] = a, b
            else:
                self.round_excess[k] = a
        self._saved = None

    def evaluate(self, t):
        return ystp_evaluate(t, self.inst)


def scorer_for(inst) -> Scorer:
    if isinstance(inst, ITTPInstance):
        return ITTPScorer(inst)
    if isinstance(inst, YSTPInstance):
        return YSTPScorer(inst)
    raise TypeError(f"unsupported instance type {type(inst).__name__}")
