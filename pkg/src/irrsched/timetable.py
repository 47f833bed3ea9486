"""Timetable model for incomplete round robin tournaments.

A timetable for ``n`` teams and ``r < n - 1`` rounds is a partial edge coloring
of the complete graph ``K_n``: the edge ``{i, j}`` carries the round in which
the two teams meet, or :data:`UNCOLORED` when they never meet.  Each colored
edge is oriented from the away team to the home team, which yields the *match
graph*.

Teams and rounds are 0-based everywhere in the API.  Text I/O (``from_table``,
``to_table`` and the :mod:`irrsched.io` helpers) uses 1-based identifiers.

Internally three plain nested lists are kept in sync:

``color[i][j]``
    round of the game between ``i`` and ``j`` (symmetric), or ``-1``.
``opp[i][s]``
    opponent of ``i`` in round ``s``.
``home[i][s]``
    ``True`` when ``i`` plays at home in round ``s``.

Mutation goes through a small set of journaled primitives so that a move can
be applied in place and rolled back cheaply.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

UNCOLORED = -1


class TimetableError(ValueError):
    """Base class for malformed timetable input."""


class RangeError(TimetableError):
    pass


class DuplicatePairing(TimetableError):
    pass


class RoundClash(TimetableError):
    pass


class Status(enum.IntEnum):
    AWAY = 0
    HOME = 1


HOME = Status.HOME
AWAY = Status.AWAY

# journal entry kinds
_COLOR, _OPP, _HOME = 0, 1, 2


class Timetable:
    """Partially colored, oriented complete graph (see module docstring)."""

    __slots__ = ("n", "r", "color", "opp", "home", "_log", "_outer")

    def __init__(self, n: int, r: int):
        self.n = n
        self.r = r
        self.color = [[UNCOLORED] * n for _ in range(n)]
        self.opp = [[-1] * r for _ in range(n)]
        self.home = [[False] * r for _ in range(n)]
        self._log: list | None = None
        self._outer: list = []

    # -- copying and comparison -------------------------------------------
    def copy(self) -> Timetable:
        t = Timetable.__new__(Timetable)
        t.n, t.r = self.n, self.r
        t.color = [row[:] for row in self.color]
        t.opp = [row[:] for row in self.opp]
        t.home = [row[:] for row in self.home]
        t._log = None
        t._outer = []
        return t

    def key(self) -> tuple:
        """Hashable identity of coloring plus orientation."""
        return (self.coloring_key(), tuple(tuple(row) for row in self.home))

    def coloring_key(self) -> tuple:
        n, c = self.n, self.color
        return tuple(c[i][j] for i in range(n) for j in range(i + 1, n))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Timetable):
            return NotImplemented
        return (self.n, self.r) == (other.n, other.r) and self.key() == other.key()

    def __hash__(self) -> int:
        return hash(self.key())

    def __repr__(self) -> str:
        return f"Timetable(n={self.n}, r={self.r}, rounds={self.to_table()!r})"

    # -- queries ----------------------------------------------------------
    def games(self) -> Iterator[tuple[int, int, int]]:
        """Yield ``(round, home, away)`` for every scheduled game."""
        for s in range(self.r):
            for i in range(self.n):
                j = self.opp[i][s]
                if j >= 0 and self.home[i][s] and self.opp[j][s] == i:
                    yield s, i, j

    def pairings(self) -> frozenset[tuple[int, int]]:
        n, c = self.n, self.color
        return frozenset((i, j) for i in range(n) for j in range(i + 1, n) if c[i][j] != UNCOLORED)

    def round_edges(self, s: int) -> list[tuple[int, int]]:
        """Edges of round ``s`` as ``(home, away)`` pairs sorted by home team."""
        return sorted((h, a) for q, h, a in self.games() if q == s)

    def to_table(self) -> list[list[str]]:
        """Per round, the sorted ``"home-away"`` tokens with 1-based ids."""
        out = []
        for s in range(self.r):
            toks = [f"{h + 1}-{a + 1}" for h, a in self.round_edges(s)]
            out.append(sorted(toks, key=lambda x: tuple(int(p) for p in x.split("-"))))
        return out

    def out_neighbors(self, v: int) -> list[int]:
        """Teams hosting ``v`` (arcs go from the away team to the home team)."""
        h, o = self.home[v], self.opp[v]
        return [o[s] for s in range(self.r) if not h[s]]

    def in_neighbors(self, v: int) -> list[int]:
        h, o = self.home[v], self.opp[v]
        return [o[s] for s in range(self.r) if h[s]]

    def uncolored_neighbors(self, v: int) -> list[int]:
        row = self.color[v]
        return [u for u in range(self.n) if u != v and row[u] == UNCOLORED]

    # -- journaled mutation primitives ------------------------------------
    def begin(self) -> None:
        """Start recording changes so they can be undone.

        Journals nest: an inner ``end`` hands its entries on to the enclosing
        journal as well.
        """
        if self._log is not None:
            self._outer.append(self._log)
        self._log = []

    def end(self) -> list:
        log = self._log if self._log is not None else []
        if self._outer:
            self._log = self._outer.pop()
            self._log.extend(log)
        else:
            self._log = None
        return log

    def rollback(self, log: list | None = None) -> None:
        """Undo the journal ``log`` (or the active one) in reverse order."""
        if log is None:
            log = self._log if self._log is not None else []
            self._log = self._outer.pop() if self._outer else None
        color, opp, home = self.color, self.opp, self.home
        for kind, a, b, old in reversed(log):
            if kind == _COLOR:
                color[a][b] = old
            elif kind == _OPP:
                opp[a][b] = old
            else:
                home[a][b] = old

    def _set_color(self, i: int, j: int, s: int) -> None:
        ci, cj = self.color[i], self.color[j]
        if self._log is not None:
            self._log.append((_COLOR, i, j, ci[j]))
            self._log.append((_COLOR, j, i, cj[i]))
        ci[j] = s
        cj[i] = s

    def _set_slot(self, i: int, s: int, j: int, is_home: bool) -> None:
        o, h = self.opp[i], self.home[i]
        if self._log is not None:
            self._log.append((_OPP, i, s, o[s]))
            self._log.append((_HOME, i, s, h[s]))
        o[s] = j
        h[s] = is_home

    def play(self, s: int, h: int, a: int) -> None:
        """Schedule ``h`` (home) against ``a`` (away) in round ``s``."""
        self._set_color(h, a, s)
        self._set_slot(h, s, a, True)
        self._set_slot(a, s, h, False)

    def unplay(self, i: int, j: int) -> None:
        """Uncolor ``{i, j}``; the round slots are left for a later ``play``."""
        self._set_color(i, j, UNCOLORED)

    def flip(self, i: int, j: int) -> None:
        """Reverse the orientation of the colored edge ``{i, j}``."""
        s = self.color[i][j]
        self._set_slot(i, s, j, not self.home[i][s])
        self._set_slot(j, s, i, not self.home[j][s])

    # -- constructors -----------------------------------------------------
    @classmethod
    def from_table(cls, n: int, rounds: Sequence[Iterable[str]]) -> Timetable:
        """Build from per-round ``"home-away"`` tokens with 1-based ids."""
        games = []
        for s, toks in enumerate(rounds):
            for tok in toks:
                h, a = tok.split("-")
                games.append((s, int(h) - 1, int(a) - 1))
        return new_timetable(n, len(rounds), games)


def new_timetable(n: int, r: int, games: Iterable[tuple[int, int, int]], *, strict: bool = True) -> Timetable:
    """Build a timetable from ``(round, home, away)`` triples (0-based).

    C1 and C2 are checked; C3 is not, so deliberately unbalanced states can
    be built.  With ``strict=False`` idle teams are tolerated (their slot
    stays ``-1``), which lets :func:`validate` report C2 failures.
    """
    if n < 2 or n % 2:
        raise RangeError(f"team count must be even and >= 2, got {n}")
    if not 1 <= r < n - 1 and not (n == 2 and r == 1):
        raise RangeError(f"round count must satisfy 1 <= r < n-1, got r={r}, n={n}")
    t = Timetable(n, r)
    for s, h, a in games:
        if not (0 <= s < r and 0 <= h < n and 0 <= a < n) or h == a:
            raise RangeError(f"game out of range: round {s}, {h} vs {a}")
        if t.color[h][a] != UNCOLORED:
            raise DuplicatePairing(f"teams {h} and {a} meet twice (rounds {t.color[h][a]} and {s})")
        for x in (h, a):
            if t.opp[x][s] != -1:
                raise RoundClash(f"team {x} plays twice in round {s}")
        t.play(s, h, a)
    if strict:
        for i in range(n):
            for s in range(r):
                if t.opp[i][s] == -1:
                    raise RoundClash(f"team {i} is idle in round {s}")
    return t


def opponent(t: Timetable, i: int, s: int) -> int:
    return t.opp[i][s]


def home_status(t: Timetable, i: int, s: int) -> Status:
    return HOME if t.home[i][s] else AWAY


@dataclass(frozen=True)
class ImbalanceReport:
    delta_per_team: tuple[int, ...]
    total_delta: int
    r: int

    @property
    def balanced(self) -> bool:
        return self.total_delta == 0

    @property
    def excess(self) -> int:
        """Number of surplus home or away games over all teams."""
        slack = self.r % 2
        return sum((abs(d) - slack) // 2 for d in self.delta_per_team if abs(d) > slack)

    def surplus(self) -> list[int]:
        """Teams with too many home games."""
        lim = self.r % 2
        return [v for v, d in enumerate(self.delta_per_team) if d > lim]

    def deficit(self) -> list[int]:
        lim = self.r % 2
        return [v for v, d in enumerate(self.delta_per_team) if d < -lim]


def team_deltas(t: Timetable) -> list[int]:
    out = []
    for i in range(t.n):
        o, h = t.opp[i], t.home[i]
        out.append(sum((1 if h[s] else -1) for s in range(t.r) if o[s] >= 0))
    return out


def total_delta(deltas: Sequence[int], r: int) -> int:
    lim = r % 2
    return sum(abs(d) for d in deltas if abs(d) > lim)


def imbalance(t: Timetable) -> ImbalanceReport:
    d = team_deltas(t)
    return ImbalanceReport(tuple(d), total_delta(d, t.r), t.r)


@dataclass(frozen=True)
class Violation:
    constraint: str  # "C1", "C2" or "C3"
    team: int
    round: int | None = None
    other: int | None = None
    detail: str = ""


@dataclass(frozen=True)
class FeasibilityReport:
    c1: bool
    c2: bool
    c3: bool
    violations: tuple[Violation, ...]

    @property
    def feasible(self) -> bool:
        return self.c1 and self.c2 and self.c3

    @property
    def witness(self) -> Violation | None:
        return self.violations[0] if self.violations else None

    def __bool__(self) -> bool:
        return self.feasible


def validate(t: Timetable) -> FeasibilityReport:
    """Check C1 (meet at most once), C2 (one game per round) and C3 (balance)."""
    n, r = t.n, t.r
    viol: list[Violation] = []
    for i in range(n):
        row = [j for j in t.opp[i] if j >= 0]
        seen: set[int] = set()
        for j in row:
            if j in seen:
                viol.append(Violation("C1", i, other=j, detail="pair meets more than once"))
            seen.add(j)
        n_colored = sum(1 for j in range(n) if j != i and t.color[i][j] != UNCOLORED)
        if n_colored != len(set(row)):
            viol.append(Violation("C1", i, detail="coloring and round table disagree"))
    for i in range(n):
        for s in range(r):
            j = t.opp[i][s]
            if j < 0 or j == i or j >= n:
                viol.append(Violation("C2", i, s, detail="no game"))
            elif t.opp[j][s] != i or t.color[i][j] != s:
                viol.append(Violation("C2", i, s, j, detail="inconsistent pairing"))
            elif t.home[i][s] == t.home[j][s]:
                viol.append(Violation("C2", i, s, j, detail="both teams have the same status"))
    c1 = not any(v.constraint == "C1" for v in viol)
    c2 = not any(v.constraint == "C2" for v in viol)
    lim = r % 2
    for i, d in enumerate(team_deltas(t)):
        if abs(d) > lim:
            viol.append(Violation("C3", i, detail=f"home minus away = {d}"))
    c3 = not any(v.constraint == "C3" for v in viol)
    return FeasibilityReport(c1, c2, c3, tuple(viol))
