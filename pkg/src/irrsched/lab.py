"""Exhaustive solution spaces and move graphs for small ``n``.

``enumerate_space`` lists every timetable for ``(n, r)``, either as colorings
(orientation ignored) or as full states with every balanced orientation.
``check_connectivity`` applies every legal input of each neighborhood in a
suite to every state and reports the components of the resulting graph.
All of this is exponential and meant for ``n <= 8``.
"""
from __future__ import annotations

import enum
import itertools
from collections import deque
from dataclasses import dataclass, field
from typing import Callable, Iterable, Sequence

import networkx as nx

from . import moves as mv
from .cycles import all_alternating_cycles, all_balanced_cycles, bichromatic_cycles
from .timetable import UNCOLORED, Timetable, new_timetable, team_deltas, total_delta


class SizeLimit(RuntimeError):
    pass


class Mode(enum.Enum):
    COLORINGS = "colorings"
    FULL = "full"


COLORINGS = Mode.COLORINGS
FULL = Mode.FULL

MAX_N = 8


# -- enumeration --------------------------------------------------------------
def perfect_matchings(vertices: Sequence[int], allowed: Callable[[int, int], bool] | None = None) -> list[tuple[tuple[int, int], ...]]:
    """All perfect matchings on ``vertices`` using allowed pairs."""
    vs = list(vertices)
    if not vs:
        return [()]
    a, rest = vs[0], vs[1:]
    out = []
    for k, b in enumerate(rest):
        if allowed is not None and not allowed(a, b):
            continue
        for m in perfect_matchings(rest[:k] + rest[k + 1:], allowed):
            out.append(((a, b),) + m)
    return out


def coloring_rounds(n: int, r: int) -> list[list[tuple[tuple[int, int], ...]]]:
    """Every ordered tuple of ``r`` pairwise disjoint perfect matchings."""
    out = []
    used: set = set()

    def rec(prefix):
        if len(prefix) == r:
            out.append(list(prefix))
            return
        for m in perfect_matchings(range(n), lambda a, b: (a, b) not in used):
            used.update(m)
            prefix.append(m)
            rec(prefix)
            prefix.pop()
            used.difference_update(m)

    rec([])
    return out


def balanced_orientations(n: int, r: int, rounds) -> Iterable[Timetable]:
    """Every balanced orientation of a coloring given as matchings."""
    edges = [(s, a, b) for s, m in enumerate(rounds) for a, b in m]
    lo, hi = r // 2, (r + 1) // 2
    homes = [0] * n
    left = [r] * n  # games still to orient per team
    choice = [None] * len(edges)

    def rec(k):
        if k == len(edges):
            yield new_timetable(n, r, [(s, a, b) if c else (s, b, a) for (s, a, b), c in zip(edges, choice)])
            return
        s, a, b = edges[k]
        left[a] -= 1
        left[b] -= 1
        for c in (True, False):
            h, w = (a, b) if c else (b, a)
            homes[h] += 1
            if homes[h] <= hi and homes[w] + left[w] >= lo:
                choice[k] = c
                yield from rec(k + 1)
            homes[h] -= 1
        left[a] += 1
        left[b] += 1

    yield from rec(0)


def _oriented(n: int, r: int, rounds) -> Timetable:
    """The coloring with some balanced orientation (deterministic)."""
    t = new_timetable(n, r, [(s, a, b) for s, m in enumerate(rounds) for a, b in m])
    mv._restore(t, None, 1.0)
    return t


@dataclass
class SolutionSpace:
    n: int
    r: int
    mode: Mode
    states: list[Timetable]
    index: dict = field(default_factory=dict)

    def key(self, t: Timetable):
        return t.coloring_key() if self.mode is COLORINGS else t.key()

    def __post_init__(self):
        if not self.index:
            self.index = {self.key(t): k for k, t in enumerate(self.states)}

    def __len__(self) -> int:
        return len(self.states)

    def lookup(self, t: Timetable) -> int:
        return self.index[self.key(t)]


def enumerate_space(n: int, r: int, mode: Mode | str = COLORINGS, *, max_states: int = 2_000_000) -> SolutionSpace:
    mode = Mode(mode) if not isinstance(mode, Mode) else mode
    if n > MAX_N:
        raise SizeLimit(f"enumeration is limited to n <= {MAX_N}")
    if n % 2 or not 1 <= r < n - 1:
        raise ValueError(f"need even n and 1 <= r < n-1, got n={n}, r={r}")
    states = []
    for rounds in coloring_rounds(n, r):
        if mode is COLORINGS:
            states.append(_oriented(n, r, rounds))
        else:
            states.extend(balanced_orientations(n, r, rounds))
        if len(states) > max_states:
            raise SizeLimit(f"more than {max_states} states")
    return SolutionSpace(n, r, mode, states)


# -- isomorphism --------------------------------------------------------------
def canonical_coloring_key(t: Timetable) -> tuple:
    """Key equal for two colorings iff they agree up to team and round relabeling.

    For every ordering of the rounds, each connected component of the union of
    the rounds is labeled by a search from each possible root that visits
    neighbors in round order; the component code is the smallest labeled
    adjacency table over the roots, and the key is the smallest sorted tuple
    of component codes over all round orderings.  Exact, exponential in ``r``.
    """
    n, r = t.n, t.r
    if n > 2 * MAX_N:
        raise SizeLimit("canonical keys are limited to small instances")
    opp = t.opp
    comps = []
    seen = [False] * n
    for v in range(n):
        if seen[v]:
            continue
        comp, q = [], [v]
        seen[v] = True
        while q:
            x = q.pop()
            comp.append(x)
            for s in range(r):
                y = opp[x][s]
                if not seen[y]:
                    seen[y] = True
                    q.append(y)
        comps.append(comp)
    best = None
    for order in itertools.permutations(range(r)):
        codes = []
        for comp in comps:
            cbest = None
            for root in comp:
                lab = {root: 0}
                seq = [root]
                k = 0
                while k < len(seq):
                    x = seq[k]
                    k += 1
                    for s in order:
                        y = opp[x][s]
                        if y not in lab:
                            lab[y] = len(seq)
                            seq.append(y)
                code = tuple(lab[opp[x][s]] for x in seq for s in order)
                if cbest is None or code < cbest:
                    cbest = code
            codes.append(cbest)
        key = tuple(sorted(codes))
        if best is None or key < best:
            best = key
    return (n, r, best)


def brute_force_coloring_key(t: Timetable) -> tuple:
    """Reference key by minimizing over all team and round permutations."""
    n, r = t.n, t.r
    if n > 6:
        raise SizeLimit("brute force keys are limited to n <= 6")
    classes = [sorted((a, b) for a in range(n) for b in range(a + 1, n) if t.color[a][b] == s) for s in range(r)]
    best = None
    for perm in itertools.permutations(range(n)):
        facs = sorted(tuple(sorted(tuple(sorted((perm[a], perm[b]))) for a, b in c)) for c in classes)
        key = tuple(facs)
        if best is None or key < best:
            best = key
    return best


def is_perfect(t: Timetable, include_uncolored: bool | None = None) -> bool:
    """Every two rounds together form a single Hamiltonian cycle.

    With ``r = n - 2`` the uncolored edges form one more perfect matching,
    which is included by default.
    """
    n, r = t.n, t.r
    for q in range(r):
        for s in range(q + 1, r):
            if len(bichromatic_cycles(t, q, s)) != 1:
                return False
    if include_uncolored is None:
        include_uncolored = r == n - 2
    if include_uncolored:
        u = [next(j for j in range(n) if j != i and t.color[i][j] == UNCOLORED) for i in range(n)]
        for s in range(r):
            seen, v, steps = set(), 0, 0
            while v not in seen:
                seen.add(v)
                v = t.opp[v][s] if steps % 2 == 0 else u[v]
                steps += 1
            if len(seen) != n:
                return False
    return True


# -- move graphs --------------------------------------------------------------
ORIENTATION_FREE = ("RS", "PRS", "TS", "iPTS", "iPTS-CR", "iPRS-U")
FULL_MOVES = ("RS", "PRS", "TS", "CR", "PR", "iPRS-B")


def _balance_keeping_paths(t: Timetable) -> list[tuple[int, ...]]:
    """Directed paths whose reversal keeps every team balanced."""
    d = team_deltas(t)
    out = []
    n = t.n
    outs = [t.out_neighbors(v) for v in range(n)]
    for w in range(n):
        if d[w] + 2 > t.r % 2:
            continue
        stack, path = [iter(outs[w])], [w]
        while stack:
            for v in stack[-1]:
                if v in path:
                    continue
                path.append(v)
                if d[v] - 2 >= -(t.r % 2):
                    out.append(tuple(path))
                stack.append(iter(outs[v]))
                break
            else:
                stack.pop()
                path.pop()
    return out


def neighbors(t: Timetable, name: str) -> list[Timetable]:
    """Every timetable reachable by one move of neighborhood ``name``.

    ``iPTS``, ``iPTS-CR`` and ``iPRS-U`` use a repair path whose choice only
    affects orientations; use them on colorings.
    """
    n, r = t.n, t.r
    out = []
    if name == "RS":
        out = [mv.round_swap(t, q, s).timetable for q in range(r) for s in range(q + 1, r)]
    elif name == "PRS":
        for q in range(r):
            for s in range(q + 1, r):
                for c in bichromatic_cycles(t, q, s):
                    out.append(mv.partial_round_swap(t, q, s, cycle=c.vertices).timetable)
    elif name == "TS":
        out = [mv.team_swap(t, i, j).timetable for i in range(n) for j in range(i + 1, n)]
    elif name == "CR":
        out = [mv.cycle_reversal(t, c).timetable for c in all_balanced_cycles(t)]
    elif name == "PR":
        out = [mv.path_reversal(t, p).timetable for p in _balance_keeping_paths(t)]
    elif name in ("iPTS", "iPTS-CR"):
        for i in range(n):
            for j in range(n):
                if i == j:
                    continue
                for s in range(r):
                    if s != t.color[i][j]:
                        o = mv.ipts(t, i, j, s)
                        if o is not None:
                            out.append(o.timetable)
    elif name == "iPRS-B":
        for s in range(r):
            for c in all_alternating_cycles(t, s):
                if c.balanced:
                    out.append(mv.iprs_b(t, s, cycle=c.vertices).timetable)
    elif name == "iPRS-U":
        for s in range(r):
            for c in all_alternating_cycles(t, s):
                out.append(mv.iprs_u(t, s, cycle=c.vertices).timetable)
    else:
        raise ValueError(f"unknown neighborhood {name}")
    return out


@dataclass
class ComponentReport:
    n: int
    r: int
    suite: tuple[str, ...]
    mode: Mode
    n_states: int
    n_arcs: int
    n_components: int  # strongly connected
    n_weak_components: int
    component_sizes: list[int]
    symmetric: bool
    witnesses: list[list[list[str]]]

    @property
    def connected(self) -> bool:
        return self.n_components == 1

    def summary(self) -> str:
        return (
            f"n={self.n} r={self.r} suite={'+'.join(self.suite)} mode={self.mode.value} "
            f"states={self.n_states} arcs={self.n_arcs} components={self.n_components} "
            f"weak_components={self.n_weak_components} sizes={self.component_sizes}"
        )

    def csv_row(self) -> list:
        return [self.n, self.r, "+".join(self.suite), self.mode.value, self.n_states, self.n_arcs,
                self.n_components, self.n_weak_components, " ".join(map(str, self.component_sizes))]


CSV_HEADER = ["n", "r", "suite", "mode", "states", "arcs", "components", "weak_components", "component_sizes"]


def move_graph(space: SolutionSpace, suite: Sequence[str]) -> nx.DiGraph:
    allowed = ORIENTATION_FREE if space.mode is COLORINGS else FULL_MOVES
    bad = [m for m in suite if m not in allowed and not (space.mode is COLORINGS and m in ("CR", "PR"))]
    if bad:
        raise ValueError(f"{bad} not supported in {space.mode.value} mode (supported: {allowed})")
    g = nx.DiGraph()
    g.add_nodes_from(range(len(space)))
    for k, t in enumerate(space.states):
        for name in suite:
            if space.mode is COLORINGS and name in ("CR", "PR"):
                continue  # orientation only
            for u in neighbors(t, name):
                m = space.lookup(u)
                if m != k:
                    g.add_edge(k, m)
    return g


def component_report(space: SolutionSpace, suite: Sequence[str], g: nx.DiGraph | None = None) -> ComponentReport:
    g = move_graph(space, suite) if g is None else g
    strong = sorted(nx.strongly_connected_components(g), key=lambda c: (-len(c), min(c)))
    weak = list(nx.weakly_connected_components(g))
    symmetric = all(g.has_edge(b, a) for a, b in g.edges)
    wit = [space.states[min(c)].to_table() for c in strong[:5]]
    return ComponentReport(space.n, space.r, tuple(suite), space.mode, len(space), g.number_of_edges(),
                           len(strong), len(weak), [len(c) for c in strong], symmetric, wit)


def check_connectivity(n: int, r: int, suite: Sequence[str] | str, mode: Mode | str = COLORINGS) -> ComponentReport:
    from .alahc import resolve_suite

    names = resolve_suite(suite) if isinstance(suite, str) else tuple(suite)
    space = enumerate_space(n, r, mode)
    return component_report(space, names)


# -- specific checks ----------------------------------------------------------
def hamiltonian_r2(n: int) -> Timetable:
    """Two rounds forming one Hamiltonian cycle ``0-1-...-(n-1)-0``; teams
    with odd 1-based ids are home in the first round and away in the second."""
    games = []
    for k in range(n):
        a, b = k, (k + 1) % n
        s = 0 if k % 2 == 0 else 1
        h, w = (a, b) if (a % 2 == 0) == (s == 0) else (b, a)
        games.append((s, h, w))
    return new_timetable(n, 2, games)


@dataclass
class CounterexampleReport:
    n: int
    balanced_cycle_rounds: list[int]
    closure_states: int
    closure_colorings: int
    total_colorings: int
    same_parity_pairing: bool

    @property
    def missing_colorings(self) -> int:
        return self.total_colorings - self.closure_colorings


def closure(start: Timetable, suite: Sequence[str], key=lambda t: t.key(), limit: int = 1_000_000) -> dict:
    """All states reachable from ``start`` (keyed by ``key``)."""
    seen = {key(start): start}
    q = deque([start])
    while q:
        t = q.popleft()
        for name in suite:
            for u in neighbors(t, name):
                k = key(u)
                if k not in seen:
                    seen[k] = u
                    q.append(u)
                    if len(seen) > limit:
                        raise SizeLimit("closure too large")
    return seen


def verify_counterexample_r2(n: int) -> CounterexampleReport:
    """Closure of the two-round Hamiltonian instance under iPRS-B and CR."""
    if n % 2 or n < 6 or n > MAX_N:
        raise ValueError("need even 6 <= n <= 8")
    t = hamiltonian_r2(n)
    rounds_with_cycle = [s for s in range(2) if any(c.balanced for c in all_alternating_cycles(t, s))]
    reach = closure(t, ("iPRS-B", "CR"))
    cols = {u.coloring_key() for u in reach.values()}
    same = any((h - a) % 2 == 0 for u in reach.values() for _, h, a in u.games())
    total = len(coloring_rounds(n, 2))
    return CounterexampleReport(n, rounds_with_cycle, len(reach), len(cols), total, same)


def verify_orientation_connectivity(n: int, r: int, coloring: Timetable | None = None,
                                    suite: Sequence[str] | None = None) -> ComponentReport:
    """Move graph over all balanced orientations of one coloring.

    Default suite: CR for even ``r``, CR and PR for odd ``r``.
    """
    if n > MAX_N:
        raise SizeLimit(f"limited to n <= {MAX_N}")
    if coloring is None:
        from .construct import construct_circle

        coloring = construct_circle(n, r)
    rounds = [tuple(sorted(tuple(sorted(e)) for e in coloring.round_edges(s))) for s in range(r)]
    states = list(balanced_orientations(n, r, rounds))
    space = SolutionSpace(n, r, FULL, states)
    suite = tuple(suite) if suite is not None else (("CR",) if r % 2 == 0 else ("CR", "PR"))
    return component_report(space, suite)


def perfect_closure(start: Timetable, suite: Sequence[str]) -> tuple[int, int]:
    """Size of the coloring closure of ``start`` and how many of its
    colorings are perfect."""
    reach = closure(start, suite, key=lambda t: t.coloring_key())
    return len(reach), sum(1 for u in reach.values() if is_perfect(u))


def escaping_moves(start: Timetable, name: str) -> list[Timetable]:
    """One-move neighbors of ``start`` that are not perfect."""
    return [u for u in neighbors(start, name) if not is_perfect(u)]
