"""Adaptive late acceptance hill climbing.

A candidate is accepted when its cost beats the history slot ``L[i mod l_h]``
or does not exceed the incumbent's cost.  After ``idle_threshold``
consecutive non-improving iterations the history grows by half (rounded up),
the search restarts from the best solution, and the history is refilled from
``[z_best, z_best * rho]`` with a slightly larger ``rho``.  A new best
solution, or a history too long to grow below ``history_cap``, resets the
history to length ``reset_history``.

Moves are applied in place and undone on rejection, with the objective kept
up to date incrementally through the touched teams and rounds.
"""
from __future__ import annotations

import csv
import math
import random
import time
from dataclasses import dataclass, field
from typing import Sequence

from . import moves as mv
from .construct import construct_ittp_initial, construct_ystp_initial
from .cycles import NoCycle, find_balanced_cycle
from .objective import Evaluation, ITTPInstance, Scorer, YSTPInstance, scorer_for
from .timetable import Timetable

SUITES: dict[str, tuple[str, ...]] = {
    "Base": ("TS", "PRS", "CR"),
    "iPTS": ("iPTS",),
    "iPTS-CR": ("iPTS-CR",),
    "iPRS-U": ("iPRS-U",),
    "CR+iPRS-B": ("CR", "iPRS-B"),
    "All": ("TS", "iPTS", "PRS", "iPRS-U", "CR"),
}

NEIGHBORHOODS = ("RS", "PRS", "TS", "CR", "iPTS", "iPTS-CR", "iPRS-B", "iPRS-U")


def resolve_suite(suite: str | Sequence[str]) -> tuple[str, ...]:
    """Preset name, comma-separated list or sequence of neighborhood names."""
    if isinstance(suite, str):
        if suite in SUITES:
            return SUITES[suite]
        suite = [s.strip() for s in suite.split(",") if s.strip()]
    names = tuple(suite)
    if not names:
        raise ValueError("empty neighborhood suite")
    bad = [s for s in names if s not in NEIGHBORHOODS]
    if bad:
        raise ValueError(f"unknown neighborhoods {bad}; choose from {NEIGHBORHOODS} or presets {list(SUITES)}")
    return names


@dataclass
class SearchConfig:
    suite: str | Sequence[str] = "All"
    time_limit: float = 7200.0
    idle_threshold: int = 100_000
    growth: float = 1.5
    history_cap: int = 100_000
    rho_init: float = 1.005
    rho_incr: float = 0.005
    reset_history: int = 10
    bfs_probability: float = 0.9
    seed: int = 0
    strict_incumbent: bool = False
    max_iterations: int | None = None
    target: float | None = None  # stop once the best cost is at most this
    record_decisions: bool = False


@dataclass
class TraceRow:
    iteration: int
    elapsed_ms: float
    incumbent_cost: float
    best_cost: float
    l_h: int
    rho: float


@dataclass
class Decision:
    iteration: int
    slot: int
    slot_value: float
    incumbent_cost: float
    candidate_cost: float | None
    accepted: bool


@dataclass
class SearchState:
    L: list[float]
    l_h: int
    rho: float
    i: int
    i_idle: int
    incumbent: Timetable
    z_incumbent: float
    best: Timetable
    z_best: float
    iteration: int = 0
    trace: list[TraceRow] = field(default_factory=list)
    decisions: list[Decision] = field(default_factory=list)
    stalls: int = 0


class _Rejected:
    def __repr__(self) -> str:
        return "REJECTED_INFEASIBLE"


REJECTED_INFEASIBLE = _Rejected()


def new_state(t: Timetable, cost: float) -> SearchState:
    return SearchState([cost], 1, 0.0, 0, 0, t, cost, t.copy(), cost)


def _sample(name: str, t: Timetable, rng: random.Random, bfs_p: float) -> mv.MoveOutcome | None:
    n, r = t.n, t.r
    if name == "RS":
        if r < 2:
            return None
        q, s = rng.sample(range(r), 2)
        return mv.round_swap(t, q, s, inplace=True)
    if name == "PRS":
        if r < 2:
            return None
        q, s = rng.sample(range(r), 2)
        return mv.partial_round_swap(t, q, s, rng, inplace=True)
    if name == "TS":
        i, j = rng.sample(range(n), 2)
        return mv.team_swap(t, i, j, inplace=True)
    if name == "CR":
        try:
            cyc = find_balanced_cycle(t, rng)
        except NoCycle:
            return None
        return mv.cycle_reversal(t, cyc, inplace=True)
    if name in ("iPTS", "iPTS-CR"):
        i, j = rng.sample(range(n), 2)
        rounds = [s for s in range(r) if s != t.color[i][j]]
        s = rounds[rng.randrange(len(rounds))]
        fn = mv.ipts if name == "iPTS" else mv.ipts_cr
        return fn(t, i, j, s, rng, bfs_probability=bfs_p, inplace=True)
    if name == "iPRS-B":
        return mv.iprs_b(t, rng.randrange(r), rng, inplace=True)
    if name == "iPRS-U":
        return mv.iprs_u(t, rng.randrange(r), rng, bfs_probability=bfs_p, inplace=True)
    raise ValueError(f"unknown neighborhood {name}")


def propose(
    state: SearchState | Timetable,
    suite: str | Sequence[str],
    rng: random.Random,
    scorer: Scorer | None = None,
    *,
    bfs_probability: float = 0.9,
):
    """Apply one random move to the incumbent in place.

    Returns the :class:`MoveOutcome` (already applied; call ``undo`` and
    ``scorer.revert`` to reject it), ``None`` when the sampled neighborhood
    had no applicable structure, or :data:`REJECTED_INFEASIBLE` (already
    undone) when the candidate breaks a hard constraint.
    """
    t = state.incumbent if isinstance(state, SearchState) else state
    names = resolve_suite(suite)
    name = names[rng.randrange(len(names))]
    out = _sample(name, t, rng, bfs_probability)
    if out is None:
        return None
    if scorer is not None:
        scorer.update(t, out.touched_teams, out.touched_rounds)
        if not scorer.feasible:
            scorer.revert()
            out.undo()
            return REJECTED_INFEASIBLE
    return out


def accept(candidate_cost: float, state: SearchState, strict: bool = False) -> bool:
    """Late acceptance test; lowers the history slot when the candidate beats it."""
    slot = state.i % state.l_h
    beats_slot = candidate_cost < state.L[slot]
    ok = beats_slot or (candidate_cost < state.z_incumbent if strict else candidate_cost <= state.z_incumbent)
    if beats_slot:
        state.L[slot] = candidate_cost
    return ok


def _refill(state: SearchState, rng: random.Random, integral: bool) -> None:
    lo, hi = state.z_best, state.z_best * state.rho
    vals = [rng.uniform(lo, hi) for _ in range(state.l_h)]
    state.L = [float(round(v)) for v in vals] if integral else vals


def adapt(state: SearchState, config: SearchConfig, rng: random.Random, *, integral: bool = True) -> SearchState:
    """Grow the history on a stall; reset it after a new best or once it is
    too long to grow again.  Returns ``state`` (modified in place)."""
    improved = state.z_incumbent < state.z_best
    if improved:
        state.best = state.incumbent.copy()
        state.z_best = state.z_incumbent
    if state.i_idle > config.idle_threshold and state.l_h * config.growth < config.history_cap:
        state.l_h = math.ceil(state.l_h * config.growth)
        state.i = 0
        state.i_idle = 0
        state.incumbent = state.best.copy()
        state.z_incumbent = state.z_best
        state.rho += config.rho_incr
        state.stalls += 1
        _refill(state, rng, integral)
    if improved or state.l_h * config.growth >= config.history_cap:
        state.l_h = config.reset_history
        state.i = 0
        state.i_idle = 0
        if not improved:
            state.incumbent = state.best.copy()
            state.z_incumbent = state.z_best
        state.rho = config.rho_init
        _refill(state, rng, integral)
    return state


@dataclass
class SearchResult:
    best: Timetable
    evaluation: Evaluation
    initial_cost: float
    trace: list[TraceRow]
    iterations: int
    elapsed: float
    state: SearchState

    def write_trace(self, path) -> None:
        write_trace(self.trace, path)


def write_trace(trace: Sequence[TraceRow], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["iteration", "elapsed_ms", "incumbent_cost", "best_cost", "l_h", "rho"])
        for row in trace:
            w.writerow([row.iteration, f"{row.elapsed_ms:.1f}", row.incumbent_cost, row.best_cost, row.l_h, f"{row.rho:.4f}"])


def initial_solution(instance, seed: int = 0) -> Timetable:
    if isinstance(instance, ITTPInstance):
        return construct_ittp_initial(instance, seed)
    if isinstance(instance, YSTPInstance):
        return construct_ystp_initial(instance, seed)
    raise TypeError(f"unsupported instance type {type(instance).__name__}")


def run(
    instance,
    problem: str | None = None,
    config: SearchConfig | None = None,
    initial: Timetable | None = None,
    observer=None,
) -> SearchResult:
    """Search from a constructed (or given) feasible timetable.

    ``problem`` ("ittp" or "ystp") is checked against the instance type when
    given.  Stops on ``time_limit``, ``max_iterations`` or reaching ``target``.
    ``observer(event, state, outcome)`` is called with ``"accept"`` after
    each accepted move, ``"best"`` when the best solution is replaced and
    ``"restart"`` when the incumbent is reset to the best solution.
    """
    config = config or SearchConfig()
    if problem is not None:
        want = {"ittp": ITTPInstance, "ystp": YSTPInstance}[problem.lower()]
        if not isinstance(instance, want):
            raise TypeError(f"problem {problem} needs a {want.__name__}")
    suite = resolve_suite(config.suite)
    rng = random.Random(config.seed)
    t0 = time.perf_counter()
    t = initial.copy() if initial is not None else initial_solution(instance, config.seed)
    scorer = scorer_for(instance)
    scorer.reset(t)
    if not scorer.feasible:
        raise ValueError("initial timetable violates hard constraints")
    z0 = scorer.cost
    st = new_state(t, z0)
    st.rho = config.rho_init
    integral = isinstance(z0, int)

    def log_row():
        st.trace.append(TraceRow(st.iteration, (time.perf_counter() - t0) * 1000, st.z_incumbent, st.z_best, st.l_h, st.rho))

    log_row()
    deadline = t0 + config.time_limit
    check_every = 64
    while True:
        if config.max_iterations is not None and st.iteration >= config.max_iterations:
            break
        if config.target is not None and st.z_best <= config.target:
            break
        if st.iteration % check_every == 0 and time.perf_counter() >= deadline:
            break
        if config.time_limit <= 0:
            break
        st.iteration += 1
        st.i += 1
        inc = st.incumbent
        out = propose(inc, suite, rng, scorer, bfs_probability=config.bfs_probability)
        cand = scorer.cost if isinstance(out, mv.MoveOutcome) else None
        slot = st.i % st.l_h
        slot_value = st.L[slot]
        if cand is None:
            ok = False
        else:
            ok = accept(cand, st, config.strict_incumbent)
        if config.record_decisions:
            st.decisions.append(Decision(st.iteration, slot, slot_value, st.z_incumbent, cand, ok))
        if cand is None or cand >= st.z_incumbent:
            st.i_idle += 1
        else:
            st.i_idle = 0
        if ok:
            st.z_incumbent = cand
            if observer is not None:
                observer("accept", st, out)
        elif cand is not None:
            scorer.revert()
            out.undo()
        prev_best, prev_lh = st.z_best, st.l_h
        before_inc = st.incumbent
        adapt(st, config, rng, integral=integral)
        if observer is not None and st.z_best < prev_best:
            observer("best", st, None)
        if st.incumbent is not before_inc:
            scorer.reset(st.incumbent)
            if observer is not None:
                observer("restart", st, None)
        if st.z_best < prev_best or st.l_h != prev_lh:
            log_row()
    log_row()
    ev = scorer.evaluate(st.best)
    return SearchResult(st.best, ev, z0, st.trace, st.iteration, time.perf_counter() - t0, st)
