"""Command line interface: ``irrsched {solve,validate,lab,bench,export-lp,gen}``.

Exit codes: 0 success, 1 infeasible or invalid solution, 2 unreadable input
or configuration.  ``IRRSCHED_TIME_LIMIT`` sets the default time limit in
seconds for ``solve`` and ``bench``.
"""
from __future__ import annotations

import argparse
import csv
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from . import io as fio
from . import lab
from .alahc import SUITES, SearchConfig, resolve_suite, run
from .construct import ConstructionFailed
from .lp import WriteError, export_lp
from .objective import ITTPInstance, ittp_evaluate, ystp_evaluate
from .timetable import TimetableError, validate

OK, INFEASIBLE, BAD_INPUT = 0, 1, 2
DEFAULT_TIME_LIMIT = 7200.0


class InputError(Exception):
    pass


def default_time_limit() -> float:
    raw = os.environ.get("IRRSCHED_TIME_LIMIT")
    if raw is None:
        return DEFAULT_TIME_LIMIT
    try:
        return float(raw)
    except ValueError:
        raise InputError(f"IRRSCHED_TIME_LIMIT is not a number: {raw!r}") from None


def load_instance(problem: str, source: str, rounds: int | None = None, seed: int = 0):
    """A file path, or a generated iTTP name such as ``CON40-10``."""
    path = Path(source)
    try:
        if problem == "ystp":
            return fio.parse_ystp(path)
        if path.exists():
            if rounds is None:
                raise InputError("--rounds is required for an iTTP distance file")
            return fio.parse_ittp(path, rounds)
        fam, n, r = fio.parse_family_name(source)
        return fio.generate_family(fam, n, rounds or r, seed)
    except (fio.ParseError, fio.ConsistencyError) as e:
        raise InputError(str(e)) from None
    except (OSError, ValueError) as e:
        raise InputError(f"cannot load instance {source!r}: {e}") from None


def evaluate(inst, t):
    return ittp_evaluate(t, inst) if isinstance(inst, ITTPInstance) else ystp_evaluate(t, inst)


# -- commands -----------------------------------------------------------------
def cmd_solve(a) -> int:
    inst = load_instance(a.problem, a.instance, a.rounds, a.seed)
    limit = a.time_limit if a.time_limit is not None else default_time_limit()
    cfg = SearchConfig(suite=a.suite, time_limit=limit, seed=a.seed, max_iterations=a.max_iterations, target=a.target)
    try:
        res = run(inst, a.problem, cfg)
    except ConstructionFailed as e:
        print(f"construction failed: {e}", file=sys.stderr)
        return INFEASIBLE
    if a.out:
        fio.write_solution(res.best, a.out)
    if a.trace:
        res.write_trace(a.trace)
    ev = res.evaluation
    print(f"instance={inst.name or a.instance} suite={a.suite} seed={a.seed} initial={res.initial_cost} "
          f"best={ev.total} iterations={res.iterations} elapsed={res.elapsed:.1f}s")
    return OK if ev.feasible else INFEASIBLE


def cmd_validate(a) -> int:
    try:
        t = fio.read_solution(a.solution, a.n)
    except fio.ParseError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return BAD_INPUT
    except TimetableError as e:
        print(f"infeasible: {e}")
        return INFEASIBLE
    rep = validate(t)
    if not rep.feasible:
        w = rep.witness
        print(f"infeasible: {w.constraint} team {w.team + 1} {w.detail}")
        return INFEASIBLE
    if a.problem == "none":
        print(f"feasible (n={t.n}, r={t.r})")
        return OK
    if not a.instance:
        raise InputError(f"--instance is required with --problem {a.problem}")
    inst = load_instance(a.problem, a.instance, a.rounds or t.r)
    if (inst.n, inst.r) != (t.n, t.r):
        print(f"infeasible: solution is n={t.n}, r={t.r} but instance is n={inst.n}, r={inst.r}")
        return INFEASIBLE
    ev = evaluate(inst, t)
    if not ev.feasible:
        v = ev.hard_violations[0]
        team = "" if v.team is None else f" team {v.team + 1}"
        print(f"infeasible: {len(ev.hard_violations)} hard violations, first {v.kind}{team}")
        return INFEASIBLE
    print(f"feasible cost={ev.total} travel={ev.travel_cost} penalty={ev.penalty_cost}")
    return OK


def cmd_lab(a) -> int:
    try:
        if a.check == "connectivity":
            rep = lab.check_connectivity(a.n, a.r, a.suite, a.mode)
        elif a.check == "orientation":
            rep = lab.verify_orientation_connectivity(a.n, a.r)
        else:
            cr = lab.verify_counterexample_r2(a.n)
            print(f"n={cr.n} closure_states={cr.closure_states} closure_colorings={cr.closure_colorings} "
                  f"all_colorings={cr.total_colorings} missing={cr.missing_colorings} "
                  f"same_parity_pairing={cr.same_parity_pairing} rounds_with_balanced_cycle={[s + 1 for s in cr.balanced_cycle_rounds]}")
            return OK
    except lab.SizeLimit as e:
        raise InputError(str(e)) from None
    print(rep.summary())
    for k, w in enumerate(rep.witnesses[: 1 if rep.connected else 5]):
        print(f"component {k + 1} witness: " + " | ".join(" ".join(col) for col in w))
    if a.csv:
        new = not Path(a.csv).exists()
        with open(a.csv, "a", newline="") as fh:
            wr = csv.writer(fh, lineterminator="\n")
            if new:
                wr.writerow(lab.CSV_HEADER)
            wr.writerow(rep.csv_row())
    return OK


def _bench_job(job):
    problem, source, rounds, suite, seed, limit, target = job
    inst = load_instance(problem, source, rounds)
    res = run(inst, problem, SearchConfig(suite=suite, time_limit=limit, seed=seed, target=target))
    return {"instance": inst.name or source, "suite": suite, "seed": seed, "initial": res.initial_cost,
            "best": res.evaluation.total, "feasible": res.evaluation.feasible,
            "iterations": res.iterations, "elapsed": round(res.elapsed, 2)}


def load_bench_config(path) -> tuple[list, dict]:
    try:
        cfg = tomllib.loads(Path(path).read_text())
    except (OSError, tomllib.TOMLDecodeError) as e:
        raise InputError(f"cannot read bench config {path}: {e}") from None
    problem = cfg.get("problem", "ittp")
    seeds = cfg.get("seeds", [0])
    limit = float(cfg.get("time_limit", default_time_limit()))
    suites = cfg.get("suites", ["All"])
    target = cfg.get("target")
    instances = cfg.get("instances", [])
    if not instances:
        raise InputError("bench config lists no instances")
    jobs = []
    for entry in instances:
        if isinstance(entry, str):
            entry = {"name": entry}
        src = entry.get("path") or entry.get("name")
        if src is None:
            raise InputError(f"instance entry needs 'name' or 'path': {entry}")
        for suite in suites:
            try:
                resolve_suite(suite)
            except ValueError as e:
                raise InputError(str(e)) from None
            for seed in seeds:
                jobs.append((problem, src, entry.get("rounds"), suite, int(seed), limit, entry.get("target", target)))
    return jobs, {"problem": problem, "suites": suites}


def bench_table(rows: list[dict], suites: list[str]) -> str:
    best: dict = {}
    order = []
    for row in rows:
        if row["instance"] not in order:
            order.append(row["instance"])
        if row["feasible"]:
            k = (row["instance"], row["suite"])
            best[k] = min(best.get(k, row["best"]), row["best"])
    w = max(12, *(len(x) for x in order))
    lines = ["instance".ljust(w) + "".join(s.rjust(12) for s in suites)]
    for inst in order:
        lines.append(inst.ljust(w) + "".join(str(best.get((inst, s), "-")).rjust(12) for s in suites))
    return "\n".join(lines)


def cmd_bench(a) -> int:
    jobs, meta = load_bench_config(a.config)
    for inst in {(j[0], j[1], j[2]) for j in jobs}:
        load_instance(*inst)  # fail early on bad inputs
    if a.workers == 1:
        rows = [_bench_job(j) for j in jobs]
    else:
        with ProcessPoolExecutor(max_workers=a.workers) as ex:
            rows = list(ex.map(_bench_job, jobs))
    fields = ["instance", "suite", "seed", "initial", "best", "feasible", "iterations", "elapsed"]
    if a.raw:
        with open(a.raw, "w", newline="") as fh:
            wr = csv.DictWriter(fh, fields, lineterminator="\n")
            wr.writeheader()
            wr.writerows(rows)
    table = bench_table(rows, meta["suites"])
    print(table)
    if a.out:
        Path(a.out).write_text(table + "\n")
    return OK if all(r["feasible"] for r in rows) else INFEASIBLE


def cmd_export_lp(a) -> int:
    inst = load_instance("ystp", a.instance)
    try:
        model = export_lp(inst, a.out, a.eligibility)
    except WriteError as e:
        print(str(e), file=sys.stderr)
        return BAD_INPUT
    print(f"wrote {a.out}: {len(model.variables)} variables, {len(model.rows)} constraints")
    return OK


def cmd_gen(a) -> int:
    fam = a.family.upper()
    if fam == "SYN":
        if a.rounds is None:
            raise InputError("--rounds is required for SYN")
        text = fio.format_ystp(fio.random_ystp(a.n, a.rounds, a.seed))
    else:
        if fam not in fio.FAMILIES:
            raise InputError(f"unknown family {a.family!r}; choose from {fio.FAMILIES + ('SYN',)}")
        if a.n % 2:
            raise InputError("team count must be even")
        text = fio.format_ittp(fio.ITTPInstance(a.n, a.rounds or 1, fio.family_distances(fam, a.n, a.seed)))
    if a.out:
        Path(a.out).write_text(text)
    else:
        sys.stdout.write(text)
    return OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="irrsched", description="Incomplete round robin timetabling.")
    sub = p.add_subparsers(dest="command", required=True)
    suites = f"preset ({', '.join(SUITES)}) or comma-separated moves"

    s = sub.add_parser("solve", help="run the adaptive late acceptance search")
    s.add_argument("--problem", choices=["ittp", "ystp"], required=True)
    s.add_argument("--instance", required=True, help="instance file or generated name like CON40-10")
    s.add_argument("--rounds", type=int)
    s.add_argument("--suite", default="All", help=suites)
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--time-limit", type=float, help="seconds (default: $IRRSCHED_TIME_LIMIT or 7200)")
    s.add_argument("--max-iterations", type=int)
    s.add_argument("--target", type=float, help="stop once this cost is reached")
    s.add_argument("--out", help="solution CSV")
    s.add_argument("--trace", help="trace CSV")
    s.set_defaults(func=cmd_solve)

    v = sub.add_parser("validate", help="check a solution file")
    v.add_argument("--problem", choices=["none", "ittp", "ystp"], default="none")
    v.add_argument("--instance")
    v.add_argument("--rounds", type=int)
    v.add_argument("--n", type=int, help="team count (default: twice the games per round)")
    v.add_argument("--solution", required=True)
    v.set_defaults(func=cmd_validate)

    lb = sub.add_parser("lab", help="exhaustive move graph analysis for small n")
    lb.add_argument("--n", type=int, required=True)
    lb.add_argument("--r", type=int, required=True)
    lb.add_argument("--suite", default="iPRS-U", help=suites)
    lb.add_argument("--mode", choices=["colorings", "full"], default="colorings")
    lb.add_argument("--check", choices=["connectivity", "orientation", "counterexample"], default="connectivity")
    lb.add_argument("--csv", help="append a summary row to this CSV file")
    lb.set_defaults(func=cmd_lab)

    b = sub.add_parser("bench", help="seed sweeps from a TOML config")
    b.add_argument("--config", required=True)
    b.add_argument("--workers", type=int, default=os.cpu_count() or 1)
    b.add_argument("--raw", help="per-run CSV")
    b.add_argument("--out", help="summary table file")
    b.set_defaults(func=cmd_bench)

    e = sub.add_parser("export-lp", help="write the YSTP integer program in LP format")
    e.add_argument("--instance", required=True)
    e.add_argument("--out", required=True)
    e.add_argument("--eligibility", choices=["hard", "soft"], default="hard")
    e.set_defaults(func=cmd_export_lp)

    g = sub.add_parser("gen", help="generate an instance file")
    g.add_argument("--family", required=True, help="CON, CIRC, LINE, INCR, GAL (iTTP) or SYN (YSTP)")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--rounds", type=int)
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.set_defaults(func=cmd_gen)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    a = parser.parse_args(argv)
    try:
        return a.func(a)
    except InputError as e:
        print(f"error: {e}", file=sys.stderr)
        return BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())
