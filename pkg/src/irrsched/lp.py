"""Integer programming model of a YSTP instance in CPLEX LP format.

Variables (1-based indices): ``x_i_j_s`` is 1 when team ``i`` hosts team
``j`` in round ``s``; ``v_c_s >= 0`` is the capacity excess of club ``c`` in
round ``s``; ``b_i_s`` is 1 when team ``i`` has a break in round ``s``
(only with a break limit).

Rows mirror :func:`irrsched.objective.ystp_evaluate`: each pair meets at most
once, one game per team and round, home-game balance, at most two
consecutive home or away games, capacity with a cap on the summed excess,
and the optional start/end break, half-season balance and break-limit rules.

``eligibility="hard"`` only creates variables for eligible pairs;
``"soft"`` creates them for all pairs and adds the ineligibility penalty to
the objective, which is the model the local search optimizes.

:func:`read_lp` parses the subset of the format written here and
:func:`check_substitution` evaluates every row on the variable values
implied by a timetable.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path

from .objective import YSTPInstance
from .timetable import Timetable


class WriteError(OSError):
    pass


@dataclass
class Row:
    name: str
    terms: list[tuple[int, str]]  # (coefficient, variable)
    sense: str  # "<=", ">=", "="
    rhs: int
    family: str = ""


@dataclass
class LPModel:
    objective: list[tuple[int, str]]
    rows: list[Row]
    binaries: list[str]
    bounds: dict[str, tuple[float | None, float | None]] = field(default_factory=dict)

    @property
    def variables(self) -> set[str]:
        out = {v for _, v in self.objective}
        for row in self.rows:
            out.update(v for _, v in row.terms)
        return out | set(self.binaries) | set(self.bounds)

    def family_counts(self) -> dict[str, int]:
        out: dict[str, int] = {}
        for row in self.rows:
            out[row.family] = out.get(row.family, 0) + 1
        return out


def x(i: int, j: int, s: int) -> str:
    return f"x_{i + 1}_{j + 1}_{s + 1}"


def v(c: int, s: int) -> str:
    return f"v_{c + 1}_{s + 1}"


def b(i: int, s: int) -> str:
    return f"b_{i + 1}_{s + 1}"


def build_model(inst: YSTPInstance, eligibility: str = "hard") -> LPModel:
    if eligibility not in ("hard", "soft"):
        raise ValueError("eligibility must be 'hard' or 'soft'")
    n, r = inst.n, inst.r
    el = inst.eligible
    opp = [[j for j in range(n) if j != i and (eligibility == "soft" or el[i, j])] for i in range(n)]
    d = inst.distances
    pen = inst.penalty
    R = range(r)
    rows: list[Row] = []

    def add(family, name, terms, sense, rhs):
        rows.append(Row(name, terms, sense, rhs, family))

    obj = []
    for i in range(n):
        for j in opp[i]:
            cost = int(d[i, j]) + (0 if el[i, j] else pen)
            for s in R:
                obj.append((cost, x(i, j, s)))
    # each pair at most once (one row per unordered pair)
    for i in range(n):
        for j in opp[i]:
            if i < j:
                add("meet_once", f"once_{i + 1}_{j + 1}", [(1, x(i, j, s)) for s in R] + [(1, x(j, i, s)) for s in R], "<=", 1)
    for i in range(n):
        for s in R:
            add("one_game", f"play_{i + 1}_{s + 1}", [(1, x(i, j, s)) for j in opp[i]] + [(1, x(j, i, s)) for j in opp[i]], "=", 1)
    for i in range(n):
        home = [(1, x(i, j, s)) for j in opp[i] for s in R]
        if r % 2 == 0:
            add("home_balance", f"homes_{i + 1}", home, "=", r // 2)
        else:
            add("home_balance", f"homes_lo_{i + 1}", home, ">=", r // 2)
            add("home_balance", f"homes_hi_{i + 1}", home, "<=", r // 2 + 1)
    for i in range(n):
        for s in range(2, r):
            w = (s - 2, s - 1, s)
            add("max_two_home", f"runh_{i + 1}_{s + 1}", [(1, x(i, j, q)) for q in w for j in opp[i]], "<=", 2)
            add("max_two_away", f"runa_{i + 1}_{s + 1}", [(1, x(j, i, q)) for q in w for j in opp[i]], "<=", 2)
    for c in range(inst.n_clubs):
        members = [i for i in range(n) if inst.club_of[i] == c]
        for s in R:
            terms = [(1, x(i, j, s)) for i in members for j in opp[i]] + [(-1, v(c, s))]
            add("capacity", f"cap_{c + 1}_{s + 1}", terms, "<=", int(inst.capacity[c, s]))
    add("excess_cap", "excess", [(1, v(c, s)) for c in range(inst.n_clubs) for s in R], "<=", int(inst.v_plus))
    if inst.no_edge_breaks and r >= 2:
        edges = [0] + ([r - 2] if r >= 3 else [])
        for i in range(n):
            for s in edges:
                add("edge_break_home", f"ebh_{i + 1}_{s + 1}", [(1, x(i, j, q)) for q in (s, s + 1) for j in opp[i]], "<=", 1)
                add("edge_break_away", f"eba_{i + 1}_{s + 1}", [(1, x(j, i, q)) for q in (s, s + 1) for j in opp[i]], "<=", 1)
    if inst.half_balance:
        half = r // 2
        lo, hi = r // 4, (r + 3) // 4
        for i in range(n):
            for part, rs in ((1, range(0, half)), (2, range(r - half, r))):
                terms = [(1, x(i, j, q)) for q in rs for j in opp[i]]
                add("half_lo", f"halflo_{i + 1}_{part}", terms, ">=", lo)
                add("half_hi", f"halfhi_{i + 1}_{part}", terms, "<=", hi)
    binaries = [name for _, name in obj]
    bounds = {v(c, s): (0, None) for c in range(inst.n_clubs) for s in R}
    if inst.b_plus is not None:
        for i in range(n):
            for s in range(1, r):
                add("break_home", f"brh_{i + 1}_{s + 1}", [(1, x(i, j, q)) for q in (s - 1, s) for j in opp[i]] + [(-1, b(i, s))], "<=", 1)
                add("break_away", f"bra_{i + 1}_{s + 1}", [(1, x(j, i, q)) for q in (s - 1, s) for j in opp[i]] + [(-1, b(i, s))], "<=", 1)
            add("break_limit", f"brk_{i + 1}", [(1, b(i, s)) for s in range(1, r)], "<=", int(inst.b_plus))
            binaries += [b(i, s) for s in range(1, r)]
    return LPModel(obj, rows, binaries, bounds)


def _wrap(head: str, parts: list[str], width: int = 200) -> list[str]:
    lines, cur = [], head
    for p in parts:
        if len(cur) + 1 + len(p) > width and cur.strip():
            lines.append(cur)
            cur = "   "
        cur += " " + p
    lines.append(cur)
    return lines


def _expr(terms: list[tuple[int, str]]) -> list[str]:
    out = []
    for k, (c, name) in enumerate(terms):
        sign = "-" if c < 0 else "+"
        mag = abs(c)
        coef = "" if mag == 1 else f"{mag} "
        out.append(f"{coef}{name}" if k == 0 and sign == "+" else f"{sign} {coef}{name}")
    return out or ["0"]


def format_lp(model: LPModel, title: str = "") -> str:
    out = [f"\\ {title}".rstrip(), "Minimize"]
    out += _wrap(" obj:", _expr(model.objective))
    out.append("Subject To")
    for row in model.rows:
        out += _wrap(f" {row.name}:", _expr(row.terms) + [row.sense, str(row.rhs)])
    out.append("Bounds")
    for name, (lo, hi) in model.bounds.items():
        if hi is None:
            out.append(f" {name} >= {lo:g}")
        else:
            out.append(f" {lo:g} <= {name} <= {hi:g}")
    out.append("Binaries")
    out += _wrap("", model.binaries)
    out.append("End")
    return "\n".join(out) + "\n"


def export_lp(inst: YSTPInstance, path, eligibility: str = "hard") -> LPModel:
    model = build_model(inst, eligibility)
    try:
        Path(path).write_text(format_lp(model, inst.name or f"YSTP n={inst.n} r={inst.r}"))
    except OSError as e:
        raise WriteError(f"cannot write {path}: {e}") from e
    return model


_TERM = re.compile(r"([+-])?\s*(\d+)?\s*([A-Za-z_][\w.]*)")


def _parse_expr(text: str) -> list[tuple[int, str]]:
    terms = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TERM.match(text, pos)
        if not m:
            raise ValueError(f"cannot parse LP expression near {text[pos:pos + 20]!r}")
        sign = -1 if m.group(1) == "-" else 1
        coef = int(m.group(2)) if m.group(2) else 1
        terms.append((sign * coef, m.group(3)))
        pos = m.end()
        while pos < len(text) and text[pos] == " ":
            pos += 1
    return terms


def read_lp(text_or_path) -> LPModel:
    """Read the LP subset produced by :func:`format_lp`."""
    text = str(text_or_path)
    if "\n" not in text and Path(text).exists():
        text = Path(text).read_text()
    section = None
    stmts: dict[str, list[str]] = {"min": [], "st": [], "bounds": [], "bin": []}
    heads = {"minimize": "min", "subject to": "st", "bounds": "bounds", "binaries": "bin", "end": None}
    for raw in text.splitlines():
        line = raw.split("\\", 1)[0].rstrip()
        if not line.strip():
            continue
        low = line.strip().lower()
        if low in heads:
            section = heads[low]
            continue
        if section is None:
            continue
        if line.startswith("    ") and stmts[section]:
            stmts[section][-1] += " " + line.strip()
        else:
            stmts[section].append(line.strip())
    obj = _parse_expr(" ".join(s.split(":", 1)[1] for s in stmts["min"]))
    rows = []
    for s in stmts["st"]:
        name, rest = s.split(":", 1)
        m = re.match(r"(.*?)(<=|>=|=)\s*(-?\d+)\s*$", rest)
        if not m:
            raise ValueError(f"bad constraint {s!r}")
        rows.append(Row(name.strip(), _parse_expr(m.group(1)), m.group(2), int(m.group(3))))
    bounds = {}
    for s in stmts["bounds"]:
        p = s.split()
        if len(p) == 3 and p[1] == ">=":
            bounds[p[0]] = (float(p[2]), None)
        elif len(p) == 5:
            bounds[p[2]] = (float(p[0]), float(p[4]))
    binaries = [w for s in stmts["bin"] for w in s.split()]
    return LPModel(obj, rows, binaries, bounds)


def assignment(t: Timetable, inst: YSTPInstance) -> dict[str, int]:
    """Variable values implied by ``t``; the excess and break variables take
    their smallest admissible values."""
    vals: dict[str, int] = {}
    for s, h, a in t.games():
        vals[x(h, a, s)] = 1
    for c in range(inst.n_clubs):
        for s in range(t.r):
            homes = sum(1 for i in range(t.n) if inst.club_of[i] == c and t.home[i][s])
            vals[v(c, s)] = max(0, homes - int(inst.capacity[c, s]))
    for i in range(t.n):
        for s in range(1, t.r):
            vals[b(i, s)] = int(t.home[i][s] == t.home[i][s - 1])
    return vals


@dataclass
class SubstitutionResult:
    objective: int
    violated: list[str]
    unknown: list[str]  # scheduled games with no variable in the model

    @property
    def feasible(self) -> bool:
        return not self.violated and not self.unknown


def check_substitution(model: LPModel, t: Timetable, inst: YSTPInstance) -> SubstitutionResult:
    vals = assignment(t, inst)
    names = model.variables
    unknown = sorted(k for k, val in vals.items() if val and k.startswith("x_") and k not in names)
    get = lambda name: vals.get(name, 0)
    obj = sum(c * get(name) for c, name in model.objective)
    bad = []
    for row in model.rows:
        lhs = sum(c * get(name) for c, name in row.terms)
        ok = lhs <= row.rhs if row.sense == "<=" else lhs >= row.rhs if row.sense == ">=" else lhs == row.rhs
        if not ok:
            bad.append(row.name)
    for name, (lo, hi) in model.bounds.items():
        val = get(name)
        if (lo is not None and val < lo) or (hi is not None and val > hi):
            bad.append(f"bound {name}")
    return SubstitutionResult(obj, bad, unknown)
