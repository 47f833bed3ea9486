"""Instance and solution files, plus synthetic instance generators.

iTTP instances use the usual benchmark layout: the team count followed by
``n * n`` distances in row-major order, whitespace separated.  YSTP instances
use a sectioned text format::

    NAME example
    TEAMS 4
    ROUNDS 2
    CLUBS 2
    1: 1 2
    2: 3 4
    CAPACITIES
    1: 1 1
    2: 1 1
    ELIGIBLE
    1: 2 3 4
    ...
    DISTANCES
    0 1 2 3
    ...
    LIMITS
    v_plus 0
    b_plus none
    D1 0
    D2 0
    penalty none
    END

All ids in files are 1-based.  Solutions are CSV tables with one column per
round (``R1``, ``R2``, ...) holding ``home-away`` tokens.
"""
from __future__ import annotations

import csv
import math
import random
import re
from pathlib import Path

import numpy as np

from .objective import ITTPInstance, YSTPInstance
from .timetable import Timetable


class ParseError(ValueError):
    def __init__(self, message: str, line: int | None = None, col: int | None = None, path=None):
        where = ""
        if path is not None:
            where += f"{path}:"
        if line is not None:
            where += f"{line}:"
            if col is not None:
                where += f"{col}:"
        super().__init__(f"{where} {message}" if where else message)
        self.line, self.col, self.path = line, col, path


class ConsistencyError(ValueError):
    pass


def _tokens(text: str):
    """Yield ``(token, line, col)`` with 1-based positions, skipping ``#`` comments."""
    for ln, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0]
        for m in re.finditer(r"\S+", line):
            yield m.group(), ln, m.start() + 1


# -- iTTP ---------------------------------------------------------------------
def parse_ittp_text(text: str, r: int, name: str = "", path=None) -> ITTPInstance:
    toks = list(_tokens(text))
    if not toks:
        raise ParseError("empty instance file", 1, 1, path)

    def num(k, kind=int):
        tok, ln, col = toks[k]
        try:
            v = float(tok)
        except ValueError:
            raise ParseError(f"expected a number, got {tok!r}", ln, col, path) from None
        if kind is int:
            if v != int(v):
                raise ParseError(f"expected an integer, got {tok!r}", ln, col, path)
            return int(v)
        return v

    n = num(0)
    if n < 2:
        raise ParseError(f"team count must be at least 2, got {n}", toks[0][1], toks[0][2], path)
    need = 1 + n * n
    if len(toks) < need:
        ln, col = toks[-1][1], toks[-1][2] + len(toks[-1][0])
        raise ParseError(f"expected {n * n} distances, found {len(toks) - 1}", ln, col, path)
    if len(toks) > need:
        tok, ln, col = toks[need]
        raise ParseError(f"unexpected trailing token {tok!r}", ln, col, path)
    vals = [num(k, float) for k in range(1, need)]
    d = np.array(vals).reshape(n, n)
    if np.all(d == np.round(d)):
        d = d.astype(int)
    return ITTPInstance(n, r, d, name)


def parse_ittp(path, r: int) -> ITTPInstance:
    p = Path(path)
    return parse_ittp_text(p.read_text(), r, p.stem, path)


def format_ittp(inst: ITTPInstance) -> str:
    rows = [str(inst.n)] + [" ".join(str(x) for x in row) for row in inst.distances.tolist()]
    return "\n".join(rows) + "\n"


def write_ittp(inst: ITTPInstance, path) -> None:
    Path(path).write_text(format_ittp(inst))


FAMILIES = ("CON", "CIRC", "LINE", "INCR", "GAL")


def family_distances(family: str, n: int, seed: int = 0) -> np.ndarray:
    family = family.upper()
    idx = np.arange(n)
    if family == "CON":
        return np.ones((n, n), dtype=int) - np.eye(n, dtype=int)
    if family == "CIRC":
        k = np.abs(idx[:, None] - idx[None, :])
        return np.minimum(k, n - k)
    if family == "LINE":
        return np.abs(idx[:, None] - idx[None, :])
    if family == "INCR":
        pos = np.concatenate([[0], np.cumsum(np.arange(1, n))])  # gap after team k is k
        return np.abs(pos[:, None] - pos[None, :])
    if family == "GAL":
        rng = np.random.default_rng(seed)
        pts = rng.uniform(0, 100, size=(n, 3))
        diff = pts[:, None, :] - pts[None, :, :]
        return np.rint(np.sqrt((diff**2).sum(-1))).astype(int)
    raise ValueError(f"unknown family {family!r}; choose from {FAMILIES}")


def generate_family(name: str, n: int, r: int, seed: int = 0) -> ITTPInstance:
    if n % 2:
        raise ValueError("team count must be even")
    return ITTPInstance(n, r, family_distances(name, n, seed), f"{name.upper()}{n}-{r}")


def parse_family_name(name: str) -> tuple[str, int, int]:
    """``"CON40-10"`` -> ``("CON", 40, 10)``."""
    m = re.fullmatch(r"([A-Za-z]+)(\d+)-(\d+)", name.strip())
    if not m or m.group(1).upper() not in FAMILIES:
        raise ValueError(f"not a generated instance name: {name!r}")
    return m.group(1).upper(), int(m.group(2)), int(m.group(3))


# -- YSTP ---------------------------------------------------------------------
_SECTIONS = ("CLUBS", "CAPACITIES", "ELIGIBLE", "DISTANCES", "LIMITS", "END")


def _opt_int(tok: str):
    return None if tok.lower() == "none" else int(tok)


def parse_ystp_text(text: str, path=None) -> YSTPInstance:
    lines = [(ln, raw.split("#", 1)[0].strip()) for ln, raw in enumerate(text.splitlines(), 1)]
    lines = [(ln, s) for ln, s in lines if s]
    head: dict = {}
    k = 0

    def err(msg, ln, col=1):
        return ParseError(msg, ln, col, path)

    def as_int(tok, ln, what):
        try:
            return int(tok)
        except ValueError:
            raise err(f"{what}: expected an integer, got {tok!r}", ln) from None

    def body(section):
        nonlocal k
        out = []
        while k < len(lines) and lines[k][1].split()[0].upper() not in _SECTIONS + ("NAME", "TEAMS", "ROUNDS"):
            out.append(lines[k])
            k += 1
        return out

    def keyed(rows, what, count):
        res = {}
        for ln, s in rows:
            if ":" not in s:
                raise err(f"{what}: expected 'id: values'", ln)
            a, b = s.split(":", 1)
            key = as_int(a.strip(), ln, what)
            if key in res:
                raise err(f"{what}: duplicate entry {key}", ln)
            if not 1 <= key <= count:
                raise err(f"{what}: id {key} out of range 1..{count}", ln)
            res[key] = [as_int(x, ln, what) for x in b.split()]
        return res

    clubs = caps = elig = dist = None
    limits = {"v_plus": "0", "b_plus": "none", "d1": "0", "d2": "0", "penalty": "none"}
    while k < len(lines):
        ln, s = lines[k]
        parts = s.split()
        key = parts[0].upper()
        k += 1
        if key in ("NAME", "TEAMS", "ROUNDS"):
            if key == "NAME":
                head["name"] = s[len(parts[0]):].strip()
            else:
                if len(parts) != 2:
                    raise err(f"{key} takes one value", ln)
                head[key] = as_int(parts[1], ln, key)
        elif key == "CLUBS":
            if "TEAMS" not in head:
                raise err("TEAMS must precede CLUBS", ln)
            n_clubs = as_int(parts[1], ln, "CLUBS") if len(parts) > 1 else None
            clubs = keyed(body(key), "CLUBS", n_clubs or 10**9)
            if n_clubs is not None and len(clubs) != n_clubs:
                raise err(f"CLUBS: expected {n_clubs} clubs, got {len(clubs)}", ln)
        elif key == "CAPACITIES":
            caps = (ln, keyed(body(key), "CAPACITIES", 10**9))
        elif key == "ELIGIBLE":
            elig = (ln, keyed(body(key), "ELIGIBLE", head.get("TEAMS", 10**9)))
        elif key == "DISTANCES":
            rows = body(key)
            dist = (ln, [[as_int(x, rl, "DISTANCES") for x in rs.split()] for rl, rs in rows])
        elif key == "LIMITS":
            for rl, rs in body(key):
                p = rs.split()
                if len(p) != 2 or p[0].lower() not in limits:
                    raise err(f"LIMITS: unknown entry {rs!r}", rl)
                limits[p[0].lower()] = p[1]
        elif key == "END":
            break
        else:
            raise err(f"unknown section {parts[0]!r}", ln)
    for need in ("TEAMS", "ROUNDS"):
        if need not in head:
            raise ParseError(f"missing {need}", None, None, path)
    n, r = head["TEAMS"], head["ROUNDS"]
    if clubs is None or caps is None or dist is None:
        raise ParseError("missing CLUBS, CAPACITIES or DISTANCES section", None, None, path)
    club_of = [None] * n
    for c, members in clubs.items():
        for i in members:
            if not 1 <= i <= n:
                raise ConsistencyError(f"club {c} lists unknown team {i}")
            if club_of[i - 1] is not None:
                raise ConsistencyError(f"team {i} belongs to clubs {club_of[i - 1] + 1} and {c}")
            club_of[i - 1] = c - 1
    missing = [i + 1 for i, c in enumerate(club_of) if c is None]
    if missing:
        raise ConsistencyError(f"teams without a club: {missing}")
    n_clubs = max(clubs)
    cap = np.zeros((n_clubs, r), dtype=int)
    cl, cmap = caps
    for c in range(1, n_clubs + 1):
        if c not in cmap:
            raise ConsistencyError(f"club {c} has no capacities")
        if len(cmap[c]) != r:
            raise ConsistencyError(f"club {c}: expected {r} capacities, got {len(cmap[c])}")
        cap[c - 1] = cmap[c]
    dl, drows = dist
    if len(drows) != n or any(len(row) != n for row in drows):
        raise ParseError(f"DISTANCES must be a {n}x{n} matrix", dl, 1, path)
    el = np.zeros((n, n), dtype=bool)
    if elig is None:
        el[:] = True
        np.fill_diagonal(el, False)
    else:
        for i, js in elig[1].items():
            for j in js:
                if not 1 <= j <= n or j == i:
                    raise ConsistencyError(f"team {i} lists invalid eligible opponent {j}")
                el[i - 1, j - 1] = True
        bad = np.argwhere(el != el.T)
        if len(bad):
            i, j = bad[0]
            raise ConsistencyError(f"eligibility is asymmetric: {i + 1} lists {j + 1} but not vice versa"
                                   if el[i, j] else f"eligibility is asymmetric: {j + 1} lists {i + 1} but not vice versa")
    try:
        return YSTPInstance(
            n, r, np.array(drows, dtype=int), tuple(club_of), cap, el,
            v_plus=int(limits["v_plus"]), b_plus=_opt_int(limits["b_plus"]),
            no_edge_breaks=bool(int(limits["d1"])), half_balance=bool(int(limits["d2"])),
            ineligible_penalty=_opt_int(limits["penalty"]), name=head.get("name", ""),
        )
    except ValueError as e:
        if isinstance(e, (ParseError, ConsistencyError)):
            raise
        raise ConsistencyError(str(e)) from None


def parse_ystp(path) -> YSTPInstance:
    return parse_ystp_text(Path(path).read_text(), path)


def format_ystp(inst: YSTPInstance) -> str:
    n, r = inst.n, inst.r
    out = []
    if inst.name:
        out.append(f"NAME {inst.name}")
    out += [f"TEAMS {n}", f"ROUNDS {r}", f"CLUBS {inst.n_clubs}"]
    for c in range(inst.n_clubs):
        out.append(f"{c + 1}: " + " ".join(str(i + 1) for i in range(n) if inst.club_of[i] == c))
    out.append("CAPACITIES")
    for c in range(inst.n_clubs):
        out.append(f"{c + 1}: " + " ".join(str(int(x)) for x in inst.capacity[c]))
    out.append("ELIGIBLE")
    for i in range(n):
        out.append(f"{i + 1}: " + " ".join(str(j + 1) for j in range(n) if inst.eligible[i, j]))
    out.append("DISTANCES")
    out += [" ".join(str(int(x)) for x in row) for row in inst.distances]
    none = lambda v: "none" if v is None else str(v)
    out += ["LIMITS", f"v_plus {inst.v_plus}", f"b_plus {none(inst.b_plus)}",
            f"D1 {int(inst.no_edge_breaks)}", f"D2 {int(inst.half_balance)}",
            f"penalty {none(inst.ineligible_penalty)}", "END"]
    return "\n".join(out) + "\n"


def write_ystp(inst: YSTPInstance, path) -> None:
    Path(path).write_text(format_ystp(inst))


def ystp_equal(a: YSTPInstance, b: YSTPInstance) -> bool:
    return (
        (a.n, a.r, a.club_of, a.v_plus, a.b_plus, a.half_balance, a.no_edge_breaks, a.ineligible_penalty, a.name)
        == (b.n, b.r, b.club_of, b.v_plus, b.b_plus, b.half_balance, b.no_edge_breaks, b.ineligible_penalty, b.name)
        and np.array_equal(a.distances, b.distances)
        and np.array_equal(a.capacity, b.capacity)
        and np.array_equal(a.eligible, b.eligible)
    )


def random_ystp(
    n: int,
    r: int,
    seed: int = 0,
    *,
    clubs: int | None = None,
    eligible_density: float = 1.0,
    capacity: int | None = None,
    v_plus: int = 0,
    b_plus: int | None = None,
    half_balance: bool = False,
    no_edge_breaks: bool = False,
    max_distance: int = 100,
) -> YSTPInstance:
    """Synthetic YSTP instance: clubs at random points in the plane, teams at
    their club's venue, distances Euclidean (rounded), eligibility a random
    symmetric subset that always contains a perfect matching cycle."""
    rng = random.Random(seed)
    if n % 2:
        raise ValueError("team count must be even")
    k = clubs or max(1, n // 3)
    club_of = [i % k for i in range(n)]
    rng.shuffle(club_of)
    pts = [(rng.uniform(0, max_distance), rng.uniform(0, max_distance)) for _ in range(k)]
    d = np.zeros((n, n), dtype=int)
    for i in range(n):
        for j in range(n):
            if i != j:
                (x1, y1), (x2, y2) = pts[club_of[i]], pts[club_of[j]]
                d[i, j] = max(1, round(math.hypot(x1 - x2, y1 - y2)))
    el = np.zeros((n, n), dtype=bool)
    for i in range(n):
        for j in range(i + 1, n):
            if rng.random() < eligible_density:
                el[i, j] = el[j, i] = True
    # keep an eligible Hamiltonian cycle so every round can be matched
    perm = list(range(n))
    rng.shuffle(perm)
    for a, b in zip(perm, perm[1:] + perm[:1]):
        el[a, b] = el[b, a] = True
    sizes = [club_of.count(c) for c in range(k)]
    if capacity is None:
        cap = np.array([[max(1, math.ceil(sizes[c] / 2)) for _ in range(r)] for c in range(k)], dtype=int)
    else:
        cap = np.full((k, r), capacity, dtype=int)
    return YSTPInstance(n, r, d, tuple(club_of), cap, el, v_plus=v_plus, b_plus=b_plus,
                        half_balance=half_balance, no_edge_breaks=no_edge_breaks, name=f"SYN{n}-{r}-s{seed}")


# -- solutions ----------------------------------------------------------------
def format_solution(t: Timetable) -> list[list[str]]:
    cols = t.to_table()
    rows = [[f"R{s + 1}" for s in range(t.r)]]
    rows += [[cols[s][g] for s in range(t.r)] for g in range(t.n // 2)]
    return rows


def write_solution(t: Timetable, path) -> None:
    with open(path, "w", newline="") as fh:
        csv.writer(fh, lineterminator="\n").writerows(format_solution(t))


def read_solution_rows(path) -> list[list[str]]:
    """Per-round token lists, ordered by the ``R<k>`` headers."""
    with open(path, newline="") as fh:
        rows = [row for row in csv.reader(fh) if any(c.strip() for c in row)]
    if not rows:
        raise ParseError("empty solution file", 1, 1, path)
    header = [h.strip() for h in rows[0]]
    order = []
    for col, h in enumerate(header, 1):
        m = re.fullmatch(r"[Rr](\d+)", h)
        if not m:
            raise ParseError(f"bad round header {h!r}", 1, col, path)
        order.append(int(m.group(1)))
    if sorted(order) != list(range(1, len(order) + 1)):
        raise ParseError("round headers must be R1..Rr", 1, 1, path)
    rounds: list[list[str]] = [[] for _ in order]
    for ln, row in enumerate(rows[1:], 2):
        if len(row) != len(order):
            raise ParseError(f"expected {len(order)} cells, got {len(row)}", ln, 1, path)
        for col, cell in enumerate(row, 1):
            tok = cell.strip()
            if not re.fullmatch(r"\d+-\d+", tok):
                raise ParseError(f"bad game token {tok!r}", ln, col, path)
            rounds[order[col - 1] - 1].append(tok)
    return rounds


def read_solution(path, n: int | None = None) -> Timetable:
    rounds = read_solution_rows(path)
    if n is None:
        n = 2 * len(rounds[0])
    return Timetable.from_table(n, rounds)

