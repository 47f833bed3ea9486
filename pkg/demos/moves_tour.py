"""Apply each neighborhood once to the 8-team sample timetable and print
the result round by round (home-away, 1-based team ids)."""
from __future__ import annotations

import random

from irrsched import moves as mv
from irrsched.samples import example_timetable
from irrsched.timetable import team_deltas, validate


def show(title, t):
    print(f"-- {title}")
    for s, row in enumerate(t.to_table()):
        print(f"  R{s + 1}: " + " ".join(row))
    print(f"  deltas {team_deltas(t)}  feasible={validate(t).feasible}")


def main():
    t = example_timetable()
    show("start", t)
    show("swap rounds 2 and 3", mv.round_swap(t, 1, 2).timetable)
    show("partial swap of rounds 2 and 3 on teams 5-8", mv.partial_round_swap(t, 1, 2, cycle=[4, 5, 6, 7]).timetable)
    show("swap teams 1 and 4", mv.team_swap(t, 0, 3).timetable)
    show("reverse the cycle 1-2-3-4-6", mv.cycle_reversal(t, [0, 1, 2, 3, 5]).timetable)
    out = mv.ipts(t, 0, 3, 1)
    show(f"lantern swap of teams 1 and 4 in round 2 (repair paths {out.details['paths']})", out.timetable)
    show("balanced alternating swap in round 2", mv.iprs_b(t, 1, cycle=[0, 1, 5, 4]).timetable)
    rng = random.Random(1)
    out = mv.iprs_u(t, 2, rng)
    added = " ".join(f"{i + 1}-{j + 1}" for i, j in sorted(out.new_pairings))
    dropped = " ".join(f"{i + 1}-{j + 1}" for i, j in sorted(out.dropped_pairings))
    show(f"random alternating swap in round 3 (adds {added}; drops {dropped})", out.timetable)


if __name__ == "__main__":
    main()
