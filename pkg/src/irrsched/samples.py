"""Small hand-written timetables used by the demos, tests and CLI help."""
from __future__ import annotations

from .timetable import Timetable

# n=8, r=5; tokens are "home-away" with 1-based team ids, one list per round
EXAMPLE_8_5 = [
    ["3-1", "7-2", "8-6", "4-5"],
    ["4-3", "2-1", "8-7", "5-6"],
    ["3-2", "1-4", "5-8", "6-7"],
    ["7-3", "2-5", "1-8", "6-4"],
    ["1-6", "2-8", "5-3", "7-4"],
]

# n=8, r=5: every team of even id is home in round 2 and the auxiliary graph
# of round 2 has no directed cycle
NO_BALANCED_CYCLE_8_5 = [
    ["3-2", "4-1", "7-6", "8-5"],
    ["2-1", "4-3", "6-5", "8-7"],
    ["1-7", "2-8", "5-3", "6-4"],
    ["1-8", "3-6", "5-4", "7-2"],
    ["2-5", "4-7", "6-1", "8-3"],
]


def example_timetable() -> Timetable:
    """Balanced timetable with 8 teams and 5 rounds."""
    return Timetable.from_table(8, EXAMPLE_8_5)


def no_balanced_cycle_timetable() -> Timetable:
    return Timetable.from_table(8, NO_BALANCED_CYCLE_8_5)
