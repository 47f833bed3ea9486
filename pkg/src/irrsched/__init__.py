"""Neighborhoods and local search for incomplete round robin timetables."""
from __future__ import annotations

from .alahc import SUITES, SearchConfig, SearchResult, run
from .construct import ConstructionFailed, construct_circle, construct_ittp_initial, construct_ystp_initial
from .cycles import NoCycle, Strategy, find_alternating_cycle, find_balanced_cycle, find_path_to_repair
from .moves import (
    MoveError,
    MoveOutcome,
    cycle_reversal,
    ipts,
    ipts_cr,
    iprs_b,
    iprs_u,
    partial_round_swap,
    path_reversal,
    restore_balance,
    round_swap,
    team_swap,
)
from .objective import Evaluation, ITTPInstance, YSTPInstance, ittp_evaluate, ystp_evaluate
from .timetable import Timetable, imbalance, new_timetable, validate

__version__ = "0.1.0"
