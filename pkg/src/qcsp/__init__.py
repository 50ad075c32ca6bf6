"""Quay crane scheduling with unidirectional decoding and extremal optimization search."""

from .analysis import GapRecord, brute_force_best, lower_bound, relative_gap
from .decode import DecodeError, Evaluator, decode_best, decode_upward
from .feasibility import Schedule, ScheduleError, ViolationReport, check, makespan, simulate_cranes
from .initial import s_load, s_tasks
from .model import Instance, InstanceError, build_theta, eligible_cranes, min_travel_time
from .search import SearchParams, SolveResult, geo_solve, mgeo_solve, rank_select

__all__ = [
    "GapRecord", "brute_force_best", "lower_bound", "relative_gap",
    "DecodeError", "Evaluator", "decode_best", "decode_upward",
    "Schedule", "ScheduleError", "ViolationReport", "check", "makespan", "simulate_cranes",
    "s_load", "s_tasks",
    "Instance", "InstanceError", "build_theta", "eligible_cranes", "min_travel_time",
    "SearchParams", "SolveResult", "geo_solve", "mgeo_solve", "rank_select",
]
