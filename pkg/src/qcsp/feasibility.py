"""Schedule validation and the makespan objective.

`check` evaluates the mixed-integer model in its logical form: the
ordering variables are read off the timetable (``y_ij = 1`` iff
``c_i <= s_j``), so no big-M constant appears. Each violated constraint is
reported with the tag of the model row it comes from:

    C3.3   completion exceeds the recorded makespan
    C3.4   task not assigned to exactly one existing crane
    C3.5   crane ready time plus travel from its initial bay not respected
    C3.6   precedence pair processed out of order
    C3.7   non-simultaneous pair overlapping in time
    C3.10  interfering tasks overlapping in time
    C3.11  too little travel time when the lower-index task goes first
    C3.12  too little travel time when the higher-index task goes first

`simulate_cranes` is an independent, time-stepped reachability check of
crane positions along the rail; it knows nothing about minimum travel
times and is used to validate them.
"""

from __future__ import annotations

import bisect
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy import ndimage

from .model import Instance

__all__ = [
    "ScheduleError",
    "Schedule",
    "Violation",
    "ViolationReport",
    "check",
    "makespan",
    "simulate_cranes",
]


class ScheduleError(ValueError):
    """Raised when a schedule is malformed for the instance it is checked against."""


@dataclass(frozen=True)
class Schedule:
    """Timetable for one assignment.

    `assignment`, `start` and `completion` are indexed by task (position
    ``i - 1`` holds task ``i``).
    """

    assignment: tuple
    start: tuple
    completion: tuple
    direction: str = "upward"
    makespan: int = 0

    @classmethod
    def from_starts(cls, inst: Instance, assignment: Sequence[int], start: Sequence[int],
                    direction: str = "upward") -> "Schedule":
        start = tuple(int(s) for s in start)
        completion = tuple(s + p for s, p in zip(start, inst.p))
        return cls(tuple(int(q) for q in assignment), start, completion, direction,
                   max(completion))

    def crane_tasks(self, k: int) -> list[int]:
        """Tasks of crane `k` in processing order."""
        tasks = [i for i, q in enumerate(self.assignment, start=1) if q == k]
        return sorted(tasks, key=lambda i: (self.start[i - 1], i))


@dataclass(frozen=True)
class Violation:
    tag: str
    tasks: tuple
    slack: int

    def __str__(self):
        return f"{self.tag} tasks={self.tasks} violated by {self.slack}"


@dataclass
class ViolationReport:
    violations: list

    @property
    def feasible(self) -> bool:
        return not self.violations

    def __bool__(self):
        return bool(self.violations)

    def __len__(self):
        return len(self.violations)

    def __iter__(self):
        return iter(self.violations)

    def tags(self) -> set[str]:
        return {v.tag for v in self.violations}

    def __str__(self):
        if not self.violations:
            return "feasible"
        return "\n".join(str(v) for v in self.violations)


def makespan(sched: Schedule) -> int:
    """Completion time of the last task."""
    if not sched.completion:
        raise ScheduleError("empty schedule")
    return max(sched.completion)


def _validate(inst: Instance, sched: Schedule) -> None:
    n = inst.n
    if not (len(sched.assignment) == len(sched.start) == len(sched.completion) == n):
        raise ScheduleError(f"schedule covers {len(sched.start)} tasks, instance has {n}")
    for i, (s, c, p) in enumerate(zip(sched.start, sched.completion, inst.p), start=1):
        if s < 0 or c < 0:
            raise ScheduleError(f"task {i}: negative time")
        if c != s + p:
            raise ScheduleError(f"task {i}: completion {c} != start {s} + {p}")


def _ordered_pair_tags(i, j, si, ci, sj, cj, gap, out):
    # i < j; gap > 0 is the travel time the pair needs
    if ci <= sj:
        if ci + gap > sj:
            out.append(Violation("C3.11", (i, j), ci + gap - sj))
    elif cj <= si:
        if cj + gap > si:
            out.append(Violation("C3.12", (i, j), cj + gap - si))
    else:
        out.append(Violation("C3.10", (i, j), min(ci - sj, cj - si)))
        first, second = ci + gap - sj, cj + gap - si
        if first <= second:
            out.append(Violation("C3.11", (i, j), first))
        else:
            out.append(Violation("C3.12", (i, j), second))


def check(inst: Instance, sched: Schedule) -> ViolationReport:
    """List every constraint of the scheduling model that `sched` violates."""
    _validate(inst, sched)
    n, m = inst.n, inst.m
    s, c, q = sched.start, sched.completion, sched.assignment
    out: list[Violation] = []

    for i in range(n):
        if c[i] > sched.makespan:
            out.append(Violation("C3.3", (i + 1,), c[i] - sched.makespan))

    for i in range(n):
        if not 1 <= q[i] <= m:
            out.append(Violation("C3.4", (i + 1,), 1))
    if any(v.tag == "C3.4" for v in out):
        return ViolationReport(out)

    travel = inst.start_travel
    for i in range(n):
        k = q[i] - 1
        need = inst.crane_ready[k] + int(travel[k, i]) + inst.p[i]
        if c[i] < need:
            out.append(Violation("C3.5", (i + 1,), need - c[i]))

    for i, j in sorted(inst.phi):
        if c[i - 1] > s[j - 1]:
            out.append(Violation("C3.6", (i, j), c[i - 1] - s[j - 1]))

    for i, j in sorted(inst.psi):
        overlap = min(c[i - 1] - s[j - 1], c[j - 1] - s[i - 1])
        if overlap > 0:
            out.append(Violation("C3.7", (i, j), overlap))

    table = inst.travel_table
    for a in range(n):
        for b in range(a + 1, n):
            if q[a] == q[b]:
                continue
            gap = int(table[a, b, q[a] - 1, q[b] - 1])
            if gap > 0:
                _ordered_pair_tags(a + 1, b + 1, s[a], c[a], s[b], c[b], gap, out)

    # same crane: consecutive tasks in time order must leave room to travel
    for k in range(1, m + 1):
        seq = sched.crane_tasks(k)
        for x, y in zip(seq, seq[1:]):
            i, j = min(x, y), max(x, y)
            gap = abs(inst.bay[x - 1] - inst.bay[y - 1]) * inst.t0
            if gap > 0:
                _ordered_pair_tags(i, j, s[i - 1], c[i - 1], s[j - 1], c[j - 1], gap, out)
            elif c[x - 1] > s[y - 1]:
                out.append(Violation("C3.10", (i, j), c[x - 1] - s[y - 1]))

    return ViolationReport(out)


def simulate_cranes(inst: Instance, sched: Schedule) -> bool:
    """Whether the cranes can physically follow `sched`.

    Positions are tracked on the integer time grid. Each time unit a crane
    may move at most one bay, cranes stay within bays 1..l, keep their
    order, and adjacent cranes stay at least ``delta + 1`` bays apart. A
    crane serving task ``i`` must sit at its bay throughout ``[s_i, c_i]``.
    A crane handles one task at a time. Cranes may be repositioned at any
    time, ready or not. The reachable set
    of joint positions is propagated by dilation, so the answer is exact on
    the grid; cost grows as ``l**m`` and is meant for small instances.

    Only ``t0 == 1`` is supported.
    """
    _validate(inst, sched)
    if inst.t0 != 1:
        raise NotImplementedError("simulation needs unit travel time")
    m, l = inst.m, inst.l
    for k in range(1, m + 1):
        seq = sched.crane_tasks(k)
        if any(sched.completion[x - 1] > sched.start[y - 1] for x, y in zip(seq, seq[1:])):
            return False
    grids = np.indices((l,) * m) + 1
    safe = np.ones((l,) * m, dtype=bool)
    for k in range(m - 1):
        safe &= grids[k + 1] - grids[k] >= inst.delta + 1

    cur = np.zeros_like(safe)
    idx = tuple(p - 1 for p in inst.crane_pos0)
    if not safe[idx]:
        return False
    cur[idx] = True

    events = sorted({0, *sched.start, *(c + 1 for c in sched.completion)})
    horizon = max(sched.completion)
    structure = np.ones((3,) * m, dtype=bool)

    def pinned(t):
        mask = safe.copy()
        for i, (si, ci) in enumerate(zip(sched.start, sched.completion)):
            if si <= t <= ci:
                k = sched.assignment[i] - 1
                mask &= grids[k] == inst.bay[i]
        return mask

    cur &= pinned(0)
    if not cur.any():
        return False
    t = 0
    while t < horizon:
        new = ndimage.binary_dilation(cur, structure=structure) & pinned(t + 1)
        t += 1
        if not new.any():
            return False
        if np.array_equal(new, cur):
            # nothing changes until the next event: jump to just before it
            e = bisect.bisect_right(events, t)
            if e < len(events):
                t = max(t, min(events[e] - 1, horizon))
            else:
                t = horizon
        cur = new
    return True
