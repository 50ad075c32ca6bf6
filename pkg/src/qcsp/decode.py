"""Unidirectional decoding of task-to-crane assignments.

An assignment is a tuple ``a`` of crane ids, ``a[j - 1]`` being the crane of
task ``j``. Every crane serves its tasks in increasing task index, which is
increasing bay order, so the cranes sweep the vessel upward.

Start times are the earliest ones compatible with a set of ordering
constraints ``s_y >= c_x + lag``:

* consecutive tasks of one crane, with the bay-to-bay travel as lag;
* precedence pairs, with the minimum travel time as lag when they interfere;
* every interfering pair on two different cranes. The task of the upper
  crane goes first (it must move out of the way upward), unless the
  opposite order is already implied by the constraints above;
* non-simultaneous pairs left unordered, by increasing task index.

Orientations are chosen against the transitive closure of what is already
fixed, so the constraint graph stays acyclic and the earliest start times
are its longest paths. A cycle can only come from precedence pairs that
contradict the upward sweep; decoding then fails with `DecodeError`.

The downward sweep reuses the same routine on the mirrored instance.
"""

from __future__ import annotations

import math
from dataclasses import replace
from functools import lru_cache
from typing import Sequence

from .feasibility import Schedule
from .model import Instance

__all__ = [
    "DecodeError",
    "crane_sequences",
    "validate_assignment",
    "decode_upward",
    "reverse_instance",
    "map_assignment",
    "decode_best",
    "Evaluator",
]


class DecodeError(RuntimeError):
    """The assignment has no well-defined unidirectional schedule."""


def crane_sequences(a: Sequence[int], m: int) -> list[list[int]]:
    """Per-crane task lists (1-based ids), each strictly increasing."""
    seqs: list[list[int]] = [[] for _ in range(m)]
    for j, k in enumerate(a, start=1):
        seqs[k - 1].append(j)
    return seqs


def validate_assignment(inst: Instance, a: Sequence[int]) -> tuple:
    a = tuple(int(k) for k in a)
    if len(a) != inst.n:
        raise ValueError(f"assignment has {len(a)} entries, instance has {inst.n} tasks")
    bad = [k for k in a if not 1 <= k <= inst.m]
    if bad:
        raise ValueError(f"crane ids {bad} outside 1..{inst.m}")
    return a


@lru_cache(maxsize=256)
def _static(inst: Instance):
    # plain-list views of the instance used in the hot loop
    phi = sorted((i - 1, j - 1) for i, j in inst.phi)
    psi = sorted((i - 1, j - 1) for i, j in inst.psi)
    return list(inst.bay), list(inst.p), phi, psi


def _start_times(inst: Instance, q: list[int]) -> list[int]:
    """Earliest start times for 0-based crane indices `q`."""
    n, m = inst.n, inst.m
    bay, p, phi, psi = _static(inst)
    t0, g1 = inst.t0, inst.delta + 1

    preds: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    succs: list[list[int]] = [[] for _ in range(n)]
    release = [0] * n
    last = [-1] * m
    for j in range(n):
        k = q[j]
        i = last[k]
        if i < 0:
            release[j] = inst.crane_ready[k] + abs(bay[j] - inst.crane_pos0[k]) * t0
        else:
            preds[j].append((i, abs(bay[j] - bay[i]) * t0))
            succs[i].append(j)
        last[k] = j

    def lag(x, y):
        # minimum travel time between x on crane q[x] and y on crane q[y]
        v, w = q[x], q[y]
        gap = g1 * abs(v - w)
        lx, ly = bay[x], bay[y]
        if v > w:
            return (ly - lx + gap) * t0 if lx < ly + gap else 0
        if v < w:
            return (lx - ly + gap) * t0 if lx > ly - gap else 0
        return abs(lx - ly) * t0

    upward_forced = False
    for i, j in phi:
        preds[j].append((i, lag(i, j)))
        succs[i].append(j)
        if q[i] < q[j]:
            upward_forced = True

    # interfering pairs on different cranes, default orientation upper first
    pairs = []
    for i in range(n):
        qi, li = q[i], bay[i]
        for j in range(i + 1, n):
            qj = q[j]
            if qi > qj:
                pairs.append((i, j, (bay[j] - li + g1 * (qi - qj)) * t0))
            elif qi < qj:
                gap = g1 * (qj - qi)
                if bay[j] - li < gap:
                    pairs.append((j, i, (li - bay[j] + gap) * t0))

    loose = []
    for i, j in psi:
        if q[i] != q[j] and lag(i, j) == 0:
            loose.append((i, j))
            if q[i] < q[j]:
                upward_forced = True

    if not upward_forced:
        # every extra edge points to a lower crane: no cycle is possible
        for x, y, d in pairs:
            preds[y].append((x, d))
            succs[x].append(y)
        for x, y in loose:
            preds[y].append((x, 0))
            succs[x].append(y)
    else:
        desc = _closure(n, succs)
        for x, y, d in pairs:
            if desc[y] >> x & 1:
                x, y = y, x
            _add_edge(desc, n, x, y)
            preds[y].append((x, d))
            succs[x].append(y)
        for x, y in loose:
            if desc[y] >> x & 1:
                x, y = y, x
            _add_edge(desc, n, x, y)
            preds[y].append((x, 0))
            succs[x].append(y)

    order = _topological(n, succs)
    s = [0] * n
    for y in order:
        best = release[y]
        for x, d in preds[y]:
            t = s[x] + p[x] + d
            if t > best:
                best = t
        s[y] = best
    return s


def _topological(n, succs):
    indeg = [0] * n
    for x in range(n):
        for y in succs[x]:
            indeg[y] += 1
    stack = [x for x in range(n - 1, -1, -1) if indeg[x] == 0]
    order = []
    while stack:
        x = stack.pop()
        order.append(x)
        for y in succs[x]:
            indeg[y] -= 1
            if indeg[y] == 0:
                stack.append(y)
    if len(order) != n:
        raise DecodeError("precedence relations contradict the upward sweep")
    return order


def _closure(n, succs):
    order = _topological(n, succs)
    desc = [0] * n
    for x in reversed(order):
        acc = 0
        for y in succs[x]:
            acc |= desc[y] | (1 << y)
        desc[x] = acc
    return desc


def _add_edge(desc, n, x, y):
    if desc[x] >> y & 1:
        return
    gain = desc[y] | (1 << y)
    bit = 1 << x
    for z in range(n):
        if z == x or desc[z] & bit:
            desc[z] |= gain


def decode_upward(inst: Instance, a: Sequence[int]) -> Schedule:
    """Earliest-start schedule of `a` with all cranes sweeping upward."""
    a = validate_assignment(inst, a)
    s = _start_times(inst, [k - 1 for k in a])
    return Schedule.from_starts(inst, a, s, "upward")


@lru_cache(maxsize=256)
def reverse_instance(inst: Instance):
    """Mirror the vessel so that a downward sweep becomes an upward one.

    Returns ``(mirrored, task_perm, crane_perm)`` where ``task_perm[t - 1]``
    is the original id of mirrored task ``t`` and likewise for cranes.
    """
    n, m, l = inst.n, inst.m, inst.l
    cranes = list(range(m, 0, -1))
    mirrored = Instance.create(
        p=inst.p,
        bay=[l + 1 - b for b in inst.bay],
        crane_pos0=[l + 1 - inst.crane_pos0[k - 1] for k in cranes],
        crane_ready=[inst.crane_ready[k - 1] for k in cranes],
        l=l, t0=inst.t0, delta=inst.delta,
        phi=inst.phi,
        psi=inst.psi,
        task_labels=range(1, n + 1),
        crane_labels=cranes,
    )
    task_perm = mirrored.task_labels
    crane_perm = mirrored.crane_labels
    mirrored = replace(
        mirrored,
        task_labels=tuple(inst.task_labels[t - 1] for t in task_perm),
        crane_labels=tuple(inst.crane_labels[k - 1] for k in crane_perm),
    )
    return mirrored, task_perm, crane_perm


def map_assignment(a: Sequence[int], task_perm: Sequence[int], crane_perm: Sequence[int]) -> tuple:
    """Express assignment `a` in the numbering given by the two permutations."""
    new_crane = {old: new for new, old in enumerate(crane_perm, start=1)}
    return tuple(new_crane[a[old - 1]] for old in task_perm)


def _decode_downward(inst: Instance, a: tuple) -> Schedule:
    mirrored, tp, cp = reverse_instance(inst)
    s_r = _start_times(mirrored, [k - 1 for k in map_assignment(a, tp, cp)])
    s = [0] * inst.n
    for new, old in enumerate(tp):
        s[old - 1] = s_r[new]
    return Schedule.from_starts(inst, a, s, "downward")


def decode_best(inst: Instance, a: Sequence[int]) -> Schedule:
    """The better of the upward and downward schedules; ties go to upward."""
    a = validate_assignment(inst, a)
    up = down = None
    try:
        up = decode_upward(inst, a)
    except DecodeError:
        pass
    try:
        down = _decode_downward(inst, a)
    except DecodeError:
        if up is None:
            raise
    if up is None:
        return down
    if down is not None and down.makespan < up.makespan:
        return down
    return up


class Evaluator:
    """Memoised makespan of assignments for one instance.

    Assignments that cannot be decoded score ``math.inf``. `direction_mode`
    is ``"best"`` (both sweeps) or ``"upward"``.
    """

    def __init__(self, inst: Instance, direction_mode: str = "best"):
        if direction_mode not in ("best", "upward"):
            raise ValueError(f"unknown direction mode {direction_mode!r}")
        self.inst = inst
        self.direction_mode = direction_mode
        self._cache: dict[tuple, float] = {}
        self.decodes = 0

    def schedule(self, a: Sequence[int]) -> Schedule:
        if self.direction_mode == "upward":
            return decode_upward(self.inst, a)
        return decode_best(self.inst, a)

    def __call__(self, a: tuple) -> float:
        value = self._cache.get(a)
        if value is None:
            self.decodes += 1
            try:
                value = self.schedule(a).makespan
            except DecodeError:
                value = math.inf
            self._cache[a] = value
        return value
