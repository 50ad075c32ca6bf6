"""Problem data and crane interference arithmetic.

Tasks and cranes are 1-based everywhere in the public API. An `Instance`
is immutable and always stored in canonical order: tasks sorted by bay
(same-bay ties follow the precedence relation), cranes sorted by initial
bay. `Instance.create` performs the reordering and remembers the original
labels in ``task_labels`` / ``crane_labels``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

__all__ = [
    "InstanceError",
    "Instance",
    "InterferenceQuad",
    "crane_gap",
    "travel_time_from_start",
    "min_travel_time",
    "build_theta",
    "eligible_cranes",
]


class InstanceError(ValueError):
    """Raised for malformed or inconsistent problem data."""


def crane_gap(v: int, w: int, delta: int) -> int:
    """Smallest allowed bay distance between cranes `v` and `w`."""
    return (delta + 1) * abs(v - w)


def _delta_value(li: int, lj: int, v: int, w: int, delta: int, t0: int) -> int:
    # i is served by crane v, j by crane w; i != j is the caller's business
    g = (delta + 1) * abs(v - w)
    if v > w:
        return (lj - li + g) * t0 if li < lj + g else 0
    if v < w:
        return (li - lj + g) * t0 if li > lj - g else 0
    return abs(li - lj) * t0


@dataclass(frozen=True)
class InterferenceQuad:
    i: int
    j: int
    v: int
    w: int
    dt: int


def _pairs(items: Iterable[Sequence[int]]) -> list[tuple[int, int]]:
    out = []
    for pair in items:
        i, j = pair
        out.append((int(i), int(j)))
    return out


@dataclass(frozen=True)
class Instance:
    """A quay crane scheduling instance.

    Parameters
    ----------
    l : int
        Number of bays; bays are labelled 1..l.
    p : tuple of int
        Processing time of each task.
    bay : tuple of int
        Bay position of each task.
    crane_pos0 : tuple of int
        Initial bay of each crane.
    crane_ready : tuple of int
        Earliest ready time of each crane.
    t0 : int
        Travel time per bay.
    delta : int
        Safety margin in bays between adjacent cranes.
    phi : frozenset of (int, int)
        Ordered precedence pairs, ``(i, j)`` meaning i completes before j starts.
    psi : frozenset of (int, int)
        Non-simultaneous pairs stored as ``(min, max)``. Always contains `phi`.
    task_labels, crane_labels : tuple of int
        Original identifiers of the canonically ordered tasks and cranes.
    """

    l: int
    p: tuple
    bay: tuple
    crane_pos0: tuple
    crane_ready: tuple
    t0: int = 1
    delta: int = 1
    phi: frozenset = frozenset()
    psi: frozenset = frozenset()
    task_labels: tuple = field(default=(), compare=False)
    crane_labels: tuple = field(default=(), compare=False)

    def __post_init__(self):
        n, m = len(self.p), len(self.crane_pos0)
        if n < 1 or m < 1:
            raise InstanceError("need at least one task and one crane")
        if len(self.bay) != n:
            raise InstanceError("p and bay differ in length")
        if len(self.crane_ready) != m:
            raise InstanceError("crane_pos0 and crane_ready differ in length")
        if self.t0 < 0 or self.delta < 0:
            raise InstanceError("t0 and delta must be non-negative")
        for i, (pi, li) in enumerate(zip(self.p, self.bay), start=1):
            if pi <= 0:
                raise InstanceError(f"task {i}: processing time must be positive")
            if not 1 <= li <= self.l:
                raise InstanceError(f"task {i}: bay {li} outside 1..{self.l}")
        for k, (pos, r) in enumerate(zip(self.crane_pos0, self.crane_ready), start=1):
            if not 1 <= pos <= self.l:
                raise InstanceError(f"crane {k}: bay {pos} outside 1..{self.l}")
            if r < 0:
                raise InstanceError(f"crane {k}: negative ready time")
        if any(a > b for a, b in zip(self.bay, self.bay[1:])):
            raise InstanceError("tasks must be numbered in non-decreasing bay order")
        if any(a > b for a, b in zip(self.crane_pos0, self.crane_pos0[1:])):
            raise InstanceError("cranes must be numbered in non-decreasing bay order")
        g = self.delta + 1
        for k in range(1, m):
            if self.crane_pos0[k] - self.crane_pos0[k - 1] < g:
                raise InstanceError(f"cranes {k} and {k + 1} start closer than {g} bays")
        for i, li in enumerate(self.bay, start=1):
            # crane q reaches bays (q-1)g+1 .. l-(m-q)g; some q must cover li
            q_hi = (li - 1) // g + 1
            q_lo = m - (self.l - li) // g
            if max(q_lo, 1) > min(q_hi, m):
                raise InstanceError(f"task {i}: no crane can reach bay {li}")
        for i, j in self.phi:
            if not (1 <= i <= n and 1 <= j <= n) or i == j:
                raise InstanceError(f"bad precedence pair ({i}, {j})")
            if self.bay[i - 1] == self.bay[j - 1] and i > j:
                raise InstanceError(f"same-bay precedence ({i}, {j}) against task order")
            if (min(i, j), max(i, j)) not in self.psi:
                raise InstanceError(f"precedence pair ({i}, {j}) missing from psi")
        for i, j in self.psi:
            if not (1 <= i < j <= n):
                raise InstanceError(f"bad non-simultaneity pair ({i}, {j})")
        if not self.task_labels:
            object.__setattr__(self, "task_labels", tuple(range(1, n + 1)))
        if not self.crane_labels:
            object.__setattr__(self, "crane_labels", tuple(range(1, m + 1)))

    @classmethod
    def create(cls, p, bay, crane_pos0, crane_ready=None, *, l=None, t0=1, delta=1,
               phi=(), psi=(), task_labels=None, crane_labels=None):
        """Build a canonical instance from possibly unordered data.

        Ids in `phi`/`psi` refer to positions in the given `p`/`bay` lists
        (1-based). Precedence pairs are added to `psi` automatically. The
        permutation applied is available afterwards as ``task_labels``: the
        k-th canonical task is the input task ``task_labels[k-1]``.
        """
        p = [int(x) for x in p]
        bay = [int(x) for x in bay]
        n = len(p)
        crane_pos0 = [int(x) for x in crane_pos0]
        m = len(crane_pos0)
        crane_ready = [0] * m if crane_ready is None else [int(x) for x in crane_ready]
        if l is None:
            l = max(bay + crane_pos0)
        task_labels = list(range(1, n + 1)) if task_labels is None else list(task_labels)
        crane_labels = list(range(1, m + 1)) if crane_labels is None else list(crane_labels)
        phi = _pairs(phi)
        psi = _pairs(psi)
        if len(bay) != n or len(task_labels) != n:
            raise InstanceError("p, bay and task labels differ in length")
        for i, j in phi + psi:
            if not (1 <= i <= n and 1 <= j <= n) or i == j:
                raise InstanceError(f"pair ({i}, {j}) refers to an unknown task")

        order = _canonical_task_order(bay, phi)
        new_id = {old: new for new, old in enumerate(order, start=1)}
        corder = sorted(range(1, m + 1), key=lambda k: (crane_pos0[k - 1], k))

        phi_new = frozenset((new_id[i], new_id[j]) for i, j in phi)
        psi_new = {tuple(sorted((new_id[i], new_id[j]))) for i, j in psi}
        psi_new |= {tuple(sorted(pair)) for pair in phi_new}
        return cls(
            l=int(l),
            p=tuple(p[o - 1] for o in order),
            bay=tuple(bay[o - 1] for o in order),
            crane_pos0=tuple(crane_pos0[k - 1] for k in corder),
            crane_ready=tuple(crane_ready[k - 1] for k in corder),
            t0=int(t0),
            delta=int(delta),
            phi=phi_new,
            psi=frozenset(psi_new),
            task_labels=tuple(task_labels[o - 1] for o in order),
            crane_labels=tuple(crane_labels[k - 1] for k in corder),
        )

    @property
    def n(self) -> int:
        return len(self.p)

    @property
    def m(self) -> int:
        return len(self.crane_pos0)

    def _task(self, i: int) -> int:
        if not 1 <= i <= self.n:
            raise InstanceError(f"unknown task {i}")
        return i - 1

    def _crane(self, k: int) -> int:
        if not 1 <= k <= self.m:
            raise InstanceError(f"unknown crane {k}")
        return k - 1

    @cached_property
    def start_travel(self) -> np.ndarray:
        """(m, n) array of travel times from each crane's initial bay."""
        pos = np.asarray(self.crane_pos0)[:, None]
        return np.abs(np.asarray(self.bay)[None, :] - pos) * self.t0

    @cached_property
    def travel_table(self) -> np.ndarray:
        """(n, n, m, m) array of minimum travel times, 0-based indices.

        Entry ``[i, j, v, w]`` is the value for task i on crane v and task j
        on crane w; the diagonal ``i == j`` is zero.
        """
        n, m = self.n, self.m
        li = np.asarray(self.bay)[:, None, None, None]
        lj = np.asarray(self.bay)[None, :, None, None]
        v = np.arange(m)[None, None, :, None]
        w = np.arange(m)[None, None, None, :]
        g = (self.delta + 1) * np.abs(v - w)
        out = np.where(
            v > w,
            np.where(li < lj + g, lj - li + g, 0),
            np.where(v < w, np.where(li > lj - g, li - lj + g, 0), np.abs(li - lj)),
        ) * self.t0
        idx = np.arange(n)
        out[idx, idx] = 0
        return out.astype(np.int64)

    def __reduce__(self):
        # cached arrays are rebuilt on demand in worker processes
        return (_rebuild, (self.l, self.p, self.bay, self.crane_pos0, self.crane_ready,
                           self.t0, self.delta, self.phi, self.psi,
                           self.task_labels, self.crane_labels))


def _rebuild(*args):
    return Instance(*args)


def _canonical_task_order(bay: list[int], phi: list[tuple[int, int]]) -> list[int]:
    """Old task ids sorted by bay, same-bay groups topologically by `phi`."""
    n = len(bay)
    by_bay: dict[int, list[int]] = {}
    for i in sorted(range(1, n + 1), key=lambda i: (bay[i - 1], i)):
        by_bay.setdefault(bay[i - 1], []).append(i)
    order = []
    for b in sorted(by_bay):
        group = by_bay[b]
        members = set(group)
        succ = {i: [] for i in group}
        indeg = {i: 0 for i in group}
        for i, j in phi:
            if i in members and j in members:
                succ[i].append(j)
                indeg[j] += 1
        ready = [i for i in group if indeg[i] == 0]
        placed = []
        while ready:
            i = min(ready)
            ready.remove(i)
            placed.append(i)
            for j in succ[i]:
                indeg[j] -= 1
                if indeg[j] == 0:
                    ready.append(j)
        if len(placed) != len(group):
            raise InstanceError(f"precedence cycle among tasks in bay {b}")
        order.extend(placed)
    return order


def travel_time_from_start(inst: Instance, k: int, i: int) -> int:
    """Travel time of crane `k` from its initial bay to the bay of task `i`."""
    return abs(inst.bay[inst._task(i)] - inst.crane_pos0[inst._crane(k)]) * inst.t0


def min_travel_time(inst: Instance, i: int, j: int, v: int, w: int) -> int:
    """Minimum time to insert between task `i` on crane `v` and task `j` on crane `w`.

    Zero means the two tasks can be processed simultaneously (or ``i == j``).
    The value is symmetric: swapping ``(i, v)`` with ``(j, w)`` gives the same
    result.
    """
    a, b = inst._task(i), inst._task(j)
    inst._crane(v)
    inst._crane(w)
    if a == b:
        return 0
    return _delta_value(inst.bay[a], inst.bay[b], v, w, inst.delta, inst.t0)


def build_theta(inst: Instance) -> frozenset:
    """All ``(i, j, v, w)`` with ``i < j`` whose minimum travel time is positive."""
    table = inst.travel_table
    quads = set()
    for i, j, v, w in zip(*np.nonzero(table)):
        if i < j:
            quads.add(InterferenceQuad(int(i) + 1, int(j) + 1, int(v) + 1, int(w) + 1,
                                       int(table[i, j, v, w])))
    return frozenset(quads)


def eligible_cranes(inst: Instance, j: int) -> tuple:
    """Cranes that can serve task `j` without pushing a neighbour off the rail.

    Crane q needs ``(q - 1) * (delta + 1)`` bays below the task for the
    cranes under it and ``(m - q) * (delta + 1)`` above it for the rest.
    Returned in increasing order.
    """
    lj = inst.bay[inst._task(j)]
    m, l, d = inst.m, inst.l, inst.delta
    lo, hi = 1, m
    if lj <= m + (m - 1) * d:
        hi = min(hi, (lj + d) // (1 + d))
    if lj >= l - (m - 1) * (1 + d):
        lo = max(lo, m - (l - lj) // (1 + d))
    if lo > hi:
        raise InstanceError(f"no crane can serve task {j} in bay {lj}")
    return tuple(range(lo, hi + 1))
