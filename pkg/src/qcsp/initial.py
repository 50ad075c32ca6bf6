"""Initial task-to-crane assignments.

Both rules hand out contiguous blocks of tasks in index order, so every
crane's task list is increasing by construction.
"""

from __future__ import annotations

from .model import Instance, eligible_cranes

__all__ = ["s_load", "s_tasks", "clamp_to_eligible"]


def clamp_to_eligible(inst: Instance, a) -> tuple:
    """Move every task outside its eligible range to the nearest eligible crane."""
    out = []
    for j, k in enumerate(a, start=1):
        q = eligible_cranes(inst, j)
        out.append(min(max(k, q[0]), q[-1]))
    return tuple(out)


def s_load(inst: Instance) -> tuple:
    """Balance total processing time across cranes.

    Tasks are swept in index order and appended to the current crane; the
    task that pushes its load past the average is kept on that crane and
    the sweep moves on to the next one. Whatever is left once the last
    crane is reached stays on it.
    """
    n, m = inst.n, inst.m
    target = sum(inst.p) / m
    a = [0] * n
    k, load = 1, 0
    for i in range(n):
        load += inst.p[i]
        a[i] = k
        if load > target and k < m:
            k, load = k + 1, 0
    return clamp_to_eligible(inst, a)


def s_tasks(inst: Instance) -> tuple:
    """Split tasks into `m` contiguous blocks of near-equal size, larger blocks first."""
    n, m = inst.n, inst.m
    base, extra = divmod(n, m)
    a = []
    for k in range(1, m + 1):
        a.extend([k] * (base + (1 if k <= extra else 0)))
    return clamp_to_eligible(inst, a)
