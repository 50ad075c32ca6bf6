"""Reference values for judging the search: exhaustive optimum, lower bound, gap.

`brute_force_best` enumerates every eligible assignment and decodes each in
both sweep directions. It is exact for the space the search explores
(unidirectional schedules), not for the unrestricted scheduling model.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import Bounds, LinearConstraint, milp
from scipy.sparse import coo_matrix

from .decode import DecodeError, decode_best
from .feasibility import Schedule
from .model import Instance, eligible_cranes

__all__ = [
    "SearchSpaceTooLarge",
    "GapRecord",
    "brute_force_best",
    "lower_bound",
    "lower_bound_info",
    "relative_gap",
]


class SearchSpaceTooLarge(ValueError):
    """The eligible assignment space exceeds the enumeration limit."""


def eligible_space_size(inst: Instance) -> int:
    return math.prod(len(eligible_cranes(inst, j)) for j in range(1, inst.n + 1))


def brute_force_best(inst: Instance, limit: int = 1 << 16) -> tuple[tuple, Schedule]:
    """Exhaustive minimum over all eligible assignments.

    Ties go to the lexicographically smallest assignment. Raises
    `SearchSpaceTooLarge` when there are more than `limit` assignments.
    """
    size = eligible_space_size(inst)
    if size > limit:
        raise SearchSpaceTooLarge(f"{size} eligible assignments exceed the limit of {limit}")
    options = [eligible_cranes(inst, j) for j in range(1, inst.n + 1)]
    best = None
    for a in itertools.product(*options):
        try:
            sched = decode_best(inst, a)
        except DecodeError:
            continue
        if best is None or sched.makespan < best[1].makespan:
            best = (a, sched)
    if best is None:
        raise DecodeError("no eligible assignment can be decoded")
    return best


def relative_gap(f_alg: float, f_ref: float) -> float:
    """Percentage by which `f_alg` exceeds `f_ref`, rounded to two decimals."""
    if not f_ref > 0:
        raise ValueError(f"reference value must be positive, got {f_ref}")
    return round((f_alg - f_ref) / f_ref * 100, 2)


@dataclass(frozen=True)
class GapRecord:
    f_alg: float
    f_ref: float
    rg: float
    ref_kind: str

    @classmethod
    def of(cls, f_alg: float, f_ref: float, ref_kind: str = "optimum") -> "GapRecord":
        if ref_kind not in ("optimum", "lower-bound"):
            raise ValueError(f"unknown reference kind {ref_kind!r}")
        return cls(f_alg, f_ref, relative_gap(f_alg, f_ref), ref_kind)


def lower_bound(inst: Instance, node_cap: int = 20_000, milp_nodes: int = 5_000,
                time_limit: float | None = None) -> int:
    """Lower bound on the makespan of any feasible schedule.

    The value is the smallest, over eligible assignments, of the largest
    per-crane service time ``ready + workload + farthest travel``, i.e. the
    makespan once all interference is ignored. Small cases are settled by a
    depth-first branch and bound of at most `node_cap` nodes; larger ones by
    a mixed-integer program solved with HiGHS. If the solver stops at
    `milp_nodes` nodes (or `time_limit` seconds, when given) its proven dual
    bound is returned instead, which is still valid. Without a time limit
    the result does not depend on machine speed.
    """
    return lower_bound_info(inst, node_cap, milp_nodes, time_limit)[0]


def lower_bound_info(inst: Instance, node_cap: int = 20_000, milp_nodes: int = 5_000,
                     time_limit: float | None = None) -> tuple[int, bool]:
    """`lower_bound` together with a flag telling whether it is exact."""
    value, exact, root = _branch_and_bound(inst, node_cap)
    if exact:
        return value, True
    best, proven = _milp_bound(inst, milp_nodes, time_limit)
    if best is not None and proven >= best:
        return best, True
    return max(root, proven), False


def _branch_and_bound(inst: Instance, node_cap: int) -> tuple[int, bool, int]:
    """(value, exact, root bound) from a capped depth-first search."""
    n, m = inst.n, inst.m
    order = sorted(range(n), key=lambda j: (-inst.p[j], j))
    options = [eligible_cranes(inst, j + 1) for j in order]
    p = [inst.p[j] for j in order]
    travel = [[int(inst.start_travel[k - 1, j]) for k in range(1, m + 1)] for j in order]
    ready = list(inst.crane_ready)
    suffix = [0] * (n + 1)
    for d in range(n - 1, -1, -1):
        suffix[d] = suffix[d + 1] + p[d]

    def bound(depth, load, reach):
        cost = [ready[k] + load[k] + reach[k] for k in range(m)]
        b = max(cost)
        b = max(b, -(-(sum(cost) + suffix[depth]) // m))
        for d in range(depth, n):
            cheapest = min(ready[k - 1] + load[k - 1] + p[d] + max(reach[k - 1], travel[d][k - 1])
                           for k in options[d])
            if cheapest > b:
                b = cheapest
        return b

    load0, reach0 = [0] * m, [0] * m
    root = bound(0, load0, reach0)

    # greedy incumbent
    load, reach = load0[:], reach0[:]
    for d in range(n):
        k = min(options[d], key=lambda k: (ready[k - 1] + load[k - 1] + p[d]
                                           + max(reach[k - 1], travel[d][k - 1]), k))
        load[k - 1] += p[d]
        reach[k - 1] = max(reach[k - 1], travel[d][k - 1])
    incumbent = max(ready[k] + load[k] + reach[k] for k in range(m))
    if incumbent == root:
        return root, True, root

    nodes = 0
    best = incumbent
    exact = True

    def dfs(depth, load, reach):
        nonlocal nodes, best, exact
        if not exact:
            return
        nodes += 1
        if nodes > node_cap:
            exact = False
            return
        if depth == n:
            value = max(ready[k] + load[k] + reach[k] for k in range(m))
            if value < best:
                best = value
            return
        if bound(depth, load, reach) >= best:
            return
        moves = []
        for k in options[depth]:
            r = max(reach[k - 1], travel[depth][k - 1])
            moves.append((ready[k - 1] + load[k - 1] + p[depth] + r, k, r))
        moves.sort()
        for _, k, r in moves:
            old_r = reach[k - 1]
            load[k - 1] += p[depth]
            reach[k - 1] = r
            dfs(depth + 1, load, reach)
            load[k - 1] -= p[depth]
            reach[k - 1] = old_r
            if best == root or not exact:
                return

    dfs(0, load0[:], reach0[:])
    return best, exact, root


def _milp_bound(inst: Instance, max_nodes: int,
                time_limit: float | None) -> tuple[int | None, int]:
    """Solve the relaxation as a MILP; return (incumbent or None, proven bound).

    Binary ``x[j, k]`` assigns task j to crane k. The farthest travel of
    crane k is modelled with monotone indicators ``z[k, d]`` meaning "crane k
    travels at least its d-th distinct distance", which gives a much tighter
    linear relaxation than a single big-M travel variable.
    """
    n, m = inst.n, inst.m
    travel = inst.start_travel
    x, z, levels = {}, {}, {}
    for j in range(n):
        for k in eligible_cranes(inst, j + 1):
            x[j, k - 1] = len(x)
    cols = len(x)
    for k in range(m):
        levels[k] = sorted({int(travel[k, j]) for (j, kk) in x if kk == k and travel[k, j] > 0})
        for d in range(len(levels[k])):
            z[k, d] = cols
            cols += 1
    t_col = cols
    cols += 1

    rows, idx, vals, lo, hi = [], [], [], [], []

    def add(entries, a, b):
        r = len(lo)
        for c, v in entries:
            rows.append(r)
            idx.append(c)
            vals.append(v)
        lo.append(a)
        hi.append(b)

    for j in range(n):
        add([(x[j, k], 1) for k in range(m) if (j, k) in x], 1, 1)
    for (j, k), c in x.items():
        t = int(travel[k, j])
        if t > 0:
            add([(c, 1), (z[k, levels[k].index(t)], -1)], -np.inf, 0)
    for k in range(m):
        for d in range(len(levels[k]) - 1):
            add([(z[k, d + 1], 1), (z[k, d], -1)], -np.inf, 0)
        entries = [(c, inst.p[j]) for (j, kk), c in x.items() if kk == k]
        prev = 0
        for d, dist in enumerate(levels[k]):
            entries.append((z[k, d], dist - prev))
            prev = dist
        entries.append((t_col, -1))
        add(entries, -np.inf, -inst.crane_ready[k])

    a = coo_matrix((vals, (rows, idx)), shape=(len(lo), cols)).tocsr()
    c = np.zeros(cols)
    c[t_col] = 1
    integrality = np.ones(cols)
    integrality[t_col] = 0
    upper = np.ones(cols)
    upper[t_col] = np.inf
    options = {"node_limit": max_nodes}
    if time_limit is not None:
        options["time_limit"] = time_limit
    res = milp(c, constraints=LinearConstraint(a, lo, hi), integrality=integrality,
               bounds=Bounds(np.zeros(cols), upper), options=options)
    best = None if res.x is None else int(round(res.fun))
    dual = getattr(res, "mip_dual_bound", None)
    if res.status == 0 and best is not None:
        return best, best
    # the objective is integral, so the dual bound may be rounded up
    proven = 0 if dual is None or not np.isfinite(dual) else math.ceil(dual - 1e-6)
    return best, proven
