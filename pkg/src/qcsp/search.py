"""Generalized extremal optimization over task-to-crane assignments.

A single incumbent assignment is perturbed by changing the crane of one,
two or three tasks at a time. All neighbours produced in an iteration are
ranked by makespan and the incumbent moves to rank ``k`` with probability
proportional to ``k ** -tau``; the best-so-far solution only tracks the
rank-1 neighbour. Cycling the mutation size 1, 2, 3, 1, ... gives the
modified variant (`mgeo_solve`); a fixed size gives the plain one
(`geo_solve`).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field, replace

import numpy as np

from .decode import DecodeError, Evaluator
from .feasibility import Schedule, check
from .initial import s_load, s_tasks
from .model import Instance, eligible_cranes

__all__ = [
    "SearchParams",
    "NeighborSet",
    "SolveResult",
    "eligible_cranes",
    "select_mutation_set",
    "generate_neighbors",
    "rank_select",
    "mgeo_solve",
    "geo_solve",
]

_INITIALIZERS = {"s_load": s_load, "s_tasks": s_tasks}


@dataclass(frozen=True)
class SearchParams:
    """Settings of one search run.

    `mutation_policy` is ``"cycling"`` or a fixed mutation size 1, 2 or 3.
    The run stops once more than `max_iters` iterations have been done or
    more than `max_stall` consecutive iterations failed to improve.
    """

    tau: float = 5.0
    max_iters: int = 200
    max_stall: int = 50
    mutation_policy: object = "cycling"
    seed: int = 0
    direction_mode: str = "best"
    initializer: str = "s_load"

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if self.max_iters < 1 or self.max_stall < 1:
            raise ValueError("max_iters and max_stall must be at least 1")
        policy = self.mutation_policy
        if isinstance(policy, str) and policy.isdigit():
            policy = int(policy)
            object.__setattr__(self, "mutation_policy", policy)
        if policy != "cycling" and policy not in (1, 2, 3):
            raise ValueError(f"mutation_policy must be 'cycling' or 1, 2, 3; got {policy!r}")
        if self.direction_mode not in ("best", "upward"):
            raise ValueError(f"unknown direction_mode {self.direction_mode!r}")
        if self.initializer not in _INITIALIZERS:
            raise ValueError(f"unknown initializer {self.initializer!r}")

    def mutation_size(self, iteration: int) -> int:
        if self.mutation_policy == "cycling":
            return iteration % 3 + 1
        return int(self.mutation_policy)


@dataclass
class NeighborSet:
    """Neighbours sorted by makespan; rank ``k`` is ``neighbors[k - 1]``."""

    neighbors: list = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.neighbors)

    def __len__(self):
        return len(self.neighbors)

    def __bool__(self):
        return bool(self.neighbors)

    def rank_of(self, a) -> int:
        for k, (b, _) in enumerate(self.neighbors, start=1):
            if b == a:
                return k
        raise KeyError(a)


@dataclass
class SolveResult:
    assignment: tuple
    schedule: Schedule
    trace: list
    iterations: int
    evaluations: int

    @property
    def makespan(self) -> int:
        return self.schedule.makespan


def select_mutation_set(n: int, n_star: int, rng) -> tuple:
    """`n_star` distinct task ids drawn uniformly from 1..n, sorted."""
    if not 1 <= n_star <= n:
        raise ValueError(f"cannot draw {n_star} distinct tasks out of {n}")
    picked = rng.choice(n, size=n_star, replace=False) + 1
    return tuple(sorted(int(j) for j in picked))


def _candidates(inst, a_c, omega_star, eligible):
    options = []
    for j in omega_star:
        options.append(eligible[j - 1])
    for combo in itertools.product(*options):
        b = list(a_c)
        for j, k in zip(omega_star, combo):
            b[j - 1] = k
        b = tuple(b)
        if b != a_c:
            yield b


def generate_neighbors(inst: Instance, a_c, omega_star, decode) -> NeighborSet:
    """Every assignment obtained by re-assigning the tasks in `omega_star`.

    `decode` maps an assignment to its makespan (an `Evaluator`, or any
    callable returning a number); undecodable neighbours are dropped.
    """
    a_c = tuple(a_c)
    eligible = [eligible_cranes(inst, j) for j in range(1, inst.n + 1)]
    return _rank(_evaluate(_candidates(inst, a_c, tuple(omega_star), eligible), decode))


def _evaluate(candidates, decode):
    out = []
    for b in candidates:
        f = decode(b)
        if f != math.inf:
            out.append((b, f))
    return out


def _rank(pairs) -> NeighborSet:
    # stable: equal makespans keep generation order
    return NeighborSet(sorted(pairs, key=lambda t: t[1]))


def rank_select(ns: NeighborSet, tau: float, rng):
    """Draw the next incumbent from `ns`.

    Repeatedly pick a neighbour uniformly at random and accept it if a
    uniform draw does not exceed ``rank ** -tau``. Rank 1 is always accepted
    when picked, so the loop terminates.
    """
    if not ns:
        raise ValueError("empty neighbour set")
    size = ns.size
    while True:
        ran = rng.random()
        idx = int(rng.integers(size))
        if ran <= (idx + 1) ** -tau:
            return ns.neighbors[idx][0]


def _iteration_neighbors(inst, a_c, n_star, eligible, rng, evaluate):
    n = inst.n
    if n_star == 1:
        cands = (b for j in range(1, n + 1) for b in _candidates(inst, a_c, (j,), eligible))
        return _rank(_evaluate(cands, evaluate))
    seen = {}
    for _ in range(n):
        omega = select_mutation_set(n, n_star, rng)
        for b in _candidates(inst, a_c, omega, eligible):
            if b not in seen:
                seen[b] = None
    return _rank(_evaluate(seen, evaluate))


def mgeo_solve(inst: Instance, params: SearchParams = SearchParams(),
               evaluator: Evaluator | None = None) -> SolveResult:
    """Run the search and return the best assignment with its schedule.

    The trace holds one ``(iteration, incumbent makespan, best makespan)``
    row per iteration. A shared `evaluator` may be passed to reuse decoded
    makespans across runs on the same instance; results do not depend on it.
    """
    if evaluator is None:
        evaluator = Evaluator(inst, params.direction_mode)
    elif evaluator.inst != inst or evaluator.direction_mode != params.direction_mode:
        raise ValueError("evaluator was built for a different instance or direction mode")
    decodes_before = evaluator.decodes
    rng = np.random.default_rng(params.seed)
    eligible = [eligible_cranes(inst, j) for j in range(1, inst.n + 1)]

    a0 = _INITIALIZERS[params.initializer](inst)
    f0 = evaluator(a0)
    if f0 == math.inf:
        raise DecodeError(f"initial assignment {a0} cannot be decoded")
    best, f_best = a0, f0
    current, f_current = a0, f0
    it = stall = 0
    trace = []
    while it <= params.max_iters and stall <= params.max_stall:
        n_star = min(params.mutation_size(it), inst.n)
        ns = _iteration_neighbors(inst, current, n_star, eligible, rng, evaluator)
        if ns:
            current = rank_select(ns, params.tau, rng)
            f_current = evaluator(current)
            top, f_top = ns.neighbors[0]
            if f_top < f_best:
                best, f_best = top, f_top
                stall = 0
            else:
                stall += 1
        else:
            stall += 1
        it += 1
        trace.append((it, f_current, f_best))

    sched = evaluator.schedule(best)
    report = check(inst, sched)
    if report:
        raise RuntimeError(f"decoded schedule violates the model:\n{report}")
    return SolveResult(best, sched, trace, it, evaluator.decodes - decodes_before)


def geo_solve(inst: Instance, params: SearchParams = SearchParams(mutation_policy=1),
              evaluator: Evaluator | None = None, n_star: int | None = None) -> SolveResult:
    """The search with a constant mutation size (`n_star`, or the one in `params`)."""
    if n_star is not None:
        params = replace(params, mutation_policy=n_star)
    if params.mutation_policy == "cycling":
        raise ValueError("geo_solve needs a fixed mutation size")
    return mgeo_solve(inst, params, evaluator)
