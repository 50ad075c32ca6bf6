"""Random instances shaped like the standard benchmark suite.

Every task gets a bay drawn uniformly from 1..l and one of four handling
types. Tasks sharing a bay are stacked in handling order, and each pair in a
bay with strictly increasing type becomes a precedence pair. All same-bay
pairs are non-simultaneous. The shape matches the published suite but the
data does not: per-bay multiplicities of the original files are unknown.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..model import Instance

__all__ = ["HANDLING_ORDER", "GeneratorConfig", "generate_instance", "spaced_positions",
           "BENCHMARK_SETS"]

# handling types in the order they are worked within one bay
HANDLING_ORDER = ("discharge-deck", "discharge-hold", "load-hold", "load-deck")

# set name -> (n, m) of the nine standard instance sets
BENCHMARK_SETS = {
    "A": (10, 2), "B": (15, 2), "C": (20, 3), "D": (25, 3), "E": (30, 4),
    "F": (35, 4), "G": (40, 5), "H": (45, 5), "I": (50, 6),
}


@dataclass(frozen=True)
class GeneratorConfig:
    """Parameters of the random instance generator.

    `bays` defaults to ``n`` (one bay per task on average). `handling_types`
    limits how many of the four handling types are drawn from.
    """

    n: int
    m: int
    p_low: int = 3
    p_high: int = 180
    bays: int | None = None
    delta: int = 1
    t0: int = 1
    handling_types: int = len(HANDLING_ORDER)
    ready: int = 0
    seed: int = 0

    def __post_init__(self):
        if self.p_low < 1 or self.p_high < self.p_low:
            raise ValueError("processing-time range must satisfy 1 <= low <= high")
        if not 1 <= self.m <= self.n:
            raise ValueError("need 1 <= m <= n")
        if self.delta < 0 or self.t0 < 1 or self.ready < 0:
            raise ValueError("need delta >= 0, t0 >= 1, ready >= 0")
        if not 1 <= self.handling_types <= len(HANDLING_ORDER):
            raise ValueError("handling_types must be between 1 and 4")
        l = self.num_bays
        if self.m > 1 and l < self.m * (self.delta + 1):
            # fewer bays leave some middle bays out of every crane's reach
            raise ValueError(f"{l} bays are too few for {self.m} cranes with safety margin "
                             f"{self.delta}")

    @property
    def num_bays(self) -> int:
        return self.n if self.bays is None else self.bays

    @classmethod
    def for_set(cls, name: str, seed: int = 0, **kw) -> "GeneratorConfig":
        n, m = BENCHMARK_SETS[name]
        return cls(n=n, m=m, seed=seed, **kw)


def spaced_positions(l: int, m: int, delta: int) -> list[int]:
    """Crane k at the middle of the k-th of m equal stretches of bays 1..l.

    Positions are pushed apart where needed so that adjacent cranes keep
    ``delta + 1`` bays between them.
    """
    pos = [(2 * k - 1) * l // (2 * m) + 1 for k in range(1, m + 1)]
    g = delta + 1
    for k in range(m):
        pos[k] = min(max(pos[k], k * g + 1), l - (m - 1 - k) * g)
    for k in range(1, m):
        pos[k] = max(pos[k], pos[k - 1] + g)
    return pos


def generate_instance(cfg: GeneratorConfig) -> Instance:
    """Draw one instance; identical configs give identical instances."""
    rng = np.random.default_rng(cfg.seed)
    n, l = cfg.n, cfg.num_bays
    bay = np.sort(rng.integers(1, l + 1, size=n))
    kind = rng.integers(0, cfg.handling_types, size=n)
    p = rng.integers(cfg.p_low, cfg.p_high + 1, size=n)

    # within a bay, order by handling type (stable on the draw order)
    order = np.lexsort((kind, bay))
    bay, kind, p = bay[order], kind[order], p[order]

    phi, psi = [], []
    for i in range(n):
        for j in range(i + 1, n):
            if bay[i] != bay[j]:
                break
            psi.append((i + 1, j + 1))
            if kind[i] < kind[j]:
                phi.append((i + 1, j + 1))

    return Instance.create(
        p=[int(x) for x in p], bay=[int(b) for b in bay],
        crane_pos0=spaced_positions(l, cfg.m, cfg.delta),
        crane_ready=[cfg.ready] * cfg.m,
        l=l, t0=cfg.t0, delta=cfg.delta, phi=phi, psi=psi,
    )
