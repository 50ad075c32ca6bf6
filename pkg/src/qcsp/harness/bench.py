"""Replicated solver runs with summary statistics and CSV output.

Each replication runs `mgeo_solve` with its own seed. Seeds are derived
from one base seed through `numpy.random.SeedSequence`, so a benchmark is
reproducible from the base seed alone. Timings are measured always but
written to the CSV only on request, which keeps the default output
byte-identical between runs.
"""

from __future__ import annotations

import csv
import io
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from ..analysis import lower_bound, relative_gap
from ..decode import Evaluator
from ..feasibility import ViolationReport, check
from ..search import SearchParams, mgeo_solve
from .io import Reference

__all__ = ["CSV_HEADER", "BenchmarkError", "RunReport", "replication_seeds", "run_benchmark",
           "format_csv"]

CSV_HEADER = ("instance", "reps", "mean", "best", "worst", "rg_mean", "rg_best", "rg_worst",
              "ref", "ref_kind", "time_mean_s", "seeds")


class BenchmarkError(RuntimeError):
    """A replication produced a schedule the checker rejects."""

    def __init__(self, instance: str, seed: int, report: ViolationReport):
        self.instance, self.seed, self.report = instance, seed, report
        super().__init__(f"{instance} (seed {seed}): infeasible schedule\n{report}")


@dataclass(frozen=True)
class RunReport:
    instance: str
    reps: int
    mean: float
    best: int
    worst: int
    rg_mean: float
    rg_best: float
    rg_worst: float
    ref: float
    ref_kind: str
    time_mean_s: float
    time_total_s: float
    seeds: tuple
    params: SearchParams
    best_schedule: object = None

    def __post_init__(self):
        if not self.best <= self.mean <= self.worst:
            raise ValueError("statistics out of order")
        if len(self.seeds) != self.reps:
            raise ValueError("one seed per replication expected")

    def csv_row(self, timing: bool = False) -> list[str]:
        return [
            self.instance, str(self.reps), f"{self.mean:.2f}", str(self.best), str(self.worst),
            f"{self.rg_mean:.2f}", f"{self.rg_best:.2f}", f"{self.rg_worst:.2f}",
            _num(self.ref), self.ref_kind,
            f"{self.time_mean_s:.4f}" if timing else "",
            " ".join(str(s) for s in self.seeds),
        ]


def _num(x: float) -> str:
    return str(int(x)) if float(x).is_integer() else f"{x:.2f}"


def replication_seeds(base_seed: int, reps: int) -> tuple:
    if reps < 1:
        raise ValueError("need at least one replication")
    return tuple(int(s) for s in np.random.SeedSequence(base_seed).generate_state(reps))


def _replicate(job):
    # one worker task: a block of replications of one instance, in seed order
    name, inst, params, seeds = job
    evaluator = Evaluator(inst, params.direction_mode)
    out = []
    for seed in seeds:
        t = time.perf_counter()
        res = mgeo_solve(inst, replace(params, seed=seed), evaluator)
        elapsed = time.perf_counter() - t
        report = check(inst, res.schedule)
        if report:
            raise BenchmarkError(name, seed, report)
        out.append((res.makespan, elapsed, res.schedule))
    return out


def run_benchmark(instances, params: SearchParams = SearchParams(), replications: int = 30,
                  references: dict[str, Reference] | None = None, base_seed: int = 0,
                  workers: int = 1) -> list[RunReport]:
    """Solve every ``(name, Instance)`` pair `replications` times.

    The gap reference is taken from `references` when it has the instance,
    otherwise `lower_bound` is computed. With ``workers > 1`` replications
    are spread over processes; results are merged in seed order and do not
    depend on the worker count.
    """
    instances = list(instances)
    seeds = replication_seeds(base_seed, replications)
    if workers > 1:
        # split each instance's replications into contiguous seed chunks
        chunks = [c.tolist() for c in np.array_split(np.array(seeds), min(workers, len(seeds)))]
        jobs = [(name, inst, params, chunk) for name, inst in instances for chunk in chunks]
        with ProcessPoolExecutor(max_workers=workers) as pool:
            flat = list(pool.map(_replicate, jobs))
        results = [sum(flat[i * len(chunks):(i + 1) * len(chunks)], [])
                   for i in range(len(instances))]
    else:
        results = [_replicate((name, inst, params, seeds)) for name, inst in instances]

    references = references or {}
    reports = []
    for (name, inst), runs in zip(instances, results):
        values = [f for f, _, _ in runs]
        times = [t for _, t, _ in runs]
        best_idx = int(np.argmin(values))
        if name in references:
            ref, kind = references[name].value, references[name].kind
        else:
            ref, kind = lower_bound(inst), "lower-bound"
        mean = round(float(np.mean(values)), 2)
        reports.append(RunReport(
            instance=name, reps=replications, mean=mean, best=min(values), worst=max(values),
            rg_mean=relative_gap(mean, ref), rg_best=relative_gap(min(values), ref),
            rg_worst=relative_gap(max(values), ref), ref=ref, ref_kind=kind,
            time_mean_s=float(np.mean(times)), time_total_s=float(np.sum(times)),
            seeds=seeds, params=params, best_schedule=runs[best_idx][2],
        ))
    return reports


def format_csv(reports, timing: bool = False) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_HEADER)
    for r in reports:
        writer.writerow(r.csv_row(timing))
    return buf.getvalue()
