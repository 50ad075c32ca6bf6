"""Acceptance gates, one test per criterion.

Each test records a line ``[PASS|FAIL] <no>. <name>: <measurement>`` that is
printed in the pytest summary (and directly when run as a script).
Expected values come from the oracles in `oracles.py`, not from the code
under test.
"""

from __future__ import annotations

import math
import sys
import time
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from oracles import (delta_oracle, eligible_oracle, random_eligible_assignment,  # noqa: E402
                     random_instance, rank1_probability, space_size, table1)
from qcsp.analysis import brute_force_best, lower_bound, relative_gap  # noqa: E402
from qcsp.decode import Evaluator, decode_best  # noqa: E402
from qcsp.feasibility import check, simulate_cranes  # noqa: E402
from qcsp.harness.bench import replication_seeds  # noqa: E402
from qcsp.harness.cli import main as cli_main  # noqa: E402
from qcsp.harness.generator import GeneratorConfig, generate_instance  # noqa: E402
from qcsp.harness.io import published_results_path, read_instance, read_references  # noqa: E402
from qcsp.initial import s_load, s_tasks  # noqa: E402
from qcsp.model import Instance, eligible_cranes, min_travel_time  # noqa: E402
from qcsp.search import NeighborSet, SearchParams, mgeo_solve, rank_select  # noqa: E402

RESULTS: list[str] = []


def record(no: int, name: str, passed: bool, detail: str) -> bool:
    line = f"[{'PASS' if passed else 'FAIL'}] {no}. {name}: {detail}"
    RESULTS.append(line)
    print(line)
    return passed


def test_01_minimum_travel_time_cases():
    rng = np.random.default_rng(101)
    mismatches, hits = 0, {"v>w": 0, "v<w": 0, "v=w": 0, "zero": 0}
    tuples = 0
    while tuples < 10_000:
        delta = int(rng.integers(0, 4))
        m = int(rng.integers(1, 5))
        l = m * (delta + 1) + int(rng.integers(0, 12))
        n = int(rng.integers(2, 10))
        bay = sorted(int(b) for b in rng.integers(1, l + 1, size=n))
        pos = [k * (delta + 1) + 1 for k in range(m)]
        t0 = int(rng.integers(1, 4))
        inst = Instance.create(p=[1] * n, bay=bay, crane_pos0=pos, l=l, delta=delta, t0=t0)
        for _ in range(100):
            i, j = (int(x) for x in rng.integers(1, n + 1, size=2))
            v, w = (int(x) for x in rng.integers(1, m + 1, size=2))
            want = delta_oracle(i, j, bay[i - 1], bay[j - 1], v, w, delta, t0)
            got = min_travel_time(inst, i, j, v, w)
            mismatches += got != want
            key = "zero" if want == 0 else ("v>w" if v > w else "v<w" if v < w else "v=w")
            hits[key] += 1
            tuples += 1
    ok = mismatches == 0 and min(hits.values()) > 0
    assert record(1, "minimum travel time", ok,
                  f"{tuples} tuples, {mismatches} mismatches, case hits {hits}")


def test_02_eligibility_table1():
    inst = table1()
    got = [eligible_cranes(inst, j) for j in range(1, 9)]
    want = [eligible_oracle(b, inst.l, inst.m, inst.delta) for b in inst.bay]
    expected = [(1,)] * 3 + [(1, 2)] * 3 + [(2,)] * 2
    ok = got == want == expected
    assert record(2, "eligible cranes on the 8-task example", ok, f"{got}")


def test_03_s_load_table1():
    got = s_load(table1())
    ok = got == (1, 1, 1, 1, 1, 2, 2, 2)
    assert record(3, "S-LOAD on the 8-task example", ok, f"{got}")


def test_04_decoder_soundness():
    rng = np.random.default_rng(404)
    t = time.perf_counter()
    decoded = violated = simulated = rejected = 0
    for _ in range(200):
        n = int(rng.integers(1, 13))
        m = min(int(rng.integers(1, 4)), n)
        inst = random_instance(rng, n, m, cross_psi=0.15)
        assignments = {s_load(inst), s_tasks(inst)}
        assignments.update(random_eligible_assignment(rng, inst) for _ in range(3))
        for a in assignments:
            s = decode_best(inst, a)
            decoded += 1
            violated += bool(check(inst, s))
            if n <= 6:
                simulated += 1
                rejected += not simulate_cranes(inst, s)
    elapsed = time.perf_counter() - t
    ok = violated == 0 and rejected == 0 and elapsed < 120
    assert record(4, "decoder soundness", ok,
                  f"{decoded} schedules, {violated} with violations; {simulated} simulated, "
                  f"{rejected} rejected; {elapsed:.1f} s")


def test_05_oracle_dominance():
    rng = np.random.default_rng(505)
    matches = beaten = count = 0
    while count < 20:
        n = int(rng.integers(6, 13))
        inst = random_instance(rng, n, int(rng.integers(2, 4)))
        if space_size(inst) > 4096:
            continue
        count += 1
        optimum = brute_force_best(inst, limit=4096)[1].makespan
        ev = Evaluator(inst)
        best = min(mgeo_solve(inst, SearchParams(tau=5, max_iters=200, max_stall=50, seed=s),
                              ev).makespan for s in range(5))
        matches += best == optimum
        beaten += best < optimum
    ok = matches >= 18 and beaten == 0
    assert record(5, "search vs exhaustive enumeration", ok,
                  f"matched {matches}/20 (need >= 18), beaten {beaten} times (need 0)")


def test_06_small_set_reproduction():
    folder = published_results_path().parent / "small_sets"
    optima = read_references(folder / "optima.csv")
    hits, slowest, verified = 0, 0.0, 0
    seeds = replication_seeds(0, 30)
    for name in sorted(optima):
        inst = read_instance(folder / f"{name}.txt")
        assert 10 <= inst.n <= 15 and inst.m == 2
        optimum = brute_force_best(inst, limit=1 << 16)[1].makespan
        verified += optimum == optima[name].value
        t = time.perf_counter()
        ev = Evaluator(inst)
        best = min(mgeo_solve(inst, SearchParams(seed=s), ev).makespan for s in seeds)
        slowest = max(slowest, time.perf_counter() - t)
        hits += best == optimum
    ok = hits >= 9 and slowest <= 5.0 and verified == len(optima)
    assert record(6, "best of 30 on set A/B-sized instances", ok,
                  f"optimum reached on {hits}/{len(optima)} (need >= 9), stored optima "
                  f"verified {verified}/{len(optima)}, slowest {slowest:.2f} s (limit 5 s)")


def test_07_gap_arithmetic():
    a, b = relative_gap(710.4, 672), relative_gap(453, 453)
    ok = a == 5.71 and b == 0.00
    assert record(7, "relative gap", ok, f"RG(710.4, 672) = {a:.2f}, RG(453, 453) = {b:.2f}")


def test_08_lower_bound_validity():
    rng = np.random.default_rng(808)
    checks = violations = 0
    for k in range(500):
        n = int(rng.integers(1, 13))
        inst = random_instance(rng, n, min(int(rng.integers(1, 4)), n))
        lb = lower_bound(inst)
        values = [decode_best(inst, s_load(inst)).makespan,
                  decode_best(inst, s_tasks(inst)).makespan,
                  decode_best(inst, random_eligible_assignment(rng, inst)).makespan,
                  mgeo_solve(inst, SearchParams(seed=k, max_iters=30, max_stall=10)).makespan]
        checks += len(values)
        violations += sum(lb > f for f in values)
    ok = violations == 0
    assert record(8, "lower bound validity", ok,
                  f"500 instances, {checks} schedules, {violations} below the bound")


def test_09_bench_determinism(tmp_path, capsys):
    files = []
    for s in range(3):
        path = tmp_path / f"det{s}.txt"
        cli_main(["generate", "--n", "10", "--m", "2", "--seed", str(70 + s), "-o", str(path)])
        files.append(str(path))
    outs = []
    for run in range(2):
        out = tmp_path / f"run{run}.csv"
        code = cli_main(["bench", *files, "--reps", "5", "--seed", "3", "--format", "csv",
                         "-o", str(out)])
        assert code == 0
        outs.append(out.read_bytes())
    capsys.readouterr()
    ok = outs[0] == outs[1] and outs[0].count(b"\n") == 4
    assert record(9, "bench determinism", ok,
                  f"two runs, {len(outs[0])} bytes each, identical: {outs[0] == outs[1]}")


def test_10_rank_selection_distribution():
    tau, size, trials = 5.0, 5, 100_000
    ns = NeighborSet([((k,), float(k)) for k in range(1, size + 1)])
    rng = np.random.default_rng(1010)
    top = sum(rank_select(ns, tau, rng) == (1,) for _ in range(trials))
    freq = top / trials
    want = rank1_probability(tau, size)
    ok = math.isclose(freq, want, rel_tol=0.01)
    assert record(10, "rank-1 selection frequency", ok,
                  f"observed {freq:.5f}, analytic {want:.5f}, tolerance +-1%")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
