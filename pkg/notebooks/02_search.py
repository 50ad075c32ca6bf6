"""
Searching assignments
=====================

Runs the rank-based extremal optimization search on the example vessel and
on a generated instance, compares it with exhaustive enumeration and shows
how the mutation size matters.
"""

# %%
import numpy as np

from qcsp import SearchParams, brute_force_best, geo_solve, lower_bound, mgeo_solve
from qcsp.decode import Evaluator
from qcsp.harness import GeneratorConfig, generate_instance, published_results_path, read_instance

inst = read_instance(published_results_path().parent / "table1.txt")
res = mgeo_solve(inst, SearchParams(seed=1))
opt_a, opt = brute_force_best(inst)
print("search     ", res.makespan, res.assignment, f"({res.evaluations} decodes)")
print("enumeration", opt.makespan, opt_a)
print("lower bound", lower_bound(inst))

# %%
# The trace records the incumbent and the best value per iteration. The
# incumbent may get worse, the best never does.
trace = np.array(res.trace)
print("iterations", len(trace), "incumbent range", trace[:, 1].min(), trace[:, 1].max())

# %%
# A 13-task, 2-crane instance: 30 independent runs with a shared cache.
gen = generate_instance(GeneratorConfig(n=13, m=2, seed=1003))
ev = Evaluator(gen)
runs = [mgeo_solve(gen, SearchParams(seed=s), ev).makespan for s in range(30)]
print("best", min(runs), "mean", np.mean(runs), "worst", max(runs))
print("enumerated optimum", brute_force_best(gen)[1].makespan)

# %%
# Fixed mutation sizes against the cycling schedule.
for size in (1, 2, 3):
    vals = [geo_solve(gen, SearchParams(seed=s), n_star=size).makespan for s in range(10)]
    print(f"n* = {size}: mean {np.mean(vals):.1f}")
vals = [mgeo_solve(gen, SearchParams(seed=s)).makespan for s in range(10)]
print(f"cycling: mean {np.mean(vals):.1f}")
