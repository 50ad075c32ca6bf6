"""
Benchmark runs
==============

Generates instances shaped like the standard sets, runs replicated searches
and writes the summary table. Relative gaps go against the exhaustive
optimum for the small shipped instances and against the lower bound
otherwise.
"""

# %%
from qcsp import SearchParams
from qcsp.harness import (GeneratorConfig, format_csv, generate_instance,
                          published_results_path, read_instance, read_references, run_benchmark)

small = published_results_path().parent / "small_sets"
refs = read_references(small / "optima.csv")
instances = [(name, read_instance(small / f"{name}.txt")) for name in sorted(refs)]
reports = run_benchmark(instances, SearchParams(), replications=10, references=refs)
print(format_csv(reports))

# %%
# Larger generated instances (sets C and E size) against the lower bound.
larger = [(f"{s}{k}", generate_instance(GeneratorConfig.for_set(s, seed=k)))
          for s in ("C", "E") for k in range(2)]
for r in run_benchmark(larger, SearchParams(), replications=5, workers=4):
    print(f"{r.instance}: best {r.best}, mean {r.mean}, LB {r.ref:g}, RG_best {r.rg_best}")

# %%
# The published values shipped with the package, for comparison only: the
# original instance files are not available, so they cannot be re-run.
pub = read_references(published_results_path())
print("kp13", pub["kp13"], "kp53", pub["kp53"])
