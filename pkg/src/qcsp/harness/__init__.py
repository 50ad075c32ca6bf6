"""File formats, instance generation, benchmarking, charts and the command line."""

from .bench import CSV_HEADER, BenchmarkError, RunReport, format_csv, replication_seeds, run_benchmark
from .gantt import emit_gantt
from .generator import BENCHMARK_SETS, GeneratorConfig, generate_instance
from .io import (ParseError, format_instance, format_schedule, parse_instance, parse_params,
                 parse_schedule, published_results_path, read_instance, read_references,
                 write_instance)

__all__ = [
    "CSV_HEADER", "BenchmarkError", "RunReport", "format_csv", "replication_seeds",
    "run_benchmark", "emit_gantt", "BENCHMARK_SETS", "GeneratorConfig", "generate_instance",
    "ParseError", "format_instance", "format_schedule", "parse_instance", "parse_params",
    "parse_schedule", "published_results_path", "read_instance", "read_references",
    "write_instance",
]
