"""Text formats for instances, schedules, solver parameters and reference values.

Instance files are line oriented; ``#`` starts a comment::

    n m l delta t0
    task <id> <bay> <ptime>        (n lines)
    crane <id> <bay0> <ready>      (m lines)
    prec <i> <j>                   (any number)
    nonsim <i> <j>                 (any number)

Task ids must be 1..n and crane ids 1..m, each used once, in any order.
On parsing, tasks are renumbered by bay (and by precedence inside a bay)
and cranes by initial bay; ``Instance.task_labels`` keeps the file ids.

Schedule files list one line per task::

    task <id> <crane> <start>

optionally preceded by ``direction <upward|downward>``. Ids refer to the
canonical numbering of the instance they belong to.
"""

from __future__ import annotations

import csv
import io
import logging
from dataclasses import dataclass
from pathlib import Path

from ..feasibility import Schedule
from ..model import Instance, InstanceError
from ..search import SearchParams

__all__ = [
    "ParseError",
    "parse_instance",
    "format_instance",
    "read_instance",
    "write_instance",
    "parse_schedule",
    "format_schedule",
    "parse_params",
    "Reference",
    "read_references",
    "published_results_path",
]

log = logging.getLogger(__name__)


class ParseError(ValueError):
    """Malformed input; `lineno` is the offending 1-based line, if known."""

    def __init__(self, message: str, lineno: int | None = None):
        self.lineno = lineno
        super().__init__(f"line {lineno}: {message}" if lineno else message)


def _records(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield lineno, line.split()


def _ints(fields, lineno, count):
    if len(fields) != count:
        raise ParseError(f"expected {count} values, got {len(fields)}", lineno)
    try:
        return [int(f) for f in fields]
    except ValueError:
        raise ParseError(f"non-integer value in {' '.join(fields)!r}", lineno) from None


def parse_instance(text: str) -> Instance:
    """Build a validated `Instance` from the instance text format."""
    records = list(_records(text))
    if not records:
        raise ParseError("empty instance file")
    lineno, head = records[0]
    n, m, l, delta, t0 = _ints(head, lineno, 5)
    if n < 1 or m < 1 or l < 1:
        raise ParseError("n, m and l must be positive", lineno)
    if delta < 0 or t0 < 1:
        raise ParseError("need delta >= 0 and t0 >= 1", lineno)

    tasks: dict[int, tuple[int, int]] = {}
    cranes: dict[int, tuple[int, int]] = {}
    pairs = {"prec": [], "nonsim": []}
    section = 0
    order = {"task": 0, "crane": 1, "prec": 2, "nonsim": 3}
    for lineno, fields in records[1:]:
        kind = fields[0]
        if kind not in order:
            raise ParseError(f"unknown record {kind!r}", lineno)
        if order[kind] < section:
            raise ParseError(f"{kind!r} record out of order", lineno)
        section = order[kind]
        vals = _ints(fields[1:], lineno, 3 if kind in ("task", "crane") else 2)
        a, b = vals[0], vals[1]
        if kind == "task":
            if not 1 <= a <= n or a in tasks:
                raise ParseError(f"task id {a} duplicated or outside 1..{n}", lineno)
            if not 1 <= b <= l:
                raise ParseError(f"task {a}: bay {b} outside 1..{l}", lineno)
            if vals[2] < 1:
                raise ParseError(f"task {a}: processing time must be positive", lineno)
            tasks[a] = (b, vals[2])
        elif kind == "crane":
            if not 1 <= a <= m or a in cranes:
                raise ParseError(f"crane id {a} duplicated or outside 1..{m}", lineno)
            if not 1 <= b <= l:
                raise ParseError(f"crane {a}: bay {b} outside 1..{l}", lineno)
            if vals[2] < 0:
                raise ParseError(f"crane {a}: negative ready time", lineno)
            cranes[a] = (b, vals[2])
        else:
            for t in (a, b):
                if t not in tasks:
                    raise ParseError(f"{kind} refers to unknown task {t}", lineno)
            if a == b:
                raise ParseError(f"{kind} pair with identical tasks", lineno)
            pairs[kind].append((a, b))
    if len(tasks) != n:
        raise ParseError(f"header declares {n} tasks, found {len(tasks)}")
    if len(cranes) != m:
        raise ParseError(f"header declares {m} cranes, found {len(cranes)}")

    ids = sorted(tasks)
    cids = sorted(cranes)
    try:
        inst = Instance.create(
            p=[tasks[i][1] for i in ids],
            bay=[tasks[i][0] for i in ids],
            crane_pos0=[cranes[k][0] for k in cids],
            crane_ready=[cranes[k][1] for k in cids],
            l=l, t0=t0, delta=delta,
            phi=pairs["prec"], psi=pairs["nonsim"],
        )
    except InstanceError as exc:
        raise ParseError(str(exc)) from exc
    if inst.task_labels != tuple(ids):
        log.info("tasks renumbered by bay: canonical -> file ids %s", inst.task_labels)
    if inst.crane_labels != tuple(cids):
        log.info("cranes renumbered by bay: canonical -> file ids %s", inst.crane_labels)
    return inst


def format_instance(inst: Instance, comment: str | None = None) -> str:
    """Instance text in canonical numbering; `parse_instance` inverts it."""
    out = []
    if comment:
        out.extend(f"# {line}" for line in comment.splitlines())
    out.append(f"{inst.n} {inst.m} {inst.l} {inst.delta} {inst.t0}")
    for i in range(inst.n):
        out.append(f"task {i + 1} {inst.bay[i]} {inst.p[i]}")
    for k in range(inst.m):
        out.append(f"crane {k + 1} {inst.crane_pos0[k]} {inst.crane_ready[k]}")
    for i, j in sorted(inst.phi):
        out.append(f"prec {i} {j}")
    for i, j in sorted(inst.psi - inst.phi):
        out.append(f"nonsim {i} {j}")
    return "\n".join(out) + "\n"


def read_instance(path) -> Instance:
    return parse_instance(Path(path).read_text())


def write_instance(inst: Instance, path, comment: str | None = None) -> None:
    Path(path).write_text(format_instance(inst, comment))


def parse_schedule(text: str, inst: Instance) -> Schedule:
    """Read a schedule file for `inst`; completions follow from processing times."""
    direction = "upward"
    rows: dict[int, tuple[int, int]] = {}
    for lineno, fields in _records(text):
        kind = fields[0]
        if kind == "direction":
            if len(fields) != 2 or fields[1] not in ("upward", "downward"):
                raise ParseError("direction must be 'upward' or 'downward'", lineno)
            direction = fields[1]
        elif kind == "makespan":
            _ints(fields[1:], lineno, 1)  # informational, recomputed below
        elif kind == "task":
            i, k, s = _ints(fields[1:], lineno, 3)
            if not 1 <= i <= inst.n or i in rows:
                raise ParseError(f"task id {i} duplicated or outside 1..{inst.n}", lineno)
            rows[i] = (k, s)
        else:
            raise ParseError(f"unknown record {kind!r}", lineno)
    if len(rows) != inst.n:
        missing = sorted(set(range(1, inst.n + 1)) - set(rows))
        raise ParseError(f"no schedule line for tasks {missing}")
    a = [rows[i][0] for i in range(1, inst.n + 1)]
    s = [rows[i][1] for i in range(1, inst.n + 1)]
    if min(s) < 0:
        raise ParseError("negative start time")
    return Schedule.from_starts(inst, a, s, direction)


def format_schedule(inst: Instance, sched: Schedule) -> str:
    out = [f"direction {sched.direction}", f"makespan {sched.makespan}"]
    for i in range(inst.n):
        out.append(f"task {i + 1} {sched.assignment[i]} {sched.start[i]}")
    return "\n".join(out) + "\n"


_PARAM_KEYS = {
    "tau": float,
    "max_iters": int,
    "max_stall": int,
    "mutation_policy": str,
    "direction_mode": str,
    "initializer": str,
}


def parse_params(text: str, base: SearchParams | None = None) -> SearchParams:
    """Solver settings from ``key=value`` lines on top of `base`."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, value = (part.strip() for part in line.partition("="))
        if not sep:
            raise ParseError(f"expected key=value, got {line!r}", lineno)
        if key not in _PARAM_KEYS:
            raise ParseError(f"unknown parameter {key!r}", lineno)
        try:
            values[key] = _PARAM_KEYS[key](value)
        except ValueError:
            raise ParseError(f"bad value for {key}: {value!r}", lineno) from None
    base = base or SearchParams()
    fields = {**base.__dict__, **values}
    try:
        return SearchParams(**fields)
    except ValueError as exc:
        raise ParseError(str(exc)) from exc


@dataclass(frozen=True)
class Reference:
    value: float
    kind: str
    source: str = ""


def read_references(path) -> dict[str, Reference]:
    """Reference makespans keyed by instance id.

    The file is CSV with at least the columns ``instance``, ``ref`` and
    ``ref_kind`` (``optimum`` or ``lower-bound``); a ``source`` column is
    kept when present and other columns are ignored.
    """
    text = Path(path).read_text()
    reader = csv.DictReader(io.StringIO(text))
    need = {"instance", "ref", "ref_kind"}
    if not reader.fieldnames or not need <= set(reader.fieldnames):
        raise ParseError(f"reference file needs columns {sorted(need)}")
    out = {}
    for lineno, row in enumerate(reader, start=2):
        if row["ref_kind"] not in ("optimum", "lower-bound"):
            raise ParseError(f"unknown ref_kind {row['ref_kind']!r}", lineno)
        try:
            value = float(row["ref"])
        except ValueError:
            raise ParseError(f"bad reference value {row['ref']!r}", lineno) from None
        out[row["instance"]] = Reference(value, row["ref_kind"], row.get("source") or "")
    return out


def published_results_path() -> Path:
    """Shipped table of published reference values for the standard benchmark suite."""
    return Path(__file__).resolve().parent.parent / "data" / "published_results.csv"
