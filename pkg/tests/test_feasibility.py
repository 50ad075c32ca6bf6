import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import random_eligible_assignment, random_instance
from qcsp.decode import decode_best, decode_upward
from qcsp.feasibility import Schedule, ScheduleError, check, makespan, simulate_cranes
from qcsp.model import Instance

SLOAD = (1, 1, 1, 1, 1, 2, 2, 2)


def sched(inst, a, s, direction="upward"):
    return Schedule.from_starts(inst, a, s, direction)


def test_makespan_is_last_completion(inst1):
    s = sched(inst1, SLOAD, [3, 58, 180, 252, 382, 518, 663, 762])
    assert makespan(s) == s.makespan == 805
    assert s.completion[:5] == (58, 179, 250, 381, 516)


def test_decoded_schedule_is_feasible(inst1):
    s = decode_upward(inst1, SLOAD)
    assert check(inst1, s).feasible
    assert simulate_cranes(inst1, s)


def test_single_task_schedule():
    inst = Instance.create(p=[7], bay=[3], crane_pos0=[1], l=3, crane_ready=[2])
    s = sched(inst, (1,), [4])
    assert check(inst, s).feasible
    assert makespan(s) == 11
    assert "C3.5" in check(inst, sched(inst, (1,), [3])).tags()


def test_recorded_makespan_too_small(inst1):
    s = decode_upward(inst1, SLOAD)
    bad = Schedule(s.assignment, s.start, s.completion, s.direction, s.makespan - 1)
    assert "C3.3" in check(inst1, bad).tags()


def test_unknown_crane(inst1):
    s = decode_upward(inst1, SLOAD)
    bad = Schedule((3,) + s.assignment[1:], s.start, s.completion, s.direction, s.makespan)
    assert check(inst1, bad).tags() == {"C3.4"}


def test_precedence_violation(inst1):
    s = decode_upward(inst1, SLOAD)
    start = list(s.start)
    start[1] = 0  # task 2 before task 1 finishes
    assert "C3.6" in check(inst1, sched(inst1, SLOAD, start)).tags()


def test_nonsimultaneous_violation():
    inst = Instance.create(p=[5, 5], bay=[1, 4], crane_pos0=[1, 4], l=4, psi=[(1, 2)])
    assert check(inst, sched(inst, (1, 2), [0, 0])).tags() == {"C3.7"}
    assert check(inst, sched(inst, (1, 2), [0, 5])).feasible


def test_interference_tags():
    # two cranes, adjacent bays, margin 1: tasks 1 (bay 2) and 2 (bay 3) interfere
    inst = Instance.create(p=[10, 10], bay=[2, 3], crane_pos0=[1, 4], l=4)
    a = (1, 2)
    # lower-index task first: gap is (2 - 3 + 2) = 1
    assert check(inst, sched(inst, a, [1, 11])).tags() == {"C3.11"}
    assert check(inst, sched(inst, a, [1, 12])).feasible
    # higher-index task first: same gap
    assert check(inst, sched(inst, a, [11, 1])).tags() == {"C3.12"}
    assert check(inst, sched(inst, a, [12, 1])).feasible
    # overlap
    assert "C3.10" in check(inst, sched(inst, a, [1, 3])).tags()


def test_same_crane_travel_and_overlap():
    inst = Instance.create(p=[4, 4, 4], bay=[1, 3, 3], crane_pos0=[1], l=3)
    assert check(inst, sched(inst, (1, 1, 1), [0, 6, 10])).feasible
    assert "C3.11" in check(inst, sched(inst, (1, 1, 1), [0, 5, 10])).tags()
    assert "C3.10" in check(inst, sched(inst, (1, 1, 1), [0, 6, 9])).tags()


def test_malformed_schedule_raises(inst1):
    with pytest.raises(ScheduleError):
        check(inst1, Schedule((1,), (0,), (55,)))
    with pytest.raises(ScheduleError):
        check(inst1, Schedule(SLOAD, (0,) * 8, (1,) * 8, "upward", 1))


def test_report_is_truthy_only_when_violated(inst1):
    ok = check(inst1, decode_upward(inst1, SLOAD))
    assert not ok and ok.feasible and len(ok) == 0 and str(ok) == "feasible"


def test_simulator_rejects_crossing():
    # the upper crane must get out of the way before the lower one reaches bay 3
    inst = Instance.create(p=[10, 10], bay=[3, 3], crane_pos0=[1, 3], l=5, phi=[(1, 2)])
    s = sched(inst, (2, 1), [0, 11])  # 1 bay of clearance per time unit: need 2
    assert not simulate_cranes(inst, s)
    assert simulate_cranes(inst, sched(inst, (2, 1), [0, 12]))


def _perturbed(seed, ready_max=10):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 6))
    inst = random_instance(rng, n, min(int(rng.integers(1, 4)), n), cross_psi=0.2,
                           ready_max=ready_max)
    a = random_eligible_assignment(rng, inst)
    base = decode_best(inst, a)
    start = [max(0, x + int(rng.integers(-6, 4))) for x in base.start]
    return inst, sched(inst, a, start)


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_checker_feasible_implies_physically_realisable(seed):
    inst, s = _perturbed(seed)
    if check(inst, s).feasible:
        assert simulate_cranes(inst, s)


@settings(max_examples=400, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_simulator_agrees_with_interference_constraints(seed):
    # with release times respected, the cranes can follow the schedule
    # exactly when no interference constraint is violated
    inst, s = _perturbed(seed)
    tags = check(inst, s).tags()
    if "C3.5" not in tags:
        assert simulate_cranes(inst, s) == (not tags & {"C3.10", "C3.11", "C3.12"})


def test_simulator_rejects_double_booked_crane():
    inst = Instance.create(p=[5, 5], bay=[2, 2], crane_pos0=[2], l=2)
    s = sched(inst, (1, 1), [0, 3])
    assert check(inst, s).tags() == {"C3.10"}
    assert not simulate_cranes(inst, s)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_decoded_schedules_are_active(seed):
    # moving any positive start one unit earlier breaks some constraint
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 8))
    inst = random_instance(rng, n, min(int(rng.integers(1, 4)), n))
    s = decode_best(inst, random_eligible_assignment(rng, inst))
    for i in range(inst.n):
        if s.start[i] == 0:
            continue
        start = list(s.start)
        start[i] -= 1
        earlier = sched(inst, s.assignment, start, s.direction)
        assert check(inst, earlier), f"task {i + 1} could start earlier"


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_adding_nonsimultaneous_pair_only_adds_violations(seed):
    inst, s = _perturbed(seed)
    if inst.n < 2:
        return
    rng = np.random.default_rng(seed + 1)
    i, j = sorted(int(x) for x in rng.choice(inst.n, size=2, replace=False) + 1)
    wider = Instance(inst.l, inst.p, inst.bay, inst.crane_pos0, inst.crane_ready, inst.t0,
                     inst.delta, inst.phi, inst.psi | {(i, j)})
    assert set(check(inst, s)) <= set(check(wider, s))
