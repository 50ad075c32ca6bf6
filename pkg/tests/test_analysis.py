import itertools

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import lb_by_enumeration, random_eligible_assignment, random_instance, space_size
from qcsp.analysis import (GapRecord, SearchSpaceTooLarge, brute_force_best, eligible_space_size,
                           lower_bound, lower_bound_info, relative_gap)
from qcsp.decode import DecodeError, Evaluator, decode_best
from qcsp.harness.generator import GeneratorConfig, generate_instance
from qcsp.initial import s_load, s_tasks
from qcsp.model import Instance
from qcsp.search import SearchParams, mgeo_solve


def test_brute_force_table1(inst1):
    assert eligible_space_size(inst1) == 8
    a, s = brute_force_best(inst1)
    assert a == (1, 1, 1, 2, 2, 1, 2, 2)
    assert s.makespan == 413
    # exhaustive check of the claim
    values = [decode_best(inst1, (1, 1, 1, x, y, z, 2, 2)).makespan
              for x, y, z in itertools.product((1, 2), repeat=3)]
    assert min(values) == 413


def test_brute_force_single_crane():
    inst = Instance.create(p=[2, 3], bay=[1, 4], crane_pos0=[1], l=4)
    a, s = brute_force_best(inst)
    assert a == (1, 1) and s.makespan == 8


def test_brute_force_two_free_tasks():
    inst = Instance.create(p=[5, 5], bay=[2, 3], crane_pos0=[1, 4], l=4, delta=0)
    a, s = brute_force_best(inst)
    expect = min(decode_best(inst, b).makespan for b in itertools.product((1, 2), repeat=2))
    assert s.makespan == expect


def test_brute_force_ties_go_lexicographically_first():
    inst = Instance.create(p=[5, 5], bay=[1, 4], crane_pos0=[1, 4], l=4, delta=0)
    a, _ = brute_force_best(inst)
    assert a == min(b for b in itertools.product((1, 2), repeat=2)
                    if decode_best(inst, b).makespan == decode_best(inst, a).makespan)


def test_brute_force_refuses_large_spaces(inst1):
    with pytest.raises(SearchSpaceTooLarge):
        brute_force_best(inst1, limit=7)


def test_brute_force_all_undecodable():
    inst = Instance.create(p=[1, 1, 1, 1], bay=[1, 2, 3, 4], crane_pos0=[1], l=4,
                           phi=[(2, 1), (3, 4)])
    with pytest.raises(DecodeError):
        brute_force_best(inst)


def test_relative_gap_examples():
    assert relative_gap(453, 453) == 0.00
    assert relative_gap(710.4, 672) == 5.71
    assert relative_gap(888, 885) == 0.34
    with pytest.raises(ValueError):
        relative_gap(5, 0)


def test_gap_record():
    g = GapRecord.of(710.4, 672, "lower-bound")
    assert g.rg == 5.71
    with pytest.raises(ValueError):
        GapRecord.of(1, 1, "guess")


@given(st.floats(1, 1e5), st.floats(1, 1e5), st.floats(0.01, 100))
def test_relative_gap_scale_invariant(f_alg, f_ref, scale):
    assert relative_gap(f_alg * scale, f_ref * scale) == pytest.approx(relative_gap(f_alg, f_ref),
                                                                       abs=0.011)


def test_lower_bound_single_crane():
    inst = Instance.create(p=[4, 6], bay=[1, 5], crane_pos0=[2], crane_ready=[3], l=5)
    assert lower_bound(inst) == 3 + 10 + 3


def test_lower_bound_table1(inst1):
    assert lower_bound_info(inst1) == (408, True)
    assert lower_bound(inst1) <= 413 <= 666


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_lower_bound_matches_enumeration(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 9))
    inst = random_instance(rng, n, min(int(rng.integers(1, 4)), n))
    if space_size(inst) <= 5000:
        assert lower_bound_info(inst) == (lb_by_enumeration(inst), True)


def test_lower_bound_milp_path_is_exact():
    # a one-node search cap hands every case to the MILP solver
    rng = np.random.default_rng(4)
    for _ in range(30):
        inst = random_instance(rng, 9, 3)
        assert lower_bound_info(inst, node_cap=1) == (lb_by_enumeration(inst), True)


def test_lower_bound_timeout_gives_valid_relaxation():
    rng = np.random.default_rng(5)
    for _ in range(10):
        inst = random_instance(rng, 9, 3)
        value, exact = lower_bound_info(inst, node_cap=1, time_limit=0.0)
        truth = lb_by_enumeration(inst)
        assert value <= truth
        assert not exact or value == truth


def test_lower_bound_benchmark_scale():
    inst = generate_instance(GeneratorConfig.for_set("E", seed=1))
    value, exact = lower_bound_info(inst)
    assert exact and value == 717
    ev = Evaluator(inst)
    assert value <= mgeo_solve(inst, SearchParams(seed=0, max_iters=40, max_stall=10), ev).makespan


@settings(max_examples=100, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_lower_bound_below_every_decoded_schedule(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(1, 12))
    inst = random_instance(rng, n, min(int(rng.integers(1, 4)), n))
    lb = lower_bound(inst)
    for a in (s_load(inst), s_tasks(inst), random_eligible_assignment(rng, inst)):
        assert lb <= decode_best(inst, a).makespan


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_search_never_beats_enumeration(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(2, 9))
    inst = random_instance(rng, n, min(int(rng.integers(1, 4)), n))
    if space_size(inst) > 2000:
        return
    best = brute_force_best(inst)[1].makespan
    assert mgeo_solve(inst, SearchParams(seed=seed, max_iters=30)).makespan >= best
