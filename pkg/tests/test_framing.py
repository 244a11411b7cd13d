import numpy as np
import pytest
from hypothesis import given, strategies as st

from fecmux import (
    FramePlan,
    app_decode,
    constraints_to_llrs,
    segment_index,
    split,
    tail_apriori,
    tail_positions,
)

from conftest import TINY, saturated_metrics
from fecmux import build_trellis, encode, append_tail


def test_segment_index_examples():
    plan = FramePlan((5, 7), memory=2)
    assert segment_index(plan, 3) == (1, 1, 5)
    assert segment_index(plan, 6) == (2, 6, 12)
    assert segment_index(plan, 12) == (2, 6, 12)
    for t in (0, 13, -4):
        with pytest.raises(ValueError):
            segment_index(plan, t)


def test_split_example_and_round_trip():
    plan = FramePlan((2, 3), memory=1)
    assert split("abcde", plan) == ["ab", "cde"]
    arr = np.arange(10.0)
    parts = split(arr, plan, per_section=2)
    assert [p.tolist() for p in parts] == [[0, 1, 2, 3], [4, 5, 6, 7, 8, 9]]
    assert np.array_equal(np.concatenate(parts), arr)
    with pytest.raises(ValueError):
        split(np.arange(9.0), plan, per_section=2)
    with pytest.raises(ValueError):
        split(arr, plan, per_section=0)


@given(
    payloads=st.lists(st.integers(min_value=1, max_value=20), min_size=1, max_size=6),
    memory=st.integers(min_value=1, max_value=6),
    per_section=st.sampled_from([1, 2, 4]),
)
def test_split_partitions_exactly(payloads, memory, per_section):
    plan = FramePlan.from_payloads(payloads, memory)
    data = np.arange(plan.total_sections * per_section)
    parts = split(data, plan, per_section=per_section)
    assert len(parts) == plan.num_segments
    assert [len(p) for p in parts] == [k * per_section for k in plan.segment_lengths]
    assert np.array_equal(np.concatenate(parts), data)


def test_split_agrees_with_segment_index():
    plan = FramePlan.from_payloads((3, 9, 5), memory=2)
    data = np.arange(1, plan.total_sections + 1)
    parts = split(data, plan)
    for t in range(1, plan.total_sections + 1):
        i, lo, hi = segment_index(plan, t)
        assert lo <= t <= hi
        assert parts[i - 1][t - lo] == data[t - 1]


def test_tail_positions_examples():
    assert tail_positions(FramePlan((8,), memory=2)) == {7, 8}
    got = tail_positions(FramePlan((8, 9), memory=6))
    assert got == set(range(3, 9)) | set(range(12, 18))
    plan = FramePlan.from_payloads((10, 11, 12), memory=6)
    assert len(tail_positions(plan)) == 3 * 6


def test_tail_apriori_mask():
    mask = tail_apriori(FramePlan((8,), memory=2))
    assert mask.tolist() == [False] * 6 + [True] * 2
    plan = FramePlan.from_payloads((4, 5), memory=3)
    mask = tail_apriori(plan)
    assert mask.sum() == 2 * 3
    assert set(np.flatnonzero(mask) + 1) == tail_positions(plan)


def test_plan_validation():
    with pytest.raises(ValueError):
        FramePlan((6, 2), memory=2)  # second segment has no payload room
    with pytest.raises(ValueError):
        FramePlan((8,), memory=0)
    with pytest.raises(ValueError):
        FramePlan((), memory=2)
    with pytest.raises(ValueError):
        FramePlan.from_payloads((4, 0), memory=2)


def test_from_payloads_adds_tail_room():
    plan = FramePlan.from_payloads((6,), memory=2)
    assert plan.segment_lengths == (8,)
    assert plan.boundaries == (0, 8)


def test_broadcast_scale_plan_is_accepted():
    plan = FramePlan.from_payloads([4802] * 12, memory=6)
    assert plan.total_sections == 12 * 4808
    assert segment_index(plan, 4808) == (1, 1, 4808)
    assert segment_index(plan, 4809) == (2, 4809, 9616)
    assert len(split(np.zeros(plan.total_sections), plan)) == 12


def test_constraints_to_llrs():
    mask = np.array([False, True, False])
    assert constraints_to_llrs(mask, 40.0).tolist() == [0.0, 40.0, 0.0]
    for bad in (0.0, -3.0, np.inf):
        with pytest.raises(ValueError):
            constraints_to_llrs(mask, bad)


def test_constraint_on_noiseless_decode_leaves_decisions_unchanged():
    # tails already decode to zero on clean metrics; pinning them changes
    # nothing about the decisions
    tr = build_trellis(TINY)
    rng = np.random.default_rng(23)
    word = append_tail(rng.integers(0, 2, size=9, dtype=np.uint8), 2)
    metrics = saturated_metrics(encode(TINY, word))
    plan = FramePlan((word.size,), memory=2)
    free = app_decode(tr, metrics)
    pinned = app_decode(tr, metrics, tail_apriori(plan))
    assert np.array_equal(free.hard_info, pinned.hard_info)
    assert np.array_equal(free.hard_info, word)
