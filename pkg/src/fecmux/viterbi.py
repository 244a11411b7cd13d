"""Soft-decision Viterbi decoding with known-zero input sections.

The branch metric is the same LLR correlation used by the APP decoder, so
both decoders rank paths identically.  Sections listed as funnel sections
have their input-1 branches pruned outright, which forces every surviving
path into the zero state by the end of each tail.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .bcjr import _as_metrics
from .framing import FramePlan, split
from .trellis import Trellis

__all__ = ["ViterbiResult", "ViterbiComparison", "vitdec", "vitdec_serial_vs_parallel"]


@dataclass(frozen=True)
class ViterbiResult:
    """Outcome of one Viterbi pass.

    `state_path` holds the decoded state at times 0..L (always starting at
    state 0); `decoded` holds the input bit of each section, which is the
    newest bit of the state it leads to.  `path_metric` is the accumulated
    branch metric of the winning path, and `survivors` the full predecessor
    table kept for audit.  `tie_detected` reports whether any survivor
    selection (or the final-state selection) compared two equal finite
    metrics; ties resolve deterministically towards the lower-numbered
    state, but a tied decode is not guaranteed to match an independently
    tie-broken one.
    """

    decoded: np.ndarray
    state_path: np.ndarray
    path_metric: float
    survivors: np.ndarray
    tie_detected: bool


def _funnel_mask(funnel_sections, num: int) -> np.ndarray:
    mask = np.zeros(num, dtype=bool)
    for t in funnel_sections:
        tt = int(t)
        if not 1 <= tt <= num:
            raise ValueError(
                f"funnel section {tt} outside 1..{num}"
            )
        mask[tt - 1] = True
    return mask


def vitdec(
    trellis: Trellis,
    metrics,
    funnel_sections=frozenset(),
    end_state_known: bool = True,
) -> ViterbiResult:
    """Maximum-likelihood path through the trellis under the given metrics.

    funnel_sections are 1-based section indexes whose input bit is known to
    be zero; their input-1 branches never enter the add-compare-select.
    With end_state_known the traceback starts from state 0, otherwise from
    the best final state (lowest index on a tie).
    """
    S = trellis.num_states
    half = S >> 1
    n = trellis.n_out
    arr = _as_metrics(metrics, n)
    num = arr.size // n
    funnel = _funnel_mask(funnel_sections, num)

    bm = 0.5 * np.tensordot(arr.reshape(num, n), trellis.output_signs, axes=([1], [2]))

    pred0 = trellis.pred[:, 0]
    pred1 = trellis.pred[:, 1]
    pin = trellis.pred_input

    into0 = bm[:, pred0, pin]  # branch weights re-indexed by successor state
    into1 = bm[:, pred1, pin]

    pm = np.full(S, -np.inf)
    pm[0] = 0.0
    survivors = np.empty((num, S), dtype=np.int32)
    tie = False
    for t in range(num):
        cand0 = pm[pred0] + into0[t]
        cand1 = pm[pred1] + into1[t]
        take0 = cand0 >= cand1  # ties go to pred0, the lower-numbered state
        pm = np.where(take0, cand0, cand1)
        survivors[t] = np.where(take0, pred0, pred1)
        equal = (cand0 == cand1) & np.isfinite(cand0)
        if funnel[t]:
            pm[half:] = -np.inf
            equal = equal[:half]
        if equal.any():
            tie = True

    if end_state_known:
        end = 0
    else:
        end = int(np.argmax(pm))
        if np.isfinite(pm[end]) and np.count_nonzero(pm == pm[end]) > 1:
            tie = True
    if not np.isfinite(pm[end]):
        raise ValueError(
            "no finite-metric path reaches the requested final state; "
            "the decode is over-constrained"
        )

    path = np.empty(num + 1, dtype=np.int32)
    path[num] = end
    for t in range(num, 0, -1):
        path[t - 1] = survivors[t - 1, path[t]]
    decoded = (path[1:] >= half).astype(np.uint8)
    return ViterbiResult(
        decoded=decoded,
        state_path=path,
        path_metric=float(pm[end]),
        survivors=survivors,
        tie_detected=tie,
    )


@dataclass(frozen=True)
class ViterbiComparison:
    """Serial decode of a frame against its per-segment decodes.

    `paths_equal` compares the serial state path with the per-segment paths
    glued at the shared zero states; `metric_gap` is the absolute difference
    between the serial path metric and the sum of the per-segment metrics.
    When `tie_detected` is set the two routes may legitimately disagree, so
    equality is reported but not to be asserted.
    """

    serial: ViterbiResult
    segments: tuple[ViterbiResult, ...]
    bits_equal: bool
    paths_equal: bool
    metric_gap: float
    tie_detected: bool


def vitdec_serial_vs_parallel(
    trellis: Trellis, metrics, plan: FramePlan
) -> ViterbiComparison:
    """Run both decode routes over one frame and compare them.

    The serial route prunes the input-1 branches on every tail section of
    the frame; the parallel route decodes each segment on its own with the
    same pruning on its local tail.  Both trace back from the zero state.
    """
    if plan.memory != trellis.memory:
        raise ValueError(
            f"plan memory {plan.memory} does not match trellis memory "
            f"{trellis.memory}"
        )
    arr = _as_metrics(metrics, trellis.n_out)
    local_tail = lambda k: range(k - plan.memory + 1, k + 1)  # noqa: E731

    serial_funnel = [
        t
        for hi in plan.boundaries[1:]
        for t in range(hi - plan.memory + 1, hi + 1)
    ]
    serial = vitdec(trellis, arr, serial_funnel, end_state_known=True)

    segments = []
    for part, k in zip(
        split(arr, plan, per_section=trellis.n_out), plan.segment_lengths
    ):
        segments.append(vitdec(trellis, part, local_tail(k), end_state_known=True))

    glued_bits = np.concatenate([s.decoded for s in segments])
    glued_path = np.concatenate(
        [segments[0].state_path] + [s.state_path[1:] for s in segments[1:]]
    )
    metric_sum = sum(s.path_metric for s in segments)
    return ViterbiComparison(
        serial=serial,
        segments=tuple(segments),
        bits_equal=bool(np.array_equal(serial.decoded, glued_bits)),
        paths_equal=bool(np.array_equal(serial.state_path, glued_path)),
        metric_gap=abs(serial.path_metric - metric_sum),
        tie_detected=serial.tie_detected or any(s.tie_detected for s in segments),
    )
