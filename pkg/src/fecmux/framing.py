"""Serial/parallel bookkeeping for multiplexed terminated codewords.

A frame multiplexes N codewords back to back.  Segment i occupies trellis
sections ``boundaries[i-1]+1 .. boundaries[i]``; its last `memory` sections
carry the zero tail that drives the encoder back to the zero state.

Section indexes are 1-based throughout: section t is the transition between
the states at times t-1 and t.  Array-valued results use position t-1 for
section t.
"""

from __future__ import annotations

from bisect import bisect_left
from dataclasses import dataclass

import numpy as np

__all__ = [
    "FramePlan",
    "segment_index",
    "split",
    "tail_positions",
    "tail_apriori",
    "constraints_to_llrs",
]


@dataclass(frozen=True)
class FramePlan:
    """Segment layout of one multiplexed frame.

    segment_lengths counts trellis sections per segment, tails included.
    Every segment must be strictly longer than the code memory so that it
    contains at least one payload bit.
    """

    segment_lengths: tuple[int, ...]
    memory: int

    def __post_init__(self):
        object.__setattr__(
            self, "segment_lengths", tuple(int(k) for k in self.segment_lengths)
        )
        if self.memory < 1:
            raise ValueError(f"memory must be >= 1, got {self.memory}")
        if len(self.segment_lengths) < 1:
            raise ValueError("a frame plan needs at least one segment")
        for i, k in enumerate(self.segment_lengths):
            if k <= self.memory:
                raise ValueError(
                    f"segment {i + 1} has {k} sections, need more than "
                    f"memory={self.memory} to fit any payload"
                )
        bounds = (0,) + tuple(np.cumsum(self.segment_lengths).tolist())
        object.__setattr__(self, "_bounds", bounds)

    @classmethod
    def from_payloads(cls, payload_lengths, memory: int) -> "FramePlan":
        """Plan whose segments each carry one payload plus the zero tail."""
        lengths = tuple(int(p) + memory for p in payload_lengths)
        for i, p in enumerate(payload_lengths):
            if int(p) < 1:
                raise ValueError(f"payload {i + 1} must hold at least one bit")
        return cls(lengths, memory)

    @property
    def boundaries(self) -> tuple[int, ...]:
        """Cumulative section counts (L_0=0, L_1, ..., L_N)."""
        return self._bounds

    @property
    def num_segments(self) -> int:
        return len(self.segment_lengths)

    @property
    def total_sections(self) -> int:
        return self._bounds[-1]


def segment_index(plan: FramePlan, t: int) -> tuple[int, int, int]:
    """Locate section t: returns (segment number, first, last section).

    All three values are 1-based; the interval is closed.
    """
    if not 1 <= t <= plan.total_sections:
        raise ValueError(
            f"section {t} outside frame of {plan.total_sections} sections"
        )
    bounds = plan.boundaries
    i = bisect_left(bounds, t)  # smallest i with bounds[i] >= t
    return i, bounds[i - 1] + 1, bounds[i]


def split(serial, plan: FramePlan, per_section: int = 1) -> list:
    """Cut a serial sequence at the segment boundaries.

    `per_section` is the number of symbols each trellis section occupies
    (1 for info bits, n_out for coded bits or bit metrics).
    """
    if per_section < 1:
        raise ValueError(f"per_section must be >= 1, got {per_section}")
    expect = plan.total_sections * per_section
    if len(serial) != expect:
        raise ValueError(
            f"serial length {len(serial)} does not match "
            f"{plan.total_sections} sections x {per_section}"
        )
    bounds = plan.boundaries
    return [
        serial[bounds[i] * per_section : bounds[i + 1] * per_section]
        for i in range(plan.num_segments)
    ]


def tail_positions(plan: FramePlan) -> frozenset:
    """Sections whose input bit is a tail zero (1-based indexes)."""
    out = []
    for hi in plan.boundaries[1:]:
        out.extend(range(hi - plan.memory + 1, hi + 1))
    return frozenset(out)


def tail_apriori(plan: FramePlan) -> np.ndarray:
    """Per-section constraint mask: True where the input is forced to zero.

    Entry t-1 corresponds to section t.  Feeding this to the APP decoder
    prunes the competing branches outright, so no saturated priors enter the
    recursions.
    """
    mask = np.zeros(plan.total_sections, dtype=bool)
    for hi in plan.boundaries[1:]:
        mask[hi - plan.memory : hi] = True
    return mask


def constraints_to_llrs(constraints, cap: float) -> np.ndarray:
    """Render a constraint mask as saturated a-priori LLRs (positive = 0).

    Only for export to soft decoders that cannot prune; the decoders in this
    package take the mask directly.
    """
    if cap <= 0 or not np.isfinite(cap):
        raise ValueError(f"cap must be a positive finite LLR, got {cap}")
    mask = np.asarray(constraints, dtype=bool)
    return np.where(mask, float(cap), 0.0)
