"""Puncturing and depuncturing over periodic keep masks.

Puncturing drops coded bits at fixed positions of a repeating mask;
depuncturing re-inserts the dropped positions as zero-LLR erasures so the
decoders see full-rate metrics again.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["PuncturePattern", "puncture", "depuncture", "load_patterns"]


@dataclass(frozen=True)
class PuncturePattern:
    """Periodic keep mask; True (or '1') marks a transmitted position."""

    mask: tuple[bool, ...]
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "mask", tuple(bool(b) for b in self.mask))
        if len(self.mask) < 1:
            raise ValueError("puncture mask must not be empty")
        if not any(self.mask):
            raise ValueError(
                f"pattern {self.name!r} keeps nothing; at least one position "
                "per period must survive"
            )

    @classmethod
    def from_string(cls, mask: str, name: str = "") -> "PuncturePattern":
        bad = set(mask) - {"0", "1"}
        if bad or not mask:
            raise ValueError(f"mask string must be nonempty 0/1, got {mask!r}")
        return cls(tuple(c == "1" for c in mask), name)

    @property
    def period(self) -> int:
        return len(self.mask)

    @property
    def kept_per_period(self) -> int:
        return sum(self.mask)

    def validate_for(self, n_out: int) -> None:
        """Check that the period covers whole trellis sections."""
        if self.period % n_out:
            raise ValueError(
                f"pattern {self.name!r} period {self.period} is not a "
                f"multiple of n_out={n_out}"
            )

    def _tiled(self, length: int) -> np.ndarray:
        if length % self.period:
            raise ValueError(
                f"length {length} is not a whole number of periods of "
                f"pattern {self.name!r} (period {self.period})"
            )
        return np.tile(np.asarray(self.mask, dtype=bool), length // self.period)


def puncture(coded, pattern: PuncturePattern) -> np.ndarray:
    """Keep the coded positions marked True in the cyclically tiled mask."""
    arr = np.asarray(coded)
    return arr[pattern._tiled(arr.size)]


def depuncture(metrics, pattern: PuncturePattern, full_len: int) -> np.ndarray:
    """Spread received metrics back over full_len positions.

    Punctured positions come back as LLR exactly 0.0 (a clean erasure: no
    preference for either bit value).
    """
    arr = np.asarray(metrics, dtype=np.float64)
    keep = pattern._tiled(full_len)
    expect = int(keep.sum())
    if arr.size != expect:
        raise ValueError(
            f"got {arr.size} metrics but pattern {pattern.name!r} keeps "
            f"{expect} of {full_len} positions"
        )
    out = np.zeros(full_len, dtype=np.float64)
    out[keep] = arr
    return out


def load_patterns(path) -> dict[str, PuncturePattern]:
    """Read named patterns from a plain-text file.

    Each non-comment line is `name mask`, e.g. ``threequarter 11011010``.
    Lines starting with '#' and blank lines are skipped.
    """
    table: dict[str, PuncturePattern] = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split()
            if len(parts) != 2:
                raise ValueError(
                    f"{path}:{lineno}: expected 'name mask', got {line!r}"
                )
            name, mask = parts
            if name in table:
                raise ValueError(f"{path}:{lineno}: duplicate pattern {name!r}")
            table[name] = PuncturePattern.from_string(mask, name)
    return table
