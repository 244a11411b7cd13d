"""Convolutional code definitions and trellis construction.

A code is given by its generator tap polynomials (customarily written in
octal) and its memory order.  The derived :class:`Trellis` is the explicit
state machine shared by the encoder, the APP decoder and the Viterbi
decoder.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "CodeSpec",
    "Trellis",
    "MOTHER_CODE",
    "build_trellis",
    "encode",
    "append_tail",
]


@dataclass(frozen=True)
class CodeSpec:
    """Rate 1/n convolutional code given by generator tap masks.

    Each generator is an integer whose binary expansion, read from the most
    significant bit, gives the taps on [newest input, s1, ..., sm] where s1
    is the most recent register bit.  The customary octal notation (0o133,
    0o171, ... for memory 6) follows exactly this convention.
    """

    generators: tuple[int, ...]
    memory: int

    def __post_init__(self):
        object.__setattr__(self, "generators", tuple(int(g) for g in self.generators))
        if self.memory < 1:
            raise ValueError(f"memory must be >= 1, got {self.memory}")
        if len(self.generators) < 1:
            raise ValueError("at least one generator polynomial is required")
        limit = 1 << (self.memory + 1)
        for g in self.generators:
            if not 0 <= g < limit:
                raise ValueError(
                    f"generator {oct(g)} has degree above memory {self.memory}"
                )
        if not any((g >> self.memory) & 1 for g in self.generators):
            raise ValueError(
                "no generator taps the newest input bit; the code is degenerate"
            )

    @classmethod
    def from_octal(cls, generators, memory: int) -> "CodeSpec":
        """Build a spec from octal strings/literals, e.g. ("133", "171")."""
        return cls(tuple(int(str(g), 8) for g in generators), memory)

    @property
    def n_out(self) -> int:
        """Coded bits emitted per information bit."""
        return len(self.generators)


#: Rate-1/4, memory-6 mother code all punctured rates derive from.
MOTHER_CODE = CodeSpec.from_octal(("133", "171", "145", "133"), memory=6)


class Trellis:
    """Tabulated state machine of a :class:`CodeSpec`.

    States pack the register contents as an integer with the most recent
    input bit in the most significant position; the states whose newest bit
    is 0 are therefore exactly ``0 .. num_states // 2 - 1``.

    Attributes
    ----------
    next_state : (num_states, 2) int32
        Successor of each state under input 0 / 1.
    outputs : (num_states, 2, n_out) uint8
        Coded bits emitted on each transition.
    output_signs : (num_states, 2, n_out) float64
        ``+1`` where the emitted bit is 0, ``-1`` where it is 1; used as the
        correlation weights of both decoders.
    pred : (num_states, 2) int32
        The two predecessor states of each state (both reached with the same
        input bit, ``pred_input``).
    newest_bit : (num_states,) uint8
        Input bit a state holds in its newest position.
    """

    def __init__(self, spec: CodeSpec):
        self.spec = spec
        m = spec.memory
        n = spec.n_out
        self.memory = m
        self.n_out = n
        self.num_states = 1 << m
        half = self.num_states >> 1

        states = np.arange(self.num_states, dtype=np.int64)
        self.next_state = np.empty((self.num_states, 2), dtype=np.int32)
        self.outputs = np.empty((self.num_states, 2, n), dtype=np.uint8)
        for u in (0, 1):
            reg = (u << m) | states  # [newest input, s1 ... sm] as one integer
            self.next_state[:, u] = (u << (m - 1)) | (states >> 1)
            for j, g in enumerate(spec.generators):
                self.outputs[:, u, j] = np.bitwise_count(reg & g) & 1
        self.output_signs = 1.0 - 2.0 * self.outputs.astype(np.float64)

        low = states & (half - 1)
        self.pred = np.empty((self.num_states, 2), dtype=np.int32)
        self.pred[:, 0] = 2 * low
        self.pred[:, 1] = 2 * low + 1
        self.pred_input = (states >> (m - 1)).astype(np.uint8)
        self.newest_bit = self.pred_input  # same quantity, kept under both names

    def __repr__(self):
        gens = ",".join(oct(g)[2:] for g in self.spec.generators)
        return f"Trellis([{gens}]_8, memory={self.memory}, states={self.num_states})"


def build_trellis(spec: CodeSpec) -> Trellis:
    """Expand a code spec into its transition tables.

    Deterministic: the same spec always yields identical tables.
    """
    return Trellis(spec)


def _as_bits(bits) -> np.ndarray:
    arr = np.asarray(bits)
    if arr.ndim != 1:
        raise ValueError(f"bit sequence must be 1-D, got shape {arr.shape}")
    arr = arr.astype(np.uint8)
    if arr.size and arr.max() > 1:
        raise ValueError("bit sequence contains values other than 0/1")
    return arr


def encode(spec: CodeSpec, info_bits) -> np.ndarray:
    """Encode from the zero state; n_out coded bits per input bit.

    No tail is appended here; combine with :func:`append_tail` to obtain a
    terminated codeword.
    """
    bits = _as_bits(info_bits)
    num = bits.size
    if num == 0:
        return np.zeros(0, dtype=np.uint8)
    work = bits.astype(np.int64)
    streams = np.empty((num, spec.n_out), dtype=np.uint8)
    for j, g in enumerate(spec.generators):
        taps = np.array(
            [(g >> (spec.memory - k)) & 1 for k in range(spec.memory + 1)],
            dtype=np.int64,
        )
        streams[:, j] = np.convolve(work, taps)[:num] & 1
    return streams.reshape(-1)


def append_tail(bits, memory: int) -> np.ndarray:
    """Append `memory` zero bits so encoding ends back in the zero state."""
    if memory < 1:
        raise ValueError(f"memory must be >= 1, got {memory}")
    arr = _as_bits(bits)
    return np.concatenate([arr, np.zeros(memory, dtype=np.uint8)])
