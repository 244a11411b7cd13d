"""QPSK over AWGN with coherent soft demapping, plus a block interleaver.

Conventions
-----------
* Gray mapping, bit pair (b_I, b_Q) -> ((1-2*b_I) + 1j*(1-2*b_Q)) / sqrt(2),
  so 00 lands on (+1+1j)/sqrt(2) and unit average symbol energy.
* Es/N0 = Eb/N0 * rate * 2 (two coded bits per symbol); per-dimension noise
  variance is N0/2.
* Demapped LLRs are log P(bit=0)/P(bit=1): positive favours 0.
* Noise is drawn from numpy's PCG64 generator seeded per call, so a fixed
  (input, params) pair always reproduces the same realisation.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

__all__ = [
    "ChannelParams",
    "RNG_NAME",
    "noise_variance_per_dim",
    "qpsk_modulate",
    "awgn",
    "llr_demap",
    "block_interleave",
    "block_deinterleave",
]

#: Generator behind awgn(); recorded in simulation output metadata.
RNG_NAME = "pcg64"

_AMP = 1.0 / np.sqrt(2.0)  # per-dimension amplitude of a unit-energy symbol


@dataclass(frozen=True)
class ChannelParams:
    """Operating point of the AWGN channel.

    `rate` is information bits per transmitted coded bit (1.0 when uncoded);
    it converts the quoted Eb/N0 into the Es/N0 actually applied.
    """

    ebno_db: float
    rate: float
    seed: int

    def __post_init__(self):
        if not np.isfinite(self.ebno_db):
            raise ValueError(f"ebno_db must be finite, got {self.ebno_db}")
        if not 0.0 < self.rate <= 1.0:
            raise ValueError(f"rate must be in (0, 1], got {self.rate}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must fit in an unsigned 64-bit integer")


def noise_variance_per_dim(params: ChannelParams) -> float:
    """sigma^2 of each I/Q noise dimension at the given operating point."""
    esn0 = 10.0 ** (params.ebno_db / 10.0) * params.rate * 2.0
    return 1.0 / (2.0 * esn0)


def qpsk_modulate(bits) -> np.ndarray:
    """Map pairs of bits onto unit-energy Gray-labelled QPSK symbols."""
    arr = np.asarray(bits)
    if arr.ndim != 1:
        raise ValueError(f"bit sequence must be 1-D, got shape {arr.shape}")
    if arr.size % 2:
        raise ValueError(
            f"QPSK needs an even number of bits, got {arr.size}; pad upstream"
        )
    if arr.size and arr.max() > 1:
        raise ValueError("bit sequence contains values other than 0/1")
    pairs = arr.reshape(-1, 2).astype(np.float64)
    return _AMP * ((1.0 - 2.0 * pairs[:, 0]) + 1j * (1.0 - 2.0 * pairs[:, 1]))


def awgn(symbols, params: ChannelParams) -> np.ndarray:
    """Add circular white Gaussian noise at the configured Es/N0."""
    sym = np.asarray(symbols, dtype=np.complex128)
    sigma = np.sqrt(noise_variance_per_dim(params))
    rng = np.random.default_rng(params.seed)
    noise = rng.normal(0.0, sigma, size=(sym.size, 2))
    return sym + noise[:, 0] + 1j * noise[:, 1]


def llr_demap(symbols, noise_var_per_dim: float) -> np.ndarray:
    """Per-bit LLRs of received QPSK symbols, I bit first then Q bit.

    With unit-energy symbols the exact LLR of each dimension is
    2 * (1/sqrt(2)) * y / sigma^2; positive means bit 0.
    """
    if noise_var_per_dim <= 0 or not np.isfinite(noise_var_per_dim):
        raise ValueError(
            f"noise variance must be positive and finite, got {noise_var_per_dim}"
        )
    sym = np.asarray(symbols, dtype=np.complex128)
    scale = 2.0 * _AMP / noise_var_per_dim
    out = np.empty(2 * sym.size, dtype=np.float64)
    out[0::2] = scale * sym.real
    out[1::2] = scale * sym.imag
    return out


def block_interleave(seq, rows: int, cols: int) -> np.ndarray:
    """Write row-wise into a rows x cols array, read it out column-wise."""
    arr = np.asarray(seq)
    if arr.size != rows * cols:
        raise ValueError(
            f"interleaver {rows}x{cols} needs {rows * cols} symbols, got {arr.size}"
        )
    return arr.reshape(rows, cols).T.reshape(-1).copy()


def block_deinterleave(seq, rows: int, cols: int) -> np.ndarray:
    """Invert :func:`block_interleave` with the same geometry."""
    arr = np.asarray(seq)
    if arr.size != rows * cols:
        raise ValueError(
            f"interleaver {rows}x{cols} needs {rows * cols} symbols, got {arr.size}"
        )
    return arr.reshape(cols, rows).T.reshape(-1).copy()
