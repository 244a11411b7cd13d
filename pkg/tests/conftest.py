import numpy as np
import pytest

from fecmux import CodeSpec, MOTHER_CODE, build_trellis

TINY = CodeSpec.from_octal(("7", "5"), memory=2)


@pytest.fixture(scope="session")
def tiny_trellis():
    return build_trellis(TINY)


@pytest.fixture(scope="session")
def mother_trellis():
    return build_trellis(MOTHER_CODE)


def noisy_metrics(coded_bits, ebno_db, rate, rng):
    """Transmit coded bits over QPSK/AWGN and demap, padding as needed."""
    from fecmux import (
        ChannelParams,
        awgn,
        llr_demap,
        noise_variance_per_dim,
        qpsk_modulate,
    )

    bits = np.asarray(coded_bits, dtype=np.uint8)
    padded = bool(bits.size % 2)
    if padded:
        bits = np.concatenate([bits, np.zeros(1, dtype=np.uint8)])
    params = ChannelParams(ebno_db, rate, seed=int(rng.integers(2**63)))
    stream = llr_demap(
        awgn(qpsk_modulate(bits), params), noise_variance_per_dim(params)
    )
    return stream[:-1] if padded else stream


def saturated_metrics(coded_bits, magnitude=50.0):
    """Noise-free metrics: +magnitude for a 0 bit, -magnitude for a 1."""
    bits = np.asarray(coded_bits, dtype=np.float64)
    return magnitude * (1.0 - 2.0 * bits)
