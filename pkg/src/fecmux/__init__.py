"""FEC toolkit for multiplexed convolutional codewords.

Encodes, punctures, transmits (QPSK/AWGN) and decodes frames that multiplex
several terminated convolutional codewords, either as independent parallel
words or as one serial stream, and certifies that both decoding routes agree
bit for bit and LLR for LLR.
"""

from .bcjr import AppResult, app_decode, decode_parallel, decode_serial
from .channel import (
    ChannelParams,
    awgn,
    block_deinterleave,
    block_interleave,
    llr_demap,
    noise_variance_per_dim,
    qpsk_modulate,
)
from .framing import (
    FramePlan,
    constraints_to_llrs,
    segment_index,
    split,
    tail_apriori,
    tail_positions,
)
from .harness import (
    ConfigError,
    EquivalenceError,
    SimConfig,
    TrialReport,
    llr_max_abs_diff,
    run_ber_sweep,
    run_equivalence,
)
from .rate_matching import PuncturePattern, depuncture, load_patterns, puncture
from .trellis import (
    MOTHER_CODE,
    CodeSpec,
    Trellis,
    append_tail,
    build_trellis,
    encode,
)
from .viterbi import ViterbiComparison, ViterbiResult, vitdec, vitdec_serial_vs_parallel

__version__ = "0.1.0"

__all__ = [
    "AppResult",
    "ChannelParams",
    "CodeSpec",
    "ConfigError",
    "EquivalenceError",
    "FramePlan",
    "MOTHER_CODE",
    "PuncturePattern",
    "SimConfig",
    "Trellis",
    "TrialReport",
    "ViterbiComparison",
    "ViterbiResult",
    "app_decode",
    "append_tail",
    "awgn",
    "block_deinterleave",
    "block_interleave",
    "build_trellis",
    "constraints_to_llrs",
    "decode_parallel",
    "decode_serial",
    "depuncture",
    "encode",
    "llr_demap",
    "llr_max_abs_diff",
    "load_patterns",
    "noise_variance_per_dim",
    "puncture",
    "qpsk_modulate",
    "run_ber_sweep",
    "run_equivalence",
    "segment_index",
    "split",
    "tail_apriori",
    "tail_positions",
    "vitdec",
    "vitdec_serial_vs_parallel",
]
