"""Independent reference implementations used to check the package.

Everything here is deliberately dumb and direct: a bit-by-bit shift
register encoder, exhaustive enumeration of admissible messages for exact
posteriors, and brute-force maximum-likelihood search.  None of it shares
code or vectorisation tricks with the package under test.
"""

from __future__ import annotations

import itertools
import math

import numpy as np


def ref_encode(generators, memory, bits):
    """Shift-register encoder; returns a plain list of coded bits."""
    taps = [
        [(g >> (memory - k)) & 1 for k in range(memory + 1)] for g in generators
    ]
    reg = [0] * memory
    out = []
    for b in bits:
        window = [int(b)] + reg
        for tp in taps:
            out.append(sum(t * w for t, w in zip(tp, window)) % 2)
        reg = [int(b)] + reg[:-1]
    return out


def tail_respecting_messages(segment_lengths, memory):
    """Every input sequence whose per-segment tails are all zero."""
    payloads = [k - memory for k in segment_lengths]
    total = sum(payloads)
    for combo in itertools.product((0, 1), repeat=total):
        msg = []
        off = 0
        for p in payloads:
            msg.extend(combo[off : off + p])
            msg.extend([0] * memory)
            off += p
        yield msg


def _log_likelihood(codeword, metrics):
    # metric is log P(bit=0)/P(bit=1); a 0 earns +m/2, a 1 earns -m/2
    return sum(
        (m / 2.0 if z == 0 else -m / 2.0) for z, m in zip(codeword, metrics)
    )


def ref_posteriors(generators, memory, segment_lengths, metrics):
    """Exact bit posteriors by enumeration of admissible messages.

    Returns (info_post0, coded_post0) where info_post0[t] is the posterior
    probability that input bit t is 0 and coded_post0[t][j] the posterior
    that coded bit j of section t is 0.
    """
    n = len(generators)
    total = sum(segment_lengths)
    msgs, words, logw = [], [], []
    for msg in tail_respecting_messages(segment_lengths, memory):
        cw = ref_encode(generators, memory, msg)
        msgs.append(msg)
        words.append(cw)
        logw.append(_log_likelihood(cw, metrics))
    logw = np.asarray(logw)
    w = np.exp(logw - logw.max())
    w /= w.sum()
    msgs = np.asarray(msgs)
    words = np.asarray(words)
    info0 = np.array([w[msgs[:, t] == 0].sum() for t in range(total)])
    coded0 = np.array(
        [
            [w[words[:, t * n + j] == 0].sum() for j in range(n)]
            for t in range(total)
        ]
    )
    return info0, coded0


def ref_ml(generators, memory, segment_lengths, metrics):
    """Brute-force ML decode: (best metric, message, tie count).

    The metric of each candidate is the same LLR correlation the Viterbi
    decoder accumulates.  tie_count is the number of admissible messages
    achieving the maximum.
    """
    best = -math.inf
    best_msg = None
    ties = 0
    for msg in tail_respecting_messages(segment_lengths, memory):
        cw = ref_encode(generators, memory, msg)
        pm = _log_likelihood(cw, metrics)
        if pm > best:
            best, best_msg, ties = pm, msg, 1
        elif pm == best:
            ties += 1
    return best, best_msg, ties


def quantize(metrics, step=2.0**-10):
    """Snap metrics to a dyadic grid so float sums are order-independent."""
    arr = np.asarray(metrics, dtype=np.float64)
    return np.round(arr / step) * step
