"""Exact log-domain APP decoding of terminated convolutional codewords.

The decoder runs the classic forward/backward recursions over the code
trellis, entirely in the log domain, and emits a-posteriori LLRs and hard
decisions for both the information bits and the coded bits.

Conventions
-----------
* Every LLR is log P(bit=0)/P(bit=1); positive favours 0.
* Known-zero input sections are handled by pruning the competing branches
  from the recursions, never by saturated priors, so no NaN can arise.
* A decided section (tail or termination) legitimately yields an infinite
  LLR together with a posterior of exactly 1.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .framing import FramePlan, split, tail_apriori
from .trellis import Trellis

__all__ = ["AppResult", "app_decode", "decode_parallel", "decode_serial"]


def _lse(a, axis=None):
    """log-sum-exp that tolerates -inf entries (empty mass stays -inf)."""
    m = np.max(a, axis=axis, keepdims=True)
    anchor = np.where(np.isfinite(m), m, 0.0)
    with np.errstate(divide="ignore"):
        out = anchor + np.log(np.sum(np.exp(a - anchor), axis=axis, keepdims=True))
    if axis is None:
        return out.item()
    return np.squeeze(out, axis=axis)


def _max_reduce(a, axis=None):
    out = np.max(a, axis=axis)
    return float(out) if axis is None else out


def _as_metrics(metrics, n_out: int) -> np.ndarray:
    arr = np.asarray(metrics, dtype=np.float64)
    if arr.ndim != 1:
        raise ValueError(f"bit metrics must be 1-D, got shape {arr.shape}")
    if arr.size % n_out:
        raise ValueError(
            f"metric length {arr.size} is not a whole number of "
            f"{n_out}-bit sections"
        )
    if not np.all(np.isfinite(arr)):
        raise ValueError("bit metrics must be finite; encode erasures as exactly 0")
    return arr


def _llr_from(l0, l1):
    # one empty side gives +-inf, which is fine; both empty cannot happen
    # for a consistent trellis but is trapped rather than propagated as NaN
    with np.errstate(invalid="ignore"):
        out = l0 - l1
    if np.isnan(out).any():
        raise ValueError("posterior mass vanished on both branches; inputs inconsistent")
    return out


def _post0(llr):
    """Posterior of bit 0 from its LLR, stable for any magnitude."""
    out = np.empty_like(llr)
    pos = llr >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-llr[pos]))
    e = np.exp(llr[~pos])
    out[~pos] = e / (1.0 + e)
    return out


@dataclass(frozen=True)
class AppResult:
    """Per-section posteriors of one decode.

    `info_*` has one entry per trellis section, `coded_*` one row per
    section with n_out columns.  Posteriors are of the bit value 0; hard
    decisions are 0 exactly when that posterior is >= 1/2 (equivalently
    LLR >= 0, so a dead tie decides 0).
    """

    info_llr: np.ndarray
    info_post: np.ndarray
    coded_llr: np.ndarray
    coded_post: np.ndarray
    hard_info: np.ndarray
    hard_coded: np.ndarray

    @property
    def num_sections(self) -> int:
        return self.info_llr.size


def app_decode(
    trellis: Trellis,
    metrics,
    constraints=None,
    *,
    start_state_known: bool = True,
    end_state_known: bool = True,
    max_log: bool = False,
) -> AppResult:
    """Forward/backward APP decode of one terminated (or open) codeword.

    Parameters
    ----------
    metrics
        One LLR per coded bit, section-major: section t occupies entries
        [(t-1)*n_out, t*n_out).
    constraints
        Optional boolean mask, one entry per section; True means the input
        bit of that section is known to be zero, and the input-1 branches
        of that section are pruned from every recursion and posterior sum.
    start_state_known, end_state_known
        Pin the boundary state distributions on the zero state.  When a
        boundary is free the corresponding recursion starts uniform.
    max_log
        Replace log-sum-exp with plain max in the recursions and posterior
        reductions.  Cheaper, but only the exact mode carries the
        serial/parallel agreement guarantee.
    """
    S = trellis.num_states
    half = S >> 1
    n = trellis.n_out
    arr = _as_metrics(metrics, n)
    num = arr.size // n
    sec = arr.reshape(num, n)

    if constraints is None:
        forced = np.zeros(num, dtype=bool)
    else:
        forced = np.asarray(constraints, dtype=bool)
        if forced.shape != (num,):
            raise ValueError(
                f"constraint mask has shape {forced.shape}, expected ({num},)"
            )

    # Branch weight of each (state, input) at each section: correlation of
    # the emitted bits' signs with the section metrics, halved.
    gamma = 0.5 * np.tensordot(sec, trellis.output_signs, axes=([1], [2]))

    reduce_ = _max_reduce if max_log else _lse
    pair = np.maximum if max_log else np.logaddexp

    pred0 = trellis.pred[:, 0]
    pred1 = trellis.pred[:, 1]
    pin = trellis.pred_input
    ns0 = trellis.next_state[:, 0]
    ns1 = trellis.next_state[:, 1]

    # branch weights re-indexed by successor state, once for all sections
    into0 = gamma[:, pred0, pin]
    into1 = gamma[:, pred1, pin]

    alpha = np.empty((num + 1, S))
    if start_state_known:
        alpha[0] = -np.inf
        alpha[0, 0] = 0.0
    else:
        alpha[0] = -np.log(S)
    for t in range(num):
        a = pair(alpha[t][pred0] + into0[t], alpha[t][pred1] + into1[t])
        if forced[t]:
            a[half:] = -np.inf
        z = reduce_(a)
        if not np.isfinite(z):
            raise ValueError(
                f"no admissible path through section {t + 1}; "
                "constraints contradict the boundary conditions"
            )
        alpha[t + 1] = a - z

    beta = np.empty((num + 1, S))
    if end_state_known:
        beta[num] = -np.inf
        beta[num, 0] = 0.0
    else:
        beta[num] = 0.0
    for t in range(num - 1, -1, -1):
        b = gamma[t, :, 0] + beta[t + 1][ns0]
        if not forced[t]:
            b = pair(b, gamma[t, :, 1] + beta[t + 1][ns1])
        z = reduce_(b)
        if not np.isfinite(z):
            raise ValueError(
                f"no admissible path through section {t + 1}; "
                "constraints contradict the boundary conditions"
            )
        beta[t] = b - z

    # Joint log-mass of every transition, all sections at once.
    joint = alpha[:-1, :, None] + gamma + beta[1:][:, trellis.next_state]
    if forced.any():
        joint[forced, :, 1] = -np.inf

    lse0 = reduce_(joint[:, :, 0], axis=1)
    lse1 = reduce_(joint[:, :, 1], axis=1)
    info_llr = _llr_from(lse0, lse1)

    coded_llr = np.empty((num, n))
    for j in range(n):
        zero_mask = trellis.outputs[:, :, j] == 0
        c0 = reduce_(np.where(zero_mask[None, :, :], joint, -np.inf), axis=(1, 2))
        c1 = reduce_(np.where(zero_mask[None, :, :], -np.inf, joint), axis=(1, 2))
        coded_llr[:, j] = _llr_from(c0, c1)

    info_post = _post0(info_llr)
    coded_post = _post0(coded_llr)
    return AppResult(
        info_llr=info_llr,
        info_post=info_post,
        coded_llr=coded_llr,
        coded_post=coded_post,
        hard_info=(info_llr < 0).astype(np.uint8),
        hard_coded=(coded_llr < 0).astype(np.uint8),
    )


def _check_plan(trellis: Trellis, plan: FramePlan):
    if plan.memory != trellis.memory:
        raise ValueError(
            f"plan memory {plan.memory} does not match trellis memory "
            f"{trellis.memory}"
        )


def decode_parallel(
    trellis: Trellis, metrics, plan: FramePlan, *, max_log: bool = False
) -> AppResult:
    """Decode every segment on its own, boundary states known to be zero.

    The per-segment results are concatenated in order, so the output is
    indexed exactly like a whole-frame decode.
    """
    _check_plan(trellis, plan)
    arr = _as_metrics(metrics, trellis.n_out)
    parts = split(arr, plan, per_section=trellis.n_out)
    results = [
        app_decode(
            trellis,
            part,
            None,
            start_state_known=True,
            end_state_known=True,
            max_log=max_log,
        )
        for part in parts
    ]
    return AppResult(
        info_llr=np.concatenate([r.info_llr for r in results]),
        info_post=np.concatenate([r.info_post for r in results]),
        coded_llr=np.concatenate([r.coded_llr for r in results]),
        coded_post=np.concatenate([r.coded_post for r in results]),
        hard_info=np.concatenate([r.hard_info for r in results]),
        hard_coded=np.concatenate([r.hard_coded for r in results]),
    )


def decode_serial(
    trellis: Trellis, metrics, plan: FramePlan, *, max_log: bool = False
) -> AppResult:
    """Decode the whole frame in one pass.

    The tail sections of every segment are pinned to zero input, which is
    exactly the receiver's knowledge of the multiplex layout; the frame
    boundary states are known to be zero as well.
    """
    _check_plan(trellis, plan)
    arr = _as_metrics(metrics, trellis.n_out)
    if arr.size != plan.total_sections * trellis.n_out:
        raise ValueError(
            f"metric length {arr.size} does not match the plan's "
            f"{plan.total_sections} sections x {trellis.n_out}"
        )
    return app_decode(
        trellis,
        arr,
        tail_apriori(plan),
        start_state_known=True,
        end_state_known=True,
        max_log=max_log,
    )
