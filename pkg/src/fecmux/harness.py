"""Config-driven simulation harness and CLI.

A run sweeps Eb/N0 points; each (point, trial) pair gets its own RNG derived
from the master seed via ``SeedSequence(seed, spawn_key=(point, trial))``,
so trials are reproducible in isolation and aggregation is independent of
execution order.  Every coded trial re-checks that encoding the whole frame
equals the concatenation of the per-segment codewords before anything is
transmitted.

BER accounting: errors are counted on payload bits only; the known zero
tails are excluded.  The quoted Eb/N0 is converted to Es/N0 through the
aggregate transmitted rate (info sections / transmitted bits), i.e. tail
sections count as information and are not billed as extra Eb.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from dataclasses import dataclass, replace

import numpy as np

from .bcjr import decode_parallel, decode_serial
from .channel import (
    RNG_NAME,
    ChannelParams,
    awgn,
    block_deinterleave,
    block_interleave,
    llr_demap,
    noise_variance_per_dim,
    qpsk_modulate,
)
from .framing import FramePlan, tail_apriori
from .rate_matching import PuncturePattern, depuncture, load_patterns, puncture
from .trellis import CodeSpec, append_tail, build_trellis, encode
from .viterbi import vitdec_serial_vs_parallel

__all__ = [
    "ConfigError",
    "EquivalenceError",
    "SimConfig",
    "TrialReport",
    "llr_max_abs_diff",
    "run_equivalence",
    "run_ber_sweep",
    "write_csv",
    "write_plot_csv",
    "main",
    "LLR_TOLERANCE",
    "DECODER_MODES",
    "CSV_HEADER",
]

DECODER_MODES = ("bcjr-exact", "bcjr-maxlog", "viterbi", "uncoded")
COMPARISONS = ("serial", "parallel", "both")
CSV_HEADER = "ebno_db,channel,bits,errors,ber,mode,seed"

#: Serial and parallel APP outputs must agree at least this tightly.
LLR_TOLERANCE = 1e-9

#: Metric magnitude injected for noiseless runs; large enough to saturate
#: every posterior yet small enough to keep all arithmetic finite.
NOISELESS_LLR = 50.0


class ConfigError(ValueError):
    """A simulation config that cannot be run as written."""


class EquivalenceError(RuntimeError):
    """Serial and parallel decodes disagreed beyond tolerance."""

    def __init__(self, report: "TrialReport", reason: str):
        self.report = report
        super().__init__(
            f"serial/parallel equivalence violated at Eb/N0={report.ebno_db:g} dB, "
            f"trial {report.trial_index}: {reason}; replay with "
            f"SeedSequence({report.seed}, spawn_key=({report.point_index}, "
            f"{report.trial_index}))"
        )


def llr_max_abs_diff(a, b) -> float:
    """Largest absolute LLR disagreement; equal infinities agree exactly.

    Decided sections (tails, termination) legitimately carry infinite LLRs
    on both routes, so +inf against +inf counts as a difference of zero
    while any sign or finiteness mismatch counts as infinite.
    """
    x = np.asarray(a, dtype=np.float64).ravel()
    y = np.asarray(b, dtype=np.float64).ravel()
    if x.shape != y.shape:
        raise ValueError(f"shape mismatch {x.shape} vs {y.shape}")
    if x.size == 0:
        return 0.0
    agree = (x == y) & ~np.isfinite(x)
    with np.errstate(invalid="ignore"):
        d = np.abs(x - y)
    d[agree] = 0.0
    d[np.isnan(d)] = np.inf
    return float(d.max())


@dataclass(frozen=True)
class SimConfig:
    """Validated description of one simulation run.

    ``patterns`` holds one optional puncture pattern per subchannel;
    ``interleaver`` is a (rows, cols) block geometry applied to the whole
    transmitted frame; ``early_stop`` is (min_errors, min_bits) per sweep
    point.  ``noiseless`` replaces the channel with saturated metrics of
    magnitude ``NOISELESS_LLR``.
    """

    code: CodeSpec
    payload_lengths: tuple[int, ...]
    ebno_db: tuple[float, ...]
    trials: int
    seed: int = 0
    mode: str = "bcjr-exact"
    comparison: str = "both"
    noiseless: bool = False
    patterns: tuple = None
    interleaver: tuple[int, int] | None = None
    early_stop: tuple[int, int] | None = None

    def __post_init__(self):
        object.__setattr__(
            self, "payload_lengths", tuple(int(p) for p in self.payload_lengths)
        )
        object.__setattr__(self, "ebno_db", tuple(float(e) for e in self.ebno_db))
        if not self.payload_lengths:
            raise ConfigError("payload_lengths must name at least one subchannel")
        for i, p in enumerate(self.payload_lengths):
            if p < 1:
                raise ConfigError(f"payload_lengths[{i}] must be >= 1, got {p}")
        if not self.ebno_db:
            raise ConfigError("ebno_db sweep must not be empty")
        if not all(np.isfinite(self.ebno_db)):
            raise ConfigError("ebno_db values must be finite")
        if self.trials < 1:
            raise ConfigError(f"trials must be >= 1, got {self.trials}")
        if not 0 <= int(self.seed) < 2**64:
            raise ConfigError("seed must fit in an unsigned 64-bit integer")
        if self.mode not in DECODER_MODES:
            raise ConfigError(f"mode {self.mode!r} not one of {DECODER_MODES}")
        if self.comparison not in COMPARISONS:
            raise ConfigError(
                f"comparison {self.comparison!r} not one of {COMPARISONS}"
            )
        pats = self.patterns
        if pats is None:
            pats = (None,) * len(self.payload_lengths)
        pats = tuple(pats)
        if len(pats) != len(self.payload_lengths):
            raise ConfigError(
                f"{len(pats)} puncture patterns for "
                f"{len(self.payload_lengths)} subchannels"
            )
        object.__setattr__(self, "patterns", pats)

        n = self.code.n_out
        m = self.code.memory
        tx_bits = 0
        for i, (p, pat) in enumerate(zip(self.payload_lengths, pats)):
            full = n * (p + m)
            if pat is None:
                tx_bits += full
                continue
            try:
                pat.validate_for(n)
            except ValueError as exc:
                raise ConfigError(f"subchannel {i + 1}: {exc}") from exc
            if full % pat.period:
                raise ConfigError(
                    f"subchannel {i + 1}: codeword of {full} bits is not a "
                    f"whole number of periods of pattern {pat.name!r} "
                    f"(period {pat.period})"
                )
            tx_bits += (full // pat.period) * pat.kept_per_period
        object.__setattr__(self, "_tx_bits", tx_bits)

        if self.interleaver is not None:
            rows, cols = (int(v) for v in self.interleaver)
            object.__setattr__(self, "interleaver", (rows, cols))
            if rows < 1 or cols < 1:
                raise ConfigError("interleaver rows/cols must be >= 1")
            if self.mode == "uncoded":
                raise ConfigError("interleaver is not available in uncoded mode")
            if rows * cols != tx_bits:
                raise ConfigError(
                    f"interleaver {rows}x{cols} does not cover the "
                    f"{tx_bits} transmitted bits per frame"
                )
        if self.early_stop is not None:
            min_errors, min_bits = (int(v) for v in self.early_stop)
            if min_errors < 1 or min_bits < 0:
                raise ConfigError("early_stop wants min_errors >= 1, min_bits >= 0")
            object.__setattr__(self, "early_stop", (min_errors, min_bits))

    @property
    def num_subchannels(self) -> int:
        return len(self.payload_lengths)

    @property
    def transmitted_bits_per_frame(self) -> int:
        return sum(self.payload_lengths) if self.mode == "uncoded" else self._tx_bits

    @property
    def aggregate_rate(self) -> float:
        """Info sections per transmitted bit (1.0 when uncoded)."""
        if self.mode == "uncoded":
            return 1.0
        total = sum(p + self.code.memory for p in self.payload_lengths)
        return total / self._tx_bits

    @classmethod
    def from_dict(cls, data, base_dir: str = ".") -> "SimConfig":
        """Build a config from parsed JSON; unknown keys are rejected."""
        if not isinstance(data, dict):
            raise ConfigError("config root must be a JSON object")
        allowed = {
            "code",
            "payload_lengths",
            "ebno_db",
            "trials",
            "seed",
            "mode",
            "comparison",
            "noiseless",
            "puncture_patterns",
            "pattern_file",
            "subchannel_patterns",
            "interleaver",
            "early_stop",
        }
        unknown = set(data) - allowed
        if unknown:
            raise ConfigError(
                f"unknown config keys {sorted(unknown)}; allowed keys are "
                f"{sorted(allowed)}"
            )
        required = {"code", "payload_lengths", "ebno_db", "trials"}
        missing = required - set(data)
        if missing:
            raise ConfigError(f"missing required config keys {sorted(missing)}")

        code_d = data["code"]
        if not isinstance(code_d, dict) or set(code_d) != {
            "generators_octal",
            "memory",
        }:
            raise ConfigError(
                "code must be an object with exactly the keys "
                "'generators_octal' and 'memory'"
            )
        try:
            code = CodeSpec.from_octal(code_d["generators_octal"], int(code_d["memory"]))
        except ValueError as exc:
            raise ConfigError(f"code: {exc}") from exc

        table: dict[str, PuncturePattern] = {}
        if "pattern_file" in data:
            path = data["pattern_file"]
            if not os.path.isabs(path):
                path = os.path.join(base_dir, path)
            try:
                table.update(load_patterns(path))
            except OSError as exc:
                raise ConfigError(f"pattern_file: {exc}") from exc
        for name, mask in dict(data.get("puncture_patterns", {})).items():
            if name in table:
                raise ConfigError(f"puncture pattern {name!r} defined twice")
            try:
                table[name] = PuncturePattern.from_string(str(mask), name)
            except ValueError as exc:
                raise ConfigError(f"puncture_patterns[{name!r}]: {exc}") from exc

        patterns = None
        if "subchannel_patterns" in data:
            sel = data["subchannel_patterns"]
            if not isinstance(sel, list):
                raise ConfigError("subchannel_patterns must be a list")
            resolved = []
            for i, name in enumerate(sel):
                if name is None:
                    resolved.append(None)
                    continue
                if name not in table:
                    raise ConfigError(
                        f"subchannel_patterns[{i}]: unknown pattern {name!r}; "
                        f"known patterns: {sorted(table)}"
                    )
                resolved.append(table[name])
            patterns = tuple(resolved)

        interleaver = None
        if "interleaver" in data:
            il = data["interleaver"]
            if not isinstance(il, dict) or set(il) != {"rows", "cols"}:
                raise ConfigError(
                    "interleaver must be an object with exactly 'rows' and 'cols'"
                )
            interleaver = (int(il["rows"]), int(il["cols"]))

        early_stop = None
        if "early_stop" in data:
            es = data["early_stop"]
            if not isinstance(es, dict) or not set(es) <= {"min_errors", "min_bits"}:
                raise ConfigError(
                    "early_stop accepts only 'min_errors' and 'min_bits'"
                )
            early_stop = (int(es.get("min_errors", 100)), int(es.get("min_bits", 0)))

        try:
            return cls(
                code=code,
                payload_lengths=tuple(int(p) for p in data["payload_lengths"]),
                ebno_db=tuple(float(e) for e in data["ebno_db"]),
                trials=int(data["trials"]),
                seed=int(data.get("seed", 0)),
                mode=str(data.get("mode", "bcjr-exact")),
                comparison=str(data.get("comparison", "both")),
                noiseless=bool(data.get("noiseless", False)),
                patterns=patterns,
                interleaver=interleaver,
                early_stop=early_stop,
            )
        except (TypeError, ValueError) as exc:
            if isinstance(exc, ConfigError):
                raise
            raise ConfigError(str(exc)) from exc

    @classmethod
    def from_json(cls, path) -> "SimConfig":
        with open(path, "r", encoding="utf-8") as fh:
            try:
                data = json.load(fh)
            except json.JSONDecodeError as exc:
                raise ConfigError(f"{path}: {exc}") from exc
        return cls.from_dict(data, base_dir=os.path.dirname(os.path.abspath(path)))


@dataclass(frozen=True)
class TrialReport:
    """Outcome of one simulated frame.

    ``(seed, point_index, trial_index)`` replays the trial exactly.  Fields
    belonging to a decode route that did not run are None; the LLR deltas
    and mismatch counters are populated only when both routes ran (APP
    modes), and ``paths_equal`` only in Viterbi mode.
    """

    ebno_db: float
    point_index: int
    trial_index: int
    seed: int
    mode: str
    payload_bits: int
    subchannel_errors: tuple[int, ...] | None
    subchannel_ber: tuple[float, ...] | None
    aggregate_errors: int | None
    aggregate_ber: float | None
    serial_errors: int | None
    serial_ber: float | None
    max_info_llr_delta: float | None
    max_coded_llr_delta: float | None
    hard_mismatches: int | None
    coded_mismatches: int | None
    paths_equal: bool | None
    tie_detected: bool
    runtime_s: float


def _through_channel(tx_bits: np.ndarray, ebno_db: float, rate: float, rng, noiseless: bool):
    """Bits in, per-bit LLR metrics out; pads internally for QPSK."""
    if noiseless:
        return NOISELESS_LLR * (1.0 - 2.0 * tx_bits.astype(np.float64))
    padded = bool(tx_bits.size % 2)
    if padded:
        tx_bits = np.concatenate([tx_bits, np.zeros(1, dtype=np.uint8)])
    params = ChannelParams(ebno_db, rate, seed=int(rng.integers(0, 2**63)))
    received = awgn(qpsk_modulate(tx_bits), params)
    stream = llr_demap(received, noise_variance_per_dim(params))
    return stream[:-1] if padded else stream


def _run_trial(
    trellis, plan: FramePlan, config: SimConfig, point_index: int, trial_index: int
) -> TrialReport:
    started = time.perf_counter()
    ebno = config.ebno_db[point_index]
    rng = np.random.default_rng(
        np.random.SeedSequence(config.seed, spawn_key=(point_index, trial_index))
    )
    payloads = [
        rng.integers(0, 2, size=p, dtype=np.uint8) for p in config.payload_lengths
    ]
    total_payload = int(sum(config.payload_lengths))

    def _report(**kw):
        base = dict(
            ebno_db=ebno,
            point_index=point_index,
            trial_index=trial_index,
            seed=config.seed,
            mode=config.mode,
            payload_bits=total_payload,
            subchannel_errors=None,
            subchannel_ber=None,
            aggregate_errors=None,
            aggregate_ber=None,
            serial_errors=None,
            serial_ber=None,
            max_info_llr_delta=None,
            max_coded_llr_delta=None,
            hard_mismatches=None,
            coded_mismatches=None,
            paths_equal=None,
            tie_detected=False,
        )
        base.update(kw)
        base["runtime_s"] = time.perf_counter() - started
        return TrialReport(**base)

    if config.mode == "uncoded":
        bits = np.concatenate(payloads)
        stream = _through_channel(bits, ebno, 1.0, rng, config.noiseless)
        hard = (stream < 0).astype(np.uint8)
        errs, off = [], 0
        for p in payloads:
            errs.append(int(np.count_nonzero(hard[off : off + p.size] != p)))
            off += p.size
        agg = int(sum(errs))
        return _report(
            subchannel_errors=tuple(errs),
            subchannel_ber=tuple(e / p for e, p in zip(errs, config.payload_lengths)),
            aggregate_errors=agg,
            aggregate_ber=agg / total_payload,
            serial_errors=agg,
            serial_ber=agg / total_payload,
        )

    m = trellis.memory
    n = trellis.n_out
    infos = [append_tail(p, m) for p in payloads]
    serial_info = np.concatenate(infos)
    words = [encode(config.code, w) for w in infos]
    if not np.array_equal(encode(config.code, serial_info), np.concatenate(words)):
        # cheap per-trial audit of the multiplexing identity the run rests on
        raise RuntimeError("encoding does not commute with concatenation")

    tx_parts = [
        puncture(w, pat) if pat is not None else w
        for w, pat in zip(words, config.patterns)
    ]
    part_lens = [p.size for p in tx_parts]
    tx = np.concatenate(tx_parts)
    rate = plan.total_sections / tx.size

    if config.interleaver is not None:
        tx = block_interleave(tx, *config.interleaver)
    stream = _through_channel(tx, ebno, rate, rng, config.noiseless)
    if config.interleaver is not None:
        stream = block_deinterleave(stream, *config.interleaver)

    seg_metrics, off = [], 0
    for ln, pat, k in zip(part_lens, config.patterns, plan.segment_lengths):
        part = stream[off : off + ln]
        off += ln
        seg_metrics.append(depuncture(part, pat, n * k) if pat is not None else part)
    metrics = np.concatenate(seg_metrics)

    bounds = plan.boundaries
    payload_mask = ~tail_apriori(plan)

    def _per_sub_errors(hard):
        errs = []
        for i, p in enumerate(config.payload_lengths):
            lo, hi = bounds[i], bounds[i + 1] - m
            errs.append(int(np.count_nonzero(hard[lo:hi] != serial_info[lo:hi])))
        return errs

    want_serial = config.comparison in ("serial", "both")
    want_parallel = config.comparison in ("parallel", "both")
    fields = {}

    if config.mode in ("bcjr-exact", "bcjr-maxlog"):
        max_log = config.mode == "bcjr-maxlog"
        ser = decode_serial(trellis, metrics, plan, max_log=max_log) if want_serial else None
        par = (
            decode_parallel(trellis, metrics, plan, max_log=max_log)
            if want_parallel
            else None
        )
        if ser is not None and par is not None:
            fields["max_info_llr_delta"] = llr_max_abs_diff(ser.info_llr, par.info_llr)
            fields["max_coded_llr_delta"] = llr_max_abs_diff(
                ser.coded_llr, par.coded_llr
            )
            fields["hard_mismatches"] = int(
                np.count_nonzero(ser.hard_info != par.hard_info)
            )
            fields["coded_mismatches"] = int(
                np.count_nonzero(ser.hard_coded != par.hard_coded)
            )
        serial_hard = ser.hard_info if ser is not None else None
        parallel_hard = par.hard_info if par is not None else None
    else:  # viterbi
        comp = vitdec_serial_vs_parallel(trellis, metrics, plan)
        glued = np.concatenate([s.decoded for s in comp.segments])
        fields["tie_detected"] = comp.tie_detected
        serial_hard = comp.serial.decoded if want_serial else None
        parallel_hard = glued if want_parallel else None
        if want_serial and want_parallel:
            fields["hard_mismatches"] = int(
                np.count_nonzero(comp.serial.decoded != glued)
            )
            fields["paths_equal"] = comp.paths_equal

    if parallel_hard is not None:
        errs = _per_sub_errors(parallel_hard)
        fields["subchannel_errors"] = tuple(errs)
        fields["subchannel_ber"] = tuple(
            e / p for e, p in zip(errs, config.payload_lengths)
        )
        fields["aggregate_errors"] = int(sum(errs))
        fields["aggregate_ber"] = sum(errs) / total_payload
    if serial_hard is not None:
        serr = int(
            np.count_nonzero(
                serial_hard[payload_mask] != serial_info[payload_mask]
            )
        )
        fields["serial_errors"] = serr
        fields["serial_ber"] = serr / total_payload
    return _report(**fields)


def _check_gate(report: TrialReport, mode: str) -> None:
    if mode == "bcjr-exact":
        if report.hard_mismatches:
            raise EquivalenceError(
                report, f"{report.hard_mismatches} info hard-decision mismatches"
            )
        if report.coded_mismatches:
            raise EquivalenceError(
                report, f"{report.coded_mismatches} coded hard-decision mismatches"
            )
        if report.max_info_llr_delta > LLR_TOLERANCE:
            raise EquivalenceError(
                report,
                f"info LLR delta {report.max_info_llr_delta:.3e} exceeds "
                f"{LLR_TOLERANCE:.1e}",
            )
        if report.max_coded_llr_delta > LLR_TOLERANCE:
            raise EquivalenceError(
                report,
                f"coded LLR delta {report.max_coded_llr_delta:.3e} exceeds "
                f"{LLR_TOLERANCE:.1e}",
            )
    elif mode == "viterbi":
        if report.hard_mismatches and not report.tie_detected:
            raise EquivalenceError(
                report,
                f"{report.hard_mismatches} decoded-bit mismatches without a "
                "metric tie",
            )
    else:
        raise ConfigError(
            "the equivalence gate is defined for bcjr-exact and viterbi modes"
        )


def run_equivalence(config: SimConfig):
    """Yield one TrialReport per (Eb/N0 point, trial), both routes decoded.

    The comparison setting is coerced to 'both'; nothing is gated here, the
    caller inspects the reports (see run_ber_sweep for the gate).
    """
    if config.comparison != "both":
        config = replace(config, comparison="both")
    trellis = build_trellis(config.code)
    plan = FramePlan.from_payloads(config.payload_lengths, config.code.memory)
    for point_index in range(len(config.ebno_db)):
        for trial_index in range(config.trials):
            yield _run_trial(trellis, plan, config, point_index, trial_index)


def run_ber_sweep(config: SimConfig, check_equivalence: bool = False):
    """Run the sweep and return (csv_rows, metadata).

    With check_equivalence=True every trial must pass the serial/parallel
    gate, otherwise EquivalenceError aborts the run carrying the offending
    trial's replay coordinates.
    """
    if check_equivalence:
        if config.mode not in ("bcjr-exact", "viterbi"):
            raise ConfigError(
                "the equivalence gate is defined for bcjr-exact and viterbi modes"
            )
        if config.comparison != "both":
            config = replace(config, comparison="both")
    trellis = build_trellis(config.code)
    plan = FramePlan.from_payloads(config.payload_lengths, config.code.memory)
    nsub = config.num_subchannels
    want_serial = config.comparison in ("serial", "both") or config.mode == "uncoded"
    want_parallel = config.comparison in ("parallel", "both") or config.mode == "uncoded"

    rows = []
    trials_run = {}
    for point_index, ebno in enumerate(config.ebno_db):
        sub_errors = [0] * nsub
        agg_errors = 0
        serial_errors = 0
        bits = 0
        done = 0
        for trial_index in range(config.trials):
            report = _run_trial(trellis, plan, config, point_index, trial_index)
            if check_equivalence:
                _check_gate(report, config.mode)
            bits += report.payload_bits
            done += 1
            if want_parallel:
                for i, e in enumerate(report.subchannel_errors):
                    sub_errors[i] += e
                agg_errors += report.aggregate_errors
            if want_serial:
                serial_errors += report.serial_errors
            if config.early_stop is not None:
                min_errors, min_bits = config.early_stop
                watched = agg_errors if want_parallel else serial_errors
                if watched >= min_errors and bits >= min_bits:
                    break
        trials_run[f"{ebno:g}"] = done

        def _row(channel, errors, channel_bits):
            return {
                "ebno_db": ebno,
                "channel": channel,
                "bits": channel_bits,
                "errors": errors,
                "ber": errors / channel_bits,
                "mode": config.mode,
                "seed": config.seed,
            }

        if want_parallel:
            for i in range(nsub):
                rows.append(
                    _row(str(i + 1), sub_errors[i], config.payload_lengths[i] * done)
                )
            rows.append(_row("aggregate", agg_errors, bits))
        if want_serial:
            rows.append(_row("serial", serial_errors, bits))

    metadata = {
        "rng": RNG_NAME,
        "seed": config.seed,
        "mode": config.mode,
        "comparison": config.comparison,
        "noiseless": config.noiseless,
        "generators_octal": [oct(g)[2:] for g in config.code.generators],
        "memory": config.code.memory,
        "payload_lengths": list(config.payload_lengths),
        "tail_bits_per_subchannel": config.code.memory,
        "transmitted_bits_per_frame": config.transmitted_bits_per_frame,
        "aggregate_rate": config.aggregate_rate,
        "ebno_convention": (
            "Es/N0 = Eb/N0 * 2 * aggregate_rate; every trellis section counts "
            "as one information bit, so tail overhead is not billed as extra Eb"
        ),
        "ber_convention": "errors counted on payload bits only (tails excluded)",
        "trials_requested": config.trials,
        "trials_run": trials_run,
        "early_stop": (
            None
            if config.early_stop is None
            else {"min_errors": config.early_stop[0], "min_bits": config.early_stop[1]}
        ),
        "equivalence_gate": bool(check_equivalence),
        "llr_tolerance": LLR_TOLERANCE if check_equivalence else None,
    }
    return rows, metadata


def write_csv(rows, path) -> None:
    """Emit the fixed-schema results table; byte-stable for fixed inputs."""
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(CSV_HEADER + "\n")
        for r in rows:
            fh.write(
                f"{r['ebno_db']:g},{r['channel']},{r['bits']},{r['errors']},"
                f"{r['ber']:.10e},{r['mode']},{r['seed']}\n"
            )


def write_plot_csv(rows, path) -> None:
    """Pivot the rows into one BER column per curve for external plotting."""
    points = []
    for r in rows:
        if r["ebno_db"] not in points:
            points.append(r["ebno_db"])
    channels = []
    for r in rows:
        if r["channel"] not in channels:
            channels.append(r["channel"])
    table = {(r["ebno_db"], r["channel"]): r["ber"] for r in rows}
    labels = [c if c in ("aggregate", "serial") else f"ch{c}" for c in channels]
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("ebno_db," + ",".join(labels) + "\n")
        for e in points:
            cells = [f"{table[(e, c)]:.10e}" for c in channels]
            fh.write(f"{e:g}," + ",".join(cells) + "\n")


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(
        prog="simulate",
        description=(
            "BER sweeps and serial/parallel decoder agreement checks for "
            "multiplexed convolutional codewords over QPSK/AWGN."
        ),
    )
    parser.add_argument("--config", required=True, help="JSON run description")
    parser.add_argument("--out", required=True, help="output CSV path")
    parser.add_argument(
        "--mode", choices=DECODER_MODES, help="override the config decoder mode"
    )
    parser.add_argument("--seed", type=int, help="override the config master seed")
    parser.add_argument(
        "--check-equivalence",
        action="store_true",
        help="fail (exit 2) unless serial and parallel decodes agree per trial",
    )
    parser.add_argument(
        "--emit-plot-data",
        action="store_true",
        help="also write <out>.curves.csv with one BER column per curve",
    )
    args = parser.parse_args(argv)

    try:
        config = SimConfig.from_json(args.config)
        overrides = {}
        if args.mode is not None:
            overrides["mode"] = args.mode
        if args.seed is not None:
            overrides["seed"] = args.seed
        if args.check_equivalence:
            overrides["comparison"] = "both"
        if overrides:
            config = replace(config, **overrides)
        rows, metadata = run_ber_sweep(config, check_equivalence=args.check_equivalence)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 1
    except EquivalenceError as exc:
        print(f"equivalence gate: {exc}", file=sys.stderr)
        return 2

    write_csv(rows, args.out)
    with open(args.out + ".meta.json", "w", encoding="utf-8") as fh:
        json.dump(metadata, fh, indent=2, sort_keys=True)
        fh.write("\n")
    if args.emit_plot_data:
        write_plot_csv(rows, args.out + ".curves.csv")

    for ebno in config.ebno_db:
        here = [r for r in rows if r["ebno_db"] == ebno]
        brief = ", ".join(
            f"{r['channel']}={r['ber']:.3e}"
            for r in here
            if r["channel"] in ("aggregate", "serial")
        )
        print(f"Eb/N0={ebno:g} dB: {brief or 'done'}")
    print(f"wrote {len(rows)} rows to {args.out}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
