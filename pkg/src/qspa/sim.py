"""Seeded Monte Carlo engine for word-error-rate estimates.

Each trial derives its own generator from (master_seed, trial index), so
results are bit-identical for a given master seed no matter how trials
are scheduled, and two decoders evaluated under the same master seed see
identical error samples trial by trial (paired comparison).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .channel import ChannelModel, llr_vector, sample_error
from .imr import ImrConfig, imr_spa_decode
from .oracle import SyndromeTable, ml_d, ml_nd
from .pcwd import spa_pcwd_decode
from .spa import DecodeStatus, TannerGraph, build_tanner, rr_spa_decode, spa_decode
from .stabilizer import Classification, StabilizerCode, classify, pauli_weight, syndrome

DECODER_IDS = (
    "spa",
    "rr-spa",
    "imr-spa",
    "spa-pcwd",
    "spa-lppcwd",
    "ml-nd",
    "ml-d",
    "ml-d-star",
)

_Z95 = 1.959963984540054


@dataclass
class TrialRecord:
    seed: int
    error_weight: int
    status: Classification
    iterations: int
    trials_used: int
    decoder_id: str


@dataclass
class WERStats:
    trials: int
    failures: int
    wer: float
    wilson_interval: tuple[float, float]
    failure_weight_histogram: dict[int, int]
    min_failure_weight: Optional[int]
    mean_failure_weight: Optional[float]


def wilson_interval(failures: int, trials: int, z: float = _Z95) -> tuple[float, float]:
    """Wilson score interval for a binomial rate."""
    if trials <= 0:
        raise ValueError("trials must be positive")
    phat = failures / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


class Decoder:
    """A registered decoder bound to one code and one channel probability."""

    def __init__(
        self,
        code: StabilizerCode,
        decoder_id: str,
        p: float,
        *,
        max_iters: int = 100,
        damping: float = 0.0,
        imr_trials: int = 10,
        imr_range: tuple[float, float] = (0.5, 1.5),
        rr_range: tuple[float, float] = (0.8, 1.0),
        ml_weight_cap: Optional[int] = None,
        pattern_budget: int = 50_000_000,
    ):
        if decoder_id not in DECODER_IDS:
            raise ValueError(f"unknown decoder {decoder_id!r}; known: {DECODER_IDS}")
        self.code = code
        self.decoder_id = decoder_id
        self.p = p
        self.max_iters = max_iters
        self.damping = damping
        self.imr_cfg = ImrConfig(interval=imr_range, max_trials=imr_trials, max_iters=max_iters)
        self.rr_range = rr_range
        self.rr_trials = imr_trials
        self.ml_weight_cap = ml_weight_cap
        self._graph: Optional[TannerGraph] = None
        self._llrs: Optional[np.ndarray] = None
        self._table: Optional[SyndromeTable] = None
        self._pattern_budget = pattern_budget

    @property
    def graph(self) -> TannerGraph:
        if self._graph is None:
            self._graph = build_tanner(self.code.h)
        return self._graph

    @property
    def llrs(self) -> np.ndarray:
        if self._llrs is None:
            self._llrs = llr_vector(ChannelModel(self.p), self.code.n)
        return self._llrs

    @property
    def table(self) -> SyndromeTable:
        if self._table is None:
            self._table = SyndromeTable(self.code, pattern_budget=self._pattern_budget)
        return self._table

    def decode(self, s, rng: Optional[np.random.Generator] = None):
        """Returns (output vector, iterations, trials_used)."""
        did = self.decoder_id
        if did == "spa":
            r = spa_decode(self.graph, self.llrs, s, self.max_iters, self.damping)
            return r.output, r.iterations_used, r.trials_used
        if did == "rr-spa":
            # plain pass first, then reweighted retries; mirrors the
            # initial-message retry protocol with per-invocation factors
            r = spa_decode(self.graph, self.llrs, s, self.max_iters, self.damping)
            trials = 0
            while r.status is DecodeStatus.SYNDROME_MISMATCH and trials < self.rr_trials:
                trials += 1
                r = rr_spa_decode(
                    self.graph, self.llrs, s, self.max_iters, self.rr_range, rng, self.damping
                )
            return r.output, r.iterations_used, trials
        if did == "imr-spa":
            r = imr_spa_decode(self.graph, self.llrs, s, self.imr_cfg, rng, self.damping)
            return r.output, r.iterations_used, r.trials_used
        if did in ("spa-pcwd", "spa-lppcwd"):
            selector = "greedy" if did == "spa-pcwd" else "lp"
            r = spa_pcwd_decode(self.graph, self.llrs, s, self.max_iters, selector, self.damping)
            return r.output, r.iterations_used, r.trials_used
        if did in ("ml-nd", "ml-d-star"):
            out = ml_nd(self.code, s, self.ml_weight_cap, table=self.table)
            if out is None:
                out = np.zeros(2 * self.code.n, dtype=np.uint8)
            return out, 0, 0
        if did == "ml-d":
            return ml_d(self.code, s, self.p), 0, 0
        raise AssertionError(did)

    def handle(self):
        """Adapter for enumerate_failures-style callers: (code, syndrome) -> output."""

        def run(code: StabilizerCode, s) -> np.ndarray:
            assert code is self.code
            rng = np.random.default_rng(12345)
            return self.decode(s, rng)[0]

        return run


def make_decoder(code: StabilizerCode, decoder_id: str, p: float, **params) -> Decoder:
    return Decoder(code, decoder_id, p, **params)


def run_trials_detailed(
    code: StabilizerCode,
    decoder_id: str,
    p: float,
    trials: int,
    master_seed: int,
    **params,
) -> tuple[WERStats, list[TrialRecord]]:
    """Run seeded trials and keep the per-trial records."""
    model = ChannelModel(p)
    dec = make_decoder(code, decoder_id, p, **params)
    records: list[TrialRecord] = []
    for t in range(trials):
        rng = np.random.default_rng([master_seed, t])
        e = sample_error(model, code.n, rng)
        s = syndrome(code, e)
        out, iters, used = dec.decode(s, rng)
        status = classify(code, out, e)
        records.append(
            TrialRecord(
                seed=t,
                error_weight=pauli_weight(e),
                status=status,
                iterations=iters,
                trials_used=used,
                decoder_id=decoder_id,
            )
        )
    return aggregate(records), records


def run_trials(
    code: StabilizerCode,
    decoder_id: str,
    p: float,
    trials: int,
    master_seed: int,
    **params,
) -> WERStats:
    stats, _ = run_trials_detailed(code, decoder_id, p, trials, master_seed, **params)
    return stats


def aggregate(records: list[TrialRecord]) -> WERStats:
    trials = len(records)
    fails = [r for r in records if r.status is not Classification.SAME_COSET_OF_B]
    histogram: dict[int, int] = {}
    for r in fails:
        histogram[r.error_weight] = histogram.get(r.error_weight, 0) + 1
    weights = sorted(histogram)
    return WERStats(
        trials=trials,
        failures=len(fails),
        wer=len(fails) / trials if trials else 0.0,
        wilson_interval=wilson_interval(len(fails), trials) if trials else (0.0, 1.0),
        failure_weight_histogram=histogram,
        min_failure_weight=weights[0] if weights else None,
        mean_failure_weight=(
            sum(r.error_weight for r in fails) / len(fails) if fails else None
        ),
    )


def failure_weight_stats(records: list[TrialRecord]) -> tuple[int, float, dict[int, int]]:
    """(min, mean, histogram) of error weights over failing trials only."""
    fails = [r for r in records if r.status is not Classification.SAME_COSET_OF_B]
    if not fails:
        raise ValueError("no failing trials to summarize")
    histogram: dict[int, int] = {}
    for r in fails:
        histogram[r.error_weight] = histogram.get(r.error_weight, 0) + 1
    weights = [r.error_weight for r in fails]
    return min(weights), sum(weights) / len(weights), histogram
