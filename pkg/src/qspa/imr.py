"""Initial-message-reweighted sum-product decoding.

A plain SPA pass runs first; on syndrome mismatch the prior LLRs are
rescaled by fresh per-variable factors drawn uniformly from the
configured interval and the SPA is rerun, up to a trial cap. Factors are
non-negative, so retries rescale confidence without flipping any prior.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .spa import DecodeResult, DecodeStatus, TannerGraph, spa_decode


@dataclass(frozen=True)
class ImrConfig:
    interval: tuple[float, float] = (0.5, 1.5)
    max_trials: int = 10
    max_iters: int = 100

    def __post_init__(self):
        a, b = self.interval
        if not (0.0 <= a <= b):
            raise ValueError(f"need 0 <= a <= b, got interval [{a}, {b}]")
        if self.max_trials < 1:
            raise ValueError("max_trials must be >= 1")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


def imr_spa_decode(
    graph: TannerGraph,
    llrs,
    s,
    cfg: ImrConfig,
    rng: np.random.Generator,
    damping: float = 0.0,
) -> DecodeResult:
    """SPA with reweighted-prior retries; returns on the first syndrome match.

    trials_used counts the reweighted reruns (0 when the plain pass
    already matches); after exhausting the cap the last mismatching
    result is returned.
    """
    llrs = np.asarray(llrs, dtype=np.float64)
    result = spa_decode(graph, llrs, s, cfg.max_iters, damping)
    if result.status is DecodeStatus.SYNDROME_MATCHED:
        return result
    a, b = cfg.interval
    for trial in range(1, cfg.max_trials + 1):
        alpha = rng.uniform(a, b, size=graph.variables)
        result = spa_decode(graph, alpha * llrs, s, cfg.max_iters, damping)
        result.trials_used = trial
        if result.status is DecodeStatus.SYNDROME_MATCHED:
            return result
    return result
