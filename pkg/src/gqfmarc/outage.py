"""Outage events, seeded Monte Carlo estimation over SNR grids, and the
finite-SNR diversity-slope fit.

An outage occurs when the target rate combination of any of the six decoding
constraints strictly exceeds the corresponding instantaneous mutual
information.  Estimation counts events over counter-based channel draws, so
aggregate counts are bit-identical for any partitioning of the sample index
range across workers.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace

import numpy as np

from .channel import FadingParams, ChannelRealization, sample_coefficients
from .rates import SchemeConfig, instantaneous_rates, rate_table

__all__ = [
    "EVENTS",
    "OutageFlags",
    "OutageEstimate",
    "outage_indicator",
    "estimate_outage",
    "sweep_outage",
    "fit_diversity_slope",
    "wilson_halfwidth",
]

EVENTS = ("r1", "r1u", "r2", "r2u", "r12", "r12u")

_Z95 = 1.959963984540054  # two-sided 95% normal quantile
_CHUNK = 1 << 18  # samples per vectorized chunk (64 counter blocks)


@dataclass(frozen=True)
class OutageFlags:
    """Per-event outage indicators for one realization."""

    o_r1: bool
    o_r1u: bool
    o_r2: bool
    o_r2u: bool
    o_r12: bool
    o_r12u: bool

    @property
    def o_union(self) -> bool:
        return any(self.as_tuple())

    def as_tuple(self) -> tuple[bool, ...]:
        return (self.o_r1, self.o_r1u, self.o_r2, self.o_r2u, self.o_r12, self.o_r12u)


@dataclass(frozen=True)
class OutageEstimate:
    """Monte Carlo outage counts at one SNR point.

    ``counts`` is ordered as EVENTS; ``wilson_ci_halfwidth`` is the 95%
    Wilson-score half-width for the union probability.
    """

    snr_db: float
    samples: int
    counts: tuple[int, int, int, int, int, int]
    count_union: int
    wilson_ci_halfwidth: float

    def p_hat(self, event: str) -> float:
        return self.counts[EVENTS.index(event)] / self.samples

    @property
    def p_hats(self) -> dict[str, float]:
        return {e: c / self.samples for e, c in zip(EVENTS, self.counts)}

    @property
    def p_union(self) -> float:
        return self.count_union / self.samples


def wilson_halfwidth(count: int, samples: int, z: float = _Z95) -> float:
    """Half-width of the Wilson score interval for a binomial proportion."""
    if samples < 1:
        raise ValueError("samples must be >= 1")
    p = count / samples
    denom = 1.0 + z * z / samples
    return z * math.sqrt(p * (1.0 - p) / samples + z * z / (4.0 * samples * samples)) / denom


def _thresholds(cfg: SchemeConfig) -> np.ndarray:
    r1, r2, ru = cfg.rate_tuple
    return np.array([r1, r1 + ru, r2, r2 + ru, r1 + r2, r1 + r2 + ru])


def outage_indicator(h: ChannelRealization, cfg: SchemeConfig) -> OutageFlags:
    """Test the six outage events for one realization (strict inequalities)."""
    rv = instantaneous_rates(h, cfg)
    thr = _thresholds(cfg)
    flags = thr > rv.as_array()
    return OutageFlags(*(bool(f) for f in flags))


def _count_span(
    cfg: SchemeConfig,
    params: FadingParams,
    seed: int,
    stream_id: int,
    start: int,
    stop: int,
    thresholds: np.ndarray,
) -> tuple[np.ndarray, int]:
    coeffs = sample_coefficients(stream_id, start, stop - start, params, seed)
    table, _ = rate_table(coeffs, cfg)
    hits = thresholds > table
    return hits.sum(axis=0), int(hits.any(axis=1).sum())


def estimate_outage(
    cfg: SchemeConfig,
    params: FadingParams,
    samples: int,
    seed: int,
    *,
    stream_id: int = 0,
    workers: int = 1,
) -> OutageEstimate:
    """Estimate the six event probabilities and their union at one SNR point.

    Deterministic in (cfg, params, samples, seed, stream_id): the worker
    count partitions the fixed sample index range but cannot change any
    draw, so the aggregated counts are always identical.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if workers < 1:
        raise ValueError("workers must be >= 1")
    thresholds = _thresholds(cfg)
    spans = [(a, min(a + _CHUNK, samples)) for a in range(0, samples, _CHUNK)]

    def job(span):
        return _count_span(cfg, params, seed, stream_id, span[0], span[1], thresholds)

    if workers > 1 and len(spans) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(job, spans))
    else:
        results = [job(s) for s in spans]

    counts = np.zeros(len(EVENTS), dtype=np.int64)
    union = 0
    for event_counts, union_count in results:
        counts += event_counts
        union += union_count

    return OutageEstimate(
        snr_db=10.0 * math.log10(cfg.snr),
        samples=samples,
        counts=tuple(int(c) for c in counts),
        count_union=union,
        wilson_ci_halfwidth=wilson_halfwidth(union, samples),
    )


def sweep_outage(
    cfg_template: SchemeConfig,
    params: FadingParams,
    snr_grid_db,
    samples: int,
    seed: int,
    *,
    workers: int = 1,
) -> list[OutageEstimate]:
    """One OutageEstimate per grid point, over a strictly increasing dB grid.

    Each grid point draws from its own stream (stream_id = grid position),
    and in exponent mode the target rates are recomputed from the point's
    SNR.  A single-point grid reproduces ``estimate_outage`` exactly.
    """
    grid = [float(v) for v in snr_grid_db]
    if not grid:
        raise ValueError("snr grid must be nonempty")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("snr grid must be strictly increasing")
    out = []
    for j, snr_db in enumerate(grid):
        cfg = replace(cfg_template, snr=10.0 ** (snr_db / 10.0))
        out.append(
            estimate_outage(cfg, params, samples, seed, stream_id=j, workers=workers)
        )
    return out


def fit_diversity_slope(estimates, *, min_count: int = 50) -> float:
    """Least-squares slope of -log10 p_union against log10 snr.

    Points whose union count is below ``min_count`` are discarded: their
    relative error makes the log-domain regression unstable.  Raises when
    fewer than two usable points remain.
    """
    usable = [e for e in estimates if e.count_union >= min_count]
    if len(usable) < 2:
        raise ValueError("insufficient resolution")
    x = np.array([e.snr_db / 10.0 for e in usable])
    y = np.array([-math.log10(e.p_union) for e in usable])
    slope, _ = np.polyfit(x, y, 1)
    return float(slope)
