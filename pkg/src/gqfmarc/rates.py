"""Quantizer-noise selection and the six per-realization mutual informations
of the two-slot quantize-and-forward relaying scheme.

All rates are in bits per channel use (base-2 logarithms).  The relay listens
during slot 1 (a fraction ``beta`` of the block) and transmits during slot 2;
every transmitter uses power ``snr`` and all receiver noises have unit
variance, so ``snr`` is also the per-link transmit SNR.  The relay quantizes
its slot-1 observation with additive noise of variance ``sigma_q2``, chosen
from the realized source-relay gains so that the index rate equals the fixed
``rate_u`` exactly.

Six constraints govern joint decoding at the destination, indexed
(1, 1u, 2, 2u, 12, 12u): single-source, single-source plus quantization
index, sum rate, and sum rate plus index.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .channel import ChannelRealization

__all__ = [
    "RATE_KEYS",
    "SchemeConfig",
    "RateVector",
    "select_quantization_noise",
    "instantaneous_rates",
    "rate_table",
]

RATE_KEYS = ("i_r1", "i_r1u", "i_r2", "i_r2u", "i_r12", "i_r12u")


@dataclass(frozen=True)
class SchemeConfig:
    """Operating point: transmit power, slot split and target rates.

    Rates are given in exactly one of two modes:

    * exponent mode: multiplexing exponents ``r`` (split evenly over the two
      sources) and ``r_u`` (quantization index); the rates then scale with
      the power as ``rate1 = rate2 = (r/2) log2 snr`` and
      ``rate_u = r_u log2 snr``.
    * absolute mode: ``rate1``, ``rate2``, ``rate_u`` in bits per channel use.
    """

    snr: float
    beta: float = 0.5
    r: float | None = None
    r_u: float | None = None
    rate1: float | None = None
    rate2: float | None = None
    rate_u: float | None = None

    def __post_init__(self):
        if not (np.isfinite(self.snr) and self.snr > 0.0):
            raise ValueError("snr must be a positive finite number")
        if not 0.0 < self.beta < 1.0:
            raise ValueError("beta must lie strictly between 0 and 1")
        exponent = self.r is not None or self.r_u is not None
        absolute = any(v is not None for v in (self.rate1, self.rate2, self.rate_u))
        if exponent == absolute:
            raise ValueError("give either (r, r_u) or (rate1, rate2, rate_u)")
        if exponent:
            if self.r is None or self.r_u is None:
                raise ValueError("exponent mode needs both r and r_u")
            if not 0.0 <= self.r <= 1.0:
                raise ValueError("multiplexing exponent r must be in [0, 1]")
            if self.r_u < 0.0:
                raise ValueError("r_u must be >= 0")
            if self.snr < 1.0:
                raise ValueError("exponent mode needs snr >= 1 (log2 snr >= 0)")
        else:
            if None in (self.rate1, self.rate2, self.rate_u):
                raise ValueError("absolute mode needs rate1, rate2 and rate_u")
            if min(self.rate1, self.rate2, self.rate_u) < 0.0:
                raise ValueError("rates must be >= 0")

    @property
    def exponent_mode(self) -> bool:
        return self.r is not None

    @property
    def rate_tuple(self) -> tuple[float, float, float]:
        """(rate1, rate2, rate_u) in bits per channel use at this snr."""
        if self.exponent_mode:
            lg = math.log2(self.snr)
            return (self.r / 2.0 * lg, self.r / 2.0 * lg, self.r_u * lg)
        return (self.rate1, self.rate2, self.rate_u)


@dataclass(frozen=True)
class RateVector:
    """The six instantaneous mutual informations plus the quantizer noise
    variance they were evaluated with."""

    i_r1: float
    i_r1u: float
    i_r2: float
    i_r2u: float
    i_r12: float
    i_r12u: float
    sigma_q2: float

    def __post_init__(self):
        for key in RATE_KEYS:
            v = getattr(self, key)
            if not (np.isfinite(v) and v >= 0.0):
                raise ValueError(f"{key} must be finite and >= 0")
        if not (np.isfinite(self.sigma_q2) and self.sigma_q2 > 0.0):
            raise ValueError("sigma_q2 must be finite and > 0")

    def as_array(self) -> np.ndarray:
        return np.array([getattr(self, key) for key in RATE_KEYS])


def _quantizer_noise(relay_power_sum, cfg: SchemeConfig):
    """sigma_q2 = (1 + |h1r|^2 snr + |h2r|^2 snr) / (2^(rate_u/beta) - 1)."""
    rate_u = cfg.rate_tuple[2]
    if rate_u <= 0.0:
        raise ValueError("quantizer rate must be positive")
    with np.errstate(over="ignore"):
        denom = np.exp2(rate_u / cfg.beta) - 1.0
    if denom <= 0.0:
        raise ValueError("quantizer rate must be positive")
    return (1.0 + relay_power_sum) / denom


def select_quantization_noise(h: ChannelRealization, cfg: SchemeConfig) -> float:
    """Quantizer noise variance making the index rate exactly ``rate_u``.

    This is the unique sigma_q2 with
    ``beta * log2(1 + (1 + |h1r|^2 snr + |h2r|^2 snr) / sigma_q2) == rate_u``.
    """
    p = cfg.snr
    relay_sum = (abs(h.h1r) ** 2 + abs(h.h2r) ** 2) * p
    return float(_quantizer_noise(relay_sum, cfg))


def rate_table(
    coefficients: np.ndarray, cfg: SchemeConfig, sigma_q2=None
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized six-rate evaluation for an (n, 5) coefficient array.

    Columns of ``coefficients`` follow ``channel.LINKS``.  When ``sigma_q2``
    is None the quantizer noise is selected per row from the realized
    source-relay gains; passing a value (scalar or per-row) evaluates the
    rates at that fixed noise instead.

    Returns ``(table, sigma)`` where ``table`` has shape (n, 6) with columns
    ordered as RATE_KEYS and ``sigma`` is the per-row noise variance used.
    """
    coeffs = np.asarray(coefficients, dtype=complex)
    if coeffs.ndim != 2 or coeffs.shape[1] != 5:
        raise ValueError("coefficients must have shape (n, 5)")
    if not np.isfinite(coeffs).all():
        raise ValueError("channel coefficients must be finite")

    p = cfg.snr
    power = np.abs(coeffs) ** 2 * p
    p1d, p2d, p1r, p2r, prd = (power[:, k] for k in range(5))
    # grouped symmetrically so that swapping the source indices swaps the
    # computed values bit for bit
    sum_direct = p1d + p2d
    relay_sum = p1r + p2r

    if sigma_q2 is None:
        s = np.broadcast_to(np.asarray(_quantizer_noise(relay_sum, cfg)), p1d.shape)
    else:
        s = np.asarray(sigma_q2, dtype=float)
        if not (np.isfinite(s).all() and (s > 0.0).all()):
            raise ValueError("sigma_q2 must be finite and > 0")
        s = np.broadcast_to(s, p1d.shape)

    cross = np.abs(coeffs[:, 0] * coeffs[:, 3] - coeffs[:, 2] * coeffs[:, 1]) ** 2
    cross_power = cross * p * p

    lg = np.log2
    b = cfg.beta
    nb = 1.0 - cfg.beta
    one_s = 1.0 + s
    lg_relay = lg(1.0 + relay_sum / one_s)

    def single(pd, pr_own):
        return b * lg(1.0 + pd + pr_own / one_s) + nb * lg(1.0 + pd)

    def single_u(pd):
        return b * (lg(1.0 + pd) + lg_relay) + nb * lg(1.0 + pd + prd)

    i_r1 = single(p1d, p1r)
    i_r2 = single(p2d, p2r)
    i_r1u = single_u(p1d)
    i_r2u = single_u(p2d)
    i_r12 = b * lg(1.0 + sum_direct + (cross_power + relay_sum) / one_s) + nb * lg(
        1.0 + sum_direct
    )
    i_r12u = b * (lg(1.0 + sum_direct) + lg_relay) + nb * lg(1.0 + sum_direct + prd)

    table = np.stack([i_r1, i_r1u, i_r2, i_r2u, i_r12, i_r12u], axis=-1)
    return table, np.asarray(s, dtype=float)


def instantaneous_rates(
    h: ChannelRealization, cfg: SchemeConfig, sigma_q2: float | None = None
) -> RateVector:
    """The six mutual informations of one realization.

    The quantizer noise is selected from the realization unless an explicit
    ``sigma_q2`` is given.
    """
    table, s = rate_table(h.as_array()[None, :], cfg, sigma_q2)
    values = [float(v) for v in table[0]]
    return RateVector(*values, sigma_q2=float(s[0]))
