"""Rayleigh block-fading model for the two-source half-duplex relay network.

Five mutually independent complex-Gaussian links: source 1 and source 2 to
the destination (``h1d``, ``h2d``), source 1 and source 2 to the relay
(``h1r``, ``h2r``), and relay to destination (``hrd``).

Sampling is counter based (Philox keyed by ``(seed, stream_id)``, with the
sample index mapped into the counter), so the realization at a given
``(seed, stream_id, sample_index)`` is a pure function of those integers.
Monte Carlo work can therefore be partitioned across any number of workers,
in any order, without changing a single draw.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

__all__ = [
    "LINKS",
    "ChannelRealization",
    "FadingParams",
    "sample_channel",
    "sample_coefficients",
]

LINKS = ("h1d", "h2d", "h1r", "h2r", "hrd")

# Samples per Philox counter block.  Block b of stream (seed, stream_id)
# starts the 256-bit counter at [0, b, 0, 0]; the generator can consume at
# most 2**64 counter words before touching word 1, so blocks never overlap.
# Sample i lives at row i % _BLOCK of block i // _BLOCK, and normals are
# produced sequentially, so a bulk draw and a per-index draw agree bit for
# bit.
_BLOCK = 4096
_NORMALS = 2 * len(LINKS)  # real/imaginary component per link

_U64 = 2**64


@dataclass(frozen=True)
class ChannelRealization:
    """One draw of the five complex channel coefficients."""

    h1d: complex
    h2d: complex
    h1r: complex
    h2r: complex
    hrd: complex

    def __post_init__(self):
        for name in LINKS:
            v = complex(getattr(self, name))
            if not (np.isfinite(v.real) and np.isfinite(v.imag)):
                raise ValueError(f"channel coefficient {name} must be finite")

    def as_array(self) -> np.ndarray:
        """Coefficients as a length-5 complex vector, ordered as LINKS."""
        return np.array([getattr(self, name) for name in LINKS], dtype=complex)

    def gains(self) -> np.ndarray:
        """|h|^2 per link, ordered as LINKS."""
        return np.abs(self.as_array()) ** 2


@dataclass(frozen=True)
class FadingParams:
    """Per-link variances of the complex coefficients (E|h|^2).

    A zero variance is allowed and yields a dead link (coefficient exactly
    zero).  The default is the symmetric network with unit variances.
    """

    var_1d: float = 1.0
    var_2d: float = 1.0
    var_1r: float = 1.0
    var_2r: float = 1.0
    var_rd: float = 1.0

    def __post_init__(self):
        for v in self.as_array():
            if not (np.isfinite(v) and v >= 0.0):
                raise ValueError("link variances must be finite and >= 0")

    def as_array(self) -> np.ndarray:
        return np.array(
            [self.var_1d, self.var_2d, self.var_1r, self.var_2r, self.var_rd]
        )


def _check_index(name: str, value: int) -> int:
    if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
        raise TypeError(f"{name} must be an integer")
    if not 0 <= value < _U64:
        raise ValueError(f"{name} must be in [0, 2**64)")
    return int(value)


def _raw_block(seed: int, stream_id: int, block: int) -> np.ndarray:
    key = np.array([seed, stream_id], dtype=np.uint64)
    counter = np.array([0, block, 0, 0], dtype=np.uint64)
    gen = np.random.Generator(np.random.Philox(key=key, counter=counter))
    return gen.standard_normal((_BLOCK, _NORMALS))


@lru_cache(maxsize=32)
def _cached_block(seed: int, stream_id: int, block: int) -> np.ndarray:
    out = _raw_block(seed, stream_id, block)
    out.flags.writeable = False
    return out


def _to_coefficients(normals: np.ndarray, params: FadingParams) -> np.ndarray:
    # each component has variance sigma^2/2 so that E|h|^2 = sigma^2
    scale = np.sqrt(params.as_array() / 2.0)
    return (normals[..., 0::2] + 1j * normals[..., 1::2]) * scale


def sample_channel(
    stream_id: int, sample_index: int, params: FadingParams, seed: int
) -> ChannelRealization:
    """Draw the realization at (seed, stream_id, sample_index).

    Pure function of its arguments: re-evaluating with identical arguments
    returns a bit-identical realization, regardless of what else has been
    sampled before or concurrently.
    """
    seed = _check_index("seed", seed)
    stream_id = _check_index("stream_id", stream_id)
    sample_index = _check_index("sample_index", sample_index)
    block, offset = divmod(sample_index, _BLOCK)
    row = _cached_block(seed, stream_id, block)[offset]
    h = _to_coefficients(row, params)
    return ChannelRealization(*(complex(v) for v in h))


def sample_coefficients(
    stream_id: int, start: int, count: int, params: FadingParams, seed: int
) -> np.ndarray:
    """Coefficients for sample indices [start, start + count) of one stream.

    Returns a (count, 5) complex array whose row k equals the coefficient
    vector of ``sample_channel(stream_id, start + k, params, seed)``.
    """
    seed = _check_index("seed", seed)
    stream_id = _check_index("stream_id", stream_id)
    start = _check_index("start", start)
    if count < 0:
        raise ValueError("count must be >= 0")
    normals = np.empty((count, _NORMALS))
    pos = 0
    idx = start
    while pos < count:
        block, offset = divmod(idx, _BLOCK)
        take = min(_BLOCK - offset, count - pos)
        normals[pos : pos + take] = _raw_block(seed, stream_id, block)[
            offset : offset + take
        ]
        pos += take
        idx += take
    return _to_coefficients(normals, params)
