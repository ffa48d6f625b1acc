"""Closed-form diversity-multiplexing curves for the symmetric network and
the optimizer-computed curve for cross-checking.

All curves are over the total multiplexing exponent r in [0, 1], split
evenly between the two sources.  The quantize-and-forward curve meets the
cut-set upper bound everywhere; the compress-and-forward reference curve
(which needs relay-destination state at the relay) falls below it except at
the endpoints.
"""

from __future__ import annotations

from dataclasses import dataclass

from .exponent import combine_min, gqf_exponents

__all__ = ["SCHEMES", "DmtCurve", "dmt_closed_form", "dmt_curve", "dmt_computed"]

SCHEMES = ("gqf_closed", "gqf_computed", "cf", "upper")


@dataclass(frozen=True)
class DmtCurve:
    """A diversity order curve: (r, d) points for one scheme."""

    scheme: str
    points: tuple[tuple[float, float], ...]

    def values(self) -> list[float]:
        return [d for _, d in self.points]


def _check_r(r: float) -> float:
    r = float(r)
    if not 0.0 <= r <= 1.0:
        raise ValueError("r must lie in [0, 1]")
    return r


def dmt_closed_form(scheme: str, r: float) -> float:
    """Closed-form diversity order at multiplexing exponent r.

    ``gqf`` and ``upper`` coincide: 2 - r on [0, 1/2] and 3(1 - r) on
    [1/2, 1].  ``cf`` is the compress-and-forward reference: 2(1 - r) on
    [0, 2/3], 1 - r/2 on [2/3, 4/5] and 3(1 - r) on [4/5, 1].  Breakpoints
    evaluate via the left branch; both branches agree there.
    """
    r = _check_r(r)
    key = {"gqf_closed": "gqf", "gqf": "gqf", "upper": "upper", "cf": "cf"}.get(scheme)
    if key is None:
        raise ValueError(f"unknown closed-form scheme {scheme!r}")
    if key in ("gqf", "upper"):
        return 2.0 - r if r <= 0.5 else 3.0 * (1.0 - r)
    if r <= 2.0 / 3.0:
        return 2.0 * (1.0 - r)
    if r <= 4.0 / 5.0:
        return 1.0 - r / 2.0
    return 3.0 * (1.0 - r)


def dmt_curve(scheme: str, r_grid) -> DmtCurve:
    """Closed-form curve sampled on a grid."""
    label = {"gqf": "gqf_closed"}.get(scheme, scheme)
    points = tuple((float(r), dmt_closed_form(scheme, r)) for r in r_grid)
    return DmtCurve(scheme=label, points=points)


def dmt_computed(r_grid, beta: float = 0.5, r_u: float = 0.5) -> DmtCurve:
    """Optimizer-computed curve: per grid point, solve the six per-event
    exponent programs and take their minimum.

    At (beta, r_u) = (1/2, 1/2) this reproduces the closed-form curve
    pointwise.
    """
    points = []
    for r in r_grid:
        r = _check_r(r)
        results = gqf_exponents(r, beta=beta, r_u=r_u, method="lp")
        points.append((r, combine_min(results)))
    return DmtCurve(scheme="gqf_computed", points=tuple(points))
