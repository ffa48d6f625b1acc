"""Outage and diversity-multiplexing analysis of quantize-and-forward
relaying over the slow-fading half-duplex multiple-access relay channel.

Two sources reach one destination with the help of a half-duplex relay that
quantizes its first-slot observation and forwards the index at a fixed rate,
without relay-destination channel state.  The package evaluates the exact
Gaussian rates behind the scheme's six decoding constraints, estimates
outage probabilities by reproducible Monte Carlo, and computes the
high-SNR diversity order of each outage event by three mutually
cross-checking optimizers.
"""

from .channel import (
    LINKS,
    ChannelRealization,
    FadingParams,
    sample_channel,
    sample_coefficients,
)
from .curves import SCHEMES, DmtCurve, dmt_closed_form, dmt_computed, dmt_curve
from .exponent import (
    AXES,
    NAMES,
    AffineForm,
    CaseFit,
    CaseRecord,
    ConsistencyReport,
    ExponentResult,
    MaxTerm,
    PiecewiseConstraint,
    build_constraints,
    case_minima,
    case_sweep,
    case_table,
    combine_min,
    constraint_by_name,
    gqf_exponents,
    high_snr_consistency_check,
    one_minus,
    solve_by_cases,
    solve_by_grid,
    solve_lp,
)
from .outage import (
    EVENTS,
    OutageEstimate,
    OutageFlags,
    estimate_outage,
    fit_diversity_slope,
    outage_indicator,
    sweep_outage,
    wilson_halfwidth,
)
from .rates import (
    RATE_KEYS,
    RateVector,
    SchemeConfig,
    instantaneous_rates,
    rate_table,
    select_quantization_noise,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "LINKS",
    "ChannelRealization",
    "FadingParams",
    "sample_channel",
    "sample_coefficients",
    "RATE_KEYS",
    "SchemeConfig",
    "RateVector",
    "select_quantization_noise",
    "instantaneous_rates",
    "rate_table",
    "EVENTS",
    "OutageFlags",
    "OutageEstimate",
    "outage_indicator",
    "estimate_outage",
    "sweep_outage",
    "fit_diversity_slope",
    "wilson_halfwidth",
    "AXES",
    "NAMES",
    "AffineForm",
    "MaxTerm",
    "PiecewiseConstraint",
    "ExponentResult",
    "CaseRecord",
    "CaseFit",
    "ConsistencyReport",
    "one_minus",
    "build_constraints",
    "constraint_by_name",
    "solve_lp",
    "solve_by_cases",
    "solve_by_grid",
    "case_sweep",
    "case_table",
    "case_minima",
    "gqf_exponents",
    "combine_min",
    "high_snr_consistency_check",
    "SCHEMES",
    "DmtCurve",
    "dmt_closed_form",
    "dmt_curve",
    "dmt_computed",
]
