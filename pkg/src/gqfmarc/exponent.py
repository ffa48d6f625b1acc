"""High-SNR exponent regions of the six outage events and their diversity
orders, computed three independent ways.

Under the change of variables ``|h_j|^2 = snr**(-a_j)`` the Rayleigh tails
give ``Pr(outage_i) ~ snr**(-d_i)`` where ``d_i`` is the minimum of
``a11 + a21 + a1r + a2r + ard`` over the event's exponent-space region.
Each region compares a rate threshold against a weighted sum of clamped
maxima of affine forms in the five exponents, so the minimization is a small
linear program.

Three solvers cross-check each other:

* ``solve_lp``       -- one LP over the epigraph reformulation;
* ``solve_by_cases`` -- exhaustive enumeration of which piece (or the zero
                        clamp) attains each max, a tiny LP per branch;
* ``solve_by_grid``  -- brute-force search over a regular lattice, used as
                        an independent oracle.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Iterable, Mapping

import numpy as np
from scipy import sparse
from scipy.optimize import linprog

from .rates import SchemeConfig, rate_table

__all__ = [
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
]

# exponent variables, one per fading link; 11/21 are the two source-destination
# links, 1R/2R the source-relay links, RD the relay-destination link
AXES = ("11", "21", "1R", "2R", "RD")
_AXIS_LABEL = {"11": "a11", "21": "a21", "1R": "a1r", "2R": "a2r", "RD": "ard"}

NAMES = ("R1", "R1u", "R2", "R2u", "R12", "R12u")

_TIE = 1e-12


def _nonneg(v: float) -> float:
    """Clamp solver roundoff below zero (and normalize -0.0)."""
    return float(v) if v > 0.0 else 0.0


@dataclass(frozen=True)
class AffineForm:
    """const + sum(coeffs * alpha); plain affine arithmetic, no clamping."""

    const: float
    coeffs: tuple[float, float, float, float, float]

    def evaluate(self, alpha) -> float:
        return self.const + float(np.dot(self.coeffs, np.asarray(alpha, dtype=float)))

    def label(self) -> str:
        parts = []
        if self.const != 0.0:
            parts.append(f"{self.const:g}")
        for axis, c in zip(AXES, self.coeffs):
            if c == 0.0:
                continue
            name = _AXIS_LABEL[axis]
            if c == 1.0:
                parts.append(f"+{name}")
            elif c == -1.0:
                parts.append(f"-{name}")
            else:
                parts.append(f"{c:+g}{name}")
        text = "".join(parts) if parts else "0"
        return text.lstrip("+")


def one_minus(axis: str) -> AffineForm:
    """The piece 1 - a_axis."""
    coeffs = tuple(-1.0 if a == axis else 0.0 for a in AXES)
    return AffineForm(1.0, coeffs)


@dataclass(frozen=True)
class MaxTerm:
    """weight * max(pieces..., 0) - one clamped maximum of affine forms."""

    weight: float
    pieces: tuple[AffineForm, ...]

    def __post_init__(self):
        if self.weight <= 0.0:
            raise ValueError("term weight must be positive")
        if not self.pieces:
            raise ValueError("term needs at least one piece")

    def evaluate(self, alpha) -> float:
        return self.weight * max(0.0, max(p.evaluate(alpha) for p in self.pieces))


@dataclass(frozen=True)
class PiecewiseConstraint:
    """One outage event's exponent region: {alpha >= 0 : f(alpha) < threshold}
    with f the weighted sum of clamped maxima.

    ``scale`` records the factor by which the natural (rate / log2 snr)
    inequality was multiplied when the constraint was built, so diagnostics
    can map f back to a normalized mutual information.
    """

    name: str
    threshold: float
    terms: tuple[MaxTerm, ...]
    scale: float = 1.0

    def evaluate(self, alpha) -> float:
        return sum(t.evaluate(alpha) for t in self.terms)


@dataclass(frozen=True)
class ExponentResult:
    """A diversity order with the minimizing exponent vector."""

    value: float
    argmin: tuple[float, float, float, float, float]
    method: str  # "lp" | "cases" | "grid"
    active_case: str | None = None


@dataclass(frozen=True)
class CaseRecord:
    """One branch of the case enumeration at a fixed operating point."""

    case_id: str
    outcomes: tuple[str, ...]
    feasible: bool
    value: float | None
    argmin: tuple[float, ...] | None


@dataclass(frozen=True)
class CaseFit:
    """One branch's minimum as a function of the multiplexing exponent r.

    ``intercept``/``slope`` give the affine piece at small r (value and
    one-sided derivative at r = 0); ``affine`` records whether that line
    reproduces the branch minimum on all of [0, 1].  Branches whose slack
    saturates inside (0, 1) are piecewise linear and keep ``affine=False``.
    """

    case_id: str
    outcomes: tuple[str, ...]
    feasible: bool
    intercept: float
    slope: float
    affine: bool

    def expression(self) -> str:
        return format_affine(self.intercept, self.slope)


def format_affine(a: float, b: float) -> str:
    """Human-readable ``a + b*r`` with trimmed zeros, e.g. '2 - r', '4 - 4r'."""
    a = round(a, 9) + 0.0
    b = round(b, 9) + 0.0
    if b == 0.0:
        return f"{a:g}"
    mag = "r" if abs(b) == 1.0 else f"{abs(b):g}r"
    sign = "-" if b < 0 else "+"
    if a == 0.0:
        return mag if b > 0 else f"-{mag}"
    return f"{a:g} {sign} {mag}"


def build_constraints(
    beta: float = 0.5, r: float = 0.5, r_u: float = 0.5
) -> list[PiecewiseConstraint]:
    """The six exponent-space outage regions at one operating point.

    Thresholds follow the conventional printed normalizations: the two
    single-source events keep their natural slot weights (beta, 1-beta)
    against thresholds r/2, while the index/sum events are divided through
    by beta, e.g. the R1u threshold becomes (r/2 + r_u)/beta = r + 1 at
    beta = r_u = 1/2.  Scaling both sides of a region by a positive factor
    leaves the region (and the diversity order) unchanged.

    Requires ``r_u >= beta``.  Below that point the quantizer-noise exponent
    max(1-a1r, 1-a2r, 0) - r_u/beta turns positive on part of the orthant
    and subtracts from the relay-observation pieces, which makes the region
    non-convex and not representable as a sum of clamped maxima of affine
    forms.  At and above it the subtraction is identically zero, so the
    regions built here are exact.
    """
    if not 0.0 < beta < 1.0:
        raise ValueError("beta must lie strictly between 0 and 1")
    if not 0.0 <= r <= 1.0:
        raise ValueError("r must lie in [0, 1]")
    if r_u < 0.0:
        raise ValueError("r_u must be >= 0")
    if r_u < beta:
        raise ValueError(
            "r_u < beta is unsupported: the quantizer-noise exponent would "
            "clamp the relay pieces and the outage region is no longer convex"
        )

    c2 = (1.0 - beta) / beta

    def pc(name, threshold, terms, scale):
        return PiecewiseConstraint(name, threshold, tuple(terms), scale)

    def single(name, direct):
        relay = {"R1": "1R", "R2": "2R"}[name]
        return pc(
            name,
            r / 2.0,
            [
                MaxTerm(beta, (one_minus(direct), one_minus(relay))),
                MaxTerm(1.0 - beta, (one_minus(direct),)),
            ],
            scale=1.0,
        )

    def single_u(name, direct):
        return pc(
            name,
            (r / 2.0 + r_u) / beta,
            [
                MaxTerm(1.0, (one_minus(direct),)),
                MaxTerm(1.0, (one_minus("1R"), one_minus("2R"))),
                MaxTerm(c2, (one_minus(direct), one_minus("RD"))),
            ],
            scale=1.0 / beta,
        )

    r12 = pc(
        "R12",
        r / beta,
        [
            MaxTerm(
                1.0,
                (one_minus("11"), one_minus("21"), one_minus("1R"), one_minus("2R")),
            ),
            MaxTerm(c2, (one_minus("11"), one_minus("21"))),
        ],
        scale=1.0 / beta,
    )
    r12u = pc(
        "R12u",
        (r + r_u) / beta,
        [
            MaxTerm(1.0, (one_minus("11"), one_minus("21"))),
            MaxTerm(1.0, (one_minus("1R"), one_minus("2R"))),
            MaxTerm(c2, (one_minus("11"), one_minus("21"), one_minus("RD"))),
        ],
        scale=1.0 / beta,
    )

    return [
        single("R1", "11"),
        single_u("R1u", "11"),
        single("R2", "21"),
        single_u("R2u", "21"),
        r12,
        r12u,
    ]


def constraint_by_name(
    name: str, beta: float = 0.5, r: float = 0.5, r_u: float = 0.5
) -> PiecewiseConstraint:
    for c in build_constraints(beta, r, r_u):
        if c.name == name:
            return c
    raise ValueError(f"unknown constraint {name!r}; expected one of {NAMES}")


# ---------------------------------------------------------------------------
# LP over the epigraph form
# ---------------------------------------------------------------------------


def solve_lp(constraint: PiecewiseConstraint) -> ExponentResult:
    """Minimize sum(alpha) over the closure of the outage region.

    Epigraph form: auxiliary t_j >= 0 with t_j >= each piece of term j and
    sum w_j t_j <= threshold.  The closure's minimum equals the infimum over
    the open region since the region function is continuous.
    """
    nterms = len(constraint.terms)
    nvar = 5 + nterms
    objective = np.zeros(nvar)
    objective[:5] = 1.0
    rows, rhs = [], []
    for j, term in enumerate(constraint.terms):
        for piece in term.pieces:
            row = np.zeros(nvar)
            row[:5] = piece.coeffs
            row[5 + j] = -1.0
            rows.append(row)
            rhs.append(-piece.const)
    row = np.zeros(nvar)
    for j, term in enumerate(constraint.terms):
        row[5 + j] = term.weight
    rows.append(row)
    rhs.append(constraint.threshold)
    res = linprog(
        objective,
        A_ub=np.array(rows),
        b_ub=np.array(rhs),
        bounds=[(0.0, None)] * nvar,
        method="highs",
    )
    if res.status != 0:
        raise RuntimeError(f"exponent LP failed for {constraint.name}: {res.message}")
    alpha = tuple(_nonneg(v) for v in res.x[:5])
    return ExponentResult(value=_nonneg(res.fun), argmin=alpha, method="lp")


# ---------------------------------------------------------------------------
# branch-case enumeration
# ---------------------------------------------------------------------------


def _branch_choices(constraint: PiecewiseConstraint):
    """All assignments of one outcome per term: 0 = zero clamp, k = piece k."""
    return itertools.product(*[range(len(t.pieces) + 1) for t in constraint.terms])


def _branch_system(constraint: PiecewiseConstraint, choice):
    """Inequality rows A x <= b for one branch, split into the r-independent
    consistency rows and the aggregated threshold row (returned as the affine
    lhs, so callers can vary the threshold)."""
    rows, rhs = [], []
    agg = np.zeros(5)
    agg_const = 0.0
    for term, pick in zip(constraint.terms, choice):
        pieces = term.pieces
        if pick == 0:
            # every piece <= 0
            for p in pieces:
                rows.append(np.asarray(p.coeffs, dtype=float))
                rhs.append(-p.const)
        else:
            active = pieces[pick - 1]
            # active piece >= 0
            rows.append(-np.asarray(active.coeffs, dtype=float))
            rhs.append(active.const)
            # active piece >= every sibling
            for k, p in enumerate(pieces):
                if k == pick - 1:
                    continue
                rows.append(np.asarray(p.coeffs) - np.asarray(active.coeffs))
                rhs.append(active.const - p.const)
            agg += term.weight * np.asarray(active.coeffs)
            agg_const += term.weight * active.const
    return np.array(rows), np.array(rhs), agg, agg_const


def _branch_labels(constraint: PiecewiseConstraint, choice):
    return tuple(
        "0" if pick == 0 else term.pieces[pick - 1].label()
        for term, pick in zip(constraint.terms, choice)
    )


def _solve_branch(constraint, choice):
    rows, rhs, agg, agg_const = _branch_system(constraint, choice)
    A = np.vstack([rows, agg[None, :]])
    b = np.append(rhs, constraint.threshold - agg_const)
    res = linprog(
        np.ones(5), A_ub=A, b_ub=b, bounds=[(0.0, None)] * 5, method="highs"
    )
    if res.status == 2:
        return None
    if res.status != 0:
        raise RuntimeError(
            f"branch LP failed for {constraint.name} case {choice}: {res.message}"
        )
    return _nonneg(res.fun), tuple(_nonneg(v) for v in res.x)


def _rounded(alpha):
    return tuple(round(v, 9) + 0.0 for v in alpha)


def solve_by_cases(
    constraint: PiecewiseConstraint,
) -> tuple[ExponentResult, list[CaseRecord]]:
    """Enumerate every clamp/argmax branch and take the best feasible one.

    Each branch fixes, for every clamped max, either the zero clamp (all
    pieces forced <= 0) or one active piece (forced >= its siblings and
    >= 0), substitutes the chosen outcomes into the threshold inequality and
    solves the resulting LP.  The union of branch regions covers the whole
    outage region, so the minimum over branches equals ``solve_lp``'s value.
    Ties between branches are broken toward the lexicographically smallest
    minimizer so the reported branch is deterministic.
    """
    records = []
    best = None  # (value, rounded argmin, case_id, argmin)
    for choice in _branch_choices(constraint):
        case_id = "-".join(map(str, choice))
        outcome = _branch_labels(constraint, choice)
        solved = _solve_branch(constraint, choice)
        if solved is None:
            records.append(CaseRecord(case_id, outcome, False, None, None))
            continue
        value, alpha = solved
        records.append(CaseRecord(case_id, outcome, True, value, alpha))
        key = (value, _rounded(alpha))
        if best is None or key[0] < best[0] - _TIE:
            best = (value, key[1], case_id, alpha)
        elif abs(key[0] - best[0]) <= _TIE and key[1] < best[1]:
            best = (value, key[1], case_id, alpha)
    if best is None:
        raise RuntimeError(f"no feasible branch for {constraint.name}")
    result = ExponentResult(
        value=best[0], argmin=best[3], method="cases", active_case=best[2]
    )
    return result, records


def _branch_values_over(name, rs, beta, r_u, choice):
    """Branch minima across an r-grid, one stacked LP per branch.

    The branch's consistency rows do not depend on r; only the threshold
    right-hand side does, so the per-r LPs are independent blocks of one
    block-diagonal LP and a single solve recovers every block's optimum.
    Falls back to per-point solves if the stacked problem is infeasible
    (a branch infeasible at some r only).
    """
    constraints = [constraint_by_name(name, beta, rr, r_u) for rr in rs]
    rows, rhs, agg, agg_const = _branch_system(constraints[0], choice)
    A = np.vstack([rows, agg[None, :]])
    n = len(rs)
    blocks = sparse.block_diag([sparse.csr_matrix(A)] * n, format="csr")
    b = np.concatenate(
        [np.append(rhs, c.threshold - agg_const) for c in constraints]
    )
    res = linprog(
        np.ones(5 * n),
        A_ub=blocks,
        b_ub=b,
        bounds=[(0.0, None)] * (5 * n),
        method="highs",
    )
    if res.status == 0:
        x = res.x.reshape(n, 5)
        return [_nonneg(v) for v in x.sum(axis=1)], [
            tuple(_nonneg(u) for u in row) for row in x
        ]
    values, argmins = [], []
    for c in constraints:
        solved = _solve_branch(c, choice)
        if solved is None:
            values.append(math.nan)
            argmins.append(None)
        else:
            values.append(solved[0])
            argmins.append(solved[1])
    return values, argmins


def case_sweep(name: str, rs, beta: float = 0.5, r_u: float = 0.5):
    """Per-branch minima over an r-grid.

    Returns (choices, labels, values) where values has shape
    (n_branches, len(rs)); an entry is NaN where the branch is infeasible.
    """
    rs = [float(v) for v in rs]
    template = constraint_by_name(name, beta, rs[0] if rs else 0.0, r_u)
    choices = list(_branch_choices(template))
    labels = [_branch_labels(template, c) for c in choices]
    values = np.empty((len(choices), len(rs)))
    for i, choice in enumerate(choices):
        vals, _ = _branch_values_over(name, rs, beta, r_u, choice)
        values[i] = vals
    return choices, labels, values


def case_minima(name: str, rs, beta: float = 0.5, r_u: float = 0.5) -> np.ndarray:
    """The case-enumeration diversity order at each r of a grid."""
    _, _, values = case_sweep(name, rs, beta, r_u)
    return np.nanmin(values, axis=0)


_TANGENT_RS = (0.0, 1.0 / 64.0, 1.0 / 32.0)


def case_table(
    name: str, beta: float = 0.5, r_u: float = 0.5, r_grid=None
) -> list[CaseFit]:
    """Affine-in-r summary of every branch minimum for one constraint.

    The affine piece is anchored at r = 0 (value plus one-sided slope);
    ``affine`` marks branches whose minimum stays on that line over the full
    grid (default 0..1 in steps of 0.05).  Kinked branches keep their small-r
    line with ``affine=False``.
    """
    if r_grid is None:
        r_grid = [k * 0.05 for k in range(21)]
    rs = sorted(set(_TANGENT_RS) | {round(float(v), 12) for v in r_grid})
    i0 = rs.index(_TANGENT_RS[0])
    i1 = rs.index(_TANGENT_RS[1])
    i2 = rs.index(_TANGENT_RS[2])
    choices, labels, values = case_sweep(name, rs, beta, r_u)
    fits = []
    for choice, label, vals in zip(choices, labels, values):
        case_id = "-".join(map(str, choice))
        if np.isnan(vals).any():
            fits.append(CaseFit(case_id, label, False, math.nan, math.nan, False))
            continue
        a = vals[i0]
        slope1 = (vals[i1] - vals[i0]) / (rs[i1] - rs[i0])
        slope2 = (vals[i2] - vals[i1]) / (rs[i2] - rs[i1])
        tangent_ok = abs(slope1 - slope2) <= 1e-6
        line = a + slope1 * np.asarray(rs)
        affine = tangent_ok and bool(np.max(np.abs(vals - line)) <= 1e-7)
        fits.append(CaseFit(case_id, label, True, float(a), float(slope1), affine))
    return fits


# ---------------------------------------------------------------------------
# brute-force grid oracle
# ---------------------------------------------------------------------------


def solve_by_grid(
    constraint: PiecewiseConstraint, step: float = 0.05, box: float = 2.0
) -> ExponentResult:
    """Exhaustive minimum of sum(alpha) over a regular lattice in [0, box]^5.

    Independent of the LP machinery: the region function is evaluated
    directly from the constraint's terms at every lattice point.  Because the
    region function is nonincreasing in each coordinate, rounding the true
    minimizer up to the lattice stays feasible, so the grid value lies within
    5*step above the exact minimum.
    """
    if step <= 0.0:
        raise ValueError("step must be positive")
    if box < 2.0:
        raise ValueError("box must be at least 2")
    n = int(round(box / step)) + 1
    axis = np.arange(n) * step
    coords = [axis.reshape([-1 if k == j else 1 for k in range(4)]) for j in range(4)]
    sum4 = coords[0] + coords[1] + coords[2] + coords[3]

    best_val = math.inf
    best_alpha = None
    for ard in axis:
        f = 0.0
        for term in constraint.terms:
            m = None
            for p in term.pieces:
                arr = p.const + p.coeffs[4] * ard
                for j in range(4):
                    if p.coeffs[j] != 0.0:
                        arr = arr + p.coeffs[j] * coords[j]
                m = arr if m is None else np.maximum(m, arr)
            f = f + term.weight * np.maximum(m, 0.0)
        mask = f <= constraint.threshold + 1e-9
        total = np.where(mask, sum4, math.inf)
        flat = int(np.argmin(total))
        val = total.flat[flat] + ard
        if val < best_val - 1e-15:
            best_val = float(val)
            idx = np.unravel_index(flat, total.shape)
            best_alpha = tuple(float(axis[i]) for i in idx) + (float(ard),)
    if best_alpha is None:
        raise ValueError("no feasible grid point: box too small or step too coarse")
    return ExponentResult(value=best_val, argmin=best_alpha, method="grid")


# ---------------------------------------------------------------------------
# combination and finite-SNR diagnostics
# ---------------------------------------------------------------------------


def gqf_exponents(
    r: float,
    beta: float = 0.5,
    r_u: float = 0.5,
    method: str = "lp",
    step: float = 0.05,
    box: float = 2.0,
) -> dict[str, ExponentResult]:
    """Diversity order of each of the six outage events at one r."""
    out = {}
    for c in build_constraints(beta, r, r_u):
        if method == "lp":
            out[c.name] = solve_lp(c)
        elif method == "cases":
            out[c.name] = solve_by_cases(c)[0]
        elif method == "grid":
            out[c.name] = solve_by_grid(c, step=step, box=box)
        else:
            raise ValueError(f"unknown method {method!r}")
    return out


def combine_min(results: Mapping[str, ExponentResult] | Iterable[ExponentResult]) -> float:
    """Overall diversity order: the minimum of the six per-event exponents.

    The union of events is dominated at high SNR by the event with the
    smallest exponent, so the union bound is tight in the exponent.
    """
    if isinstance(results, Mapping):
        values = [results[name].value for name in NAMES]
    else:
        values = [res.value for res in results]
        if len(values) != len(NAMES):
            raise ValueError("expected all six per-event exponents")
    return min(values)


@dataclass(frozen=True)
class ConsistencyReport:
    """Finite-SNR check of the exponent regions against the exact rates.

    ``normalized`` holds the exact mutual informations divided by log2 snr,
    ``predicted`` the piecewise-linear region predictions, ``deviations``
    their absolute differences.  ``r12_flagged`` is set when the sum-rate
    constraint deviates beyond ``flag_tol``: its slot-1 rate contains a
    determinant cross term whose exponent can exceed the region's clamped
    maxima, a known limitation of the printed region that does not affect
    the overall diversity order (the R12u exponent is smaller for every
    0 < r < 1).
    """

    snr: float
    alpha: tuple[float, float, float, float, float]
    normalized: dict[str, float]
    predicted: dict[str, float]
    deviations: dict[str, float]
    r12_flagged: bool


def high_snr_consistency_check(
    alpha,
    snr: float,
    beta: float = 0.5,
    r: float = 0.5,
    r_u: float = 0.5,
    flag_tol: float = 0.05,
) -> ConsistencyReport:
    """Compare exact normalized rates at |h_j|^2 = snr**(-a_j) with the
    exponent-region predictions.

    The source-2-to-relay coefficient is rotated into quadrature so the two
    products in the determinant cross term add instead of cancelling, which
    keeps the check representative of generic complex fading phases.
    """
    if snr < 1e6:
        raise ValueError("consistency check needs snr >= 1e6")
    a = np.asarray(alpha, dtype=float)
    if a.shape != (5,) or (a < 0.0).any():
        raise ValueError("alpha must be five nonnegative exponents")
    mags = snr ** (-a / 2.0)
    coeffs = np.array(
        [[mags[0], mags[1], mags[2], 1j * mags[3], mags[4]]], dtype=complex
    )
    cfg = SchemeConfig(snr=snr, beta=beta, r=r, r_u=r_u)
    table, _ = rate_table(coeffs, cfg)
    lg = math.log2(snr)
    normalized = {name: float(v) / lg for name, v in zip(NAMES, table[0])}
    predicted = {}
    for c in build_constraints(beta, r, r_u):
        predicted[c.name] = c.evaluate(a) / c.scale
    deviations = {n: abs(normalized[n] - predicted[n]) for n in NAMES}
    return ConsistencyReport(
        snr=snr,
        alpha=tuple(float(v) for v in a),
        normalized=normalized,
        predicted=predicted,
        deviations=deviations,
        r12_flagged=deviations["R12"] > flag_tol,
    )
