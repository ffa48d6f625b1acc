"""Closed-form diversity curves and the optimizer cross-check."""

import numpy as np
import pytest

from gqfmarc import dmt_closed_form, dmt_computed, dmt_curve, gqf_exponents


def test_known_values():
    assert dmt_closed_form("gqf", 0.0) == 2.0
    assert dmt_closed_form("cf", 0.7) == 0.65
    assert dmt_closed_form("gqf", 0.5) == dmt_closed_form("upper", 0.5) == 1.5


def test_breakpoint_continuity():
    for scheme, bp in (("gqf", 0.5), ("cf", 2.0 / 3.0), ("cf", 0.8), ("upper", 0.5)):
        left = dmt_closed_form(scheme, bp - 1e-13)
        right = dmt_closed_form(scheme, bp + 1e-13)
        assert abs(left - right) <= 1e-12


def test_domain_validation():
    with pytest.raises(ValueError):
        dmt_closed_form("gqf", 1.2)
    with pytest.raises(ValueError):
        dmt_closed_form("nonesuch", 0.5)


def test_upper_matches_gqf_everywhere():
    grid = np.linspace(0.0, 1.0, 101)
    for r in grid:
        assert dmt_closed_form("gqf", r) == dmt_closed_form("upper", r)


def test_gqf_dominates_cf_reference():
    grid = np.linspace(0.0, 1.0, 101)
    for r in grid:
        assert dmt_closed_form("gqf", r) >= dmt_closed_form("cf", r) - 1e-12


def test_curves_nonincreasing_and_zero_at_full_rate():
    grid = np.linspace(0.0, 1.0, 51)
    for scheme in ("gqf", "cf", "upper"):
        vals = dmt_curve(scheme, grid).values()
        assert all(b <= a + 1e-12 for a, b in zip(vals, vals[1:]))
        assert vals[-1] == 0.0 and min(vals) >= 0.0


def test_computed_equals_closed_form_on_grid():
    grid = np.linspace(0.0, 1.0, 21)
    comp = dmt_computed(grid).values()
    closed = [dmt_closed_form("gqf", r) for r in grid]
    assert max(abs(a - b) for a, b in zip(comp, closed)) <= 1e-9


def test_computed_point_values_and_binding_event():
    small = dmt_computed([0.0, 0.5, 1.0]).values()
    assert np.allclose(small, [2.0, 1.5, 0.0], atol=1e-9)
    assert abs(dmt_computed([0.25]).values()[0] - 1.75) <= 1e-9
    res = gqf_exponents(0.75)
    binding = min(res, key=lambda n: res[n].value)
    assert binding == "R12u" and abs(res[binding].value - 0.75) <= 1e-9
