"""Exponent regions and the three diversity-order solvers."""

import numpy as np
import pytest

from gqfmarc import (
    MaxTerm,
    PiecewiseConstraint,
    build_constraints,
    case_minima,
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
from gqfmarc.exponent import NAMES


def test_standard_point_region_structure():
    cons = {c.name: c for c in build_constraints(0.5, 0.3, 0.5)}
    r1 = cons["R1"]
    assert r1.threshold == 0.15  # r/2
    assert [t.weight for t in r1.terms] == [0.5, 0.5]
    assert [len(t.pieces) for t in r1.terms] == [2, 1]
    assert r1.terms[0].pieces[0] == one_minus("11")
    assert r1.terms[0].pieces[1] == one_minus("1R")

    r12u = cons["R12u"]
    assert r12u.threshold == 2 * 0.3 + 1  # 2r + 1
    assert [t.weight for t in r12u.terms] == [1.0, 1.0, 1.0]
    assert [len(t.pieces) for t in r12u.terms] == [2, 2, 3]

    r1u = cons["R1u"]
    assert r1u.threshold == 0.3 + 1  # r + 1
    r12 = cons["R12"]
    assert r12.threshold == 0.6  # 2r
    assert [len(t.pieces) for t in r12.terms] == [4, 2]


def test_build_validation():
    with pytest.raises(ValueError):
        build_constraints(beta=0.0, r=0.5, r_u=0.5)
    with pytest.raises(ValueError):
        build_constraints(beta=0.5, r=1.5, r_u=0.5)
    with pytest.raises(ValueError):
        build_constraints(beta=0.5, r=0.5, r_u=-0.1)
    with pytest.raises(ValueError, match="no longer convex"):
        build_constraints(beta=0.5, r=0.5, r_u=0.25)


def test_zero_threshold_forces_both_clamps():
    res = solve_lp(constraint_by_name("R1", r=0.0))
    assert abs(res.value - 2.0) <= 1e-9
    alpha = dict(zip(("11", "21", "1R", "2R", "RD"), res.argmin))
    assert alpha["11"] >= 1.0 - 1e-9 and alpha["1R"] >= 1.0 - 1e-9


def test_lp_known_values():
    assert abs(solve_lp(constraint_by_name("R1", r=0.5)).value - 1.5) <= 1e-9
    assert abs(solve_lp(constraint_by_name("R12", r=0.25)).value - 3.0) <= 1e-9
    assert abs(solve_lp(constraint_by_name("R12u", r=1.0)).value - 0.0) <= 1e-9


def test_lp_result_invariants():
    for name in NAMES:
        c = constraint_by_name(name, r=0.35)
        res = solve_lp(c)
        assert abs(res.value - sum(res.argmin)) <= 1e-9
        assert c.evaluate(res.argmin) <= c.threshold + 1e-9


def test_cases_agree_with_lp():
    for r in (0.0, 0.3, 0.5, 0.8, 1.0):
        for c in build_constraints(0.5, r, 0.5):
            lp = solve_lp(c)
            cases, records = solve_by_cases(c)
            assert abs(lp.value - cases.value) <= 1e-9
            assert abs(cases.value - sum(cases.argmin)) <= 1e-9
            assert any(rec.case_id == cases.active_case for rec in records)


def test_case_minima_match_per_point_enumeration():
    rs = [0.0, 0.25, 0.5, 0.75, 1.0]
    for name in ("R1", "R12u"):
        stacked = case_minima(name, rs)
        for r, v in zip(rs, stacked):
            single = solve_by_cases(constraint_by_name(name, r=r))[0].value
            assert abs(v - single) <= 1e-9


def test_pinned_case_values():
    # branch (relay max -> 1-a2r, both direct clamps at zero) has minimum 2
    _, records = solve_by_cases(constraint_by_name("R1u", r=0.3))
    rec = next(r for r in records if r.outcomes == ("0", "1-a2r", "0"))
    assert rec.feasible and abs(rec.value - 2.0) <= 1e-9
    # sum-rate branch with 1-a11 active in both maxima has minimum 4(1-r)
    _, records = solve_by_cases(constraint_by_name("R12", r=0.3))
    rec = next(r for r in records if r.outcomes == ("1-a11", "1-a11"))
    assert rec.feasible and abs(rec.value - 4.0 * 0.7) <= 1e-9
    # index sum-rate branch (1-a11, 1-a1r, 1-a11) has minimum 3 - 3r
    _, records = solve_by_cases(constraint_by_name("R12u", r=0.3))
    rec = next(r for r in records if r.outcomes == ("1-a11", "1-a1r", "1-a11"))
    assert rec.feasible and abs(rec.value - (3.0 - 0.9)) <= 1e-9


def test_case_table_affine_entries():
    fits = {f.outcomes: f for f in case_table("R1u")}
    f = fits[("0", "1-a2r", "0")]
    assert f.affine and (round(f.intercept, 9), round(f.slope, 9)) == (2.0, 0.0)
    f = fits[("1-a11", "1-a1r", "1-a11")]
    assert f.affine and f.expression() == "2 - r"
    # every feasible branch of the sum-rate table lands on 4(1-r) or 4
    got = {(round(f.intercept, 6), round(f.slope, 6)) for f in case_table("R12") if f.feasible}
    assert got == {(4.0, -4.0), (4.0, 0.0)}


def test_grid_oracle_windows():
    lp = solve_lp(constraint_by_name("R1", r=0.5)).value
    grid = solve_by_grid(constraint_by_name("R1", r=0.5))
    assert lp - 1e-12 <= grid.value <= 1.75 + 1e-12
    lp = solve_lp(constraint_by_name("R12u", r=0.0)).value
    grid = solve_by_grid(constraint_by_name("R12u", r=0.0))
    assert 3.0 - 1e-12 <= grid.value <= 3.25 + 1e-12
    assert abs(grid.value - sum(grid.argmin)) <= 1e-9


def test_grid_degenerate_threshold():
    c = PiecewiseConstraint("R1", 100.0, (MaxTerm(1.0, (one_minus("11"),)),))
    res = solve_by_grid(c)
    assert res.value == 0.0 and res.argmin == (0.0,) * 5


def test_grid_validation():
    c = constraint_by_name("R1", r=0.5)
    with pytest.raises(ValueError):
        solve_by_grid(c, step=0.0)
    with pytest.raises(ValueError):
        solve_by_grid(c, box=1.0)


def test_scaling_the_inequality_leaves_the_optimum():
    c = constraint_by_name("R12u", r=0.4)
    scaled = PiecewiseConstraint(
        c.name,
        3.0 * c.threshold,
        tuple(MaxTerm(3.0 * t.weight, t.pieces) for t in c.terms),
        scale=3.0 * c.scale,
    )
    assert abs(solve_lp(c).value - solve_lp(scaled).value) <= 1e-9


def test_exponents_nonincreasing_in_r():
    rs = np.linspace(0.0, 1.0, 11)
    prev = None
    for r in rs:
        vals = {n: res.value for n, res in gqf_exponents(float(r)).items()}
        if prev is not None:
            for n in NAMES:
                assert vals[n] <= prev[n] + 1e-9
        prev = vals


def test_combine_min_reproduces_overall_tradeoff():
    res = gqf_exponents(0.25)
    assert abs(combine_min(res) - 1.75) <= 1e-9
    res = gqf_exponents(0.75)
    assert abs(combine_min(res) - 0.75) <= 1e-9
    # the index sum-rate exponent always undercuts the plain sum-rate one
    for r in (0.1, 0.5, 0.9):
        res = gqf_exponents(r)
        assert res["R12u"].value < res["R12"].value


def test_generalized_operating_point_still_consistent():
    # away from the standard point the three solvers must still agree
    for c in build_constraints(beta=0.4, r=0.6, r_u=0.7):
        lp = solve_lp(c)
        cases, _ = solve_by_cases(c)
        assert abs(lp.value - cases.value) <= 1e-9


def test_high_snr_check_dead_links():
    rep = high_snr_consistency_check(np.full(5, 2.0), 1e8)
    assert max(rep.normalized.values()) <= 1e-6
    assert max(rep.predicted.values()) == 0.0


def test_high_snr_check_full_strength_links():
    rep = high_snr_consistency_check(np.zeros(5), 1e8)
    assert abs(rep.normalized["R1"] - 1.0) <= 0.02
    # the sum-rate slot-1 term carries the determinant cross term: its
    # exponent reaches 2 while the clamped-max region predicts at most 1
    slot1 = (rep.normalized["R12"] - 0.5 * 1.0) / 0.5
    assert abs(slot1 - 2.0) <= 0.05
    assert rep.r12_flagged


def test_high_snr_check_validation():
    with pytest.raises(ValueError):
        high_snr_consistency_check(np.zeros(5), 1e3)
    with pytest.raises(ValueError):
        high_snr_consistency_check([-0.1, 0, 0, 0, 0], 1e8)
