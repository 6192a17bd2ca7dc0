from fractions import Fraction as F

import numpy as np
import pytest

from schur_stability.cases import (
    CournotParams,
    RickerOutcome,
    RickerParams,
    cournot_closed_form,
    cournot_polys,
    cournot_verify,
    ricker_conditions,
    ricker_grid_spec,
    ricker_quadratic,
    ricker_verdict,
)
from schur_stability.engine import Verdict
from schur_stability.errors import InvalidCell, InvalidInput
from schur_stability.regions import Axis, scan_region
from schur_stability.roots import find_roots
from schur_stability.scalar import Backend


# ---------- Cournot ----------

def test_cournot_polynomials(cournot_cubic):
    p1, p3 = cournot_polys(CournotParams(F(1, 2), 2))
    assert p1.coeffs == (F(-1, 4), F(0), F(-1, 2))
    assert p3 == cournot_cubic
    p1, p2 = cournot_polys(CournotParams(F(1, 4), 1, N=2))
    assert p1.coeffs == (F(-1, 8), F(-3, 4))
    assert p2.coeffs == (F(1, 8), F(-3, 4))


@pytest.mark.parametrize(
    "lam, k, expected",
    [(F(1, 4), 1, F(1, 2)), (F(3, 4), 3, F(127, 128)), (F(1, 2), 2, F(3, 4))],
)
def test_closed_form(lam, k, expected):
    assert cournot_closed_form(lam, k) == expected


def test_delay_one_identity():
    report = cournot_verify(CournotParams(F(1, 4), 1))
    assert report.stage1_sum == F(1, 2)
    assert report.stage1_identity
    assert report.closed_form_matches
    assert report.certificates[1].deciding_stage == 1


def check_cournot_report(lam, k):
    report = cournot_verify(CournotParams(lam, k))
    assert report.all_certified
    assert report.certificates[0].deciding_stage == 0
    assert report.stage_sums[0] == 1
    if k >= 2:
        assert report.stage1_sum == 1
    assert report.stage1_identity
    assert report.closed_form_matches
    assert report.closed_form < 1
    assert report.certified_by_k


@pytest.mark.parametrize("lam", [F(1, 10), F(1, 4), F(1, 2), F(3, 4), F(9, 10)])
@pytest.mark.parametrize("k", [1, 2, 3, 4, 6])
def test_cournot_acceptance_grid(lam, k):
    check_cournot_report(lam, k)


@pytest.mark.slow
@pytest.mark.parametrize("lam", [F(i, 10) for i in range(1, 10)])
@pytest.mark.parametrize("k", range(1, 11))
def test_cournot_full_grid(lam, k):
    check_cournot_report(lam, k)


def test_cournot_two_firms():
    report = cournot_verify(CournotParams(F(1, 2), 3, N=2))
    assert report.all_certified
    assert [c.deciding_stage for c in report.certificates] == [0, 0]
    assert report.stage_sums is None and report.closed_form is None


@pytest.mark.parametrize("lam, k, n", [(F(0), 1, 3), (F(1), 1, 3), (F(1, 2), 0, 3), (F(1, 2), 1, 4)])
def test_cournot_rejects_bad_params(lam, k, n):
    with pytest.raises(InvalidInput):
        CournotParams(lam, k, N=n)


def test_cournot_verify_needs_exact_lambda():
    params = CournotParams(0.5, 2)
    assert params.backend is Backend.FLOAT
    assert cournot_polys(params)[1].coeffs == (0.5, 0.0, -0.5)
    with pytest.raises(InvalidInput):
        cournot_verify(params)


# ---------- Ricker ----------

def test_ricker_quadratic_coefficients():
    assert ricker_quadratic(RickerParams(F(1), F(3), F(9))).coeffs == (F(2), F(-2))
    assert ricker_quadratic(RickerParams(F(2), F(3), F(0))).coeffs[1] == F(-2)
    assert RickerParams(F(1), F(6, 5), F(0)).t == F(5, 6)


def test_ricker_stage_zero_witness():
    params = RickerParams(F(1), F(1), F(1))
    assert ricker_quadratic(params).coeffs == (F(0), F(0))
    assert ricker_conditions(params) == (True, True)
    verdict = ricker_verdict(params)
    assert verdict.outcome is RickerOutcome.STABLE_SUFFICIENT
    assert verdict.stage == 0


def test_ricker_stage_one_witness():
    params = RickerParams(F(1), F(6, 5), F(198, 125))
    assert ricker_quadratic(params).coeffs == (F(3, 5), F(-1, 2))
    assert ricker_conditions(params) == (False, True)
    verdict = ricker_verdict(params)
    assert verdict.outcome is RickerOutcome.STABLE_SUFFICIENT
    assert verdict.stage == 1
    assert verdict.certificate.tail_sums == (F(11, 10), F(13, 20))


def test_ricker_unstable_outcomes():
    off_disk = ricker_verdict(RickerParams(F(5, 2), F(1), F(1)))
    assert off_disk.outcome is RickerOutcome.UNSTABLE_NECESSARY
    assert off_disk.certificate is None
    assert off_disk.stage is None

    bad_factor = ricker_verdict(RickerParams(F(1), F(3), F(9)))
    assert bad_factor.outcome is RickerOutcome.UNSTABLE_NECESSARY
    assert bad_factor.certificate.verdict is Verdict.DEFINITELY_UNSTABLE


def test_ricker_params_validation():
    with pytest.raises(InvalidCell):
        RickerParams(F(1), F(0), F(1))
    with pytest.raises(InvalidInput):
        RickerParams(F(0), F(1), F(1))
    with pytest.raises(InvalidInput):
        RickerParams(F(1), 1.0, F(1))


@pytest.mark.parametrize("r", [F(1), F(2)])
@pytest.mark.parametrize("max_stages", [0, 1])
def test_ricker_scan_matches_conditions(r, max_stages):
    spec = ricker_grid_spec(
        r,
        max_stages=max_stages,
        x_axis=Axis("b", F(0), F(3), 31),
        y_axis=Axis("a", F(1), F(3), 21),
    )
    grid = scan_region(spec, workers=1)
    expected = np.zeros_like(grid.certified_mask())
    for j, a in enumerate(grid.y_nodes):
        for i, b in enumerate(grid.x_nodes):
            first, second = ricker_conditions(RickerParams(r, a, b))
            expected[j, i] = first or (max_stages >= 1 and second)
    assert np.array_equal(grid.certified_mask(), expected)
    assert grid.soundness_violations() == []


@pytest.mark.slow
@pytest.mark.parametrize("r", [F(1), F(2)])
def test_ricker_certified_cells_have_roots_inside(r):
    grid = scan_region(ricker_grid_spec(r), workers=1)
    certified = grid.certified_mask()
    assert certified.any()
    for j, a in enumerate(grid.y_nodes):
        for i, b in enumerate(grid.x_nodes):
            if certified[j, i]:
                roots = find_roots(ricker_quadratic(RickerParams(r, a, b)))
                assert roots.max_modulus < 1 + 1e-9, (a, b)
