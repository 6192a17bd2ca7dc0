import json
from fractions import Fraction as F

import numpy as np
import pytest

from schur_stability.engine import degree2_st
from schur_stability.errors import InvalidInput, UnknownMapping
from schur_stability.poly import MonicPolynomial
from schur_stability.regions import (
    Axis,
    CellTruth,
    GridSpec,
    evaluate_cell,
    get_mapping,
    region_csv,
    region_pgm,
    region_ppm,
    region_summary,
    scan_region,
    stage_bytes,
    truth_label,
    write_region,
)
from schur_stability.scalar import Backend
from schur_stability.schemas import RegionSummaryOut


def small_spec(max_stages=3, backend=Backend.EXACT) -> GridSpec:
    return GridSpec(
        "quadratic-alpha-beta",
        x_axis=Axis("alpha", F(-5, 2), F(5, 2), 51),
        y_axis=Axis("beta", F(-3, 2), F(3, 2), 31),
        backend=backend,
        max_stages=max_stages,
    )


@pytest.fixture(scope="module")
def small_grid():
    return scan_region(small_spec(), workers=1)


def first_certifying_stage(alpha, beta, max_stages):
    for j in range(max_stages + 1):
        s, t = degree2_st(alpha, beta, j)
        if abs(s) + abs(t) < 1:
            return j
    return -1


def test_axis_nodes_are_exact():
    axis = Axis("alpha", F(-1), F(1), 5)
    assert axis.nodes() == (F(-1), F(-1, 2), F(0), F(1, 2), F(1))
    assert axis.nodes(Backend.FLOAT) == (-1.0, -0.5, 0.0, 0.5, 1.0)
    assert axis.spacing == F(1, 2)
    assert axis.describe() == {"name": "alpha", "min": "-1", "max": "1", "steps": 5}


@pytest.mark.parametrize("lo, hi, steps", [(F(0), F(1), 1), (F(1), F(1), 5), (F(2), F(1), 5)])
def test_axis_validation(lo, hi, steps):
    with pytest.raises(InvalidInput):
        Axis("x", lo, hi, steps)


def test_unknown_mapping_and_param():
    with pytest.raises(UnknownMapping):
        get_mapping("no-such-plane")
    with pytest.raises(UnknownMapping):
        GridSpec("no-such-plane")
    with pytest.raises(InvalidInput):
        GridSpec("quadratic-alpha-beta", params={"r": 1})
    with pytest.raises(InvalidInput):
        GridSpec("quadratic-alpha-beta", max_stages=-1)


def test_default_axes_and_params():
    spec = GridSpec("ricker-ba", params={"r": "3/2"})
    assert spec.params == {"r": F(3, 2)}
    assert spec.x_axis.name == "b" and spec.y_axis.name == "a"
    assert GridSpec("coeffs-n3").params == {"a2": F(0)}


def test_mappings_build_expected_polynomials():
    assert GridSpec("quadratic-alpha-beta").polynomial(F(1), F(1, 2)).coeffs == (F(1, 2), F(-1))
    assert GridSpec("coeffs-n2").polynomial(F(1, 3), F(1, 4)).coeffs == (F(1, 4), F(1, 3))
    n3 = GridSpec("coeffs-n3", params={"a2": "1/2"}).polynomial(F(1, 3), F(1, 4))
    assert n3.coeffs == (F(1, 4), F(1, 3), F(1, 2))


def check_stage_sets(grid, max_stages):
    for j, beta in enumerate(grid.y_nodes):
        for i, alpha in enumerate(grid.x_nodes):
            expected = first_certifying_stage(alpha, beta, max_stages)
            assert grid.stage[j, i] == expected, (alpha, beta)


def check_stage_one_closed_form(grid):
    for j, beta in enumerate(grid.y_nodes):
        for i, alpha in enumerate(grid.x_nodes):
            stage = grid.stage[j, i]
            within_one = 0 <= stage <= 1
            zero = abs(alpha) + abs(beta) < 1
            positive = beta > 0 and abs(alpha) < 1 and beta * (1 + abs(alpha)) < 1 + alpha * alpha
            assert within_one == (zero or positive), (alpha, beta)


def check_lower_half_plane(grid):
    # for beta <= 0 the stage-0 set is the whole open stability triangle
    for j, beta in enumerate(grid.y_nodes):
        if beta > 0:
            continue
        for i, alpha in enumerate(grid.x_nodes):
            stage = grid.stage[j, i]
            zero = abs(alpha) + abs(beta) < 1
            triangle = abs(alpha) < 1 + beta and beta > -1
            assert (stage == 0) == zero == triangle, (alpha, beta)
            assert (stage >= 0) == triangle, (alpha, beta)


def test_stage_sets_pointwise(small_grid):
    check_stage_sets(small_grid, 3)


def test_certified_cells_are_stable(small_grid):
    assert small_grid.soundness_violations() == []
    assert not (small_grid.certified_mask() & ~small_grid.truth_mask(CellTruth.STABLE)).any()


def test_truth_labels_on_the_quadratic_locus(small_grid):
    for j, beta in enumerate(small_grid.y_nodes):
        for i, alpha in enumerate(small_grid.x_nodes):
            truth = small_grid.truth_at(j, i)
            # x^2 - alpha*x + beta: a0 = beta, a1 = -alpha
            inside = beta < 1 and beta - alpha > -1 and beta + alpha > -1
            closed = beta <= 1 and beta - alpha >= -1 and beta + alpha >= -1
            if inside:
                assert truth is CellTruth.STABLE
            elif closed:
                assert truth is CellTruth.BOUNDARY
            else:
                assert truth is CellTruth.UNSTABLE


def test_lower_half_plane_gains_nothing_after_stage_zero(small_grid):
    check_lower_half_plane(small_grid)


def test_stage_one_set_matches_closed_form(small_grid):
    check_stage_one_closed_form(small_grid)


def test_more_stages_never_lose_cells():
    counts = []
    for max_stages in range(4):
        grid = scan_region(small_spec(max_stages=max_stages), workers=1)
        counts.append(int(grid.certified_mask().sum()))
    assert counts == sorted(counts)
    assert counts[-1] > counts[0]


@pytest.mark.slow
def test_full_grid_matches_stage_inequalities():
    grid = scan_region(GridSpec("quadratic-alpha-beta", max_stages=3), workers=1)
    assert grid.stage.shape == (301, 501)
    check_stage_sets(grid, 3)
    check_stage_one_closed_form(grid)
    check_lower_half_plane(grid)
    assert grid.soundness_violations() == []
    assert not (grid.certified_mask() & ~grid.truth_mask(CellTruth.STABLE)).any()
    counts = [int(((grid.stage >= 0) & (grid.stage <= s)).sum()) for s in range(4)]
    assert counts[0] < counts[1] < counts[2] < counts[3]


def test_invalid_ricker_cell():
    spec = GridSpec("ricker-ba", y_axis=Axis("a", F(-1), F(1), 3))
    assert evaluate_cell(spec, F(1), F(0)) == (-2, CellTruth.INVALID)
    grid = scan_region(GridSpec("ricker-ba", x_axis=Axis("b", F(0), F(1), 3), y_axis=Axis("a", F(-1), F(1), 3)))
    assert (grid.stage[1] == -2).all()
    assert grid.truth_counts()["Invalid"] == 3
    assert (stage_bytes(grid)[1] == 255).all()


def test_truth_label_beyond_degree_two(example_quintic):
    assert truth_label(example_quintic) is CellTruth.STABLE
    assert truth_label(MonicPolynomial((F(0), F(1), F(0)))) is CellTruth.BOUNDARY
    assert truth_label(MonicPolynomial((F(1, 2), F(7, 5), F(0)))) is CellTruth.UNSTABLE


def test_float_backend_mostly_agrees_with_exact():
    exact = scan_region(small_spec(max_stages=2), workers=1)
    floats = scan_region(small_spec(max_stages=2, backend=Backend.FLOAT), workers=1)
    assert floats.x_nodes == tuple(float(x) for x in exact.x_nodes)
    agree = (floats.stage == exact.stage).mean()
    assert agree > 0.95


def test_parallel_scan_matches_serial():
    spec = small_spec(max_stages=2)
    serial = scan_region(spec, workers=1)
    parallel = scan_region(spec, workers=2)
    assert np.array_equal(serial.stage, parallel.stage)
    assert np.array_equal(serial.truth, parallel.truth)


def test_csv_emitter(small_grid):
    lines = region_csv(small_grid).splitlines()
    assert lines[0] == "x,y,stage,truth"
    assert len(lines) == 1 + 51 * 31
    assert lines[1] == "-5/2,-3/2,-1,Unstable"


def test_summary(small_grid):
    summary = region_summary(small_grid)
    assert summary["cells"] == 51 * 31
    assert summary["soundness_violations"] == 0
    assert summary["certified"] == sum(v for k, v in summary["stage_counts"].items() if int(k) >= 0)
    assert sum(summary["truth_counts"].values()) == 51 * 31
    assert 0 < summary["stable_coverage"] <= 1
    json.dumps(summary)


def test_raster_emitters(small_grid):
    pgm = region_pgm(small_grid)
    ppm = region_ppm(small_grid)
    assert pgm.startswith(b"P5")
    assert ppm.startswith(b"P6")
    assert len(pgm) >= 51 * 31
    assert len(ppm) >= 3 * 51 * 31
    assert pgm == region_pgm(small_grid)


def test_stage_bytes_palette(small_grid):
    palette = stage_bytes(small_grid)
    assert palette.dtype == np.uint8
    assert palette.shape == (31, 51)
    assert set(np.unique(palette)) <= {0, 1, 2, 3, 4}
    assert ((palette > 0) == small_grid.certified_mask()).all()


def test_write_region(small_grid, tmp_path):
    path = write_region(small_grid, tmp_path / "scan.json")
    assert json.loads(path.read_text())["mapping"] == "quadratic-alpha-beta"
    assert write_region(small_grid, tmp_path / "scan.out", fmt="pgm").read_bytes().startswith(b"P5")
    with pytest.raises(InvalidInput):
        write_region(small_grid, tmp_path / "scan.bmp")


def test_json_emitter_matches_wire_model(small_grid, tmp_path):
    document = json.loads(write_region(small_grid, tmp_path / "scan.json").read_text())
    assert set(document) == set(RegionSummaryOut.model_fields)
    assert RegionSummaryOut.model_validate(document) == RegionSummaryOut.from_grid(small_grid)
    assert document["backend"] == "exact"


def test_scan_progress_is_optional(capsys):
    spec = small_spec(max_stages=0)
    quiet = scan_region(spec, workers=1)
    assert "scan quadratic-alpha-beta:" not in capsys.readouterr().err
    shown = scan_region(spec, workers=1, progress=True)
    assert "scan quadratic-alpha-beta:" in capsys.readouterr().err
    assert np.array_equal(quiet.stage, shown.stage)
