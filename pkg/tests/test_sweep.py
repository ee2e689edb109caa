import math
import warnings

import numpy as np
import pytest

from conftest import DIPOLE, SILVER_OMEGA_SP
from sppfriction.config import CONSTANTS
from sppfriction.errors import DomainError, OptimizationError
from sppfriction.sweep import (
    MATERIALS,
    Axis,
    SweepSpec,
    evaluate_normalized,
    golden_section_max,
    optimize_1d,
    physical_report,
    run_sweep,
)


def test_silver_preset():
    assert MATERIALS["silver"].omega_sp / (2 * math.pi) == pytest.approx(646e12, rel=1e-15)


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(name="q", min=0, max=1, count=3),
        dict(name="a", min=0, max=1, count=1),
        dict(name="a", min=1, max=1, count=3),
        dict(name="a", min=0, max=1, count=3, scale="cubic"),
        dict(name="a", min=0, max=1, count=3, scale="log"),
    ],
)
def test_axis_validation(kwargs):
    with pytest.raises(DomainError):
        Axis(**kwargs)


def test_spec_validation():
    a = Axis("a", 0.1, 1.0, 3)
    with pytest.raises(DomainError):
        SweepSpec(a, "pe_steady", Axis("a", 0.1, 1.0, 3))
    with pytest.raises(DomainError):
        SweepSpec(a, "pe_steady", Axis("v", 1e6, 1e7, 3))
    with pytest.raises(DomainError):
        SweepSpec(a, "temperature")


def test_row_major_order_and_point_equivalence():
    spec = SweepSpec(Axis("a", 0.1, 1.0, 3), "normalized_force", Axis("b", 0.5, 2.0, 4))
    records = run_sweep(spec)
    assert [(r["a"], r["b"]) for r in records[:5]] == [(0.1, 0.5), (0.1, 1.0), (0.1, 1.5), (0.1, 2.0), (0.55, 0.5)]
    for r in records:
        assert r["normalized_force"] == evaluate_normalized(r["a"], r["b"], "normalized_force")


def test_one_dimensional_sweep_equals_single_points():
    spec = SweepSpec(Axis("b", 0.1, 3.0, 7, "log"), "pe_steady", fixed={"a": 0.5})
    values = [r["pe_steady"] for r in run_sweep(spec)]
    assert values == [evaluate_normalized(0.5, b, "pe_steady") for b in np.geomspace(0.1, 3.0, 7)]


def test_worker_count_does_not_change_output():
    spec = SweepSpec(Axis("a", 0.05, 2.0, 9), "pe_steady", Axis("b", 0.05, 2.0, 9))
    assert run_sweep(spec, threads=1) == run_sweep(spec, threads=3)


def test_zero_velocity_points_are_null():
    fixed = dict(omega0=SILVER_OMEGA_SP, omega_sp=SILVER_OMEGA_SP, d=3e-9, gamma_eg=DIPOLE)
    spec = SweepSpec(Axis("v", -1e7, 1e7, 3), "pe_steady", fixed=fixed)
    records = run_sweep(spec)
    assert records[1]["pe_steady"] is None
    assert records[0]["pe_steady"] == records[2]["pe_steady"]


def test_missing_fixed_field_is_reported():
    spec = SweepSpec(Axis("v", 1e6, 1e7, 3), "pe_steady", fixed={"d": 3e-9})
    with pytest.raises(DomainError, match="omega0"):
        run_sweep(spec)


def test_population_maximum_on_diagonal():
    n = 200
    spec = SweepSpec(Axis("a", 0.05, 2.0, n), "pe_steady", Axis("b", 0.05, 2.0, n))
    values = np.array([r["pe_steady"] for r in run_sweep(spec)]).reshape(n, n)
    i, j = np.unravel_index(np.argmax(values), values.shape)
    assert abs(i - j) <= 1


def test_inversion_threshold_rises_with_distance():
    fixed = dict(omega0=SILVER_OMEGA_SP, omega_sp=SILVER_OMEGA_SP, gamma_eg=DIPOLE)
    distances = np.linspace(1e-9, 6e-9, 6)
    velocities = np.linspace(0.01, 0.45, 441) * CONSTANTS.c
    spec = SweepSpec(
        Axis("v", velocities[0], velocities[-1], velocities.size),
        "pe_steady",
        Axis("d", distances[0], distances[-1], distances.size),
        fixed=fixed,
    )
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        records = run_sweep(spec)
    values = np.array([r["pe_steady"] for r in records]).reshape(velocities.size, distances.size)
    thresholds = []
    for column in values.T:
        above = np.nonzero(column > 0.5)[0]
        assert above.size > 0
        thresholds.append(velocities[above[0]])
    assert np.all(np.diff(thresholds) > 0)


def test_golden_section_on_parabola():
    x, fx = golden_section_max(lambda x: -((x - 0.3) ** 2), -1.0, 2.0, 1e-8)
    assert x == pytest.approx(0.3, abs=1e-8)
    assert fx == pytest.approx(0.0, abs=1e-15)


def test_golden_section_failures():
    with pytest.raises(OptimizationError):
        golden_section_max(lambda x: 1.0, 0.0, 1.0, 1e-6)
    with pytest.raises(OptimizationError):
        golden_section_max(lambda x: x, 0.0, 1.0, 1e-6)
    with pytest.raises(OptimizationError):
        golden_section_max(lambda x: -x * x, 1.0, 0.0, 1e-6)


def test_population_optimum():
    result = optimize_1d("pe_steady_diag", (0.01, 1.0), tol=1e-5)
    assert result.argmax == pytest.approx(0.148, abs=0.005)
    assert result.max == pytest.approx(0.515, abs=0.005)


def test_force_optimum():
    result = optimize_1d("normalized_force_boundary", (0.2, 5.0), tol=1e-5)
    assert result.argmax == pytest.approx(1.62, abs=0.05)


@pytest.mark.parametrize(
    "objective, bracket",
    [("pe_steady_diag", (0.01, 1.0)), ("normalized_force_boundary", (0.2, 5.0))],
)
def test_optimizer_within_one_cell_of_dense_sweep(objective, bracket):
    from sppfriction.sweep import objective_function

    f = objective_function(objective)
    grid = np.linspace(*bracket, 2000)
    best = grid[int(np.argmax([f(b) for b in grid]))]
    result = optimize_1d(objective, bracket, tol=1e-6)
    assert abs(result.argmax - best) <= grid[1] - grid[0]


def test_unknown_objective():
    with pytest.raises(DomainError):
        optimize_1d("fastest", (0.1, 1.0))


def silver_report():
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        return physical_report(
            MATERIALS["silver"], 3e-9, MATERIALS["silver"].omega_sp, DIPOLE, (0.005 * CONSTANTS.c, 0.45 * CONSTANTS.c, 400)
        )


def test_silver_report_optimum():
    report = silver_report()
    assert report.v_star_over_c == pytest.approx(0.273, rel=0.01)
    assert report.v_star_over_omega_sp_d == pytest.approx(6.72, rel=0.01)
    assert len(report.records) == 400
    assert all(r.power >= 0 for r in report.records)


def test_silver_report_low_velocity_population_small():
    # holds up to ~0.02c; see the xfail below for the 0.05c version
    for r in silver_report().records:
        if r.v_over_c < 0.02:
            assert r.pe_steady < 0.01


@pytest.mark.xfail(strict=True, reason="P_e,inf reaches 0.27 at 0.05c; see decisions ledger")
def test_silver_report_population_below_one_percent_up_to_five_percent_c():
    for r in silver_report().records:
        if r.v_over_c < 0.05:
            assert r.pe_steady < 0.01


def test_report_warns_once_for_fast_range():
    with pytest.warns(RuntimeWarning) as caught:
        physical_report(MATERIALS["silver"], 3e-9, MATERIALS["silver"].omega_sp, DIPOLE, (0.2 * CONSTANTS.c, 0.4 * CONSTANTS.c, 20))
    assert len(caught) == 1
