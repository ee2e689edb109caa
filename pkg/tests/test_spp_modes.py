import math

import numpy as np
import pytest
from scipy.integrate import quad

from conftest import make_config
from sppfriction.config import CONSTANTS
from sppfriction.dynamics import pe_steady
from sppfriction.errors import CutoffError, DegenerateInputError, PreconditionError
from sppfriction.friction import friction_steady
from sppfriction.quasistatic import gamma_pair, normalized_pair
from sppfriction.spp_modes import (
    DrudeSlab,
    ModeGrid,
    SPPMode,
    anti_hermitian_c_zz,
    brute_force_friction,
    brute_force_rates,
    default_schedule,
    dispersive_weight,
    mode_field_z,
    normalization_integral,
    refinement_study,
    row_sums,
)

RNG = np.random.default_rng(7)
EPS0 = CONSTANTS.eps0


def coarse_grid(config, dk_d=0.02):
    return default_schedule(config, levels=1, finest_dk_d=dk_d)[0]


def test_dispersive_weights():
    assert dispersive_weight("above") == 1.0
    assert dispersive_weight("below") == 3.0
    slab = DrudeSlab(omega_sp=1e15)
    assert slab.d_omega_eps(1e15, -1.0) == pytest.approx(3.0 * EPS0, rel=1e-14)
    assert slab.d_omega_eps(1e15, 1.0) == EPS0


def test_drude_resonance_condition():
    slab = DrudeSlab(omega_sp=3.7e15)
    assert slab.permittivity(3.7e15, -1e-9) == pytest.approx(-EPS0, rel=1e-15)


def test_field_magnitude_contract():
    mode = SPPMode(kx=2.0e8, ky=-1.1e8, S0=1e-12, omega=1e15)
    d = 3e-9
    ez2 = mode_field_z(mode, d)
    assert ez2 * 2 * EPS0 * mode.S0 == pytest.approx(mode.k * math.exp(-2 * mode.k * d), rel=1e-13)
    assert mode_field_z(mode, 0.0) == pytest.approx(mode.k / (2 * EPS0 * mode.S0), rel=1e-13)
    # the vector accessor agrees with the squared z contract
    assert abs(mode.field(0.0, 0.0, d)[2]) ** 2 == pytest.approx(ez2, rel=1e-13)


def test_field_is_minus_gradient_of_potential():
    mode = SPPMode(kx=1.3e8, ky=0.4e8, S0=1e-12, omega=1e15)
    x, y, z, h = 1e-9, -2e-9, 2e-9, 1e-13
    grad = [
        (mode.potential(x + h, y, z) - mode.potential(x - h, y, z)) / (2 * h),
        (mode.potential(x, y + h, z) - mode.potential(x, y - h, z)) / (2 * h),
        (mode.potential(x, y, z + h) - mode.potential(x, y, z - h)) / (2 * h),
    ]
    field = mode.field(x, y, z)
    for g, e in zip(grad, field):
        assert -g == pytest.approx(e, rel=1e-6)


def test_mode_normalization_random_wavevectors():
    for _ in range(50):
        kx, ky = RNG.uniform(-1e9, 1e9, 2)
        mode = SPPMode(kx=kx, ky=ky, S0=RNG.uniform(1e-14, 1e-10), omega=1e15)
        assert normalization_integral(mode) == pytest.approx(1.0, abs=1e-10)


def test_mode_normalization_numeric_z_integral():
    mode = SPPMode(kx=3e8, ky=-4e8, S0=2e-13, omega=1e15)
    density = lambda z: np.sum(np.abs(mode.field(0.0, 0.0, z)) ** 2)
    depth = 40.0 / mode.k
    above = quad(density, 0.0, depth, epsabs=0, epsrel=1e-12, limit=200)[0]
    below = quad(density, -depth, 0.0, epsabs=0, epsrel=1e-12, limit=200)[0]
    total = 0.5 * mode.S0 * (above * EPS0 * dispersive_weight("above") + below * EPS0 * dispersive_weight("below"))
    assert total == pytest.approx(1.0, rel=1e-9)


def test_grid_invariants():
    with pytest.raises(PreconditionError):
        ModeGrid(dk=1.0, k_max=10.0, eta=1.0)
    with pytest.raises(PreconditionError):
        ModeGrid(dk=1.0, k_max=100.0, eta=0.0)
    grid = ModeGrid(dk=1.0, k_max=100.0, eta=1.0)
    assert grid.S0 == pytest.approx((2 * math.pi) ** 2)
    axis = grid.axis()
    assert np.all(np.diff(np.abs(axis)) >= 0)


def test_under_resolved_broadening_rejected():
    config = make_config(1.0, 1.0)
    grid = coarse_grid(config)
    thin = ModeGrid(dk=grid.dk, k_max=grid.k_max, eta=2.0 * abs(config.v) * grid.dk)
    with pytest.raises(PreconditionError):
        brute_force_rates(config, thin)


def test_cutoff_error_when_line_outside_grid():
    config = make_config(1.0, 1.0)
    grid = coarse_grid(config)
    small = ModeGrid(dk=grid.dk, k_max=70 * grid.dk, eta=grid.eta)
    with pytest.raises(CutoffError):
        brute_force_rates(config, small)


def test_zero_velocity_rejected():
    from sppfriction.config import SystemConfig

    config = SystemConfig(omega0=1e15, omega_sp=1e15, d=3e-9, v=0.0, gamma_eg=1e-29)
    with pytest.raises(DegenerateInputError):
        brute_force_rates(config, ModeGrid(dk=1e7, k_max=1e10, eta=1.0))


def test_ky_parity():
    config = make_config(0.5, 1.0)
    grid = coarse_grid(config)
    _, pos = row_sums(config, grid, ky_side="positive")
    _, neg = row_sums(config, grid, ky_side="negative")
    np.testing.assert_allclose(pos, neg, rtol=1e-13)


def test_row_sums_independent_of_thread_count():
    config = make_config(0.5, 1.0)
    grid = coarse_grid(config)
    _, one = row_sums(config, grid, threads=1)
    _, four = row_sums(config, grid, threads=4)
    assert np.array_equal(one, four)


def test_velocity_reversal_symmetries():
    forward, backward = make_config(1.0, 1.62), make_config(1.0, 1.62, v_sign=-1.0)
    grid = coarse_grid(forward)
    assert brute_force_rates(forward, grid).gamma_plus == pytest.approx(
        brute_force_rates(backward, grid).gamma_plus, rel=1e-12
    )
    p = pe_steady(gamma_pair(forward))
    assert brute_force_friction(backward, grid, p) == pytest.approx(-brute_force_friction(forward, grid, p), rel=1e-12)


def test_friction_vanishes_without_ascending_channel():
    # at a = b = 6 the ascending rate is ~e^-24 of the descending one
    slow, fast = make_config(6.0, 6.0), make_config(0.5, 1.0)
    p_fast = pe_steady(gamma_pair(fast))
    scale = abs(brute_force_friction(fast, coarse_grid(fast), p_fast))
    assert abs(brute_force_friction(slow, coarse_grid(slow), 0.0)) < 1e-6 * scale


def test_anti_hermitian_part_matches_closed_form():
    config = make_config(0.5, 1.0)
    grid = default_schedule(config)[-1]
    g_plus, g_minus = normalized_pair(0.5, 1.0)
    got = anti_hermitian_c_zz(config, grid, config.omega0)
    assert got == pytest.approx((g_plus - g_minus) / config.d**3, rel=0.01)


def test_anti_hermitian_part_changes_sign_in_gain_regime():
    loss = make_config(1.0, 1.0)
    gain = make_config(0.148, 0.148)
    assert anti_hermitian_c_zz(loss, coarse_grid(loss), loss.omega0) > 0
    assert anti_hermitian_c_zz(gain, coarse_grid(gain), gain.omega0) < 0


def test_population_ratio_under_refinement():
    config = make_config(0.148, 0.148)
    ratios = []
    for grid in default_schedule(config):
        pair = brute_force_rates(config, grid)
        ratios.append(pair.gamma_minus / pair.total)
    assert abs(ratios[-1] - 0.515) < 0.005
    assert abs(ratios[-1] - pe_steady(gamma_pair(config))) <= abs(ratios[0] - pe_steady(gamma_pair(config))) + 1e-4


def test_lorentzian_kernel_available_and_biased_on_default_grid():
    config = make_config(1.0, 1.0)
    grid = default_schedule(config)[-1]
    lorentz = ModeGrid(dk=grid.dk, k_max=grid.k_max, eta=grid.eta, broadening="lorentzian")
    exact = gamma_pair(config).gamma_plus
    gauss_err = abs(brute_force_rates(config, grid).gamma_plus / exact - 1)
    lorentz_err = abs(brute_force_rates(config, lorentz).gamma_plus / exact - 1)
    assert gauss_err < lorentz_err


@pytest.mark.slow
def test_refinement_study_single_config():
    records = refinement_study(make_config(2.0, 1.0))
    assert len(records) == 3
    assert records[-1].max_error < 0.01
    assert records[-1].dk == pytest.approx(records[0].dk / 4)
