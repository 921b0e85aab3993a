import numpy as np
import pytest

from kgdecay.bands import LittlewoodPaleyBank
from kgdecay.bumps import bump_derivative_field, bump_field
from kgdecay.errors import ConfigurationError
from kgdecay.grid import (
    Field,
    Grid,
    coordinate_field,
    forward_transform,
    linf_norm,
    spatial_derivative,
)
from kgdecay.propagator import (
    CauchyData,
    boost_commuted_data,
    data_support_radius,
    evaluate_at_points,
    evolve,
    flat_energy,
    flat_energy_at,
    iterated_boost_data,
    rescale_high_frequency,
)

from oracles import rk4_mode_oracle, single_mode_solution

GRID = Grid(1, 1024, 64.0)
ZERO = Field(GRID, np.zeros(GRID.shape))


def mode_index(grid, xi):
    return int(round(xi * grid.box_length / (2.0 * np.pi)))


def mode_field(grid, xi, amp=1.0):
    x = grid.axis_coordinates
    return Field(grid, amp * np.cos(xi * x))


def lattice_xi(grid, target):
    return 2.0 * np.pi * mode_index(grid, target) / grid.box_length


def bump_pair(grid, sharpness=8.0, mass=1.0):
    f = bump_field(grid, width=1.0, sharpness=sharpness)
    g = bump_derivative_field(grid, 0, width=1.0, sharpness=sharpness) * 0.5 + f * 0.25
    return CauchyData(f, g, 2.0, mass)


def test_cauchy_data_validation():
    other = Grid(1, 512, 64.0)
    with pytest.raises(Exception):
        CauchyData(ZERO, Field(other, np.zeros(other.shape)), 2.0, 1.0)
    with pytest.raises(ValueError):
        CauchyData(ZERO, ZERO, 2.0, -1.0)


def test_single_mode_closed_form():
    xi0 = lattice_xi(GRID, 1.5)
    data = CauchyData(mode_field(GRID, xi0), ZERO, 2.0, 1.0)
    phi_exact, dphi_exact, _ = single_mode_solution(xi0, 1.0, 1.0, 0.0)
    x = GRID.axis_coordinates
    st = evolve(data, 7.0)
    assert np.max(np.abs(st.phi.values - phi_exact(5.0, x))) <= 1e-10
    assert np.max(np.abs(st.dphi_dt.values - dphi_exact(5.0, x))) <= 1e-10


def test_zero_frequency_massless_mode_grows_linearly():
    c = 0.37
    data = CauchyData(ZERO, Field(GRID, np.full(GRID.shape, c)), 2.0, 0.0)
    st = evolve(data, 9.0)
    assert np.max(np.abs(st.phi.values - c * 7.0)) <= 1e-10


def test_identity_at_prescription_time():
    data = bump_pair(GRID)
    st = evolve(data, 2.0)
    assert np.max(np.abs(st.phi.values - data.f.values)) <= 1e-12
    assert np.max(np.abs(st.dphi_dt.values - data.g.values)) <= 1e-12


def test_flat_energy_conserved():
    rng = np.random.default_rng(0)
    bank = LittlewoodPaleyBank.for_grid(GRID)
    f = bank.project(Field(GRID, rng.standard_normal(GRID.shape)), 2)
    g = bank.project(Field(GRID, rng.standard_normal(GRID.shape)), 1)
    data = CauchyData(f, g, 2.0, 0.7)
    e0 = flat_energy(data)
    for t in (3.0, 10.0, 40.0):
        assert abs(flat_energy_at(evolve(data, t)) - e0) <= 1e-10 * e0


def test_evolve_matches_rk4_oracle():
    rng = np.random.default_rng(1)
    g = Grid(1, 256, 32.0)
    bank = LittlewoodPaleyBank.for_grid(g)
    f = bank.project(Field(g, rng.standard_normal(g.shape)), 1)
    gg = bank.project(Field(g, rng.standard_normal(g.shape)), 1)
    data = CauchyData(f, gg, 2.0, 1.0)
    st = evolve(data, 6.0)
    phi_rk4, dphi_rk4 = rk4_mode_oracle(data, 6.0)
    scale = linf_norm(st.phi)
    assert np.max(np.abs(st.phi.values - phi_rk4.values)) <= 1e-8 * scale
    assert np.max(np.abs(st.dphi_dt.values - dphi_rk4.values)) <= 1e-8 * max(
        linf_norm(st.dphi_dt), scale
    )


def test_linearity():
    d1 = bump_pair(GRID)
    f2 = bump_field(GRID, center=2.0, width=0.8, sharpness=8.0)
    d2 = CauchyData(f2, ZERO * 0.0, 2.0, d1.mass)
    a, b = 1.7, -0.4
    combo = CauchyData(d1.f * a + d2.f * b, d1.g * a + d2.g * b, 2.0, d1.mass)
    t = 11.0
    lhs = evolve(combo, t).phi.values
    rhs = a * evolve(d1, t).phi.values + b * evolve(d2, t).phi.values
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * max(np.max(np.abs(lhs)), 1.0)


def test_evaluate_at_points_matches_evolve_on_grid():
    data = bump_pair(GRID)
    t = 6.5
    st = evolve(data, t)
    sel = np.arange(0, GRID.points_per_axis, 37)
    pts = GRID.axis_coordinates[sel].reshape(-1, 1)
    phi, dphi, grad = evaluate_at_points(data, np.full(len(sel), t), pts)
    scale = linf_norm(st.phi)
    assert np.max(np.abs(phi - st.phi.values[sel])) <= 1e-10 * scale
    assert np.max(np.abs(dphi - st.dphi_dt.values[sel])) <= 1e-10 * scale
    assert np.max(np.abs(grad[:, 0] - st.grad_phi[0].values[sel])) <= 1e-10 * scale


def test_evaluate_at_points_off_grid_closed_form():
    xi0 = lattice_xi(GRID, 2.0)
    data = CauchyData(mode_field(GRID, xi0, 0.8), mode_field(GRID, xi0, -0.3), 2.0, 1.3)
    phi_exact, dphi_exact, dx_exact = single_mode_solution(xi0, 1.3, 0.8, -0.3)
    rng = np.random.default_rng(2)
    ts = rng.uniform(2.0, 12.0, size=20)
    xs = rng.uniform(-20.0, 20.0, size=(20, 1))
    phi, dphi, grad = evaluate_at_points(data, ts, xs)
    assert np.max(np.abs(phi - phi_exact(ts - 2.0, xs[:, 0]))) <= 1e-10
    assert np.max(np.abs(dphi - dphi_exact(ts - 2.0, xs[:, 0]))) <= 1e-10
    assert np.max(np.abs(grad[:, 0] - dx_exact(ts - 2.0, xs[:, 0]))) <= 1e-10


def test_evaluate_at_points_at_t0_returns_data():
    data = bump_pair(GRID)
    sel = np.arange(300, 700, 41)
    pts = GRID.axis_coordinates[sel].reshape(-1, 1)
    phi, dphi, _ = evaluate_at_points(data, np.full(len(sel), 2.0), pts)
    assert np.max(np.abs(phi - data.f.values[sel])) <= 1e-10
    assert np.max(np.abs(dphi - data.g.values[sel])) <= 1e-10


def test_evaluate_at_points_empty():
    data = bump_pair(GRID)
    phi, dphi, grad = evaluate_at_points(data, [], np.zeros((0, 1)))
    assert phi.shape == (0,)
    assert grad.shape == (0, 1)


def test_boost_data_reads_off_formulas_for_zero_f():
    g_bump = bump_field(GRID, width=1.0, sharpness=8.0)
    data = CauchyData(ZERO, g_bump, 2.0, 1.0)
    boosted = boost_commuted_data(data, 0)
    x = coordinate_field(GRID, 0)
    assert np.max(np.abs(boosted.f.values - (x * g_bump).values)) <= 1e-12
    spectral_dg = spatial_derivative(g_bump, 0)
    assert np.max(np.abs(boosted.g.values - 2.0 * spectral_dg.values)) <= 1e-12
    # sanity against the closed form, up to spectral representation error
    dg = bump_derivative_field(GRID, 0, width=1.0, sharpness=8.0)
    assert np.max(np.abs(boosted.g.values - 2.0 * dg.values)) <= 1e-4 * linf_norm(dg)


def test_boost_data_massless_drops_mass_term():
    data0 = bump_pair(GRID, mass=0.0)
    data1 = CauchyData(data0.f, data0.g, 2.0, 1.0)
    b0 = boost_commuted_data(data0, 0)
    b1 = boost_commuted_data(data1, 0)
    x = coordinate_field(GRID, 0)
    diff = b1.g - b0.g + x * data0.f  # m^2 = 1 term restored
    assert np.max(np.abs(diff.values)) <= 1e-12 * max(linf_norm(b0.g), 1.0)


def test_boost_requires_t0_two():
    data = CauchyData(bump_field(GRID, width=1.0, sharpness=8.0), ZERO, 0.0, 1.0)
    with pytest.raises(ConfigurationError):
        boost_commuted_data(data, 0)


def test_boost_commutation_two_path():
    g = Grid(1, 2048, 64.0)
    f = bump_field(g, width=1.0, sharpness=8.0)
    gg = bump_derivative_field(g, 0, width=1.0, sharpness=8.0) * 0.5 + f * 0.25
    data = CauchyData(f, gg, 2.0, 1.0)
    boosted = boost_commuted_data(data, 0)
    x = g.axis_coordinates
    for t in (3.0, 5.0, 9.0):
        st = evolve(data, t)
        direct = x * st.dphi_dt.values + t * st.grad_phi[0].values
        via = evolve(boosted, t).phi.values
        assert np.max(np.abs(direct - via)) <= 1e-8 * np.max(np.abs(direct))


def test_iterated_boost_matches_nested():
    data = bump_pair(GRID)
    once = boost_commuted_data(boost_commuted_data(data, 0), 0)
    twice = iterated_boost_data(data, (0, 0))
    assert np.max(np.abs(once.f.values - twice.f.values)) == 0.0


def test_rescale_band_zero_is_identity():
    g = Grid(1, 512, 64.0)
    bank = LittlewoodPaleyBank.for_grid(g)
    f = bank.project(bump_field(g, width=1.0), 0)
    gg = bank.project(bump_field(g, width=0.7, amplitude=0.5), 0)
    data = CauchyData(f, gg, 2.0, 1.0)
    out = rescale_high_frequency(data, 0)
    assert out.grid == g
    assert out.mass == data.mass
    assert np.max(np.abs(out.f.values - f.values)) <= 1e-12 * max(linf_norm(f), 1.0)


def test_rescale_moves_pure_mode_to_unit_frequency():
    k = 3
    xi0 = 2.0**k
    g = Grid(1, 512, 16.0 * np.pi)  # lattice contains xi = 8 and 1 exactly
    data = CauchyData(mode_field(g, xi0), Field(g, np.zeros(g.shape)), 2.0, 1.0)
    out = rescale_high_frequency(data, k)
    coeffs = np.abs(forward_transform(out.f).coefficients)
    peak = out.grid.frequency_norm.ravel()[np.argmax(coeffs.ravel())]
    assert abs(peak - 1.0) <= 1e-12
    assert out.mass == data.mass / 2.0**k
    assert out.grid.box_length == g.box_length * 2.0**k
    assert out.grid.spacing == g.spacing


def test_rescale_two_path_consistency():
    k = 2
    g = Grid(1, 1024, 64.0)
    bank = LittlewoodPaleyBank.for_grid(g)
    f = bank.project(bump_field(g, width=0.5, sharpness=4.0), k)
    gg = bank.project(bump_field(g, width=0.4, amplitude=0.6, sharpness=4.0), k)
    data = CauchyData(f, gg, 2.0, 1.0)
    tilde = rescale_high_frequency(data, k)
    t = 10.0
    st = evolve(tilde, t)
    sel = np.arange(0, tilde.grid.points_per_axis, 257)
    pts = tilde.grid.axis_coordinates[sel]
    src_t = np.full(len(sel), 2.0 + (t - 2.0) / 2.0**k)
    phi_src, _, _ = evaluate_at_points(data, src_t, (pts / 2.0**k).reshape(-1, 1))
    assert np.max(np.abs(st.phi.values[sel] - phi_src)) <= 1e-8 * linf_norm(st.phi)


def test_rescale_rejects_wideband_data():
    data = bump_pair(GRID)  # full-spectrum bump is not band limited
    with pytest.raises(ConfigurationError):
        rescale_high_frequency(data, 2)


def test_rescaled_spectrum_in_unit_annulus():
    k = 3
    g = Grid(1, 1024, 64.0)
    bank = LittlewoodPaleyBank.for_grid(g)
    f = bank.project(bump_field(g, width=0.5, sharpness=4.0), k)
    data = CauchyData(f, Field(g, np.zeros(g.shape)), 2.0, 1.0)
    out = rescale_high_frequency(data, k)
    coeffs = np.abs(forward_transform(out.f).coefficients)
    r = out.grid.frequency_norm
    outside = (r < 0.5 * (1 - 1e-9)) | (r > 2.0 * (1 + 1e-9))
    assert np.max(coeffs[outside]) <= 1e-10 * np.max(coeffs)


def test_support_radius_detection():
    data = bump_pair(GRID)
    r = data_support_radius(data)
    assert 0.5 <= r <= 1.0
