"""Verification suites: each suite exercises one inequality or construction
at the configured desk scale and returns named checks with thresholds.

Every suite maps to exactly one verified statement, recorded as a citation
string in the summary.  Checks are deterministic functions of (config, seed).
"""

from __future__ import annotations

import numpy as np

from .bands import LittlewoodPaleyBank
from .bumps import bump_derivative_field, bump_field
from .config import RunConfig
from .decay import (
    highfreq_check,
    interpolation_check,
    lowfreq_check,
    localized_decay_check,
)
from .grid import Field, Grid, l2_norm, linf_norm
from .hyperboloid import energy, global_sobolev_check, pointwise_energy_check
from .partition import build_partition, overlap_bound, w_k1_comparability
from .propagator import CauchyData

WAVE_BRANCH_MASS = 0.125  # mass small enough that t in [8, 64] sits in the wave regime
DATA_SHARPNESS = 4.0  # bump steepness for the decay-harness data family
# slice suites need steeper data: the commuted-data Laplacian amplifies the
# grid's Nyquist spectrum tail by xi^2, and s = 8 keeps that leak ~1e-7
SLICE_DATA_SHARPNESS = 8.0


def _check(name: str, value: float, threshold: float, op: str = "<=") -> dict:
    value = float(value)
    passed = value <= threshold if op == "<=" else value >= threshold
    return {
        "name": name,
        "value": value,
        "threshold": threshold,
        "op": op,
        "passed": bool(passed),
    }


def _spread(values) -> float:
    values = [v for v in values]
    lo, hi = min(values), max(values)
    if lo <= 0:
        return float("inf") if hi > 0 else 1.0
    return hi / lo


def mass_commensurate_times(m0: float, lo: float = 8.0, hi: float = 64.0) -> np.ndarray:
    """Times t = pi k / m0 inside [lo, hi].

    The low-frequency part of a mass-m0 solution carries a coherent
    oscillation at frequency ~ m0 until stationary-phase spreading
    decoheres it; sampling at the oscillation extrema measures the decay
    envelope instead of the phase, which is what the sup-norm bounds
    control.
    """
    k = np.arange(int(np.ceil(lo * m0 / np.pi)), int(np.floor(hi * m0 / np.pi)) + 1)
    return np.pi * k / m0


def standard_data(config: RunConfig) -> CauchyData:
    """Deterministic bump pair supported in B(0, support_radius) at t0 = 2."""
    w = config.support_radius
    f = bump_field(config.grid, width=w, sharpness=SLICE_DATA_SHARPNESS)
    g = (
        bump_derivative_field(config.grid, 0, width=w, sharpness=SLICE_DATA_SHARPNESS)
        * 0.5
        + f * 0.25
    )
    return CauchyData(f, g, 2.0, config.mass)


def random_bump_pair(config: RunConfig, rng, translate: float = 2.0):
    """One draw from the randomized test-data family."""
    g_kind = rng.integers(0, 3)
    center = rng.uniform(-translate, translate, size=config.dim)
    width = rng.uniform(0.5, 2.0)
    amp = rng.uniform(0.5, 2.0)
    f = bump_field(
        config.grid, center=center, width=width, amplitude=amp, sharpness=DATA_SHARPNESS
    )
    if g_kind == 0:
        g = Field(config.grid, np.zeros(config.grid.shape))
    elif g_kind == 1:
        g = bump_field(
            config.grid, center=rng.uniform(-translate, translate, size=config.dim),
            width=rng.uniform(0.5, 2.0), amplitude=rng.uniform(0.5, 2.0),
            sharpness=DATA_SHARPNESS,
        )
    else:
        g = bump_derivative_field(
            config.grid, 0, center=center, width=width, amplitude=amp,
            sharpness=DATA_SHARPNESS,
        )
    return f, g


def suite_lp(config: RunConfig, rng) -> dict:
    grid = config.grid
    bank = LittlewoodPaleyBank.for_grid(grid)
    checks = [
        _check("completeness_residual", bank.completeness_residual(), 1e-10),
    ]
    sym_lo = min(float(np.min(bank.symbol(k))) for k in bank.bands)
    sym_hi = max(float(np.max(bank.symbol(k))) for k in bank.bands)
    checks.append(_check("symbol_min", sym_lo, 0.0, op=">="))
    checks.append(_check("symbol_max", sym_hi, 1.0 + 1e-14))
    # band support: symbols vanish off their dyadic annuli
    r = grid.frequency_norm
    worst = 0.0
    for k in bank.bands:
        lo, hi = bank.band_support_bounds(k)
        outside = (r < lo) | (r > hi)
        if np.any(outside):
            worst = max(worst, float(np.max(bank.symbol(k)[outside])))
    checks.append(_check("band_support_leak", worst, 0.0))
    # reconstruction of a random smooth field
    f = bump_field(grid, center=rng.uniform(-1, 1, size=config.dim), width=1.5,
                   sharpness=DATA_SHARPNESS)
    pieces = bank.decompose(f)
    recon = sum(p.values for p in pieces.values())
    scale = max(linf_norm(f), 1e-300)
    checks.append(
        _check("reconstruction_residual", float(np.max(np.abs(recon - f.values))) / scale, 1e-10)
    )
    # separated bands annihilate each other
    sep = 0.0
    for k in (0, 2, 4):
        if k + 2 <= bank.k_max:
            sep = max(sep, l2_norm(bank.project(bank.project(f, k), k + 2)))
    checks.append(_check("band_separation", sep / max(l2_norm(f), 1e-300), 1e-12))
    return {
        "citation": "dyadic completeness u = sum_{j >= -1} P_j u with band "
        "supports {|xi| <= 1} and [2^(k-1), 2^(k+1)]",
        "checks": checks,
    }


def suite_partition(config: RunConfig, rng) -> dict:
    dim = config.dim
    part = build_partition(dim, active_radius=4.0)
    pts = rng.uniform(-4.0, 4.0, size=(200, dim))
    sums = part.partition_sum(pts)
    checks = [
        _check("partition_sum_residual", float(np.max(np.abs(sums - 1.0))), 1e-12),
        _check("overlap_max", float(np.max(part.overlap_counts(pts))), overlap_bound(dim)),
    ]
    # support containment: chi_i vanishes at |x - c_i| >= 1
    i = part.n_cutoffs // 2
    u = rng.normal(size=(50, dim))
    u /= np.linalg.norm(u, axis=-1, keepdims=True)
    ring = part.centers[i] + (1.0 + 1e-9) * u
    checks.append(_check("support_leak", float(np.max(part.cutoff_values(i, ring))), 0.0))
    # translation invariance of interior cutoffs
    probes = rng.uniform(-0.9, 0.9, size=(40, dim))
    j = i + 1
    diff = np.max(
        np.abs(
            part.cutoff_values(i, part.centers[i] + probes)
            - part.cutoff_values(j, part.centers[j] + probes)
        )
    )
    checks.append(_check("translation_invariance", float(diff), 1e-12))
    checks.append(
        _check("derivative_bound_finite", part.derivative_bound, 1e6)
    )
    # W^{k,1} comparability over random translates
    ratios_loc, ratios_ball = [], []
    for _ in range(20):
        f = bump_field(
            config.grid,
            center=rng.uniform(-2.0, 2.0, size=dim),
            width=rng.uniform(0.5, 1.5),
            sharpness=DATA_SHARPNESS,
        )
        rep = w_k1_comparability(part, f, k=1)
        ratios_loc.append(rep.ratio_localized)
        ratios_ball.append(rep.ratio_balls)
    checks.append(_check("comparability_localized_min", min(ratios_loc), 1.0 - 1e-9, op=">="))
    checks.append(_check("comparability_localized_max", max(ratios_loc), 100.0))
    checks.append(_check("comparability_balls_max", max(ratios_ball), 100.0))
    return {
        "citation": "partition of unity subordinate to unit balls on "
        "(1/sqrt(d)) Z^d: sum chi_i = 1, overlap <= (16 d)^(d/2), "
        "W^(k,1) localization comparable to the whole norm",
        "checks": checks,
        "ratios_localized": [float(v) for v in ratios_loc],
        "ratios_balls": [float(v) for v in ratios_ball],
    }


def suite_energy(config: RunConfig, rng) -> dict:
    data = standard_data(config)
    checks = []
    gaps = {}
    for tau in config.taus:
        rep = energy(data, tau)
        gaps[tau] = rep.relative_gap
        checks.append(_check(f"equality_gap_tau_{tau:g}", abs(rep.relative_gap), 1e-4))
        checks.append(_check(f"components_min_tau_{tau:g}", min(rep.components), 0.0, op=">="))
    return {
        "citation": "weighted energy identity on hyperboloidal slices: "
        "E_m(phi, tau) = int g^2 + |grad f|^2 + m^2 f^2 dx for compactly "
        "supported data",
        "checks": checks,
        "relative_gaps": {f"{tau:g}": float(gap) for tau, gap in gaps.items()},
    }


def suite_sobolev(config: RunConfig, rng) -> dict:
    data = standard_data(config)
    checks = []
    ratio_table = {}
    for ell in (0.0, 1.0):
        ratios = [global_sobolev_check(data, tau, ell).ratio for tau in config.taus]
        ratio_table[f"ell_{ell:g}"] = [float(r) for r in ratios]
        checks.append(_check(f"ratio_positive_ell_{ell:g}", min(ratios), 0.0, op=">="))
        checks.append(_check(f"tau_spread_ell_{ell:g}", _spread(ratios), 4.0))
    return {
        "citation": "global Sobolev inequality on hyperboloids: "
        "sup tau^(1-l) t^(d+l-1) psi^2 bounded by iterated-boost integrals "
        "with a tau-independent constant",
        "checks": checks,
        "ratios": ratio_table,
    }


def suite_pointwise(config: RunConfig, rng) -> dict:
    data = standard_data(config)
    ratios = [pointwise_energy_check(data, tau).ratio for tau in config.taus]
    checks = [
        _check("ratio_positive", min(ratios), 0.0, op=">="),
        _check("tau_spread", _spread(ratios), 4.0),
    ]
    return {
        "citation": "pointwise weighted sup-norms of (phi, d_t phi, L phi) "
        "controlled by the summed energies of iterated boosts",
        "checks": checks,
        "ratios": [float(r) for r in ratios],
    }


def suite_localized(config: RunConfig, rng) -> dict:
    d = config.dim
    w = config.support_radius
    # low-frequency-dominated bump: its sup reaches the t^(-d/2) rate inside
    # the fit window (wide-spectrum data has late-dispersing components)
    f = bump_field(config.grid, width=w, sharpness=1.0)
    g = bump_derivative_field(config.grid, 0, width=w, sharpness=1.0) * 0.5 + f * 0.25
    data = CauchyData(f, g, 2.0, config.mass)
    window = (8.0, 64.0)
    times = mass_commensurate_times(config.mass, *window)
    reports = localized_decay_check(data, times, fit_window=window)
    by_q = {r.quantity: r for r in reports}
    phi_fit = by_q["m2_td_phi_sq"].fit
    checks = [
        _check(
            "phi_exponent_error",
            abs(phi_fit.slope + d / 2.0) if phi_fit else float("inf"),
            0.1,
        ),
        _check("combined_constant_positive", by_q["combined"].empirical_constant, 0.0, op=">="),
    ]
    # halving the mass keeps the constant bounded (C depends only on d, m0)
    half = CauchyData(data.f, data.g, data.t0, data.mass / 2.0)
    reports_half = localized_decay_check(
        half, mass_commensurate_times(half.mass, *window), fit_window=window
    )
    c_full = by_q["combined"].empirical_constant
    c_half = {r.quantity: r for r in reports_half}["combined"].empirical_constant
    checks.append(_check("mass_halving_spread", _spread([c_full, c_half]), 3.0))
    return {
        "citation": "localized-data decay: m^2 t^d |phi|^2 + t^(d-1)|d phi|^2 "
        "bounded by squared Sobolev norms of the data",
        "checks": checks,
        "reports": reports + reports_half,
    }


def suite_lowfreq(config: RunConfig, rng) -> dict:
    d = config.dim
    bank = LittlewoodPaleyBank.for_grid(config.grid)
    window = (8.0, 64.0)
    # canonical envelope-sampled run measures the decay exponent
    f0 = bump_field(config.grid, width=1.0, sharpness=DATA_SHARPNESS)
    zero = Field(config.grid, np.zeros(config.grid.shape))
    canonical = lowfreq_check(
        f0, zero, config.mass,
        mass_commensurate_times(config.mass, *window),
        bank, fit_window=window,
    )
    exponent = canonical[0].fit.slope if canonical[0].fit else float("inf")
    constants, reports = [], list(canonical)
    for _ in range(10):
        f, g = random_bump_pair(config, rng)
        reps = lowfreq_check(f, g, config.mass, config.times, bank, fit_window=window)
        reports.extend(reps)
        if reps[0].status == "ok":
            constants.append(reps[0].empirical_constant)
    checks = [
        _check("phi_exponent_error", abs(exponent + d / 2.0), 0.1),
        _check("constant_spread", _spread(constants) if constants else float("inf"), 3.0),
        _check("runs_ok", len(constants), 10, op=">="),
    ]
    return {
        "citation": "low-frequency dispersive bound: m0 (1+t)^(d/2) |P_-1 phi| "
        "and (1+t)^((d-1)/2) |d P_-1 phi| bounded by L1 norms of the "
        "projected data",
        "checks": checks,
        "constants": [float(c) for c in constants],
        "exponent": float(exponent),
        "reports": reports,
    }


def _slope_vs_band(reports, attr: str = "unnormalized_constant"):
    ks = np.array([r.band for r in reports], dtype=float)
    vals = np.array([getattr(r, attr) for r in reports], dtype=float)
    if np.any(vals <= 0):
        return float("nan")
    slope, _ = np.polyfit(ks, np.log2(vals), 1)
    return float(slope)


def suite_highfreq(config: RunConfig, rng) -> dict:
    d = config.dim
    grid = config.grid
    bank = LittlewoodPaleyBank.for_grid(grid)
    window = (8.0, 64.0)
    # narrow bump so every swept band is well populated
    f = bump_field(grid, width=0.25, sharpness=DATA_SHARPNESS)
    zero = Field(grid, np.zeros(grid.shape))
    m_wave = min(config.mass, WAVE_BRANCH_MASS)

    # The phi bounds saturate only once stationary-phase spreading covers the
    # band (t ~ 2^k / m0^2 with a sizable safety factor), so the band-scaling
    # sweep runs at late times on a correspondingly longer box.  A moderate
    # mass keeps the low bands on the dyadic line (omega = sqrt(xi^2 + m^2)
    # bends the k = 0, 1 constants when m ~ 1).
    if d == 1:
        wide = Grid(d, config.grid_n * 8, config.box_length * 8)
        late_times = tuple(np.geomspace(64.0, 960.0, 13))
    else:
        wide = grid
        late_times = config.times
    wide_bank = LittlewoodPaleyBank.for_grid(wide)
    f_wide = bump_field(wide, width=0.25, sharpness=DATA_SHARPNESS)
    g_wide = bump_field(wide, width=0.25, amplitude=1.5, sharpness=DATA_SHARPNESS)
    zero_wide = Field(wide, np.zeros(wide.shape))
    m_phi = min(config.mass, 0.5)

    phi_f, phi_g, partial_f, reports = [], [], [], []
    for k in config.bands:
        rep_f = highfreq_check(f_wide, zero_wide, m_phi, k, late_times, wide_bank)
        rep_g = highfreq_check(zero_wide, g_wide, m_phi, k, late_times, wide_bank)
        rep_w = highfreq_check(f, zero, m_wave, k, config.times, bank, fit_window=window)
        phi_f.append(rep_f[0])
        phi_g.append(rep_g[0])
        partial_f.append(rep_w[1])
        reports.extend(rep_f + rep_g + rep_w)

    checks = [
        _check(
            "phi_f_branch_slope_error",
            abs(_slope_vs_band(phi_f) - (d / 2.0 + 1.0)),
            0.3,
        ),
        _check("phi_g_branch_slope_error", abs(_slope_vs_band(phi_g) - d / 2.0), 0.3),
        _check(
            "partial_f_branch_slope_error",
            abs(_slope_vs_band(partial_f) - ((d - 1.0) / 2.0 + 2.0)),
            0.3,
        ),
        _check(
            "normalized_k_uniformity",
            _spread([r.empirical_constant for r in phi_f]),
            8.0,
        ),
    ]
    # vanishing-mass stability of the wave-type bound at the top band
    k_top = max(config.bands)
    wave_consts = []
    for m in (config.mass, config.mass / 4.0, config.mass / 16.0):
        rep = highfreq_check(f, zero, m, k_top, config.times, bank, fit_window=window)
        wave_consts.append(rep[1].empirical_constant)
        reports.extend(rep)
    checks.append(_check("wavedecay_mass_spread", _spread(wave_consts), 2.0))
    return {
        "citation": "high-frequency dispersive bounds: m0 t^(d/2)|P_k phi| "
        "scaling as 2^(kd/2+k) / 2^(kd/2) in the data and "
        "t^((d-1)/2)|d P_k phi| as 2^(k(d-1)/2+2k); the derivative bound "
        "survives the vanishing-mass limit",
        "checks": checks,
        "slopes": {
            "phi_f_branch": _slope_vs_band(phi_f),
            "phi_g_branch": _slope_vs_band(phi_g),
            "partial_f_branch": _slope_vs_band(partial_f),
        },
        "wavedecay_mass_constants": [float(c) for c in wave_consts],
        "reports": reports,
    }


def suite_interpolation(config: RunConfig, rng) -> dict:
    d = config.dim
    grid = config.grid
    bank = LittlewoodPaleyBank.for_grid(grid)
    window = (8.0, 64.0)
    k = config.bands[len(config.bands) // 2]
    f = bump_field(grid, width=0.5, sharpness=DATA_SHARPNESS)
    zero = Field(grid, np.zeros(grid.shape))
    s_lo, s_hi = (d - 1.0) / 2.0, d / 2.0
    s_values = np.linspace(s_lo, s_hi, 5)
    reports = [
        interpolation_check(f, zero, config.mass, k, s, config.times, bank, fit_window=window)
        for s in s_values
    ]
    consts = [r.empirical_constant for r in reports]
    hf = highfreq_check(f, zero, config.mass, k, config.times, bank, fit_window=window)
    c_hf, c_wd = hf[0].empirical_constant, hf[1].empirical_constant
    checks = [
        _check("constants_finite", max(consts), 1e6),
        _check(
            "endpoint_kg_spread",
            _spread([config.mass * reports[-1].empirical_constant, c_hf]),
            2.0,
        ),
        _check(
            "endpoint_wave_spread",
            _spread([reports[0].empirical_constant, c_wd]),
            2.0,
        ),
    ]
    return {
        "citation": "regularity/decay trade-off: |P_k phi| <= "
        "C 2^(ks)/t^s (2^k ||P_k f||_1 + ||P_k g||_1) for "
        "s between (d-1)/2 and d/2",
        "checks": checks,
        "s_values": [float(s) for s in s_values],
        "constants": [float(c) for c in consts],
        "reports": reports + hf,
    }


SUITE_RUNNERS = {
    "lp": suite_lp,
    "partition": suite_partition,
    "energy": suite_energy,
    "sobolev": suite_sobolev,
    "pointwise": suite_pointwise,
    "localized": suite_localized,
    "lowfreq": suite_lowfreq,
    "highfreq": suite_highfreq,
    "interpolation": suite_interpolation,
}


def run_selected_suites(config: RunConfig) -> dict:
    """Run the configured suites; the rng is re-seeded per suite so each
    suite's draws do not depend on which others ran."""
    results = {}
    for name in config.selected_suites:
        rng = np.random.default_rng(config.seed)
        results[name] = SUITE_RUNNERS[name](config, rng)
        results[name]["passed"] = all(c["passed"] for c in results[name]["checks"])
    return results
