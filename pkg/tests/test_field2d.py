"""Disk-lattice fields: quadrature, identities, flow, detector."""

import math

import numpy as np
import pytest

from symstab.closedform import BumpParams, PlateauBumpSource, solution_value
from symstab.field2d import (
    MASK_EXTERIOR,
    MASK_INTERIOR,
    MASK_RING,
    DiskField,
    asymmetry_measure,
    detect_local_symmetry,
    energy_J,
    field_centroid,
    gradient_flow_minimize,
    load_field_csv,
    neumann_identity,
    node_gradients,
    pohozaev_residual,
    ring_profile,
    sample_field,
    save_field_csv,
    weak_residual_2d,
)
from symstab.operators import (
    ConstantSource,
    FracPowerSource,
    InvalidParameterError,
    PowerFlux,
    ZeroSource,
)
from symstab.radial import RadialProfile, radial_energy

TORSION_J = -math.pi / 16.0  # p=2, N=2, R=1, f=1


def torsion_field(h, R=1.0, dim=2):
    return sample_field(lambda x, y: (R**2 - x**2 - y**2) / (2.0 * dim), R, h)


def torsion_profile(R=1.0, n=2049):
    r = np.linspace(0.0, R, n)
    return RadialProfile(r, (R**2 - r**2) / 4.0, -r / 2.0, dim=2, monotone=True)


# ---------------------------------------------------------------------------
# lattice and masks


def test_grid_shape_and_masks():
    f = torsion_field(0.125)
    assert f.n == 17
    assert f.h == pytest.approx(0.125)
    assert f.mask[8, 8] == MASK_INTERIOR
    assert f.mask[8, 16] == MASK_RING  # (1, 0) pole
    assert f.mask[0, 0] == MASK_EXTERIOR  # corner
    # nodes within h of the circle are ring nodes, zeroed by Dirichlet
    X, Y = f.meshes()
    rr = np.hypot(X, Y)
    ring = f.mask == MASK_RING
    assert np.all(rr[ring] >= 1.0 - 0.125 - 1e-9)
    assert np.all(f.values[ring] == 0.0)
    assert np.all(f.values[f.mask == MASK_EXTERIOR] == 0.0)


def test_requested_spacing_is_rounded_to_fit():
    f = sample_field(lambda x, y: 0.0 * x, 1.0, 0.13)
    assert f.n % 2 == 1
    assert f.n == 2 * round(1.0 / 0.13) + 1
    assert f.h * (f.n - 1) == pytest.approx(2.0)


def test_coarse_grid_rejected():
    with pytest.raises(InvalidParameterError):
        sample_field(lambda x, y: x, 1.0, 0.5)


def test_from_values_round_trip_geometry():
    f = torsion_field(1.0 / 16)
    g = DiskField.from_values(1.0, f.values, dirichlet=True)
    assert g.h == pytest.approx(f.h)
    assert np.array_equal(g.mask, f.mask)


# ---------------------------------------------------------------------------
# gradients and energy


def test_cell_quadrature_and_energy_torsion_rate():
    errs = []
    for h in (1.0 / 16, 1.0 / 64):
        J = energy_J(torsion_field(h), PowerFlux(2.0), ConstantSource(1.0))
        errs.append(abs(J - TORSION_J))
        assert errs[-1] < 0.55 * h  # rim staircase is the leading error
    assert errs[1] < errs[0] / 2.0  # O(h) across a 4x refinement


def test_energy_matches_radial_quadrature():
    flux, src = PowerFlux(2.0), ConstantSource(1.0)
    want = radial_energy(torsion_profile(), flux, src)
    assert want == pytest.approx(TORSION_J, abs=1e-10)
    J = energy_J(torsion_field(1.0 / 64), flux, src)
    assert abs(J - want) < 0.01


def test_node_gradients_linear_field_exact_inside():
    f = sample_field(lambda x, y: 0.3 + 2.0 * x - 1.5 * y, 1.0, 0.125, dirichlet=False)
    gx, gy = node_gradients(f)
    inner = f.mask == MASK_INTERIOR
    # centered stencils whose neighbors stay non-exterior are exact
    X, Y = f.meshes()
    safe = inner & (np.hypot(X, Y) < 1.0 - 3 * f.h)
    assert np.max(np.abs(gx[safe] - 2.0)) < 1e-12
    assert np.max(np.abs(gy[safe] + 1.5)) < 1e-12


# ---------------------------------------------------------------------------
# integral identities


def test_pohozaev_torsion_both_sides():
    flux, src = PowerFlux(2.0), ConstantSource(1.0)
    want = -math.pi / 4.0
    rep32 = pohozaev_residual(torsion_field(1.0 / 32), flux, src)
    rep64 = pohozaev_residual(torsion_field(1.0 / 64), flux, src)
    for rep in (rep32, rep64):
        assert rep.lhs == pytest.approx(want, rel=0.05)
        assert rep.rhs == pytest.approx(want, rel=0.05)
    assert rep64.residual < rep32.residual / 1.4
    d = rep64.to_json_dict()
    assert set(d) == {"lhs", "rhs", "residual"}


def test_pohozaev_identity_field_matches_callable():
    flux, src = PowerFlux(2.0), ConstantSource(1.0)
    f = torsion_field(1.0 / 32)
    a = pohozaev_residual(f, flux, src)
    b = pohozaev_residual(f, flux, src, hfield=lambda x, y: (x, y))
    assert abs(a.lhs - b.lhs) < 1e-10
    assert abs(a.rhs - b.rhs) < 1e-8


def test_pohozaev_needs_margin():
    with pytest.raises(InvalidParameterError):
        pohozaev_residual(torsion_field(1.0 / 6), PowerFlux(2.0), ConstantSource(1.0))


def test_neumann_identity_compact_bump():
    # u = (1 - r^2)^3 extended by zero; f(u) = 36 u^(2/3) - 24 u^(1/3)
    # solves the p=2 problem with flat normal data, and F integrates to 0.
    def bump(x, y):
        r2 = x**2 + y**2
        return np.where(r2 < 1.0, (1.0 - r2) ** 3, 0.0)

    flux = PowerFlux(2.0)
    src = FracPowerSource(3, ((36.0, 2), (-24.0, 1)))
    defects = []
    for h in (1.0 / 32, 1.0 / 64):
        rep = neumann_identity(sample_field(bump, 1.5, h), flux, src)
        assert rep.lhs == pytest.approx(rep.rhs, rel=0.08)
        defects.append(rep.rel_defect)
    assert defects[1] < 0.02
    assert defects[1] < defects[0]


# ---------------------------------------------------------------------------
# weak residual


def test_weak_residual_torsion_small_and_shrinking():
    flux, src = PowerFlux(2.0), ConstantSource(1.0)
    coarse = weak_residual_2d(torsion_field(1.0 / 16), flux, src, n_tests=12, seed=3)
    fine = weak_residual_2d(torsion_field(1.0 / 32), flux, src, n_tests=12, seed=3)
    assert fine["max"] < 0.02
    assert fine["max"] < coarse["max"]
    assert len(fine["per_test"]) == 12


def test_weak_residual_zero_field_exact():
    f = sample_field(lambda x, y: 0.0 * x, 1.0, 1.0 / 16)
    out = weak_residual_2d(f, PowerFlux(2.0), ZeroSource(), n_tests=5, seed=0)
    assert out["max"] == 0.0


# ---------------------------------------------------------------------------
# asymmetry


def test_asymmetry_radial_near_zero_and_offset_invariant():
    f = torsion_field(1.0 / 32)
    a = asymmetry_measure(f)
    assert a < 5e-3
    g = sample_field(
        lambda x, y: (1.0 - x**2 - y**2) / 4.0 + 7.0, 1.0, 1.0 / 32, dirichlet=False
    )
    base = sample_field(
        lambda x, y: (1.0 - x**2 - y**2) / 4.0, 1.0, 1.0 / 32, dirichlet=False
    )
    assert asymmetry_measure(g) == pytest.approx(asymmetry_measure(base), abs=1e-13)


def test_asymmetry_flags_angular_structure():
    f = sample_field(
        lambda x, y: np.exp(-((x - 0.4) ** 2 + y**2) / 0.05), 1.0, 1.0 / 32
    )
    assert asymmetry_measure(f) > 0.05


def test_asymmetry_quarter_turn_invariant():
    f = sample_field(
        lambda x, y: np.exp(-((x - 0.4) ** 2 + y**2) / 0.05), 1.0, 1.0 / 32
    )
    g = f.with_values(np.rot90(f.values).copy())
    assert abs(asymmetry_measure(f) - asymmetry_measure(g)) < 1e-12


def test_asymmetry_center_near_rim_rejected():
    f = torsion_field(1.0 / 16)
    with pytest.raises(InvalidParameterError):
        asymmetry_measure(f, center=(0.95, 0.0))


def test_centroid_tracks_mass():
    f = sample_field(
        lambda x, y: np.exp(-((x - 0.4) ** 2 + y**2) / 0.05), 1.0, 1.0 / 32
    )
    cx, cy = field_centroid(f)
    assert abs(cx - 0.4) < 0.1
    assert abs(cy) < 1e-10


# ---------------------------------------------------------------------------
# gradient flow


def _interior_noise_field(R, h, seed, scale=0.05):
    f = sample_field(lambda x, y: 0.0 * x, R, h)
    rng = np.random.default_rng(seed)
    v = f.values.copy()
    inner = f.mask == MASK_INTERIOR
    v[inner] = scale * rng.standard_normal(int(np.sum(inner)))
    return f.with_values(v)


def test_flow_gradient_matches_finite_differences():
    from symstab.field2d import _flow_energy, _flow_gradient

    f = _interior_noise_field(1.0, 0.125, seed=11, scale=0.3)
    flux, src = PowerFlux(3.0), ConstantSource(1.0)
    delta = 0.25
    ok = f.mask != MASK_EXTERIOR
    valid = ok[:-1, :-1] & ok[:-1, 1:] & ok[1:, :-1] & ok[1:, 1:]
    frozen = f.mask != MASK_INTERIOR
    grad, _ = _flow_gradient(f.values, f, flux, src, delta, valid, frozen)
    rng = np.random.default_rng(5)
    w = np.zeros_like(f.values)
    w[f.mask == MASK_INTERIOR] = rng.standard_normal(int(np.sum(f.mask == MASK_INTERIOR)))
    t = 1e-6
    Ep = _flow_energy(f.values + t * w, f, flux, src, delta, valid)
    Em = _flow_energy(f.values - t * w, f, flux, src, delta, valid)
    fd = (Ep - Em) / (2 * t)
    an = float(np.sum(grad * w))
    assert an == pytest.approx(fd, rel=1e-5, abs=1e-10)


def test_flow_descends_torsion_energy():
    flux, src = PowerFlux(2.0), ConstantSource(1.0)
    start = sample_field(lambda x, y: 0.0 * x, 1.0, 1.0 / 16)
    trace = gradient_flow_minimize(start, flux, src, max_steps=600)
    diffs = np.diff(trace.energy_history)
    assert np.all(diffs < 0)  # strict decrease, exact invariant
    assert trace.energy_history[-1] < 0.92 * TORSION_J  # near the minimum
    assert np.all(trace.asymmetry_history <= 10.0 * start.h)
    res = weak_residual_2d(trace.final_field, flux, src, n_tests=8, seed=1)
    assert res["max"] < 0.05
    d = trace.to_json_dict()
    assert d["step_count"] == trace.step_count
    assert len(d["energy_history"]) == trace.step_count + 1


def test_flow_reports_stationarity_at_rest():
    start = sample_field(lambda x, y: 0.0 * x, 1.0, 0.125)
    trace = gradient_flow_minimize(start, PowerFlux(2.0), ZeroSource(), max_steps=50)
    assert trace.stop_reason == "stationary"
    assert trace.step_count == 0


def test_flow_energy_slope_stop():
    start = sample_field(lambda x, y: 0.0 * x, 1.0, 1.0 / 16)
    trace = gradient_flow_minimize(
        start, PowerFlux(2.0), ConstantSource(1.0), max_steps=5000, slope_tol=1e-5
    )
    assert trace.stop_reason == "energy_slope"
    assert trace.step_count < 5000


def test_flow_projected_box_respected():
    start = sample_field(lambda x, y: 0.0 * x, 1.0, 1.0 / 16)
    trace = gradient_flow_minimize(
        start, PowerFlux(2.0), ConstantSource(1.0), max_steps=200, clip_range=(0.0, 0.05)
    )
    assert float(np.max(trace.final_field.values)) <= 0.05 + 1e-15
    assert np.all(np.diff(trace.energy_history) < 0)


# ---------------------------------------------------------------------------
# local-symmetry detector


def test_detector_radial_single_region():
    rep = detect_local_symmetry(torsion_field(1.0 / 32))
    assert len(rep.regions) == 1
    reg = rep.regions[0]
    assert math.hypot(*reg.center) <= 2.0 / 32
    assert reg.inner_radius == 0.0
    assert reg.outer_radius > 0.8
    assert rep.covered_fraction > 0.85
    assert rep.residual_fraction < 0.12
    assert rep.flat_fraction < 0.02
    d = rep.to_json_dict()
    assert len(d["regions"]) == 1


def test_detector_flat_field():
    f = sample_field(lambda x, y: 0.0 * x, 1.0, 0.125)
    rep = detect_local_symmetry(f)
    assert rep.regions == ()
    assert rep.flat_fraction == 1.0
    assert rep.residual_fraction == pytest.approx(0.0, abs=1e-12)


def test_detector_two_mountain_field():
    params = BumpParams(p=2.0, s=3.0)
    f = sample_field(lambda x, y: solution_value(params, x, y), 6.0, 0.06)
    rep = detect_local_symmetry(f)
    centers = {(round(r.center[0], 6), round(r.center[1], 6)): r for r in rep.regions}
    want = [(-2.0, 0.0), (2.0, 0.0), (0.0, 0.0)]
    matched = []
    for wx, wy in want:
        hit = [
            r
            for r in rep.regions
            if math.hypot(r.center[0] - wx, r.center[1] - wy) <= 2.0 * f.h
        ]
        assert hit, "no region found near (%g, %g)" % (wx, wy)
        matched.append(hit[0])
    # mountains are balls, the collar is a genuine annulus
    assert matched[0].inner_radius == 0.0
    assert matched[1].inner_radius == 0.0
    assert 0.7 < matched[0].outer_radius < 1.2
    assert 4.7 < matched[2].inner_radius < 5.3
    assert matched[2].outer_radius > 5.5
    # plateau dominates the flat set: |B5| - 2|B1| over |B6| = 23/36
    assert rep.flat_fraction == pytest.approx(23.0 / 36.0, abs=0.06)
    assert rep.residual_fraction < 0.25


def test_detector_angular_defect_stops_growth():
    def fn(x, y):
        r = np.hypot(x, y)
        th = np.arctan2(y, x)
        return (1.0 - r**2) + 0.35 * np.sin(3 * th) * np.exp(-(((r - 0.55) / 0.12) ** 2))

    rep = detect_local_symmetry(sample_field(fn, 1.0, 1.0 / 32))
    central = [r for r in rep.regions if math.hypot(*r.center) < 0.2]
    assert central
    assert central[0].outer_radius < 0.45
    assert rep.residual_fraction > 0.1


def test_detector_quarter_turn_consistency():
    f = sample_field(
        lambda x, y: np.exp(-((x - 0.4) ** 2 + y**2) / 0.03), 1.0, 1.0 / 32
    )
    rep = detect_local_symmetry(f)
    assert len(rep.regions) == 1
    g = f.with_values(np.rot90(f.values).copy())
    rep_r = detect_local_symmetry(g)
    assert len(rep_r.regions) == 1
    c, cr = rep.regions[0].center, rep_r.regions[0].center
    assert math.hypot(*c) == pytest.approx(math.hypot(*cr), abs=2 * f.h)
    # the bump sat on the x axis; after a quarter turn it sits on the y axis
    assert abs(c[1]) < 2 * f.h
    assert abs(cr[0]) < 2 * f.h


# ---------------------------------------------------------------------------
# serialization


def test_field_csv_round_trip(tmp_path):
    f = torsion_field(1.0 / 16)
    path = tmp_path / "field.csv"
    save_field_csv(f, path)
    g = load_field_csv(path)
    assert g.R == f.R
    assert g.h == pytest.approx(f.h)
    assert np.array_equal(g.values, f.values)
    assert g.dirichlet


def test_field_csv_free_boundary_detected(tmp_path):
    f = sample_field(lambda x, y: 1.0 + 0.0 * x, 1.0, 0.125, dirichlet=False)
    path = tmp_path / "free.csv"
    save_field_csv(f, path)
    g = load_field_csv(path)
    assert not g.dirichlet


def test_ring_profile_shapes():
    f = torsion_field(1.0 / 16)
    r, mean, std = ring_profile(f)
    assert r.size == mean.size == std.size
    assert np.all(np.diff(r) > 0)
    # torsion means reproduce the radial profile
    assert np.max(np.abs(mean - (1.0 - r**2) / 4.0)) < 5e-3
