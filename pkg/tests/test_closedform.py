"""Tests for the closed-form mountains-on-a-plateau construction."""

import numpy as np
import pytest
from scipy import integrate

from symstab.closedform import (
    BumpParams,
    PlateauBumpSource,
    bump_profile,
    classify_regularity,
    collar_profile,
    interface_mismatch,
    solution_gradient,
    solution_value,
    strong_residual_samples,
    weak_residual,
)
from symstab.operators import InvalidParameterError


# ---------------------------------------------------------------------------
# parameters and geometry


def test_params_validation():
    BumpParams(2.0, 3.0)  # fine
    with pytest.raises(InvalidParameterError):
        BumpParams(1.0, 3.0)  # p must exceed 1
    with pytest.raises(InvalidParameterError):
        BumpParams(2.0, 2.0)  # needs s > p/(p-1) = 2
    with pytest.raises(InvalidParameterError):
        BumpParams(2.0, 3.0, centers=((-4.5, 0.0), (2.0, 0.0)))
    with pytest.raises(InvalidParameterError):
        BumpParams(2.0, 3.0, centers=((-0.5, 0.0), (0.5, 0.0)))  # overlap


def test_solution_landmark_values():
    params = BumpParams(2.0, 3.0)
    # mountain tops reach 2, plateau sits at 1, boundary at 0
    assert solution_value(params, -2.0, 0.0) == pytest.approx(2.0, abs=1e-15)
    assert solution_value(params, 2.0, 0.0) == pytest.approx(2.0, abs=1e-15)
    assert solution_value(params, 0.0, 0.0) == pytest.approx(1.0, abs=1e-15)
    assert solution_value(params, 0.0, 4.0) == pytest.approx(1.0, abs=1e-15)
    assert solution_value(params, 6.0, 0.0) == pytest.approx(0.0, abs=1e-15)
    assert solution_value(params, 0.0, -6.0) == pytest.approx(0.0, abs=1e-15)
    # range is [0, 2]
    th = np.linspace(0, 2 * np.pi, 64)
    rr = np.linspace(0, 6.0, 101)
    R, T = np.meshgrid(rr, th)
    u = solution_value(params, R * np.cos(T), R * np.sin(T))
    assert np.all(u >= -1e-15) and np.all(u <= 2.0 + 1e-15)


def test_solution_not_radial_but_mirror_symmetric():
    params = BumpParams(2.0, 3.0)
    # default centers sit on the x-axis: mirror symmetry in y
    rng = np.random.default_rng(7)
    x = rng.uniform(-6, 6, 200)
    y = rng.uniform(-6, 6, 200)
    keep = np.hypot(x, y) <= 6.0
    x, y = x[keep], y[keep]
    np.testing.assert_allclose(
        solution_value(params, x, y), solution_value(params, x, -y), atol=1e-15
    )
    # not radial about the origin: same radius, different values
    assert abs(solution_value(params, 2.0, 0.0) - solution_value(params, 0.0, 2.0)) > 0.9


def test_gradient_matches_finite_differences():
    params = BumpParams(3.0, 2.0)
    pts = [(-2.3, 0.4), (1.7, -0.2), (0.0, 2.0), (5.4, 0.9), (-3.0, -3.1)]
    d = 1e-6
    for x0, y0 in pts:
        gx, gy = solution_gradient(params, x0, y0)
        fdx = (
            solution_value(params, x0 + d, y0) - solution_value(params, x0 - d, y0)
        ) / (2 * d)
        fdy = (
            solution_value(params, x0, y0 + d) - solution_value(params, x0, y0 - d)
        ) / (2 * d)
        assert gx == pytest.approx(fdx, abs=5e-9)
        assert gy == pytest.approx(fdy, abs=5e-9)


def test_profile_helpers_consistent_with_field():
    params = BumpParams(2.0, 3.0)
    U, Up = bump_profile(params)
    assert U(0.0) == pytest.approx(2.0)
    assert U(1.0) == pytest.approx(1.0)
    # against the 2-d field along a ray through a mountain center
    rho = np.linspace(0.0, 1.0, 11)
    np.testing.assert_allclose(
        U(rho), solution_value(params, 2.0 + rho, np.zeros_like(rho)), atol=1e-14
    )
    V, Vp = collar_profile(params)
    assert V(5.0) == pytest.approx(1.0)
    assert V(6.0) == pytest.approx(0.0)
    r = np.linspace(5.0, 6.0, 11)
    np.testing.assert_allclose(
        V(r), solution_value(params, np.zeros_like(r), -r), atol=1e-14
    )
    d = 1e-7
    mid = np.linspace(5.05, 5.95, 7)
    np.testing.assert_allclose(Vp(mid), (V(mid + d) - V(mid - d)) / (2 * d), atol=1e-6)


# ---------------------------------------------------------------------------
# the matched source


def test_source_rational_oracle_values():
    # p = 2, s = 3, N = 2: f(0) = (6/11) * [ (50/11)*2 + 6 ] = 996/121,
    # f(1) = 0, f(2) = 6 * (-4 + 6) = 12 -- evaluated by hand from the
    # piecewise formulas.
    src = PlateauBumpSource(2.0, 3.0, 2)
    assert float(src.value(0.0, 0.0)) == pytest.approx(996.0 / 121.0, rel=1e-14)
    assert float(src.value(0.0, 1.0)) == pytest.approx(0.0, abs=1e-14)
    assert float(src.value(0.0, 2.0)) == pytest.approx(12.0, rel=1e-14)


def test_source_continuous_across_plateau_level():
    # f vanishes at the plateau level like |u-1|^e, e = p-1-p/s
    for p, s in [(2.0, 3.0), (3.0, 2.0), (3.0, 4.0), (1.5, 4.0)]:
        src = PlateauBumpSource(p, s, 2)
        e = p - 1.0 - p / s
        eps = np.array([1e-9, 1e-7, 1e-5])
        for side in (1.0 - eps, 1.0 + eps):
            vals = np.abs(src.value(0.0, side))
            assert np.all(vals <= 1e3 * eps**e), (p, s, vals)
            assert vals[0] < vals[1] < vals[2]
        assert float(src.value(0.0, 1.0)) == 0.0


def test_source_derivative_matches_fd():
    for p, s in [(2.0, 3.0), (3.0, 4.0)]:
        src = PlateauBumpSource(p, s, 2)
        dft = src.derivative()
        t = np.array([0.1, 0.45, 0.8, 1.2, 1.6, 1.95])
        d = 1e-7
        fd = (src.value(0.0, t + d) - src.value(0.0, t - d)) / (2 * d)
        np.testing.assert_allclose(dft(t), fd, rtol=1e-5, atol=1e-6)


def test_source_secant_slope_tracks_regularity():
    # secant slopes |f(1+b) - f(1)| / b at the plateau level: unbounded
    # for the non-Lipschitz case i, shrinking for case iii
    b = np.array([1e-4, 1e-6, 1e-8])
    soft = PlateauBumpSource(2.0, 3.0, 2)
    sec = np.abs(soft.value(0.0, 1.0 + b)) / b
    assert sec[2] > sec[1] > sec[0] and sec[2] > 1e4
    hard = PlateauBumpSource(3.0, 4.0, 2)
    sec = np.abs(hard.value(0.0, 1.0 + b)) / b
    assert sec[2] < sec[1] < sec[0] and sec[2] < 10.0
    # the analytic derivative decays at the same b^(e-1) rate
    dft = hard.derivative()
    assert abs(dft(1.0 + 1e-12)) < 0.15 * abs(dft(1.0 + 1e-8))


def test_source_primitive_against_quadrature():
    src = PlateauBumpSource(2.0, 3.0, 2)
    for t in (0.3, 0.9, 1.0, 1.4, 2.0):
        want, _ = integrate.quad(lambda v: float(src.value(0.0, v)), 0.0, t, limit=200)
        # tabulated trapezoid over 2^15 panels with nodes graded into the kinks
        assert float(src.primitive(t)) == pytest.approx(want, abs=2e-7)


def test_source_clamping_rules():
    plain = PlateauBumpSource(2.0, 3.0, 2)
    with pytest.raises(ValueError):
        plain.value(0.0, 2.5)
    with pytest.raises(ValueError):
        plain.primitive(-0.5)
    clamped = PlateauBumpSource(2.0, 3.0, 2, clamp=True)
    assert float(clamped.value(0.0, 3.0)) == pytest.approx(12.0, rel=1e-14)
    assert float(clamped.value(0.0, -1.0)) == pytest.approx(996.0 / 121.0, rel=1e-14)
    # linear extension of F with matching slope
    F2 = float(clamped.primitive(2.0))
    assert float(clamped.primitive(2.5)) == pytest.approx(F2 + 12.0 * 0.5, rel=1e-12)
    assert float(clamped.primitive(-0.25)) == pytest.approx(
        -0.25 * 996.0 / 121.0, rel=1e-12
    )
    dft = clamped.derivative()
    assert float(dft(2.3)) == 0.0 and float(dft(-0.1)) == 0.0


# ---------------------------------------------------------------------------
# regularity classification


def test_regularity_cases():
    table = [
        (2.0, 3.0, "i", 1.0 / 3.0, False),
        (2.0, 5.0, "i", 1.0 - 2.0 / 5.0, False),
        (1.5, 4.0, "ii", 0.5 - 1.5 / 4.0, False),
        (3.0, 2.0, "ii", 0.5, False),
        (3.0, 3.0, "iii", 1.0, True),  # s = p/(p-2) boundary included
        (3.0, 4.0, "iii", 1.25, True),
        (4.0, 2.0, "iii", 1.0, True),
    ]
    for p, s, case, exponent, lip in table:
        got = classify_regularity(p, s)
        assert got.case == case, (p, s)
        assert got.exponent == pytest.approx(exponent, rel=1e-12)
        assert got.lipschitz is lip
    with pytest.raises(InvalidParameterError):
        classify_regularity(2.0, 1.5)


# ---------------------------------------------------------------------------
# the construction actually solves the equation


@pytest.mark.parametrize("p,s", [(2.0, 3.0), (3.0, 2.0), (3.0, 4.0)])
def test_interface_gluing(p, s):
    params = BumpParams(p, s)
    jumps = interface_mismatch(params)
    for key, val in jumps.items():
        if key.endswith("_value"):
            assert val < 1e-10, (key, val)
        else:
            assert val < 1e-7, (key, val)


@pytest.mark.parametrize("p,s", [(2.0, 3.0), (3.0, 2.0), (3.0, 4.0)])
def test_strong_form_residual(p, s):
    params = BumpParams(p, s)
    res = strong_residual_samples(params)
    assert np.max(res) < 1e-8, np.max(res)


def test_weak_residual_small_and_contracting():
    params = BumpParams(2.0, 3.0)
    coarse = weak_residual(params, h=0.08, n_tests=12, seed=3)
    fine = weak_residual(params, h=0.04, n_tests=12, seed=3)
    assert fine["max"] < 2e-3
    assert fine["max"] < coarse["max"]


def test_weak_residual_other_cases():
    for p, s in [(3.0, 2.0), (3.0, 4.0)]:
        out = weak_residual(BumpParams(p, s), h=0.05, n_tests=8, seed=11)
        assert out["max"] < 5e-3, (p, s, out["max"])


def test_source_descriptor_roundtrip_fields():
    src = PlateauBumpSource(3.0, 4.0, 2, clamp=True)
    d = src.descriptor()
    assert d == {"kind": "plateau_bump", "p": 3.0, "s": 4.0, "dim": 2, "clamp": True}
