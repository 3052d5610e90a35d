"""Discrete scalar fields on a disk: energies, identities, flow, detector.

The lattice covers [-R, R]^2 with an odd number of nodes per axis so the
center and the four boundary poles are nodes; the requested spacing is
rounded so the lattice lands exactly on +-R.  Nodes carry a mask:
interior (|x| < R - h), ring (within h of the circle; Dirichlet zeros
unless a field is explicitly flagged free), exterior (never used).

Quadrature is midpoint-on-cells: a cell between four non-exterior nodes
contributes its corner-average value and the bilinear mid-cell gradient.
This keeps every stencil one-sided at the rim (nothing reaches outside
the disk) at the cost of an O(h) staircase band, which is the accuracy
contract of everything here.

The gradient flow descends the regularized energy

    J_delta(v) = sum_cells h^2 [ G(sqrt(|grad v|^2 + delta^2)) - G(delta) - F(v) ]

by explicit steps with backtracking (energies strictly decrease by
construction), optionally projected onto a value box; delta tames the
degenerate diffusivity at flat spots and is reported with the trace.

The local-symmetry detector decomposes a field into annuli on which it
is radially symmetric about some center and strictly decreasing, plus a
flat set where the gradient vanishes, plus an unexplained remainder --
the discrete counterpart of splitting a solution into radial mountains,
plateaus, and everything else.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import ndimage

from .operators import InvalidParameterError

MASK_INTERIOR, MASK_RING, MASK_EXTERIOR = 0, 1, 2

__all__ = [
    "DiskField",
    "PohozaevReport",
    "NeumannReport",
    "FlowTrace",
    "SymmetryRegion",
    "SymmetryReport",
    "sample_field",
    "node_gradients",
    "energy_J",
    "pohozaev_residual",
    "neumann_identity",
    "weak_residual_2d",
    "asymmetry_measure",
    "gradient_flow_minimize",
    "detect_local_symmetry",
    "ring_profile",
    "save_field_csv",
    "load_field_csv",
]


def _axis_nodes(R, h):
    m = int(round(R / h))
    if m < 6:
        raise InvalidParameterError("grid too coarse: need R/h >= 6")
    h_eff = R / m
    return h_eff, np.linspace(-R, R, 2 * m + 1)


def _disk_mask(xs, R, h):
    X, Y = np.meshgrid(xs, xs)
    rr = np.hypot(X, Y)
    tol = 1e-12 * max(1.0, R)
    mask = np.full(X.shape, MASK_INTERIOR, dtype=np.int8)
    mask[rr >= R - h + tol] = MASK_RING
    mask[rr > R + tol] = MASK_EXTERIOR
    return mask


@dataclass(frozen=True)
class DiskField:
    """Scalar samples on the disk lattice; values[iy, ix] at
    (x, y) = (-R + ix h, -R + iy h)."""

    R: float
    h: float
    values: np.ndarray
    mask: np.ndarray
    dirichlet: bool = True

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.ndim != 2 or v.shape[0] != v.shape[1] or v.shape[0] % 2 == 0:
            raise InvalidParameterError("field needs a square odd-sized lattice")
        if self.mask.shape != v.shape:
            raise InvalidParameterError("mask shape mismatch")
        object.__setattr__(self, "values", v)

    @property
    def n(self):
        return self.values.shape[0]

    @property
    def xs(self):
        return np.linspace(-self.R, self.R, self.n)

    def meshes(self):
        X, Y = np.meshgrid(self.xs, self.xs)
        return X, Y

    @classmethod
    def from_values(cls, R, values, dirichlet=True):
        values = np.asarray(values, dtype=float)
        n = values.shape[0]
        h = 2.0 * R / (n - 1)
        xs = np.linspace(-R, R, n)
        mask = _disk_mask(xs, R, h)
        return cls(R, h, values, mask, dirichlet)

    def with_values(self, values):
        return DiskField(self.R, self.h, values, self.mask, self.dirichlet)

    def range(self):
        keep = self.mask != MASK_EXTERIOR
        vals = self.values[keep]
        return float(np.max(vals) - np.min(vals))


def sample_field(fn, R, h, dirichlet=True):
    """Evaluate fn(x, y) (vectorized) at non-exterior lattice nodes."""
    h_eff, xs = _axis_nodes(R, h)
    mask = _disk_mask(xs, R, h_eff)
    X, Y = np.meshgrid(xs, xs)
    values = np.zeros_like(X)
    keep = mask != MASK_EXTERIOR
    values[keep] = np.asarray(fn(X[keep], Y[keep]), dtype=float)
    if dirichlet:
        values[mask == MASK_RING] = 0.0
    return DiskField(float(R), h_eff, values, mask, dirichlet)


def node_gradients(field):
    """Centered-difference node gradients (one-sided at array edges),
    zeroed on exterior nodes."""
    gy, gx = np.gradient(field.values, field.h)
    ext = field.mask == MASK_EXTERIOR
    gx = np.where(ext, 0.0, gx)
    gy = np.where(ext, 0.0, gy)
    return gx, gy


# ---------------------------------------------------------------------------
# cell quadrature


def _cell_data(field):
    v = field.values
    h = field.h
    vc = 0.25 * (v[:-1, :-1] + v[:-1, 1:] + v[1:, :-1] + v[1:, 1:])
    gx = ((v[:-1, 1:] + v[1:, 1:]) - (v[:-1, :-1] + v[1:, :-1])) / (2.0 * h)
    gy = ((v[1:, :-1] + v[1:, 1:]) - (v[:-1, :-1] + v[:-1, 1:])) / (2.0 * h)
    ok = field.mask != MASK_EXTERIOR
    valid = ok[:-1, :-1] & ok[:-1, 1:] & ok[1:, :-1] & ok[1:, 1:]
    xs = field.xs
    xc = 0.5 * (xs[:-1] + xs[1:])
    XC, YC = np.meshgrid(xc, xc)
    return vc, gx, gy, valid, XC, YC


def energy_J(field, flux, source):
    """Midpoint-cell quadrature of G(|grad u|) - F(u) over the disk."""
    vc, gx, gy, valid, _, _ = _cell_data(field)
    q = np.hypot(gx, gy)
    integrand = np.where(valid, flux.primitive(q) - source.primitive(np.where(valid, vc, 0.0)), 0.0)
    return float(np.sum(integrand) * field.h**2)


# ---------------------------------------------------------------------------
# integral identities


@dataclass(frozen=True)
class PohozaevReport:
    lhs: float
    rhs: float
    residual: float

    def to_json_dict(self):
        return {"lhs": self.lhs, "rhs": self.rhs, "residual": self.residual}


def _bilinear(arr, field, x, y):
    coords = np.vstack([(y + field.R) / field.h, (x + field.R) / field.h])
    return ndimage.map_coordinates(arr, coords, order=1, mode="nearest")


def pohozaev_residual(field, flux, source, hfield="identity", n_theta=1024):
    """Both sides of the vector-field integral identity for a solution
    field, with their mismatch.

    boundary side:  contour integral of {G(|grad u|) - g(|grad u|)|grad u|} (h . nu)
    volume side:    integral of {(G - F) div h - sum_ij d_i h_j u_xj u_xi g/|grad u|}

    hfield "identity" is h(x) = x (div h = 2, the cross term collapses
    to g(|grad u|)|grad u|); otherwise a callable (x, y) -> (h1, h2)
    whose Jacobian is taken by central differences.

    The boundary integrand is polar-resampled at radii R - 5h and
    R - 3.5h -- outside the band whose stencils touch the zeroed
    Dirichlet ring -- and extrapolated linearly to the circle per angle.
    """
    R, h = field.R, field.h
    if R <= 6.5 * h:
        raise InvalidParameterError("pohozaev boundary sampling needs R > 6.5 h")
    vc, gx, gy, valid, XC, YC = _cell_data(field)
    q = np.hypot(gx, gy)
    Gq = flux.primitive(q)
    Fv = source.primitive(np.where(valid, vc, 0.0))
    if hfield == "identity":
        rhs_cells = (Gq - Fv) * 2.0 - flux.value(q) * q
    else:
        d = 1e-6 * max(1.0, h)
        h1p, h2p = hfield(XC + d, YC)
        h1m, h2m = hfield(XC - d, YC)
        j11 = (h1p - h1m) / (2 * d)
        j21 = (h2p - h2m) / (2 * d)
        h1p, h2p = hfield(XC, YC + d)
        h1m, h2m = hfield(XC, YC - d)
        j12 = (h1p - h1m) / (2 * d)
        j22 = (h2p - h2m) / (2 * d)
        with np.errstate(divide="ignore", invalid="ignore"):
            a = np.where(q > 0, flux.value(q) / np.where(q > 0, q, 1.0), 0.0)
        cross = a * (j11 * gx * gx + (j12 + j21) * gx * gy + j22 * gy * gy)
        rhs_cells = (Gq - Fv) * (j11 + j22) - cross
    rhs = float(np.sum(np.where(valid, rhs_cells, 0.0)) * h**2)

    gxn, gyn = node_gradients(field)
    theta = np.linspace(0.0, 2.0 * np.pi, n_theta, endpoint=False)
    ct, st = np.cos(theta), np.sin(theta)
    r1, r2 = R - 5.0 * h, R - 3.5 * h
    vals = []
    for rs in (r1, r2):
        qx = _bilinear(gxn, field, rs * ct, rs * st)
        qy = _bilinear(gyn, field, rs * ct, rs * st)
        qq = np.hypot(qx, qy)
        vals.append(flux.primitive(qq) - flux.value(qq) * qq)
    v_R = vals[1] + (vals[1] - vals[0]) * (R - r2) / (r2 - r1)
    if hfield == "identity":
        h_dot_nu = np.full_like(theta, R)
    else:
        hb1, hb2 = hfield(R * ct, R * st)
        h_dot_nu = (hb1 * ct + hb2 * st)
    lhs = float(np.sum(v_R * h_dot_nu) * R * (2.0 * np.pi / n_theta))
    return PohozaevReport(lhs=lhs, rhs=rhs, residual=abs(lhs - rhs))


@dataclass(frozen=True)
class NeumannReport:
    lhs: float  # N * J(u)
    rhs: float  # integral of g(|grad u|) |grad u|
    rel_defect: float

    def to_json_dict(self):
        return {"lhs": self.lhs, "rhs": self.rhs, "rel_defect": self.rel_defect}


def neumann_identity(field, flux, source):
    """For solutions with vanishing normal derivative on the circle the
    boundary term drops and N J(u) must equal int g(|grad u|)|grad u|."""
    vc, gx, gy, valid, _, _ = _cell_data(field)
    q = np.hypot(gx, gy)
    rhs = float(np.sum(np.where(valid, flux.value(q) * q, 0.0)) * field.h**2)
    lhs = 2.0 * energy_J(field, flux, source)
    return NeumannReport(lhs, rhs, abs(lhs - rhs) / max(abs(rhs), 1e-300))


# ---------------------------------------------------------------------------
# weak residual


def weak_residual_2d(field, flux, source, n_tests=20, seed=0):
    """Grid weak-form residual against random interior bump tests.

    residual_k = |sum_cells (g(q)/q grad u . grad psi - f(u) psi) h^2|
                 / sqrt(sum_cells |grad psi|^2 h^2)

    with cell gradients of both the field and the cubic bump psi; works
    for fields with no closed form (flow outputs).
    """
    vc, gx, gy, valid, XC, YC = _cell_data(field)
    q = np.hypot(gx, gy)
    with np.errstate(divide="ignore", invalid="ignore"):
        a = np.where(q > 0, flux.value(q) / np.where(q > 0, q, 1.0), 0.0)
    fx = np.where(valid, a * gx, 0.0)
    fy = np.where(valid, a * gy, 0.0)
    rc = np.hypot(XC, YC)
    fu = np.where(valid, np.asarray(source.value(rc, np.where(valid, vc, 0.0))), 0.0)

    rng = np.random.default_rng(seed)
    area = field.h**2
    rho_lo = 3.0 * field.h
    rho_hi = max(0.35 * field.R, 1.5 * rho_lo)
    rows = []
    draws = 0
    while len(rows) < n_tests:
        draws += 1
        if draws > 400 * n_tests:
            raise InvalidParameterError("grid too coarse to place interior test bumps")
        cx, cy = rng.uniform(-field.R, field.R, 2)
        rho = rng.uniform(rho_lo, rho_hi)
        if math.hypot(cx, cy) + rho > field.R - 3 * field.h:
            continue
        d2 = ((XC - cx) ** 2 + (YC - cy) ** 2) / rho**2
        base = np.where(d2 < 1.0, 1.0 - d2, 0.0)
        psi = base**3
        common = -6.0 * base**2 / rho**2
        px = common * (XC - cx)
        py = common * (YC - cy)
        resid = float(np.sum((fx * px + fy * py - fu * psi) * area))
        norm = math.sqrt(float(np.sum((px * px + py * py) * area)))
        rows.append(abs(resid) / norm)
    rows = np.asarray(rows)
    return {
        "h": field.h,
        "n_tests": n_tests,
        "max": float(np.max(rows)),
        "mean": float(np.mean(rows)),
        "per_test": [float(v) for v in rows],
    }


# ---------------------------------------------------------------------------
# asymmetry


def _ring_radii(field, center):
    reach = field.R - 2.0 * field.h - math.hypot(*center)
    if reach < 3.0 * field.h:
        raise InvalidParameterError("center too close to the rim for ring sampling")
    return np.arange(field.h, reach, field.h)


def ring_profile(field, center=(0.0, 0.0), n_theta=256):
    """Polar resample about a center: per-ring mean and angular std."""
    radii = _ring_radii(field, center)
    theta = np.linspace(0.0, 2.0 * np.pi, n_theta, endpoint=False)
    ct, st = np.cos(theta), np.sin(theta)
    X = center[0] + radii[:, None] * ct[None, :]
    Y = center[1] + radii[:, None] * st[None, :]
    vals = _bilinear(field.values, field, X.ravel(), Y.ravel()).reshape(radii.size, n_theta)
    return radii, np.mean(vals, axis=1), np.std(vals, axis=1)


def asymmetry_measure(field, center=(0.0, 0.0), n_theta=256):
    """Root-mean-square over rings of the angular standard deviation,
    normalized by the field's range; 0 for exactly radial data up to
    bilinear interpolation error.  n_theta stays divisible by 4 so
    quarter-turn rotations resample identically."""
    _, _, stds = ring_profile(field, center, n_theta)
    rng = field.range()
    if rng == 0.0:
        return 0.0
    return float(np.sqrt(np.mean(stds**2)) / rng)


def field_centroid(field):
    """Mass centroid of the field over non-exterior nodes, with the
    minimum value subtracted (offset-free); the disk center when the
    field is flat."""
    keep = field.mask != MASK_EXTERIOR
    X, Y = field.meshes()
    w = np.where(keep, field.values - np.min(field.values[keep]), 0.0)
    total = float(np.sum(w))
    if total <= 0.0:
        return (0.0, 0.0)
    return (float(np.sum(w * X) / total), float(np.sum(w * Y) / total))


# ---------------------------------------------------------------------------
# gradient flow


@dataclass(frozen=True)
class FlowTrace:
    energy_history: np.ndarray
    asymmetry_history: np.ndarray
    final_field: DiskField
    step_count: int
    stop_reason: str
    delta: float

    def to_json_dict(self):
        return {
            "energy_history": [float(v) for v in self.energy_history],
            "asymmetry_history": [float(v) for v in self.asymmetry_history],
            "step_count": self.step_count,
            "stop_reason": self.stop_reason,
            "delta": self.delta,
        }


def _flow_energy(values, field, flux, source, delta, valid):
    h = field.h
    v = values
    vc = 0.25 * (v[:-1, :-1] + v[:-1, 1:] + v[1:, :-1] + v[1:, 1:])
    gx = ((v[:-1, 1:] + v[1:, 1:]) - (v[:-1, :-1] + v[1:, :-1])) / (2.0 * h)
    gy = ((v[1:, :-1] + v[1:, 1:]) - (v[:-1, :-1] + v[:-1, 1:])) / (2.0 * h)
    s = np.sqrt(gx * gx + gy * gy + delta * delta)
    G = flux.primitive(s) - flux.primitive(delta)
    F = source.primitive(np.where(valid, vc, 0.0))
    return float(np.sum(np.where(valid, G - F, 0.0)) * h * h)


def _flow_gradient(values, field, flux, source, delta, valid, frozen, fprime=None):
    """dE/dv by cell assembly, plus a Jacobi diagonal of the energy
    Hessian (diffusion stencil + the concave part of the source) used to
    precondition the descent direction.  Without the preconditioner the
    source's curvature spikes -- these problems have |f'| -> infinity at
    value kinks -- pin the backtracked step far below what the smooth
    modes tolerate, and the flow crawls."""
    h = field.h
    v = values
    vc = 0.25 * (v[:-1, :-1] + v[:-1, 1:] + v[1:, :-1] + v[1:, 1:])
    gx = ((v[:-1, 1:] + v[1:, 1:]) - (v[:-1, :-1] + v[1:, :-1])) / (2.0 * h)
    gy = ((v[1:, :-1] + v[1:, 1:]) - (v[:-1, :-1] + v[:-1, 1:])) / (2.0 * h)
    s = np.sqrt(gx * gx + gy * gy + delta * delta)
    ac = flux.value(s) / s
    fx = np.where(valid, ac * gx, 0.0)
    fy = np.where(valid, ac * gy, 0.0)
    xs = field.xs
    xc = 0.5 * (xs[:-1] + xs[1:])
    XC, YC = np.meshgrid(xc, xc)
    fv = np.where(valid, np.asarray(source.value(np.hypot(XC, YC), np.where(valid, vc, 0.0))), 0.0)
    grad = np.zeros_like(v)
    cx = 0.5 * h  # d(cell gx)/d(corner) * h^2 = +-h/2
    quarter = 0.25 * h * h
    grad[:-1, :-1] += (-fx - fy) * cx - fv * quarter
    grad[:-1, 1:] += (fx - fy) * cx - fv * quarter
    grad[1:, :-1] += (-fx + fy) * cx - fv * quarter
    grad[1:, 1:] += (fx + fy) * cx - fv * quarter
    grad[frozen] = 0.0

    acv = np.where(valid, ac, 0.0)
    acn = np.zeros_like(v)
    acn[:-1, :-1] = np.maximum(acn[:-1, :-1], acv)
    acn[:-1, 1:] = np.maximum(acn[:-1, 1:], acv)
    acn[1:, :-1] = np.maximum(acn[1:, :-1], acv)
    acn[1:, 1:] = np.maximum(acn[1:, 1:], acv)
    diag = 2.0 * acn
    if fprime is not None:
        curv = np.maximum(0.0, -np.asarray(fprime(v)))
        curv = np.where(np.isfinite(curv), curv, 1e12)
        diag = diag + 0.25 * h * h * np.minimum(curv, 1e12)
    return grad, diag + 1e-12


def gradient_flow_minimize(
    field0,
    flux,
    source,
    delta=None,
    max_steps=500,
    slope_tol=0.0,
    clip_range=None,
    n_theta=256,
):
    """Projected explicit descent on the regularized discrete energy,
    along the Jacobi-preconditioned gradient direction.

    Every accepted step strictly decreases the energy (backtracking
    halves the step until it does; growth after success keeps the step
    near the stability edge).  Dirichlet nodes stay frozen at zero.
    clip_range=(lo, hi) projects candidate values onto a box -- descent
    on an obstacle problem -- which keeps sources defined on a bounded
    value interval honest.  The asymmetry of each accepted iterate is
    recorded about the current mass centroid.

    Stop reasons: "max_steps", "stationary" (backtracking collapsed the
    step below 1e-12), "energy_slope" (five consecutive accepted drops
    below slope_tol * max(1, |J|)).
    """
    if delta is None:
        delta = 1e-4 * max(field0.range(), 1e-12) / field0.h
    if delta <= 0:
        raise InvalidParameterError("flow regularization needs delta > 0")
    ok = field0.mask != MASK_EXTERIOR
    valid = ok[:-1, :-1] & ok[:-1, 1:] & ok[1:, :-1] & ok[1:, 1:]
    frozen = field0.mask != MASK_INTERIOR
    v = field0.values.copy()
    if field0.dirichlet:
        v[field0.mask == MASK_RING] = 0.0

    fprime = source.derivative()
    if fprime is not None and clip_range is not None:
        lo, hi = clip_range
        raw_fprime = fprime
        fprime = lambda t: raw_fprime(np.clip(t, lo, hi))

    E = _flow_energy(v, field0, flux, source, delta, valid)
    energies = [E]
    asyms = [asymmetry_measure(field0.with_values(v), field_centroid(field0), n_theta)]
    grad, diag = _flow_gradient(v, field0, flux, source, delta, valid, frozen, fprime)
    dt = 0.5
    stop_reason = "max_steps"
    steps = 0
    slow_drops = 0
    for _ in range(max_steps):
        direction = grad / diag
        accepted = False
        while dt >= 1e-12:
            cand = v - dt * direction
            if clip_range is not None:
                np.clip(cand, clip_range[0], clip_range[1], out=cand)
            E_new = _flow_energy(cand, field0, flux, source, delta, valid)
            if E_new < E:
                accepted = True
                break
            dt *= 0.5
        if not accepted:
            stop_reason = "stationary"
            break
        drop = E - E_new
        v, E = cand, E_new
        steps += 1
        energies.append(E)
        fld = field0.with_values(v)
        asyms.append(asymmetry_measure(fld, field_centroid(fld), n_theta))
        grad, diag = _flow_gradient(v, field0, flux, source, delta, valid, frozen, fprime)
        dt = min(dt * 1.25, 4.0)
        if slope_tol > 0.0 and drop <= slope_tol * max(1.0, abs(E)):
            slow_drops += 1
            if slow_drops >= 5:
                stop_reason = "energy_slope"
                break
        else:
            slow_drops = 0
    return FlowTrace(
        energy_history=np.asarray(energies),
        asymmetry_history=np.asarray(asyms),
        final_field=field0.with_values(v),
        step_count=steps,
        stop_reason=stop_reason,
        delta=float(delta),
    )


# ---------------------------------------------------------------------------
# local-symmetry detector


@dataclass(frozen=True)
class SymmetryRegion:
    center: tuple
    inner_radius: float
    outer_radius: float
    fit_error: float
    inner_mean: float
    outer_mean: float

    def to_json_dict(self):
        return {
            "center": [self.center[0], self.center[1]],
            "inner_radius": self.inner_radius,
            "outer_radius": self.outer_radius,
            "fit_error": self.fit_error,
            "inner_mean": self.inner_mean,
            "outer_mean": self.outer_mean,
        }


@dataclass(frozen=True)
class SymmetryReport:
    regions: tuple
    flat_fraction: float
    covered_fraction: float
    residual_fraction: float
    flat_tol: float
    ring_tol: float
    capped: bool

    def to_json_dict(self):
        return {
            "regions": [r.to_json_dict() for r in self.regions],
            "flat_fraction": self.flat_fraction,
            "covered_fraction": self.covered_fraction,
            "residual_fraction": self.residual_fraction,
            "flat_tol": self.flat_tol,
            "ring_tol": self.ring_tol,
            "capped": self.capped,
        }


def _candidate_centers(field, vmin, vrange):
    """Candidate symmetry centers: centroids of regional-maximum
    plateaus and of superlevel components, highest level first (flat
    plateaus have no unique maximum, so both kinds are needed)."""
    v = field.values
    keep = field.mask != MASK_EXTERIOR
    interior = field.mask == MASK_INTERIOR
    xs = field.xs
    out = []

    mx = ndimage.maximum_filter(v, size=3)
    peaks = interior & (v >= mx - 1e-12 * max(vrange, 1e-300)) & (v > vmin + 0.05 * vrange)
    labels, count = ndimage.label(peaks)
    if count:
        for (cy, cx), lab in zip(
            ndimage.center_of_mass(peaks, labels, range(1, count + 1)),
            range(1, count + 1),
        ):
            level = float(np.max(v[labels == lab]))
            out.append((level, xs[0] + cx * field.h, xs[0] + cy * field.h))

    for level in np.linspace(vmin + 0.1 * vrange, vmin + 0.9 * vrange, 9):
        above = keep & (v >= level)
        labels, count = ndimage.label(above)
        for lab in range(1, count + 1):
            cy, cx = ndimage.center_of_mass(above, labels, lab)
            out.append((float(level), xs[0] + cx * field.h, xs[0] + cy * field.h))

    out.sort(key=lambda t: -t[0])
    # cluster within 3h; averaging the duplicates (superlevel-ring
    # centroids are sub-lattice accurate) beats any single argmax node
    clusters = []
    for level, cx, cy in out:
        for c in clusters:
            if math.hypot(cx - c[0] / c[2], cy - c[1] / c[2]) <= 3.0 * field.h:
                c[0] += cx
                c[1] += cy
                c[2] += 1
                break
        else:
            clusters.append([cx, cy, 1])
    return [(c[0] / c[2], c[1] / c[2]) for c in clusters]


def _grow_regions(field, center, ring_tol, mono_eps, n_theta, max_runs=8):
    """Maximal runs of rings that are angularly flat (std <= ring_tol)
    with strictly decreasing means, innermost first; a run starting at
    the first ring is reported as a ball (inner radius 0)."""
    try:
        radii, means, stds = ring_profile(field, center, n_theta)
    except InvalidParameterError:
        return []
    ok = stds <= ring_tol
    out = []
    k = 0
    while k < radii.size and len(out) < max_runs:
        if not ok[k]:
            k += 1
            continue
        start = k
        while k + 1 < radii.size and ok[k + 1] and means[k + 1] < means[k] - mono_eps:
            k += 1
        if k > start:
            out.append(
                SymmetryRegion(
                    center=(float(center[0]), float(center[1])),
                    inner_radius=0.0 if start == 0 else float(radii[start]),
                    outer_radius=float(radii[k]),
                    fit_error=float(np.max(stds[start : k + 1])),
                    inner_mean=float(means[start]),
                    outer_mean=float(means[k]),
                )
            )
        k += 1
    return out


def _annuli_overlap(a, b, tol):
    d = math.hypot(a.center[0] - b.center[0], a.center[1] - b.center[1])
    lo = max(0.0, a.inner_radius - b.outer_radius, b.inner_radius - a.outer_radius)
    return lo + tol <= d <= a.outer_radius + b.outer_radius - tol


def detect_local_symmetry(
    field, flat_tol=None, ring_tol=None, mono_eps=None, max_regions=64, n_theta=256
):
    """Decompose a field into radial strictly-decreasing annuli plus a
    flat set plus a residual.

    Fractions are over interior nodes: flat (|grad u| < flat_tol),
    covered (inside some region's annulus, gradient not flat), residual
    (the rest).  Regions are grown per candidate center and greedily
    kept disjoint, larger annuli first, capped at max_regions.
    """
    gx, gy = node_gradients(field)
    q = np.hypot(gx, gy)
    interior = field.mask == MASK_INTERIOR
    keep = field.mask != MASK_EXTERIOR
    vmin = float(np.min(field.values[keep]))
    vrange = field.range()
    # stencils spanning a zeroed Dirichlet node overstate |grad u| by up
    # to 2x, so the tolerance reference comes from ring-free stencils
    polluted = ndimage.binary_dilation(field.mask == MASK_RING)
    ref = interior & ~polluted
    if not np.any(ref):
        ref = interior
    qmax = float(np.max(q[ref])) if np.any(ref) else 0.0
    if flat_tol is None:
        flat_tol = 0.01 * max(qmax, 1e-300)
    if ring_tol is None:
        ring_tol = 0.02 * max(vrange, 1e-300)
    if mono_eps is None:
        mono_eps = 1e-3 * max(vrange, 1e-300)

    flat = interior & (q < flat_tol)
    X, Y = field.meshes()
    regions = []
    if vrange > 0:
        for center in _candidate_centers(field, vmin, vrange):
            for reg in _grow_regions(field, center, ring_tol, mono_eps, n_theta):
                # an annulus region must dominate its inner hole: values
                # inside may not dip below the inner ring
                if reg.inner_radius > 0:
                    hole = interior & (
                        np.hypot(X - reg.center[0], Y - reg.center[1])
                        < reg.inner_radius
                    )
                    if np.any(hole) and float(np.min(field.values[hole])) < (
                        reg.inner_mean - 3.0 * ring_tol
                    ):
                        continue
                regions.append(reg)

    regions.sort(
        key=lambda r: -(r.outer_radius**2 - r.inner_radius**2)
    )
    kept = []
    capped = False
    for reg in regions:
        if any(_annuli_overlap(reg, other, field.h) for other in kept):
            continue
        if len(kept) >= max_regions:
            capped = True
            break
        kept.append(reg)

    covered = np.zeros_like(flat)
    for reg in kept:
        rr = np.hypot(X - reg.center[0], Y - reg.center[1])
        covered |= (
            interior
            & (rr >= reg.inner_radius - 0.5 * field.h)
            & (rr <= reg.outer_radius + 0.5 * field.h)
        )
    n_int = int(np.sum(interior))
    flat_fraction = float(np.sum(flat)) / n_int
    covered_fraction = float(np.sum(covered & ~flat)) / n_int
    return SymmetryReport(
        regions=tuple(kept),
        flat_fraction=flat_fraction,
        covered_fraction=covered_fraction,
        residual_fraction=1.0 - flat_fraction - covered_fraction,
        flat_tol=float(flat_tol),
        ring_tol=float(ring_tol),
        capped=capped,
    )


# ---------------------------------------------------------------------------
# serialization


def save_field_csv(field, path):
    """Header R,h,nx,ny then the value lattice row-major, one row per line."""
    with open(path, "w") as fh:
        fh.write("R,h,nx,ny\n")
        fh.write("%.17g,%.17g,%d,%d\n" % (field.R, field.h, field.n, field.n))
        np.savetxt(fh, field.values, delimiter=",", fmt="%.17g")


def load_field_csv(path):
    with open(path) as fh:
        header = fh.readline().strip().split(",")
        if header != ["R", "h", "nx", "ny"]:
            raise ValueError("not a disk-field CSV: header %r" % (header,))
        R, h, nx, ny = fh.readline().strip().split(",")
        values = np.loadtxt(fh, delimiter=",")
    values = values.reshape(int(ny), int(nx))
    field = DiskField.from_values(float(R), values, dirichlet=True)
    ring_vals = values[field.mask == MASK_RING]
    if ring_vals.size and np.max(np.abs(ring_vals)) > 0:
        field = DiskField(field.R, field.h, values, field.mask, dirichlet=False)
    return field
