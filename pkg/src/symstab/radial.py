"""Radial profiles of quasilinear problems and their stability machinery.

A radial function U(r) on [R1, R2] solves

    -( g(-U'(r)) r^(N-1) )' + f(U) r^(N-1) = 0

in the flux form; for profiles whose flux vanishes at the inner radius
(flat start: U'(R1) = 0, the only case this module integrates) the
equation is equivalent to the integral identity

    g(-U'(r)) r^(N-1) = integral_{R1}^{r} f(U(t)) t^(N-1) dt.

The marcher below advances that identity directly: the source moment on
each step is integrated by a trapezoid that is *exact* for linear f(U(t))
against the weight t^(N-1), so constant-source profiles (the torsion
family U = (R^2 - r^2)/(2N) at p = 2 and -U' = (r/N)^(1/(p-1)) generally)
are reproduced to rounding error on any grid.

Also here: Dirichlet shooting, the strong-form ODE residual, the radial
energy J(U) = omega * int (G(|U'|) - F(U)) r^(N-1) dr, the inward-dilation
energy comparison (every non-flat profile with a flat outer end loses
energy under u(x) -> u((1+eps)x) patched with its outer value, provided
t g(t) < N G(t)), and the second-variation quadratic form

    Q(Phi) = int ( g'(-U') Phi'^2 - f'(U) Phi^2 ) r^(N-1) dr

with the ramped direction Phi = U' H_eps that certifies instability of
monotone profiles with flat ends.
"""

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate as sciint
from scipy.special import gamma as _gamma_fn

from .operators import (
    ConstantSource,
    FluxRangeError,
    FracPowerSource,
    InvalidParameterError,
    PowerFlux,
    ZeroSource,
    dilation_monotonicity,
    flux_slope_bound,
)

__all__ = [
    "RadialProfile",
    "ShootResult",
    "OdeResidual",
    "RescaleReport",
    "InstabilityScan",
    "sphere_area",
    "integrate_radial_ivp",
    "shoot_dirichlet",
    "ode_residual",
    "radial_energy",
    "rescaling_compare",
    "second_variation_Q",
    "find_negative_direction",
    "q5_limit",
    "save_profile_csv",
]


def sphere_area(dim):
    """Surface area of the unit sphere in R^dim (2 for dim = 1)."""
    return 2.0 * math.pi ** (dim / 2.0) / _gamma_fn(dim / 2.0)


@dataclass(frozen=True)
class RadialProfile:
    """Sampled radial function: radii, values, derivative values."""

    r: np.ndarray
    U: np.ndarray
    Up: np.ndarray
    dim: int
    monotone: bool = False

    def __post_init__(self):
        r = np.asarray(self.r, dtype=float)
        U = np.asarray(self.U, dtype=float)
        Up = np.asarray(self.Up, dtype=float)
        if r.ndim != 1 or r.size < 2:
            raise InvalidParameterError("profile needs at least 2 radial nodes")
        if not (r.shape == U.shape == Up.shape):
            raise InvalidParameterError("r, U, Up must share one shape")
        if r[0] < 0 or np.any(np.diff(r) <= 0):
            raise InvalidParameterError("radii must increase strictly from r >= 0")
        if int(self.dim) < 1:
            raise InvalidParameterError("dimension must be a positive integer")
        if self.monotone:
            tol = 1e-10 * max(1.0, float(np.max(np.abs(U))))
            if np.any(Up > tol) or np.any(np.diff(U) > tol):
                raise InvalidParameterError("monotone flag set on a non-monotone profile")
        object.__setattr__(self, "r", r)
        object.__setattr__(self, "U", U)
        object.__setattr__(self, "Up", Up)
        object.__setattr__(self, "dim", int(self.dim))

    @property
    def endpoint_data(self):
        return float(self.U[0]), float(self.U[-1])

    @classmethod
    def from_callable(cls, U_fn, Up_fn, r_lo, r_hi, n=4096, dim=2, monotone=None):
        r = np.linspace(float(r_lo), float(r_hi), int(n))
        U = np.asarray(U_fn(r), dtype=float)
        Up = np.asarray(Up_fn(r), dtype=float)
        if monotone is None:
            monotone = bool(np.all(Up <= 1e-12 * max(1.0, float(np.max(np.abs(U))))))
        return cls(r, U, Up, dim, monotone)

    def consistency_defect(self):
        """max_i |U(r_{i+1}) - U(r_i) - trapezoid of U' on the step|."""
        dr = np.diff(self.r)
        steps = 0.5 * dr * (self.Up[1:] + self.Up[:-1])
        return float(np.max(np.abs(np.diff(self.U) - steps)))

    def interp(self, rq):
        """Linear interpolation of (U, U') at query radii."""
        rq = np.asarray(rq, dtype=float)
        return np.interp(rq, self.r, self.U), np.interp(rq, self.r, self.Up)


@dataclass(frozen=True)
class ShootResult:
    profile: RadialProfile
    center_value: float
    boundary_miss: float
    iterations: int

    def to_json_dict(self):
        u1, u2 = self.profile.endpoint_data
        return {
            "center_value": self.center_value,
            "boundary_miss": self.boundary_miss,
            "iterations": self.iterations,
            "dim": self.profile.dim,
            "n_points": int(self.profile.r.size),
            "inner_radius": float(self.profile.r[0]),
            "outer_radius": float(self.profile.r[-1]),
            "inner_value": u1,
            "outer_value": u2,
            "monotone": bool(self.profile.monotone),
        }


# ---------------------------------------------------------------------------
# integration


def _scalar_source(source):
    """Scalar fast path for the marching loop; clamps transient t < 0."""
    if isinstance(source, ZeroSource):
        return lambda r, u: 0.0
    if isinstance(source, ConstantSource):
        c = float(source.c)
        return lambda r, u: c
    if isinstance(source, FracPowerSource):
        terms = [(c, j / source.k) for c, j in source.terms]

        def fval(r, u, _terms=terms):
            if u < 0.0:
                u = 0.0
            tot = 0.0
            for c, e in _terms:
                tot += c if e == 0.0 else c * u**e
            return tot

        return fval

    def fval(r, u):
        return float(np.asarray(source.value(r, u if u > 0.0 else 0.0)))

    return fval


def _odd_inverse(flux):
    """Scalar inverse of the odd extension t -> sign(t) g(|t|).

    For bounded flux laws the inverse becomes float-meaningless within
    rounding distance of the supremum (its condition number diverges),
    so targets inside a 1e-9 relative band below sup g are rejected --
    that is the regime where the problem genuinely has no resolvable
    slope, not a numerical accident to be extrapolated through.
    """
    sup = flux.value_sup
    if isinstance(flux, PowerFlux):
        ex = 1.0 / (flux.p - 1.0)

        def inv(y, _ex=ex):
            return 0.0 if y == 0.0 else math.copysign(abs(y) ** _ex, y)

        return inv

    def inv(y):
        if y == 0.0:
            return 0.0
        if sup is not None and abs(y) >= sup * (1.0 - 1e-9):
            raise FluxRangeError(
                "flux moment %.12g saturates the law's supremum %g" % (abs(y), sup)
            )
        return math.copysign(float(flux.invert_value(abs(y))), y)

    return inv


def _advance(a, b, U_a, m_a, S_a, f_a, dim, inv, fval, corrections):
    """One flat-start step of the integral identity from radius a to b.

    The source moment uses the weight-exact trapezoid: f(U(t)) is
    interpolated linearly on [a, b] and integrated against t^(dim-1)
    exactly, via the monomial moments M0 and M1.
    """
    M0 = (b**dim - a**dim) / dim
    M1 = (b ** (dim + 1) - a ** (dim + 1)) / (dim + 1)
    den = b - a
    wa = (b * M0 - M1) / den
    wb = (M1 - a * M0) / den
    rpow = b ** (dim - 1)
    U_b = U_a - den * m_a
    m_b = m_a
    S_b = S_a
    f_b = f_a
    for _ in range(corrections + 1):
        f_b = fval(b, U_b)
        S_b = S_a + wa * f_a + wb * f_b
        m_b = inv(S_b / rpow)
        U_b = U_a - 0.5 * den * (m_a + m_b)
    return U_b, m_b, S_b, f_b


def integrate_radial_ivp(
    flux,
    source,
    dim,
    center_value,
    radius,
    n=4096,
    corrections=3,
    stop_at_zero=True,
    inner_radius=0.0,
):
    """March the flat-start integral identity outward from inner_radius.

    Starts with U = center_value and zero flux (U' = 0; profiles with a
    nonzero inner flux are outside this contract).  Each step solves the
    implicit trapezoid by a fixed number of corrections; -U' is recovered
    through the odd extension of the flux inverse, so sign changes of U'
    (sources that push the profile back up) are handled.

    Stops early when U crosses zero (event located by bisection on the
    final step, appended as the last node) unless stop_at_zero is False.
    Raises FluxRangeError, tagged with the radius, when the flux moment
    exceeds what a bounded flux law can carry.
    """
    if center_value < 0:
        raise InvalidParameterError("center value must be >= 0")
    if not radius > inner_radius >= 0:
        raise InvalidParameterError("needs radius > inner_radius >= 0")
    n = int(n)
    if n < 3:
        raise InvalidParameterError("need at least 3 grid points")
    dim = int(dim)
    inv = _odd_inverse(flux)
    fval = _scalar_source(source)

    r = np.linspace(inner_radius, radius, n)
    U = np.empty(n)
    m = np.empty(n)  # m = -U'
    U[0], m[0] = float(center_value), 0.0
    S = 0.0
    f_a = fval(r[0], U[0])
    last = n - 1
    event = None
    for k in range(n - 1):
        a, b = r[k], r[k + 1]
        try:
            U_b, m_b, S_b, f_b = _advance(a, b, U[k], m[k], S, f_a, dim, inv, fval, corrections)
        except FluxRangeError as exc:
            raise FluxRangeError(
                "flux moment leaves the range of the flux law near radius %.8g (%s)"
                % (b, exc)
            ) from exc
        if stop_at_zero and U_b < 0.0:
            lo, hi = a, b
            m_t = m_b
            try:
                for _ in range(60):
                    mid = 0.5 * (lo + hi)
                    if not lo < mid < hi:  # bracket below float spacing
                        break
                    U_t, m_t, _, _ = _advance(
                        a, mid, U[k], m[k], S, f_a, dim, inv, fval, corrections
                    )
                    if U_t < 0.0:
                        hi = mid
                    else:
                        lo = mid
            except FluxRangeError as exc:
                raise FluxRangeError(
                    "flux moment leaves the range of the flux law near radius %.8g (%s)"
                    % (mid, exc)
                ) from exc
            r_ev = 0.5 * (lo + hi)
            event = (r_ev if r_ev > a else hi, 0.0, m_t)
            last = k
            break
        U[k + 1], m[k + 1] = U_b, m_b
        S, f_a = S_b, f_b

    if event is not None:
        r_ev, U_ev, m_ev = event
        r = np.concatenate([r[: last + 1], [r_ev]])
        U = np.concatenate([U[: last + 1], [U_ev]])
        m = np.concatenate([m[: last + 1], [m_ev]])
    mono = bool(np.all(m >= -1e-12 * max(1.0, float(np.max(np.abs(m))))))
    return RadialProfile(r, U, -m, dim, monotone=mono)


def shoot_dirichlet(
    flux, source, dim, radius, bracket, tol=1e-10, n=4096, max_iter=120, corrections=3
):
    """Bisect the center value until the profile meets U(radius) = 0.

    The boundary miss is U(radius) when the march reaches the boundary;
    when U hits zero early at r* the miss is the geometric deficit
    -(radius - r*) < 0, so the miss changes sign across the solution and
    stays monotone through degenerate crossings near the center.  Needs
    a sign change across the bracket.
    """

    evals = [0]

    def miss(u_c):
        evals[0] += 1
        prof = integrate_radial_ivp(
            flux, source, dim, u_c, radius, n=n, corrections=corrections
        )
        r_end = float(prof.r[-1])
        if r_end < radius * (1.0 - 1e-12):
            return -(radius - r_end), prof
        return float(prof.U[-1]), prof

    lo, hi = float(bracket[0]), float(bracket[1])
    m_lo, p_lo = miss(lo)
    if abs(m_lo) <= tol:
        return ShootResult(p_lo, lo, abs(m_lo), evals[0])
    m_hi, p_hi = miss(hi)
    if abs(m_hi) <= tol:
        return ShootResult(p_hi, hi, abs(m_hi), evals[0])
    if math.copysign(1.0, m_lo) == math.copysign(1.0, m_hi):
        raise ValueError(
            "boundary miss has one sign across the bracket: miss(%g)=%.3g, miss(%g)=%.3g"
            % (lo, m_lo, hi, m_hi)
        )
    best = min((abs(m_lo), lo, p_lo), (abs(m_hi), hi, p_hi))
    for _ in range(max_iter):
        mid = 0.5 * (lo + hi)
        m_mid, p_mid = miss(mid)
        if abs(m_mid) < best[0]:
            best = (abs(m_mid), mid, p_mid)
        if abs(m_mid) <= tol:
            break
        if math.copysign(1.0, m_mid) == math.copysign(1.0, m_lo):
            lo, m_lo = mid, m_mid
        else:
            hi, m_hi = mid, m_mid
        if hi - lo <= 1e-16 * max(1.0, abs(hi)):
            break
    miss_best, u_best, prof_best = best
    if miss_best > tol:
        raise RuntimeError(
            "shooting stalled: best boundary miss %.3g exceeds tol %.3g" % (miss_best, tol)
        )
    return ShootResult(prof_best, u_best, miss_best, evals[0])


# ---------------------------------------------------------------------------
# residual and energy


@dataclass(frozen=True)
class OdeResidual:
    sup: float
    excluded_fraction: float
    n_interior: int

    def to_json_dict(self):
        return {
            "sup": self.sup,
            "excluded_fraction": self.excluded_fraction,
            "n_interior": self.n_interior,
        }


def ode_residual(profile, flux, source, up_tol_frac=1e-8, margin=2):
    """Sup-norm residual of the strong radial ODE,

        g'(-U') (-U'') r^(N-1) + (N-1) g(-U') r^(N-2) - f(U) r^(N-1),

    with U'' by finite differences of the stored U'.  Interior nodes
    within `margin` grid points of a vanishing U' are excluded (g' can be
    singular there for sublinear flux laws); the excluded share is
    reported alongside the sup.
    """
    r, U, Up, dim = profile.r, profile.U, profile.Up, profile.dim
    m = -Up
    U2 = np.gradient(Up, r)
    flat = np.abs(m) <= up_tol_frac * max(float(np.max(np.abs(m))), 1e-300)
    for _ in range(margin):
        flat = flat | np.roll(flat, 1) | np.roll(flat, -1)
    use = ~flat
    use[0] = use[-1] = False
    idx = np.nonzero(use)[0]
    n_int = max(r.size - 2, 1)
    if idx.size == 0:
        return OdeResidual(0.0, 1.0, 0)
    rs, ms = r[idx], m[idx]
    with np.errstate(divide="ignore", invalid="ignore"):
        lhs = flux.slope(ms) * (-U2[idx]) * rs ** (dim - 1)
        if dim > 1:
            lhs = lhs + (dim - 1) * flux.value(ms) * rs ** (dim - 2)
    rhs = np.asarray(source.value(rs, U[idx])) * rs ** (dim - 1)
    sup = float(np.max(np.abs(lhs - rhs)))
    return OdeResidual(sup, 1.0 - idx.size / n_int, int(idx.size))


def radial_energy(profile, flux, source):
    """J(U) = omega_(N-1) * int (G(|U'|) - F(U)) r^(N-1) dr, Simpson rule."""
    r, dim = profile.r, profile.dim
    integrand = (flux.primitive(np.abs(profile.Up)) - source.primitive(profile.U)) * r ** (
        dim - 1
    )
    return sphere_area(dim) * float(sciint.simpson(integrand, x=r))


# ---------------------------------------------------------------------------
# rescaling comparison


@dataclass(frozen=True)
class RescaleReport:
    eps: float
    J_original: float
    J_rescaled: float
    gap: float
    dilation_monotone: bool

    def to_json_dict(self):
        return {
            "eps": self.eps,
            "J_original": self.J_original,
            "J_rescaled": self.J_rescaled,
            "gap": self.gap,
            "dilation_monotone": self.dilation_monotone,
        }


def rescaling_compare(profile, flux, source, eps):
    """Energy of the inward-dilated competitor against the original.

    The competitor is u_eps(x) = U((1+eps)|x|) where the dilated copy
    fits, extended by the outer value U(R) on the remaining collar; it
    matches the boundary data, so it is admissible.  When the flux law
    satisfies the dilation monotonicity t g(t) < N G(t), the gap
    J(u_eps) - J(U) is negative for every non-flat profile -- a critical
    point that is not an energy minimizer among its own dilates.  The
    comparison needs a ball profile (inner radius 0) with a flat outer
    end (U'(R) = 0).
    """
    if eps <= 0:
        raise InvalidParameterError("dilation needs eps > 0")
    r, U, Up, dim = profile.r, profile.U, profile.Up, profile.dim
    if r[0] != 0.0:
        raise InvalidParameterError("rescaling comparison needs a ball profile (inner radius 0)")
    scale = max(float(np.max(np.abs(Up))), 1e-300)
    if abs(float(Up[-1])) > 1e-8 * scale:
        raise InvalidParameterError("rescaling comparison needs a flat outer end (U'(R) = 0)")
    u0 = float(U[-1])
    lam = 1.0 + eps
    rq = lam * r
    inside = rq <= r[-1]
    U_eps = np.where(inside, np.interp(np.minimum(rq, r[-1]), r, U), u0)
    Up_eps = np.where(inside, lam * np.interp(np.minimum(rq, r[-1]), r, Up), 0.0)
    dilated = RadialProfile(r, U_eps, Up_eps, dim, monotone=profile.monotone)
    J0 = radial_energy(profile, flux, source)
    J1 = radial_energy(dilated, flux, source)
    return RescaleReport(
        eps=float(eps),
        J_original=J0,
        J_rescaled=J1,
        gap=J1 - J0,
        dilation_monotone=bool(dilation_monotonicity(flux, dim)),
    )


# ---------------------------------------------------------------------------
# second variation


def second_variation_Q(profile, flux, f_prime, phi, _phip=None):
    """Quadratic form int (g'(-U') Phi'^2 - f'(U) Phi^2) r^(N-1) dr.

    Phi is sampled on the profile grid and must vanish at both ends;
    Phi' is taken by finite differences.  Where U' and Phi vanish
    together the integrand is set to its limit 0 (this is where g' may
    be singular for sublinear laws and f' at the profile's endpoint
    values; directions built as U' * cutoff vanish exactly there).
    """
    r, U, Up, dim = profile.r, profile.U, profile.Up, profile.dim
    phi = np.asarray(phi, dtype=float)
    if phi.shape != r.shape:
        raise InvalidParameterError("direction must be sampled on the profile grid")
    pscale = max(float(np.max(np.abs(phi))), 1e-300)
    if abs(float(phi[0])) > 1e-10 * pscale or abs(float(phi[-1])) > 1e-10 * pscale:
        raise InvalidParameterError("direction must vanish at both endpoints")
    m = -Up
    phip = np.gradient(phi, r) if _phip is None else np.asarray(_phip, dtype=float)
    mscale = max(float(np.max(np.abs(m))), 1e-300)
    both_zero = (np.abs(m) <= 1e-12 * mscale) & (np.abs(phi) <= 1e-12 * pscale)
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        term1 = np.where(both_zero, 0.0, flux.slope(m) * phip * phip)
        fp = np.zeros_like(U) if f_prime is None else np.asarray(f_prime(U), dtype=float)
        term2 = np.where(phi == 0.0, 0.0, fp * phi * phi)
    integrand = (term1 - term2) * r ** (dim - 1)
    return float(sciint.simpson(integrand, x=r))


def q5_limit(profile, flux):
    """(N-1) int g(-U') U' r^(N-3) dr: the surviving (negative) part of
    Q(U' H_eps) as the ramps collapse."""
    r, Up, dim = profile.r, profile.Up, profile.dim
    if dim == 1:
        return 0.0
    with np.errstate(divide="ignore", invalid="ignore"):
        integrand = np.where(r > 0, flux.value(-Up) * Up * r ** (dim - 3.0), 0.0)
    return (dim - 1) * float(sciint.simpson(integrand, x=r))


def _smoothstep_window(r, r_lo, r_hi, eps):
    """C^1 plateau window: cubic smoothstep ramps of width eps at both
    ends (max slope 1.5/eps), identically 1 between them."""
    x = np.clip((r - r_lo) / eps, 0.0, 1.0)
    y = np.clip((r_hi - r) / eps, 0.0, 1.0)
    up = x * x * (3.0 - 2.0 * x)
    down = y * y * (3.0 - 2.0 * y)
    H = up * down
    Hp = (6.0 * x * (1.0 - x) / eps) * down - up * (6.0 * y * (1.0 - y) / eps)
    return H, Hp


@dataclass(frozen=True)
class InstabilityScan:
    rows: tuple  # (eps, Q, Q5, Q6_bound) per scanned width
    found: bool
    eps_star: float | None
    Q_star: float | None
    Phi_star: np.ndarray | None
    hypotheses: dict

    def to_json_dict(self):
        return {
            "rows": [
                {"eps": e, "Q": q, "Q5": q5, "Q6_bound": q6} for e, q, q5, q6 in self.rows
            ],
            "found": self.found,
            "eps_star": self.eps_star,
            "Q_star": self.Q_star,
            "hypotheses": self.hypotheses,
        }


def find_negative_direction(profile, flux, f_prime, eps_seq=None):
    """Scan ramp widths for a direction Phi = U' H_eps with Q(Phi) < 0.

    For monotone profiles with flat ends and a flux law whose relative
    slope t g'(t)/g(t) stays bounded on the profile's slope range, the
    form decomposes into a strictly negative curvature part Q5 (whose
    eps -> 0 limit is (N-1) int g(-U') U' r^(N-3) dr < 0) plus ramp
    contributions controlled by Q6_bound -> 0, so some finite width must
    go negative.  Exhaustion without Q < 0 is reported as found=False
    with the full table -- a meaningful outcome when those hypotheses
    fail (e.g. an unbounded relative slope).
    """
    r, Up, dim = profile.r, profile.Up, profile.dim
    L = float(r[-1] - r[0])
    if eps_seq is None:
        eps_seq = []
        e = 0.25 * L
        while e >= 1e-3 * L * 0.999:
            eps_seq.append(e)
            e *= 0.5
    m = -Up
    t0 = float(np.max(np.abs(m)))
    sb = flux_slope_bound(flux, t0=t0 if t0 > 0 else 1.0)
    scale = max(t0, 1e-300)
    hypotheses = {
        "monotone": bool(profile.monotone),
        "flat_inner": bool(abs(float(Up[0])) <= 1e-8 * scale),
        "flat_outer": bool(abs(float(Up[-1])) <= 1e-8 * scale),
        "slope_bound_holds": bool(sb.holds),
        "slope_bound_gamma": float(sb.gamma) if sb.holds else None,
    }
    rows = []
    found = False
    eps_star = Q_star = None
    phi_star = None
    for eps in eps_seq:
        H, Hp = _smoothstep_window(r, float(r[0]), float(r[-1]), eps)
        phi = Up * H
        Q = second_variation_Q(profile, flux, f_prime, phi)
        with np.errstate(divide="ignore", invalid="ignore"):
            q5_int = np.where(r > 0, flux.value(m) * Up * H * H * r ** (dim - 3.0), 0.0)
        Q5 = (dim - 1) * float(sciint.simpson(q5_int, x=r)) if dim > 1 else 0.0
        ramp = np.abs(Hp) > 0
        if sb.holds:
            g_ramp = np.where(ramp, flux.value(m) * r ** (dim - 1), 0.0)
            Q6 = sb.gamma * (1.5 / eps) ** 2 * float(sciint.simpson(g_ramp, x=r))
        else:
            Q6 = math.inf
        rows.append((float(eps), Q, Q5, Q6))
        if not found and Q < 0.0:
            found = True
            eps_star, Q_star, phi_star = float(eps), Q, phi
    return InstabilityScan(
        rows=tuple(rows),
        found=found,
        eps_star=eps_star,
        Q_star=Q_star,
        Phi_star=phi_star,
        hypotheses=hypotheses,
    )


# ---------------------------------------------------------------------------
# serialization


def save_profile_csv(profile, path):
    """Write the profile as CSV columns r, U, Uprime."""
    data = np.column_stack([profile.r, profile.U, profile.Up])
    np.savetxt(path, data, delimiter=",", header="r,U,Uprime", comments="", fmt="%.17g")
