"""Flux laws, growth bounds, and the strong-maximum-principle classifier.

A flux law is a function g : [0, inf) -> [0, inf) with g(0) = 0, g
continuous, and g'(t) > 0 for t > 0.  It induces the degenerate operator
div( g(|grad u|) grad u / |grad u| ).  Two derived scalars drive all the
analysis here:

    primitive   G(t) = integral_0^t g(s) ds
    excess      H(t) = t g(t) - G(t)        (H' = t g'(t) > 0)

A growth bound is a continuous phi >= 0 with phi(0) = 0.  Writing
Phi(t) = integral_0^t phi, the strong maximum principle holds for the
operator perturbed by phi exactly when

    phi == 0 on some [0, d], d > 0,   or
    integral_0^delta dt / H^{-1}(Phi(t)) = +inf.

`classify_smp_growth` decides membership numerically: it computes partial
integrals over a dyadic cutoff sequence and fits the local power of
H^{-1}(Phi(t)) near zero.  For g(t) = t^(p-1) the criterion reduces to
divergence of integral dt / Phi(t)^(1/p), so phi(t) = C t^q is a member
exactly when q >= p - 1.

Also here: the slope-domination bound sup t^2 g'(t) / g(t) <= Gamma used
by second-variation estimates, the dilation monotonicity test
(t -> g(t) t^(1-N) strictly decreasing) behind energy rescaling
comparisons, and one-sided growth checks of a source term f near its
zero levels, which delegate to the classifier.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy import integrate


class InvalidParameterError(ValueError):
    pass


class FluxRangeError(ValueError):
    """A requested inversion target exceeds the range of g or H."""


# ---------------------------------------------------------------------------
# flux laws


def _asfloat(t):
    return np.asarray(t, dtype=float)


def _bisect_increasing(fn, y, hi0=1.0, expand=200, iters=120):
    """Solve fn(t) = y for increasing fn with fn(0) = 0, vectorized.

    Brackets by doubling from hi0; raises FluxRangeError if fn saturates
    below max(y).  Arithmetic bisection: 120 halvings leave an absolute
    bracket of hi * 2^-120, far below any tolerance used here.
    """
    y = _asfloat(y)
    scalar = y.ndim == 0
    y = np.atleast_1d(y)
    if np.any(y < 0):
        raise FluxRangeError("inversion target must be nonnegative")
    hi = np.full_like(y, hi0)
    with np.errstate(over="ignore", invalid="ignore"):
        for _ in range(expand):
            vals = fn(hi)
            need = vals < y
            if not np.any(need):
                break
            hi = np.where(need, 2.0 * hi, hi)
        else:
            vals = fn(hi)
            bad = vals < y
            if np.any(bad):
                raise FluxRangeError(
                    "target %.6g exceeds attainable supremum ~%.6g"
                    % (float(np.max(y[bad])), float(np.max(vals[bad])))
                )
        lo = np.zeros_like(y)
        for _ in range(iters):
            mid = 0.5 * (lo + hi)
            below = fn(mid) < y
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
    out = 0.5 * (lo + hi)
    out[y == 0.0] = 0.0
    return float(out[0]) if scalar else out


class FluxLaw:
    """Base class; concrete laws implement value/slope/primitive."""

    kind = "abstract"
    value_sup = None  # supremum of g for bounded laws, None if unbounded

    def value(self, t):
        raise NotImplementedError

    def slope(self, t):
        raise NotImplementedError

    def primitive(self, t):
        raise NotImplementedError

    def excess(self, t):
        t = _asfloat(t)
        return t * self.value(t) - self.primitive(t)

    def slope_ratio(self, t):
        """t^2 g'(t) / g(t); subclasses override where the quotient has a
        closed form immune to float underflow of g itself."""
        t = _asfloat(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            return t * t * np.asarray(self.slope(t)) / np.asarray(self.value(t))

    def invert_value(self, y):
        return _bisect_increasing(self.value, y)

    def descriptor(self):
        raise NotImplementedError

    def __repr__(self):
        d = self.descriptor()
        args = ", ".join("%s=%r" % (k, v) for k, v in d.items() if k != "kind")
        return "%s(%s)" % (type(self).__name__, args)


@dataclass(frozen=True, repr=False)
class PowerFlux(FluxLaw):
    """g(t) = t^(p-1), p > 1 (p-Laplacian)."""

    p: float
    kind = "power"

    def __post_init__(self):
        if not self.p > 1.0:
            raise InvalidParameterError("power flux needs p > 1, got %r" % (self.p,))

    def value(self, t):
        return _asfloat(t) ** (self.p - 1.0)

    def slope(self, t):
        t = _asfloat(t)
        with np.errstate(divide="ignore"):
            return (self.p - 1.0) * t ** (self.p - 2.0)

    def primitive(self, t):
        return _asfloat(t) ** self.p / self.p

    def excess(self, t):
        return (1.0 - 1.0 / self.p) * _asfloat(t) ** self.p

    def slope_ratio(self, t):
        return (self.p - 1.0) * _asfloat(t)

    def invert_value(self, y):
        return _asfloat(y) ** (1.0 / (self.p - 1.0))

    def descriptor(self):
        return {"kind": "power", "p": self.p}


@dataclass(frozen=True, repr=False)
class PowerSumFlux(FluxLaw):
    """g(t) = sum_k c_k t^(p_k - 1), all c_k > 0, p_k > 1."""

    terms: tuple
    kind = "power_sum"

    def __post_init__(self):
        terms = tuple((float(c), float(p)) for c, p in self.terms)
        if not terms:
            raise InvalidParameterError("power_sum flux needs at least one term")
        for c, p in terms:
            if c <= 0 or p <= 1:
                raise InvalidParameterError(
                    "power_sum terms need c > 0 and p > 1, got (%r, %r)" % (c, p)
                )
        object.__setattr__(self, "terms", terms)

    def value(self, t):
        t = _asfloat(t)
        return sum(c * t ** (p - 1.0) for c, p in self.terms)

    def slope(self, t):
        t = _asfloat(t)
        with np.errstate(divide="ignore"):
            return sum(c * (p - 1.0) * t ** (p - 2.0) for c, p in self.terms)

    def primitive(self, t):
        t = _asfloat(t)
        return sum(c * t ** p / p for c, p in self.terms)

    def excess(self, t):
        t = _asfloat(t)
        return sum(c * (1.0 - 1.0 / p) * t ** p for c, p in self.terms)

    def descriptor(self):
        return {"kind": "power_sum", "terms": [list(term) for term in self.terms]}


@dataclass(frozen=True, repr=False)
class MinimalSurfaceFlux(FluxLaw):
    """g(t) = t / sqrt(1 + t^2); bounded flux, sup g = 1, sup H = 1."""

    kind = "minimal_surface"
    value_sup = 1.0

    def value(self, t):
        t = _asfloat(t)
        return t / np.sqrt(1.0 + t * t)

    def slope(self, t):
        t = _asfloat(t)
        return (1.0 + t * t) ** -1.5

    def primitive(self, t):
        t = _asfloat(t)
        return np.sqrt(1.0 + t * t) - 1.0

    def excess(self, t):
        t = _asfloat(t)
        return 1.0 - 1.0 / np.sqrt(1.0 + t * t)

    def slope_ratio(self, t):
        t = _asfloat(t)
        return t / (1.0 + t * t)

    def invert_value(self, y):
        y = _asfloat(y)
        if np.any(y >= 1.0):
            raise FluxRangeError("minimal-surface flux is bounded by 1")
        return y / np.sqrt(1.0 - y * y)

    def descriptor(self):
        return {"kind": "minimal_surface"}


@dataclass(frozen=True, repr=False)
class StretchedExpFlux(FluxLaw):
    """g(t) = exp(-gamma * t^(-alpha)), gamma > 0, alpha > 0.

    Infinitely flat at t = 0 (slower than any power).  The
    slope-domination bound t^2 g'/g = gamma*alpha*t^(1-alpha) holds on
    (0, t0] exactly when alpha <= 1.
    """

    gamma: float
    alpha: float
    kind = "stretched_exp"
    value_sup = 1.0  # g increases to exp(0) = 1 as t -> infinity

    def __post_init__(self):
        if self.gamma <= 0 or self.alpha <= 0:
            raise InvalidParameterError("stretched_exp needs gamma > 0, alpha > 0")

    def value(self, t):
        t = _asfloat(t)
        with np.errstate(divide="ignore"):
            out = np.exp(-self.gamma * np.where(t > 0, t, 1.0) ** -self.alpha)
        return np.where(t > 0, out, 0.0)

    def slope(self, t):
        t = _asfloat(t)
        with np.errstate(divide="ignore"):
            safe = np.where(t > 0, t, 1.0)
            out = self.value(t) * self.gamma * self.alpha * safe ** (-self.alpha - 1.0)
        return np.where(t > 0, out, 0.0)

    def primitive(self, t):
        # no closed form; adaptive Gauss-Kronrod panel per value
        t = _asfloat(t)
        scalar = t.ndim == 0
        flat = np.atleast_1d(t).ravel()
        out = np.empty_like(flat)
        for i, ti in enumerate(flat):
            if ti <= 0:
                out[i] = 0.0
            else:
                val, _ = integrate.quad(
                    lambda s: math.exp(-self.gamma * s**-self.alpha),
                    0.0, ti, epsabs=1e-12, epsrel=1e-12,
                )
                out[i] = val
        out = out.reshape(np.atleast_1d(t).shape)
        return float(out[0]) if scalar else out

    def slope_ratio(self, t):
        return self.gamma * self.alpha * _asfloat(t) ** (1.0 - self.alpha)

    def invert_value(self, y):
        y = _asfloat(y)
        if np.any(y >= 1.0):
            raise FluxRangeError("stretched_exp flux is bounded by 1")
        with np.errstate(divide="ignore"):
            out = np.where(y > 0, (-self.gamma / np.log(np.where(y > 0, y, 0.5))) ** (1.0 / self.alpha), 0.0)
        return out

    def descriptor(self):
        return {"kind": "stretched_exp", "gamma": self.gamma, "alpha": self.alpha}


_FLUX_KINDS = {
    "power": PowerFlux,
    "power_sum": PowerSumFlux,
    "minimal_surface": MinimalSurfaceFlux,
    "stretched_exp": StretchedExpFlux,
}


def make_flux(kind, **params):
    """Build a flux law from its descriptor kind and parameters."""
    try:
        cls = _FLUX_KINDS[kind]
    except KeyError:
        raise InvalidParameterError(
            "unknown flux kind %r (have %s)" % (kind, sorted(_FLUX_KINDS))
        ) from None
    if kind == "power_sum" and "terms" in params:
        params = {"terms": tuple(tuple(t) for t in params["terms"])}
    return cls(**params)


def flux_from_descriptor(desc):
    d = dict(desc)
    return make_flux(d.pop("kind"), **d)


def invert_excess(flux, y, tol=1e-12):
    """Solve H(t) = y for the excess H of a flux law; vectorized in y.

    Monotone bisection (H' = t g' > 0); the result satisfies
    |H(t) - y| <= tol * max(1, y).  Raises FluxRangeError when y exceeds
    sup H (bounded excess, e.g. the minimal-surface law).
    """
    out = _bisect_increasing(flux.excess, y)
    res = np.abs(flux.excess(out) - y)
    if np.any(res > tol * np.maximum(1.0, np.abs(y))):
        raise FluxRangeError("excess inversion did not meet tolerance")
    return out


# ---------------------------------------------------------------------------
# growth bounds


class GrowthBound:
    kind = "abstract"

    def value(self, t):
        raise NotImplementedError

    def primitive(self, t):
        raise NotImplementedError

    def descriptor(self):
        raise NotImplementedError

    def __repr__(self):
        d = self.descriptor()
        args = ", ".join("%s=%r" % (k, v) for k, v in d.items() if k != "kind")
        return "%s(%s)" % (type(self).__name__, args)


@dataclass(frozen=True, repr=False)
class PowerGrowth(GrowthBound):
    """phi(t) = coeff * t^exponent, coeff > 0, exponent > 0."""

    coeff: float = 1.0
    exponent: float = 1.0
    kind = "power"

    def __post_init__(self):
        if self.coeff <= 0 or self.exponent <= 0:
            raise InvalidParameterError("power growth needs coeff > 0, exponent > 0")

    def value(self, t):
        return self.coeff * _asfloat(t) ** self.exponent

    def primitive(self, t):
        q1 = self.exponent + 1.0
        return self.coeff * _asfloat(t) ** q1 / q1

    def descriptor(self):
        return {"kind": "power", "coeff": self.coeff, "exponent": self.exponent}


@dataclass(frozen=True, repr=False)
class ZeroOnIntervalGrowth(GrowthBound):
    """phi == 0 on [0, d], then coeff * (t - d)^exponent."""

    d: float
    coeff: float = 1.0
    exponent: float = 1.0
    kind = "zero_on_interval"

    def __post_init__(self):
        if self.d < 0:
            raise InvalidParameterError("zero interval length must be >= 0")

    def value(self, t):
        t = _asfloat(t)
        return self.coeff * np.maximum(t - self.d, 0.0) ** self.exponent

    def primitive(self, t):
        q1 = self.exponent + 1.0
        return self.coeff * np.maximum(_asfloat(t) - self.d, 0.0) ** q1 / q1

    def descriptor(self):
        return {
            "kind": "zero_on_interval",
            "d": self.d,
            "coeff": self.coeff,
            "exponent": self.exponent,
        }


@dataclass(frozen=True, repr=False)
class TabulatedGrowth(GrowthBound):
    """Piecewise-linear interpolant of sample points, phi(0) = 0."""

    ts: tuple
    values: tuple
    kind = "tabulated"

    def __post_init__(self):
        ts = tuple(float(t) for t in self.ts)
        vals = tuple(float(v) for v in self.values)
        if len(ts) != len(vals) or len(ts) < 2:
            raise InvalidParameterError("tabulated growth needs matching sample arrays")
        if any(b <= a for a, b in zip(ts, ts[1:])):
            raise InvalidParameterError("tabulated abscissae must increase")
        if min(vals) < 0:
            raise InvalidParameterError("growth bound must be nonnegative")
        object.__setattr__(self, "ts", ts)
        object.__setattr__(self, "values", vals)

    def value(self, t):
        return np.interp(_asfloat(t), self.ts, self.values)

    def primitive(self, t):
        # exact integral of the piecewise-linear interpolant up to each t
        t = _asfloat(t)
        ts = np.asarray(self.ts)
        vs = np.asarray(self.values)
        cum = np.concatenate(
            [[0.0], np.cumsum(0.5 * (vs[1:] + vs[:-1]) * np.diff(ts))]
        )
        idx = np.clip(np.searchsorted(ts, t, side="right") - 1, 0, len(ts) - 2)
        t0 = ts[idx]
        frac = np.clip(t - t0, 0.0, ts[idx + 1] - t0)
        v0 = vs[idx]
        slope = (vs[idx + 1] - v0) / (ts[idx + 1] - t0)
        return cum[idx] + v0 * frac + 0.5 * slope * frac * frac

    def descriptor(self):
        return {"kind": "tabulated", "ts": list(self.ts), "values": list(self.values)}


_GROWTH_KINDS = {
    "power": PowerGrowth,
    "zero_on_interval": ZeroOnIntervalGrowth,
    "tabulated": TabulatedGrowth,
}


def make_growth(kind, **params):
    try:
        cls = _GROWTH_KINDS[kind]
    except KeyError:
        raise InvalidParameterError(
            "unknown growth kind %r (have %s)" % (kind, sorted(_GROWTH_KINDS))
        ) from None
    if kind == "tabulated":
        params = {"ts": tuple(params["ts"]), "values": tuple(params["values"])}
    return cls(**params)


def growth_from_descriptor(desc):
    d = dict(desc)
    return make_growth(d.pop("kind"), **d)


# ---------------------------------------------------------------------------
# source terms f(r, t)


class Source:
    """Source term f(r, t); autonomous kinds ignore r."""

    kind = "abstract"
    radial_dependence = False

    def value(self, r, t):
        raise NotImplementedError

    def value_t(self, t):
        return self.value(0.0, t)

    def primitive(self, t):
        """F(t) = integral_0^t f(s) ds (autonomous sources only)."""
        raise NotImplementedError(
            "antiderivative undefined for r-dependent source %r" % (self.kind,)
        )

    def derivative(self):
        """Return df/dt as a callable, or None if unavailable."""
        return None

    def descriptor(self):
        raise NotImplementedError

    def __repr__(self):
        d = self.descriptor()
        args = ", ".join("%s=%r" % (k, v) for k, v in d.items() if k != "kind")
        return "%s(%s)" % (type(self).__name__, args)


@dataclass(frozen=True, repr=False)
class ZeroSource(Source):
    kind = "zero"

    def value(self, r, t):
        return np.zeros(np.broadcast(_asfloat(r), _asfloat(t)).shape)

    def primitive(self, t):
        return np.zeros_like(_asfloat(t))

    def derivative(self):
        return lambda t: np.zeros_like(_asfloat(t))

    def descriptor(self):
        return {"kind": "zero"}


@dataclass(frozen=True, repr=False)
class ConstantSource(Source):
    c: float = 1.0
    kind = "constant"

    def value(self, r, t):
        return np.full(np.broadcast(_asfloat(r), _asfloat(t)).shape, self.c)

    def primitive(self, t):
        return self.c * _asfloat(t)

    def derivative(self):
        return lambda t: np.zeros_like(_asfloat(t))

    def descriptor(self):
        return {"kind": "constant", "c": self.c}


@dataclass(frozen=True, repr=False)
class FracPowerSource(Source):
    """f(t) = sum_j coeff_j * t^(j_pow / k): fractional power sums.

    Covers the closed-form companions of polynomial radial profiles, e.g.
    f(t) = 20 sqrt(t) - 8 for the quadratic bump in dimension 3, or
    f(t) = 36 t^(2/3) - 24 t^(1/3) for the cubic bump whose flat
    extension keeps a zero normal derivative.
    """

    k: int
    terms: tuple  # ((coeff, j_pow), ...)
    kind = "frac_power_sum"

    def __post_init__(self):
        if int(self.k) < 1:
            raise InvalidParameterError("frac_power_sum needs integer k >= 1")
        object.__setattr__(self, "k", int(self.k))
        terms = tuple((float(c), int(j)) for c, j in self.terms)
        if any(j < 0 for _, j in terms):
            raise InvalidParameterError("frac_power_sum exponents must be >= 0")
        object.__setattr__(self, "terms", terms)

    def value(self, r, t):
        t = _asfloat(t)
        out = sum(c * t ** (j / self.k) for c, j in self.terms)
        return np.broadcast_to(out, np.broadcast(_asfloat(r), t).shape).copy()

    def primitive(self, t):
        t = _asfloat(t)
        return sum(c * t ** (j / self.k + 1.0) / (j / self.k + 1.0) for c, j in self.terms)

    def derivative(self):
        def dft(t):
            t = _asfloat(t)
            live = [(c, j) for c, j in self.terms if j != 0]
            if not live:
                return np.zeros_like(t)
            with np.errstate(divide="ignore", invalid="ignore"):
                out = sum(c * (j / self.k) * t ** (j / self.k - 1.0) for c, j in live)
            return np.asarray(out)

        return dft

    def descriptor(self):
        return {"kind": "frac_power_sum", "k": self.k, "terms": [list(t) for t in self.terms]}


@dataclass(frozen=True, repr=False)
class RWeightedSource(Source):
    """f(r, t) = base(t) / (1 + r)^beta; non-increasing in r for base >= 0."""

    base: Source
    beta: float = 1.0
    kind = "r_weighted"
    radial_dependence = True

    def __post_init__(self):
        if self.beta < 0:
            raise InvalidParameterError("r_weighted needs beta >= 0")

    def value(self, r, t):
        r = _asfloat(r)
        return self.base.value(0.0, t) / (1.0 + r) ** self.beta

    def descriptor(self):
        return {"kind": "r_weighted", "beta": self.beta, "base": self.base.descriptor()}


def check_radial_monotone(source, radius, t_samples, n_r=64):
    """True when r -> f(r, t) is non-increasing on [0, radius] at each t."""
    rs = np.linspace(0.0, radius, n_r)
    for t in np.atleast_1d(t_samples):
        vals = source.value(rs, float(t))
        if np.any(np.diff(vals) > 1e-12 * max(1.0, float(np.max(np.abs(vals))))):
            return False
    return True


# ---------------------------------------------------------------------------
# strong-maximum-principle classifier


@dataclass
class SmpVerdict:
    """Outcome of the growth classification.

    status is one of "member", "nonmember", "inconclusive".  For members
    detected through an initial flat interval, flat_interval records its
    length and no integral data is produced.  estimated_exponent is the
    fitted local power alpha with H^{-1}(Phi(t)) ~ c t^alpha near zero;
    the integral criterion diverges exactly when alpha >= 1.
    partial_integrals lists (cutoff a, integral over [a, delta]) pairs,
    non-decreasing as a decreases.  increment_ratio is the stabilized
    dyadic increment ratio (~2^(alpha-1)); 1 flags the borderline
    logarithmic divergence, still a member.
    """

    status: str
    estimated_exponent: float | None
    partial_integrals: list = field(default_factory=list)
    flat_interval: float | None = None
    increment_ratio: float | None = None
    reason: str = ""

    def to_json_dict(self):
        return {
            "status": self.status,
            "estimated_exponent": self.estimated_exponent,
            "flat_interval": self.flat_interval,
            "increment_ratio": self.increment_ratio,
            "reason": self.reason,
            "partial_integrals": [[a, v] for a, v in self.partial_integrals],
        }


def classify_smp_growth(
    flux,
    growth,
    delta=1.0,
    halvings=40,
    nodes_per_panel=16,
    exponent_margin=0.05,
    ratio_tol=2e-3,
):
    """Decide strong-maximum-principle membership of a growth bound.

    Evaluates I(a) = integral_a^delta dt / H^{-1}(Phi(t)) on the dyadic
    cutoffs a = delta * 2^-k, k = 1..halvings, by Gauss-Legendre panels
    (the integrand is smooth on each dyadic panel and never touches
    t = 0).  Membership:

      * phi == 0 on an initial interval -> member outright;
      * fitted exponent alpha >= 1 + margin -> member (divergent);
      * alpha <= 1 - margin -> nonmember (convergent);
      * otherwise the dyadic increment ratios decide: the ratio tends to
        2^(alpha-1), so a stabilized ratio >= 1 - ratio_tol certifies
        (at least logarithmic) divergence.  Non-stabilized ratios give
        an honest "inconclusive" (e.g. oscillating phi).

    The verdict is scale-robust: replacing phi by c * phi changes the
    constant but not alpha or the ratios.
    """
    if delta <= 0:
        raise InvalidParameterError("classification window delta must be > 0")

    # flat-interval shortcut; exact for the zero_on_interval kind
    if isinstance(growth, ZeroOnIntervalGrowth) and growth.d > 0:
        d = min(growth.d, delta)
        return SmpVerdict("member", None, [], d, None, "phi vanishes on [0, d]")
    ts = np.linspace(0.0, delta, 2049)
    pvals = np.asarray(growth.value(ts))
    if np.any(pvals < -1e-12 * max(1.0, float(np.max(np.abs(pvals))))):
        raise InvalidParameterError("growth bound must be nonnegative on [0, delta]")
    pos = np.nonzero(pvals > 0)[0]
    if pos.size == 0:
        return SmpVerdict("member", None, [], delta, None, "phi vanishes on [0, delta]")
    if pos[0] > 1:
        d = ts[pos[0] - 1]
        return SmpVerdict("member", None, [], float(d), None, "phi vanishes on [0, d]")

    cuts = delta * 0.5 ** np.arange(halvings + 1)  # cuts[0] = delta
    gl_x, gl_w = np.polynomial.legendre.leggauss(nodes_per_panel)
    a_lo = cuts[1:]
    a_hi = cuts[:-1]
    half = 0.5 * (a_hi - a_lo)
    mid = 0.5 * (a_hi + a_lo)
    tq = mid[:, None] + half[:, None] * gl_x[None, :]  # (halvings, nodes)
    wq = half[:, None] * gl_w[None, :]

    Phi = np.asarray(growth.primitive(tq))
    if np.any(Phi <= 0.0):
        # Phi(t) = 0 for t > 0 means phi == 0 on [0, t]: flat interval below
        # the sampling resolution of the scan above
        d = float(np.max(tq[Phi <= 0.0]))
        return SmpVerdict("member", None, [], d, None, "Phi vanishes up to t = %g" % d)
    with np.errstate(over="ignore"):
        hinv = invert_excess(flux, Phi.ravel()).reshape(Phi.shape)
    panel = np.sum(wq / hinv, axis=1)
    partial = np.cumsum(panel)
    partials = [(float(a), float(v)) for a, v in zip(a_lo, partial)]

    # local exponent on the smallest decade of quadrature abscissae
    t_flat = tq.ravel()
    h_flat = hinv.ravel()
    t_min = float(np.min(t_flat))
    sel = t_flat <= 10.0 * t_min
    alpha = float(np.polyfit(np.log(t_flat[sel]), np.log(h_flat[sel]), 1)[0])

    incr = panel[::-1]  # increments ordered toward t -> 0
    ratios = incr[1:] / incr[:-1]
    tail = ratios[-6:]
    ratio = float(np.exp(np.mean(np.log(tail))))
    spread = float(np.max(tail) - np.min(tail))

    if alpha >= 1.0 + exponent_margin:
        status, reason = "member", "exponent %.4f >= 1 + margin" % alpha
    elif alpha <= 1.0 - exponent_margin:
        status, reason = "nonmember", "exponent %.4f <= 1 - margin" % alpha
    elif spread > 0.05:
        status, reason = (
            "inconclusive",
            "borderline exponent %.4f with unstable increments (spread %.3g)"
            % (alpha, spread),
        )
    elif ratio >= 1.0 - ratio_tol:
        status, reason = (
            "member",
            "borderline exponent %.4f, increment ratio %.6f certifies divergence"
            % (alpha, ratio),
        )
    else:
        status, reason = (
            "nonmember",
            "borderline exponent %.4f, increment ratio %.6f decays" % (alpha, ratio),
        )
    return SmpVerdict(status, alpha, partials, None, ratio, reason)


# ---------------------------------------------------------------------------
# structural checks


@dataclass
class SlopeBoundResult:
    holds: bool
    gamma: float
    sup_by_depth: list  # (decades below t0, sampled sup of t^2 g'/g)

    def to_json_dict(self):
        return {
            "holds": self.holds,
            "gamma": self.gamma,
            "sup_by_depth": [[d, s] for d, s in self.sup_by_depth],
        }


def flux_slope_bound(flux, t0=1.0, max_decades=12, samples_per_decade=64):
    """Check sup_{0 < t <= t0} t^2 g'(t) / g(t) <= Gamma for some Gamma.

    The supremum is sampled on progressively deeper log grids; it either
    stabilizes (bound holds, Gamma = certified sample max) or keeps
    growing as t -> 0 (bound fails, e.g. exp(-t^-alpha) with alpha > 1).
    """
    if t0 <= 0:
        raise InvalidParameterError("slope bound needs t0 > 0")
    sups = []
    for decades in range(2, max_decades + 1, 2):
        n = samples_per_decade * decades
        t = np.geomspace(t0 * 10.0 ** -decades, t0, n)
        with np.errstate(over="ignore", divide="ignore", invalid="ignore"):
            ratio = np.asarray(flux.slope_ratio(t))
        ratio = ratio[np.isfinite(ratio)]
        sups.append((decades, float(np.max(ratio))))
    tail = [s for _, s in sups[-2:]]
    holds = tail[1] <= tail[0] * (1.0 + 1e-3) + 1e-12
    return SlopeBoundResult(bool(holds), float(tail[1]), sups)


def dilation_monotonicity(flux, dim, t_lo=1e-3, t_hi=1e3, n=400):
    """True when t -> g(t) * t^(1-dim) is strictly decreasing, sampled on
    three decades either side of t = 1.

    This is the structural hypothesis behind the dilation energy
    comparison; for g(t) = t^(p-1) it reads p < dim.  Strictness is
    judged per step relative to the local value, so constant profiles
    (p = dim) are rejected while steeply-scaled but genuinely decreasing
    ones pass.
    """
    t = np.geomspace(t_lo, t_hi, n)
    vals = np.asarray(flux.value(t)) * t ** (1.0 - dim)
    return bool(np.all(np.diff(vals) < -1e-13 * vals[:-1]))


# ---------------------------------------------------------------------------
# one-sided growth of a source near its zero levels


@dataclass
class ZeroGrowthRecord:
    rho: float
    tau: float
    trivial: bool
    kappa: float | None
    coeff: float | None
    verdict: SmpVerdict | None
    satisfied: bool | None  # None = inconclusive

    def to_json_dict(self):
        return {
            "rho": self.rho,
            "tau": self.tau,
            "trivial": self.trivial,
            "kappa": self.kappa,
            "coeff": self.coeff,
            "verdict": None if self.verdict is None else self.verdict.to_json_dict(),
            "satisfied": self.satisfied,
        }


@dataclass
class GrowthConditionReport:
    which: str
    records: list

    @property
    def all_satisfied(self):
        if any(rec.satisfied is None for rec in self.records):
            return None
        return all(rec.satisfied is not False for rec in self.records)

    def to_json_dict(self):
        return {
            "which": self.which,
            "all_satisfied": self.all_satisfied,
            "records": [rec.to_json_dict() for rec in self.records],
        }


def _find_zero_levels(source, radius, t_lo, t_hi, n_t=1001, n_r=33, atol=1e-10):
    """Zero levels (rho, tau) of f on [0, radius] x [t_lo, t_hi]."""
    rs = np.linspace(0.0, radius, n_r) if source.radial_dependence else np.array([0.0])
    ts = np.linspace(t_lo, t_hi, n_t)
    zeros = []
    for r in rs:
        vals = np.asarray(source.value(float(r), ts))
        sign = np.sign(vals)
        for i in np.nonzero(sign[:-1] * sign[1:] < 0)[0]:
            lo, hi = ts[i], ts[i + 1]
            flo = vals[i]
            for _ in range(80):  # plain bisection on the bracketing cell
                mid = 0.5 * (lo + hi)
                fm = float(source.value(float(r), mid))
                if flo * fm <= 0:
                    hi = mid
                else:
                    lo, flo = mid, fm
            zeros.append((float(r), 0.5 * (lo + hi)))
        # degenerate touching zeros: |f| below atol at an interior minimum
        small = np.abs(vals) < atol
        for i in np.nonzero(small)[0]:
            if 0 < i < n_t - 1 and abs(vals[i]) <= abs(vals[i - 1]) and abs(vals[i]) <= abs(vals[i + 1]):
                zeros.append((float(r), float(ts[i])))
    # cluster in tau (levels shared across radii collapse to one record)
    zeros.sort(key=lambda z: z[1])
    clustered = []
    tol = 1e-6 * max(1.0, abs(t_hi - t_lo))
    for rho, tau in zeros:
        if clustered and abs(tau - clustered[-1][1]) <= tol:
            continue
        clustered.append((rho, tau))
    return clustered


def check_source_growth(
    source,
    flux,
    which,
    radius=1.0,
    t_range=(0.0, 1.0),
    delta=None,
    n_sigma=200,
    zero_atol=1e-12,
):
    """One-sided growth of f near each zero level, tested against the
    strong-maximum-principle class of the flux law.

    which = "a": at a zero f(rho, tau) = 0 with tau > 0, bound the
    positive part of f(r, t) for t below tau by phi(tau - t);
    which = "b": at a zero with tau = 0, bound (-f(r, t))_+ for small
    t > 0 by phi(t); which = "c": bound (-f(r, t))_+ for t above tau by
    phi(t - tau).  In each case a power-law candidate phi = C sigma^kappa
    is fitted to the sampled one-sided envelope and classified; the
    condition is trivially satisfied when the envelope vanishes
    identically (any member phi works).
    """
    if which not in ("a", "b", "c"):
        raise InvalidParameterError("growth condition selector must be 'a', 'b' or 'c'")
    t_lo, t_hi = map(float, t_range)
    zeros = _find_zero_levels(source, radius, t_lo, t_hi)
    if which == "a":
        zeros = [z for z in zeros if z[1] > t_lo + 1e-12]
    elif which == "b":
        zeros = [
            (r, t_lo)
            for r, t in zeros
            if abs(t - t_lo) <= 1e-9 * max(1.0, t_hi - t_lo)
        ] or (
            [(0.0, t_lo)]
            if abs(float(np.max(np.abs(source.value(np.linspace(0, radius, 17), t_lo))))) < 1e-9
            else []
        )
        seen = set()
        zeros = [z for z in zeros if not (z in seen or seen.add(z))]

    rs = np.linspace(0.0, radius, 33) if source.radial_dependence else np.array([0.0])
    records = []
    for rho, tau in zeros:
        if which == "a":
            dmax = tau - t_lo
        elif which == "b":
            dmax = t_hi - t_lo
        else:
            dmax = t_hi - tau
        d = min(delta, dmax) if delta else min(0.25 * (t_hi - t_lo), dmax)
        if d <= 0:
            continue
        sigma = np.geomspace(d * 1e-6, d, n_sigma)
        if which == "a":
            tpts = tau - sigma
            env = np.max(np.maximum(source.value(rs[:, None], tpts[None, :]), 0.0), axis=0)
        elif which == "b":
            tpts = t_lo + sigma
            env = np.max(np.maximum(-source.value(rs[:, None], tpts[None, :]), 0.0), axis=0)
        else:
            tpts = tau + sigma
            env = np.max(np.maximum(-source.value(rs[:, None], tpts[None, :]), 0.0), axis=0)

        if float(np.max(env)) <= zero_atol:
            records.append(ZeroGrowthRecord(rho, tau, True, None, None, None, True))
            continue
        pos = env > zero_atol
        s_min = float(np.min(sigma[pos]))
        fit = pos & (sigma <= 10.0 * s_min)
        if int(np.sum(fit)) < 4:
            fit = pos
        kappa = float(np.polyfit(np.log(sigma[fit]), np.log(env[fit]), 1)[0])
        if kappa <= 0:
            # envelope does not vanish at the zero level: no continuous
            # power-law bound exists; report unsatisfied
            records.append(ZeroGrowthRecord(rho, tau, False, kappa, None, None, False))
            continue
        coeff = 1.05 * float(np.max(env[pos] / sigma[pos] ** kappa))
        verdict = classify_smp_growth(flux, PowerGrowth(coeff, kappa), delta=d)
        satisfied = {"member": True, "nonmember": False}.get(verdict.status)
        records.append(ZeroGrowthRecord(rho, tau, False, kappa, coeff, verdict, satisfied))
    return GrowthConditionReport(which, records)
