"""Shorthand parsers for flux laws, growth bounds and sources.

The CLI (and config files) name operators with compact strings of the
form ``name`` or ``name:arg,arg,...``; composite argument lists use
semicolons to separate tuples, e.g.

    power:2                     flux  g(t) = t            (p = 2)
    power_sum:1,1.5;0.25,3      flux  g(t) = t^0.5 + 0.25 t^2
    minimal_surface             flux  g(t) = t/sqrt(1+t^2)
    stretched_exp:1,0.5         flux  g(t) = exp(-t^-0.5)
    power:1,1                   growth  phi(t) = t  (coeff, exponent)
    zero_on_interval:0.1,1,2    growth  phi(t) = ((t-0.1)_+)^2
    constant:1                  source  f = 1
    frac_power:3;36,2;-24,1     source  f(t) = 36 t^(2/3) - 24 t^(1/3)
    plateau_bump:2,3            source matched to the two-mountain field

A string starting with ``{`` is instead parsed as a JSON descriptor and
dispatched through the ``*_from_descriptor`` factories, so anything the
object model can serialize can also be named on a command line.  All
parse errors raise InvalidParameterError before any computation runs.
"""

from __future__ import annotations

import json

from .closedform import PlateauBumpSource
from .operators import (
    ConstantSource,
    FracPowerSource,
    InvalidParameterError,
    RWeightedSource,
    ZeroSource,
    flux_from_descriptor,
    growth_from_descriptor,
    make_flux,
)

__all__ = [
    "parse_flux",
    "parse_growth",
    "parse_source",
    "source_from_descriptor",
]


def _split(text):
    """'name:a,b;c,d' -> ('name', [['a','b'], ['c','d']])."""
    text = text.strip()
    if not text:
        raise InvalidParameterError("empty operator descriptor")
    name, _, tail = text.partition(":")
    name = name.strip().lower().replace("-", "_")
    if not tail.strip():
        return name, []
    groups = [g for g in tail.split(";") if g.strip()]
    return name, [[a.strip() for a in g.split(",")] for g in groups]


def _floats(group, what, text):
    try:
        return [float(a) for a in group]
    except ValueError:
        raise InvalidParameterError(
            "bad %s descriptor %r: non-numeric argument" % (what, text)
        ) from None


def _maybe_json(text):
    if text.lstrip().startswith("{"):
        try:
            desc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise InvalidParameterError(
                "bad JSON descriptor %r: %s" % (text, exc)
            ) from None
        if not isinstance(desc, dict) or "kind" not in desc:
            raise InvalidParameterError(
                "JSON descriptor needs an object with a 'kind' key"
            )
        return desc
    return None


def parse_flux(text):
    """Parse a flux-law shorthand (or JSON descriptor) into a FluxLaw."""
    desc = _maybe_json(text)
    if desc is not None:
        return flux_from_descriptor(desc)
    name, groups = _split(text)
    flat = _floats([a for g in groups for a in g], "flux", text)
    if name == "power":
        if len(flat) != 1:
            raise InvalidParameterError("flux 'power' takes one argument: power:p")
        return make_flux("power", p=flat[0])
    if name == "power_sum":
        if not groups or any(len(g) != 2 for g in groups):
            raise InvalidParameterError(
                "flux 'power_sum' takes coeff,p pairs: power_sum:c1,p1;c2,p2"
            )
        return make_flux("power_sum", terms=tuple((g[0], g[1]) for g in
                                                  (_floats(g, "flux", text) for g in groups)))
    if name == "minimal_surface":
        if flat:
            raise InvalidParameterError("flux 'minimal_surface' takes no arguments")
        return make_flux("minimal_surface")
    if name == "stretched_exp":
        if len(flat) != 2:
            raise InvalidParameterError(
                "flux 'stretched_exp' takes two arguments: stretched_exp:gamma,alpha"
            )
        return make_flux("stretched_exp", gamma=flat[0], alpha=flat[1])
    raise InvalidParameterError(
        "unknown flux %r (have power, power_sum, minimal_surface, stretched_exp)"
        % (text,)
    )


def parse_growth(text):
    """Parse a growth-bound shorthand (or JSON descriptor) into a GrowthBound."""
    desc = _maybe_json(text)
    if desc is not None:
        return growth_from_descriptor(desc)
    name, groups = _split(text)
    flat = _floats([a for g in groups for a in g], "growth", text)
    if name == "power":
        # one argument means the exponent alone, with unit coefficient
        if len(flat) == 1:
            return growth_from_descriptor(
                {"kind": "power", "coeff": 1.0, "exponent": flat[0]}
            )
        if len(flat) == 2:
            return growth_from_descriptor(
                {"kind": "power", "coeff": flat[0], "exponent": flat[1]}
            )
        raise InvalidParameterError(
            "growth 'power' takes coeff,exponent (or a lone exponent)"
        )
    if name == "zero_on_interval":
        if len(flat) not in (1, 3):
            raise InvalidParameterError(
                "growth 'zero_on_interval' takes d or d,coeff,exponent"
            )
        d = flat[0]
        coeff, exponent = (flat[1], flat[2]) if len(flat) == 3 else (1.0, 1.0)
        return growth_from_descriptor(
            {"kind": "zero_on_interval", "d": d, "coeff": coeff, "exponent": exponent}
        )
    raise InvalidParameterError(
        "unknown growth %r (have power, zero_on_interval)" % (text,)
    )


_SOURCE_KINDS = {
    "zero": ZeroSource,
    "constant": ConstantSource,
    "frac_power_sum": FracPowerSource,
    "plateau_bump": PlateauBumpSource,
}


def source_from_descriptor(desc):
    """Rebuild a source term from its JSON descriptor."""
    d = dict(desc)
    kind = d.pop("kind", None)
    if kind == "r_weighted":
        base = source_from_descriptor(d.pop("base"))
        return RWeightedSource(base=base, **d)
    try:
        cls = _SOURCE_KINDS[kind]
    except KeyError:
        raise InvalidParameterError(
            "unknown source kind %r (have %s)"
            % (kind, sorted(_SOURCE_KINDS) + ["r_weighted"])
        ) from None
    if kind == "frac_power_sum" and "terms" in d:
        d["terms"] = tuple(tuple(t) for t in d["terms"])
    return cls(**d)


def parse_source(text):
    """Parse a source shorthand (or JSON descriptor) into a Source."""
    desc = _maybe_json(text)
    if desc is not None:
        return source_from_descriptor(desc)
    name, groups = _split(text)
    if name == "zero":
        if groups:
            raise InvalidParameterError("source 'zero' takes no arguments")
        return ZeroSource()
    if name == "constant":
        flat = _floats([a for g in groups for a in g], "source", text)
        if len(flat) > 1:
            raise InvalidParameterError("source 'constant' takes at most one argument")
        return ConstantSource(c=flat[0] if flat else 1.0)
    if name in ("frac_power", "frac_power_sum"):
        if len(groups) < 2 or len(groups[0]) != 1:
            raise InvalidParameterError(
                "source 'frac_power' takes k then coeff,j pairs: frac_power:k;c1,j1;..."
            )
        k = _floats(groups[0], "source", text)[0]
        if k != int(k):
            raise InvalidParameterError("frac_power root order k must be an integer")
        terms = []
        for g in groups[1:]:
            if len(g) != 2:
                raise InvalidParameterError(
                    "frac_power terms are coeff,j pairs, got %r" % (",".join(g),)
                )
            c, j = _floats(g, "source", text)
            if j != int(j):
                raise InvalidParameterError("frac_power exponent numerators are integers")
            terms.append((c, int(j)))
        return FracPowerSource(k=int(k), terms=tuple(terms))
    if name == "plateau_bump":
        flat = _floats([a for g in groups for a in g], "source", text)
        if len(flat) not in (2, 3, 4):
            raise InvalidParameterError(
                "source 'plateau_bump' takes p,s[,dim[,clamp]]"
            )
        dim = int(flat[2]) if len(flat) >= 3 else 2
        clamp = bool(flat[3]) if len(flat) == 4 else False
        return PlateauBumpSource(p=flat[0], s=flat[1], dim=dim, clamp=clamp)
    raise InvalidParameterError(
        "unknown source %r (have zero, constant, frac_power, plateau_bump)" % (text,)
    )
