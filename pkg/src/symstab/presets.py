"""Named experiment presets: canonical fields and profiles with their
matched flux/source pairs.

A preset is a flat dict of config defaults; the CLI layers explicit
flags and config-file entries on top.  Field presets also name a
closed-form start field ("field" key) and profile presets a radial
profile ("profile" key), built here so every command that needs a
concrete input can share them:

    torsion              membrane u = (R^2 - r^2)/(2 N), f = 1, p = 2
    example1-caseI       two radial mountains on a plateau, p = 2, s = 3
    example1-caseII      same geometry, p = 3, s = 2 (low gluing exponent)
    example1-caseIII     same geometry, p = 3, s = 4
    bump-punctured-ball  single mountain (1 - r^2)^s on the unit disk
    neumann-bump         cubic bump (1 - r^2)^3 with flat boundary data
    rescale-bump         quartic bump (1 - r^2)^2 in dimension 3
"""

from __future__ import annotations

import numpy as np

from .closedform import BumpParams, bump_profile, solution_value
from .field2d import sample_field
from .operators import InvalidParameterError
from .radial import RadialProfile

__all__ = ["PRESETS", "preset_config", "build_start_field", "build_profile"]


def _example1(p, s):
    return {
        "p": p,
        "s": s,
        "N": 2,
        "R": 6.0,
        "h": 0.05,
        "g": "power:%g" % p,
        "f": "plateau_bump:%g,%g" % (p, s),
        "field": "example1",
        "clip": [0.0, 2.0],
    }


PRESETS = {
    "torsion": {
        "g": "power:2",
        "f": "constant:1",
        "N": 2,
        "R": 1.0,
        "h": 1.0 / 64,
        "field": "torsion",
        "profile": "torsion",
        "bracket": [0.0, 1.0],
    },
    "example1-caseI": _example1(2.0, 3.0),
    "example1-caseII": _example1(3.0, 2.0),
    "example1-caseIII": _example1(3.0, 4.0),
    "bump-punctured-ball": {
        "p": 3.0,
        "s": 4.0,
        "N": 2,
        "R": 1.0,
        "g": "power:3",
        "f": "plateau_bump:3,4",
        "profile": "bump",
    },
    "neumann-bump": {
        "g": "power:2",
        "f": "frac_power:3;36,2;-24,1",
        "N": 2,
        "R": 1.5,
        "h": 1.0 / 64,
        "field": "cubic-bump",
    },
    "rescale-bump": {
        "g": "power:2",
        "f": "frac_power:2;20,1;-8,0",
        "N": 3,
        "R": 1.0,
        "profile": "quartic-bump",
    },
}


def preset_config(name):
    """Config defaults for a named preset (copy, safe to mutate)."""
    try:
        return dict(PRESETS[name])
    except KeyError:
        raise InvalidParameterError(
            "unknown preset %r (have %s)" % (name, ", ".join(sorted(PRESETS)))
        ) from None


def build_start_field(cfg, h=None):
    """Sample the preset's closed-form start field on a disk lattice."""
    kind = cfg.get("field")
    R = float(cfg["R"])
    h = float(h if h is not None else cfg["h"])
    if kind == "torsion":
        N = int(cfg["N"])
        return sample_field(lambda x, y: (R * R - x * x - y * y) / (2.0 * N), R, h)
    if kind == "example1":
        params = BumpParams(float(cfg["p"]), float(cfg["s"]), int(cfg["N"]))
        return sample_field(lambda x, y: solution_value(params, x, y), R, h)
    if kind == "cubic-bump":

        def bump(x, y):
            r2 = x * x + y * y
            return np.where(r2 < 1.0, (1.0 - r2) ** 3, 0.0)

        return sample_field(bump, R, h)
    raise InvalidParameterError(
        "config names no start field (expected 'torsion', 'example1' or 'cubic-bump')"
    )


def build_profile(cfg, n=4096):
    """Closed-form radial profile named by the config, as a RadialProfile."""
    kind = cfg.get("profile")
    R = float(cfg.get("R", 1.0))
    dim = int(cfg.get("N", 2))
    if kind == "torsion":
        return RadialProfile.from_callable(
            lambda r: (R * R - r * r) / (2.0 * dim),
            lambda r: -r / dim,
            0.0,
            R,
            n=n,
            dim=dim,
            monotone=True,
        )
    if kind == "bump":
        params = BumpParams(float(cfg["p"]), float(cfg["s"]), dim)
        U, Up = bump_profile(params)
        return RadialProfile.from_callable(U, Up, 0.0, 1.0, n=n, dim=dim, monotone=True)
    if kind == "quartic-bump":
        return RadialProfile.from_callable(
            lambda r: (1.0 - r * r) ** 2,
            lambda r: -4.0 * r * (1.0 - r * r),
            0.0,
            1.0,
            n=n,
            dim=dim,
            monotone=True,
        )
    raise InvalidParameterError(
        "config names no profile (expected 'torsion', 'bump' or 'quartic-bump')"
    )
