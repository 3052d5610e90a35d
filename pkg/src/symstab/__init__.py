"""Numerical laboratory for symmetry and stability of radial solutions to
degenerate quasilinear elliptic boundary value problems

    -div( g(|grad u|) grad u / |grad u| ) = f(|x|, u)   in B_R,
    u = 0                                               on the boundary,

with the convention that the flux vanishes wherever grad u does.  The
package provides flux-law algebra and a strong-maximum-principle growth
classifier (`operators`), a closed-form family of non-radial solutions
built from radial mountains on a plateau (`closedform`), radial ODE
integration, energy rescaling comparisons and second-variation scans
(`radial`), Cartesian disk fields with Pohozaev-type identity checks,
gradient flow and a local-symmetry detector (`field2d`), and a CLI that
writes delimited data, JSON summaries and rendered figures (`cli`).
"""

__version__ = "0.1.0"
