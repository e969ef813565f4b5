"""Transposition (duality) identities tying interior norms to boundary data.

For a Stokes field u driven by boundary data g, the adjoint problem

    -Laplace(v) + grad(q) = u,   div v = 0,   v = 0 on the boundary

turns the interior energy into a boundary integral:

    |u|^2_{L2} = integral over Gamma of ( (g.n) q - g . dv/dn ).

(Integrate u.(-Laplace(v) + grad q) by parts twice; every volume term drops
because div u = div v = 0 and v = 0 on the boundary.)

This module solves the adjoint problem, extracts dv/dn and the boundary
pressure by one-sided second-order stencils, and evaluates both sides of the
identity.  The ratio |u|_Omega / |g|_Gamma realizes the a priori estimate the
rough-data theory rests on.
"""

from __future__ import annotations

import numpy as np

from .boundary import SIDES, BoundaryData, l2_norm_gamma
from .errors import ZeroBoundaryData
from .grid import PressureField, StaggeredGrid, VelocityField, l2_norm_omega
from .stokes import SolverOptions, StokesSolution, solve_boundary, solve_homogeneous

__all__ = [
    "solve_adjoint",
    "normal_derivative_on_gamma",
    "boundary_pressure",
    "transposition_identity",
    "estimate_ratio",
    "adjoint_gradient_pairing",
]


def solve_adjoint(grid: StaggeredGrid, u_rhs: VelocityField,
                  opts: SolverOptions | None = None) -> StokesSolution:
    """Adjoint Stokes solve with interior forcing u_rhs and zero boundary data."""
    return solve_homogeneous(grid, f=u_rhs, opts=opts)


def normal_derivative_on_gamma(v: VelocityField) -> BoundaryData:
    """Outward normal derivative of both components at boundary face midpoints.

    Assumes v vanishes on the boundary (adjoint solutions, liftings).  Normal
    components use the one-sided three-point stencil through the stored zero
    boundary face; tangential components fit a quadratic through the wall zero
    and the first two interior faces, then average to midpoints.  Both are
    exact for quadratics in the wall distance.
    """
    g = v.grid
    n, h = g.n, g.h
    u1, u2 = v.u1, v.u2

    def mid(a):
        return 0.5 * (a[:-1] + a[1:])

    out = {s: np.zeros((n, 2)) for s in SIDES}
    # bottom: d/dn = -d/dy at y = 0
    out["bottom"][:, 1] = -(-3.0 * u2[:, 0] + 4.0 * u2[:, 1] - u2[:, 2]) / (2.0 * h)
    out["bottom"][:, 0] = -mid((9.0 * u1[:, 0] - u1[:, 1]) / (3.0 * h))
    # top: d/dn = +d/dy at y = 1
    out["top"][:, 1] = (3.0 * u2[:, n] - 4.0 * u2[:, n - 1] + u2[:, n - 2]) / (2.0 * h)
    out["top"][:, 0] = mid(-(9.0 * u1[:, n - 1] - u1[:, n - 2]) / (3.0 * h))
    # left: d/dn = -d/dx at x = 0
    out["left"][:, 0] = -(-3.0 * u1[0, :] + 4.0 * u1[1, :] - u1[2, :]) / (2.0 * h)
    out["left"][:, 1] = -mid((9.0 * u2[0, :] - u2[1, :]) / (3.0 * h))
    # right: d/dn = +d/dx at x = 1
    out["right"][:, 0] = (3.0 * u1[n, :] - 4.0 * u1[n - 1, :] + u1[n - 2, :]) / (2.0 * h)
    out["right"][:, 1] = mid(-(9.0 * u2[n - 1, :] - u2[n - 2, :]) / (3.0 * h))
    return BoundaryData(g, out)


def boundary_pressure(q: PressureField) -> dict:
    """Pressure extrapolated to the boundary from the two nearest cell rows.

    Linear (second-order) extrapolation to each side, sampled at the boundary
    face midpoints; returns side -> (n,) array.
    """
    p = q.p
    n = q.grid.n
    return {
        "bottom": 1.5 * p[:, 0] - 0.5 * p[:, 1],
        "top": 1.5 * p[:, n - 1] - 0.5 * p[:, n - 2],
        "left": 1.5 * p[0, :] - 0.5 * p[1, :],
        "right": 1.5 * p[n - 1, :] - 0.5 * p[n - 2, :],
    }


def transposition_identity(grid: StaggeredGrid, g: BoundaryData,
                           opts: SolverOptions | None = None,
                           u: VelocityField | None = None) -> dict:
    """Evaluate both sides of the duality identity for boundary data g.

    Solves the rough-data problem (unless u is supplied), then the adjoint
    problem with the solution as forcing, and compares |u|^2 against the
    boundary integral of (g.n) q - g . dv/dn.  Returns lhs, rhs, rel_gap and
    the split of the boundary integral into its two terms.
    """
    if u is None:
        u = solve_boundary(grid, g, opts=opts).velocity
    adj = solve_adjoint(grid, u, opts=opts)
    dvdn = normal_derivative_on_gamma(adj.velocity)
    q_b = boundary_pressure(adj.pressure)
    h = grid.h
    term_dvdn = 0.0
    term_q = 0.0
    for side in SIDES:
        term_dvdn += h * float(np.sum(g.samples[side] * dvdn.samples[side]))
        term_q += h * float(np.sum(g.normal_part(side) * q_b[side]))
    lhs = l2_norm_omega(u) ** 2
    rhs = term_q - term_dvdn
    rel_gap = abs(lhs - rhs) / lhs if lhs > 0.0 else abs(rhs)
    return {
        "lhs": lhs,
        "rhs": rhs,
        "rel_gap": rel_gap,
        "term_dvdn": term_dvdn,
        "term_q": term_q,
    }


def estimate_ratio(grid: StaggeredGrid, g: BoundaryData,
                   opts: SolverOptions | None = None,
                   sol: StokesSolution | None = None) -> float:
    """|u|_Omega / |g|_Gamma for the rough-data solve driven by g."""
    g_norm = l2_norm_gamma(g)
    if g_norm == 0.0:
        raise ZeroBoundaryData("estimate ratio is undefined for zero data")
    if sol is None:
        sol = solve_boundary(grid, g, opts=opts)
    return l2_norm_omega(sol.velocity) / g_norm


def adjoint_gradient_pairing(grid: StaggeredGrid, g: BoundaryData,
                             opts: SolverOptions | None = None) -> float:
    """Discrete integral of u . grad(q) for the adjoint pair of u = solve(g).

    For g = 0 this vanishes identically (the uniqueness mechanism: the only
    very weak solution with zero data is zero).
    """
    u = solve_boundary(grid, g, opts=opts).velocity
    adj = solve_adjoint(grid, u, opts=opts)
    n, h = grid.n, grid.h
    q = adj.pressure.p
    g1 = (q[1:, :] - q[:-1, :]) / h
    g2 = (q[:, 1:] - q[:, :-1]) / h
    return h * h * float(
        np.sum(u.u1[1:n, :] * g1) + np.sum(u.u2[:, 1:n] * g2)
    )
