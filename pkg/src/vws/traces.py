"""Boundary traces of rough fields, tangential liftings, and the weak pairing.

An L2 velocity field has no classical boundary values, but two boundary
objects survive: the normal trace (read directly off boundary faces in the
staggered layout) and a weak tangential trace defined by duality.  For
tangential data g1 (g1 . n = 0) the lifting R builds an interior field v with

    v = 0 on the boundary,   dv/dn = g1,   div v = 0 (exactly, discretely),

as the discrete curl of the stream function

    Psi = -1/2 d(x)^2 (g1.tau)(pi(x)) chi(d(x)),

with d the distance to the wall and chi a smooth cutoff.  The pairing

    L_u(g1) = integral of u . Laplace(v)

then recovers the tangential trace of u: for Stokes fields with boundary
values g it equals the boundary integral of (g.tau)(g1.tau), independently of
which lift v was used.  Both facts degrade only at discretization order and
are exercised by the probe machinery below.

The lift is assembled side by side from coordinate-distance strips; each
side's profile is tapered off smoothly within a few cells of the corners, so
strips never overlap and the corner ambiguity of the distance map never
enters.
"""

from __future__ import annotations

import numpy as np

from .boundary import SIDES, TANGENTS, BoundaryData, smoothstep
from .grid import StaggeredGrid, VelocityField, l2_norm_omega
from .operators import DirichletBC, apply_velocity_laplacian, stream_curl

__all__ = [
    "TangentialBoundaryData",
    "normal_trace",
    "lift_tangential",
    "lift_stream",
    "pairing_L",
    "pairing_with_field",
    "probe_set",
    "perturbation_field",
    "lifting_independence_gap",
    "negative_control_field",
    "line_integral",
]


class TangentialBoundaryData:
    """Purely tangential boundary data, stored as scalar profiles per side.

    profiles[side] holds (g1 . tau) at face midpoints, with tau the
    counterclockwise unit tangent.  Vector samples reconstructed from this
    type satisfy g1 . n = 0 exactly, by construction.
    """

    def __init__(self, grid: StaggeredGrid, profiles: dict):
        self.grid = grid
        store = {}
        for side in SIDES:
            a = np.asarray(profiles.get(side, np.zeros(grid.n)), dtype=float)
            if a.shape != (grid.n,):
                raise ValueError(f"profile for {side} must have shape ({grid.n},)")
            a = a.copy()
            a.flags.writeable = False
            store[side] = a
        self.profiles = store

    def to_boundary_data(self) -> BoundaryData:
        samples = {
            side: np.outer(self.profiles[side], np.asarray(TANGENTS[side], float))
            for side in SIDES
        }
        return BoundaryData(self.grid, samples)

    @classmethod
    def from_boundary_data(cls, g: BoundaryData) -> "TangentialBoundaryData":
        return cls(g.grid, {side: g.tangential_part(side) for side in SIDES})


def normal_trace(u: VelocityField) -> dict:
    """u . n per side, read off the boundary faces where it lives exactly."""
    n = u.grid.n
    return {
        "bottom": -u.u2[:, 0].copy(),
        "top": u.u2[:, n].copy(),
        "left": -u.u1[0, :].copy(),
        "right": u.u1[n, :].copy(),
    }


def _wall_cutoff(d: np.ndarray) -> np.ndarray:
    """C2 plateau cutoff: 1 up to 1/8, smooth descent, 0 from 1/4 on."""
    return 1.0 - smoothstep((d - 0.125) / 0.125)


def _corner_taper(s: np.ndarray, h: float) -> np.ndarray:
    """Arc-length taper: 0 within 2h of each corner, 1 beyond 6h."""
    return smoothstep((s - 2.0 * h) / (4.0 * h)) * smoothstep(((1.0 - s) - 2.0 * h) / (4.0 * h))


def _midpoints_to_nodes(t: np.ndarray) -> np.ndarray:
    # end values never matter: the corner taper vanishes there
    return np.concatenate([[t[0]], 0.5 * (t[:-1] + t[1:]), [t[-1]]])


def lift_stream(g1: TangentialBoundaryData) -> np.ndarray:
    """Node stream function whose curl lifts g1 (see lift_tangential)."""
    grid = g1.grid
    n, h = grid.n, grid.h
    z = grid.nodes()
    taper = _corner_taper(z, h)
    psi = np.zeros((n + 1, n + 1))
    prof0 = -0.5 * z ** 2 * _wall_cutoff(z)          # distance from coordinate 0
    prof1 = prof0[::-1]                              # distance from coordinate 1
    along = {s: _midpoints_to_nodes(g1.profiles[s]) * taper for s in SIDES}
    psi += np.outer(along["bottom"], prof0)
    psi += np.outer(along["top"], prof1)
    psi += np.outer(prof0, along["left"])
    psi += np.outer(prof1, along["right"])
    return psi


def lift_tangential(g1: TangentialBoundaryData) -> VelocityField:
    """Divergence-free lift with zero boundary values and dv/dn matching g1.

    Built as the discrete curl of a per-side stream function, so the discrete
    divergence vanishes to rounding.  The normal-derivative match holds at
    boundary face midpoints away from the tapered corner windows (within 8h
    of a corner the profile is deliberately rolled off to zero).
    """
    return stream_curl(g1.grid, lift_stream(g1))


def pairing_with_field(u: VelocityField, v: VelocityField) -> float:
    """Discrete integral of u . Laplace(v) for a lift-like v (v = 0 on walls)."""
    grid = u.grid
    n, h = grid.n, grid.h
    a1, a2 = apply_velocity_laplacian(grid, v.u1, v.u2, DirichletBC.zero(grid))
    return -h * h * float(
        np.sum(u.u1[1:n, :] * a1) + np.sum(u.u2[:, 1:n] * a2)
    )


def pairing_L(u: VelocityField, g1: TangentialBoundaryData,
              lift: VelocityField | None = None) -> float:
    """Weak tangential pairing: integral of u . Laplace(R g1).

    For u solving the rough-data Stokes problem with boundary values g this
    approximates the boundary integral of (g.tau)(g1.tau).
    """
    if lift is None:
        lift = lift_tangential(g1)
    return pairing_with_field(u, lift)


def probe_set(grid: StaggeredGrid) -> list:
    """Five tangential probes per side: constant plus two Fourier pairs.

    Returns (probe_id, TangentialBoundaryData, profile_callable) triples; the
    callable evaluates the untapered profile at arbitrary arc positions, for
    quadrature references.
    """
    modes = [
        ("const", lambda s: np.ones_like(s)),
        ("sin1", lambda s: np.sin(np.pi * s)),
        ("cos1", lambda s: np.cos(np.pi * s)),
        ("sin2", lambda s: np.sin(2.0 * np.pi * s)),
        ("cos2", lambda s: np.cos(2.0 * np.pi * s)),
    ]
    s = grid.x_centers()
    probes = []
    for side in SIDES:
        for label, fn in modes:
            data = TangentialBoundaryData(grid, {side: fn(s)})
            probes.append((f"{side}:{label}", data, fn))
    return probes


def line_integral(fn, npts: int = 4097) -> float:
    """Composite-trapezoid integral of fn over the unit interval."""
    s = np.linspace(0.0, 1.0, npts)
    return float(np.trapezoid(fn(s), s))


def perturbation_field(grid: StaggeredGrid, seed: int = 0,
                       scale: float = 1.0) -> VelocityField:
    """Random smooth solenoidal field vanishing to second order at the walls.

    Curl of (x(1-x)y(1-y))^3 times a seeded random cubic, so both the field
    and its gradient vanish on the boundary: adding it to a lift changes
    neither the boundary values nor the normal derivative.  Normalized to
    L2 norm `scale` so gaps measured against it are comparable across seeds.
    """
    rng = np.random.default_rng(seed)
    coef = rng.standard_normal((4, 4))
    z = grid.nodes()
    bump = (z * (1.0 - z)) ** 3
    poly = sum(
        coef[k, l] * np.outer(z ** k, z ** l)
        for k in range(4) for l in range(4)
    )
    w = stream_curl(grid, np.outer(bump, bump) * poly)
    return w * (scale / l2_norm_omega(w))


def lifting_independence_gap(u: VelocityField, g1: TangentialBoundaryData,
                             seed: int = 0, scale: float = 1.0) -> float:
    """|L_u via one lift - L_u via a perturbed lift|.

    The second lift adds a random solenoidal field with vanishing boundary
    values and normal derivative, so in the continuum the pairing is
    unchanged; the returned gap is pure discretization error for discrete
    Stokes fields u, and O(1) for fields that are not.
    """
    w = perturbation_field(u.grid, seed=seed, scale=scale)
    return abs(pairing_with_field(u, w))


def negative_control_field(grid: StaggeredGrid, seed: int = 7) -> VelocityField:
    """Fixed random smooth field that is NOT a Stokes solution.

    Returns the seeded perturbation field itself.  Measured against a
    perturbed lift drawn with the same seed, the independence gap equals
    |<w, Laplace_h w>| = |grad w|^2 >= 2 pi^2 |w|^2 (Dirichlet-eigenvalue
    bound), so it provably stays away from zero under refinement while the
    Stokes-field gap decays.
    """
    return perturbation_field(grid, seed=seed)
