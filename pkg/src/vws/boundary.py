"""Boundary velocity data on the four sides of the unit square.

Data is stored as one (n, 2) array of (g1, g2) samples per side, taken at the
boundary face midpoints: x = (i+1/2) h on bottom/top, y = (j+1/2) h on
left/right.  Sides are oriented counterclockwise; outward normals and CCW
tangents are fixed per side.  Corner points never carry samples, so corner
values never enter any quadrature.

The discrete boundary measure is h per sample (composite midpoint rule on the
perimeter of length 4).
"""

from __future__ import annotations

import csv
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import UnderResolvedWarning
from .grid import StaggeredGrid

__all__ = [
    "SIDES",
    "NORMALS",
    "TANGENTS",
    "BoundaryData",
    "sigma",
    "smoothstep",
    "cavity_eps_profile",
    "cavity_g",
    "cavity_g_eps",
    "corner_variant",
    "outward_normal_data",
    "compatibility_defect",
    "project_compatible",
    "l2_norm_gamma",
    "write_boundary_data",
    "read_boundary_data",
]

SIDES = ("bottom", "right", "top", "left")
NORMALS = {
    "bottom": np.array([0.0, -1.0]),
    "right": np.array([1.0, 0.0]),
    "top": np.array([0.0, 1.0]),
    "left": np.array([-1.0, 0.0]),
}
TANGENTS = {
    "bottom": np.array([1.0, 0.0]),
    "right": np.array([0.0, 1.0]),
    "top": np.array([-1.0, 0.0]),
    "left": np.array([0.0, -1.0]),
}
PERIMETER = 4.0


@dataclass(frozen=True)
class BoundaryData:
    """Velocity samples (g1, g2) at boundary face midpoints, one array per side."""

    grid: StaggeredGrid
    samples: dict  # side -> (n, 2) ndarray

    def __post_init__(self):
        n = self.grid.n
        clean = {}
        for side in SIDES:
            a = np.ascontiguousarray(self.samples[side], dtype=float)
            if a.shape != (n, 2):
                raise ValueError(f"side {side!r}: expected shape {(n, 2)}, got {a.shape}")
            a.flags.writeable = False
            clean[side] = a
        object.__setattr__(self, "samples", clean)

    @classmethod
    def zeros(cls, grid: StaggeredGrid) -> "BoundaryData":
        z = {s: np.zeros((grid.n, 2)) for s in SIDES}
        return cls(grid, z)

    @classmethod
    def from_functions(cls, grid, funcs) -> "BoundaryData":
        """funcs: side -> callable(s) -> (n,2), s the arclength parameter in [0,1]."""
        s = grid.x_centers()
        return cls(grid, {side: np.asarray(funcs[side](s), dtype=float) for side in SIDES})

    def arc(self, side: str) -> np.ndarray:
        """Sample positions along the side, as the in-side coordinate in (0,1)."""
        return self.grid.x_centers()

    def normal_part(self, side: str) -> np.ndarray:
        return self.samples[side] @ NORMALS[side]

    def tangential_part(self, side: str) -> np.ndarray:
        return self.samples[side] @ TANGENTS[side]

    def __add__(self, other: "BoundaryData") -> "BoundaryData":
        return BoundaryData(
            self.grid, {s: self.samples[s] + other.samples[s] for s in SIDES}
        )

    def __sub__(self, other: "BoundaryData") -> "BoundaryData":
        return BoundaryData(
            self.grid, {s: self.samples[s] - other.samples[s] for s in SIDES}
        )

    def __mul__(self, a: float) -> "BoundaryData":
        return BoundaryData(self.grid, {s: a * self.samples[s] for s in SIDES})

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return all(np.all(self.samples[s] == 0.0) for s in SIDES)


def smoothstep(s):
    """Quintic smoothstep: 0 for s <= 0, 1 for s >= 1, C2 across the joins."""
    s = np.clip(np.asarray(s, dtype=float), 0.0, 1.0)
    return s ** 3 * (10.0 - 15.0 * s + 6.0 * s ** 2)


def sigma(x):
    """C2 cutoff: 1 on [0, 1/2], quintic descent on [1/2, 3/4], 0 on [3/4, 1]."""
    x = np.asarray(x, dtype=float)
    if np.any(x < 0.0) or np.any(x > 1.0):
        raise ValueError("sigma is defined on [0, 1]")
    return 1.0 - smoothstep((x - 0.5) / 0.25)


def cavity_eps_profile(x, eps: float):
    """Regularized lid profile 1 - sigma(x) e^{-x/eps} - sigma(1-x) e^{-(1-x)/eps}.

    Vanishes at both ends of the lid and rises to ~1 over a layer of width eps.
    """
    if eps <= 0.0:
        raise ValueError(f"eps must be positive, got {eps}")
    x = np.asarray(x, dtype=float)
    return 1.0 - sigma(x) * np.exp(-x / eps) - sigma(1.0 - x) * np.exp(-(1.0 - x) / eps)


def _warn_if_underresolved(eps: float, grid: StaggeredGrid) -> None:
    if eps < 4.0 * grid.h:
        warnings.warn(
            f"layer width eps={eps:g} is below 4h={4.0 * grid.h:g} at n={grid.n}; "
            "the boundary layer is under-resolved",
            UnderResolvedWarning,
            stacklevel=3,
        )


def cavity_g(grid: StaggeredGrid) -> BoundaryData:
    """Driven-lid data: (1, 0) on the top side, zero elsewhere.  Tangential."""
    g = {s: np.zeros((grid.n, 2)) for s in SIDES}
    g["top"][:, 0] = 1.0
    return BoundaryData(grid, g)


def cavity_g_eps(grid: StaggeredGrid, eps: float) -> BoundaryData:
    """Lid data with the corner singularities smoothed over a layer of width eps."""
    _warn_if_underresolved(eps, grid)
    g = {s: np.zeros((grid.n, 2)) for s in SIDES}
    g["top"][:, 0] = cavity_eps_profile(grid.x_centers(), eps)
    return BoundaryData(grid, g)


def corner_variant(grid: StaggeredGrid, which: str, eps: float = 0.0) -> BoundaryData:
    """Lid data driving only one corner singularity, projected compatible.

    corner_01: first component equals y on the right side; for eps > 0 the lid
    profile decays near x = 0 only (1 - sigma(x) e^{-x/eps}), leaving the
    corner at (1,1) matched by the ramp.  corner_11 is the mirror image (ramp
    on the left side, decay near x = 1).  The ramp has net outflow, so the
    result is projected back onto compatible data.
    """
    g = {s: np.zeros((grid.n, 2)) for s in SIDES}
    x = grid.x_centers()
    if which == "corner_01":
        if eps > 0.0:
            _warn_if_underresolved(eps, grid)
            g["top"][:, 0] = 1.0 - sigma(x) * np.exp(-x / eps)
        else:
            g["top"][:, 0] = 1.0
        g["right"][:, 0] = grid.y_centers()
    elif which == "corner_11":
        if eps > 0.0:
            _warn_if_underresolved(eps, grid)
            g["top"][:, 0] = 1.0 - sigma(1.0 - x) * np.exp(-(1.0 - x) / eps)
        else:
            g["top"][:, 0] = 1.0
        g["left"][:, 0] = grid.y_centers()
    else:
        raise ValueError(f"unknown corner variant {which!r}")
    return project_compatible(BoundaryData(grid, g))


def outward_normal_data(grid: StaggeredGrid) -> BoundaryData:
    """g = n on every side (maximally incompatible test data)."""
    return BoundaryData(
        grid, {s: np.tile(NORMALS[s], (grid.n, 1)) for s in SIDES}
    )


def rotation_data(grid: StaggeredGrid) -> BoundaryData:
    """Trace of the rigid rotation (-(y-1/2), x-1/2).

    Smooth, compatible, and with constant tangential part g . tau = 1/2, so
    tangential-trace recoveries have a closed-form reference.
    """
    samples = {}
    a = grid.x_centers()
    zero, one = np.zeros_like(a), np.ones_like(a)
    coords = {
        "bottom": (a, zero), "top": (a, one),
        "left": (zero, a), "right": (one, a),
    }
    for side, (x, y) in coords.items():
        samples[side] = np.stack([-(y - 0.5), x - 0.5], axis=1)
    return BoundaryData(grid, samples)


def compatibility_defect(g: BoundaryData) -> float:
    """Net boundary flux: sum over all samples of h * (g . n)."""
    h = g.grid.h
    return float(sum(h * g.normal_part(s).sum() for s in SIDES))


def project_compatible(g: BoundaryData) -> BoundaryData:
    """Remove the flux defect uniformly from the normal component.

    Subtracts (defect / 4) n pointwise; tangential parts are untouched and the
    projection is idempotent.
    """
    d = compatibility_defect(g) / PERIMETER
    samples = {s: g.samples[s] - d * NORMALS[s][None, :] for s in SIDES}
    return BoundaryData(g.grid, samples)


def l2_norm_gamma(g: BoundaryData) -> float:
    """Discrete L2(Gamma) norm: sqrt(sum over samples of h |g|^2)."""
    h = g.grid.h
    s = sum(float(np.sum(g.samples[side] ** 2)) for side in SIDES)
    return float(np.sqrt(h * s))


def write_boundary_data(path, g: BoundaryData) -> None:
    """Text round-trip format: one row (side, index, g1, g2) per sample."""
    with Path(path).open("w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["side", "index", "g1", "g2"])
        for side in SIDES:
            for i, (g1, g2) in enumerate(g.samples[side]):
                w.writerow([side, i, repr(float(g1)), repr(float(g2))])


def read_boundary_data(path, grid: StaggeredGrid) -> BoundaryData:
    samples = {s: np.zeros((grid.n, 2)) for s in SIDES}
    with Path(path).open(newline="") as f:
        r = csv.reader(f)
        header = next(r)
        if header != ["side", "index", "g1", "g2"]:
            raise ValueError(f"unexpected boundary-data header {header}")
        for side, idx, g1, g2 in r:
            samples[side][int(idx)] = (float(g1), float(g2))
    return BoundaryData(grid, samples)
