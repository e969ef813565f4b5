"""Manufactured solutions with symbolically derived forcings.

The stationary velocity is the curl of the potential sin^2(pi x) sin^2(pi y),
so it is exactly divergence free and vanishes on the boundary together with
the potential's gradient; the pressure is cos(pi x) cos(pi y) (zero mean).
Forcings are obtained by symbolic differentiation and lambdified once per
process; tests cross-check them against high-order finite differences.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np
import sympy as sym

from .grid import PressureField, StaggeredGrid, VelocityField

__all__ = [
    "stationary_solution",
    "stationary_forcing",
    "stationary_fields",
    "time_dependent_solution",
    "time_dependent_forcing",
    "biharmonic_stream",
    "biharmonic_source",
]

_x, _y, _t = sym.symbols("x y t")


@lru_cache(maxsize=None)
def _stationary():
    psi = (sym.sin(sym.pi * _x) * sym.sin(sym.pi * _y)) ** 2
    u1 = sym.diff(psi, _y)
    u2 = -sym.diff(psi, _x)
    p = sym.cos(sym.pi * _x) * sym.cos(sym.pi * _y)
    f1 = -sym.diff(u1, _x, 2) - sym.diff(u1, _y, 2) + sym.diff(p, _x)
    f2 = -sym.diff(u2, _x, 2) - sym.diff(u2, _y, 2) + sym.diff(p, _y)
    lam = lambda e: sym.lambdify((_x, _y), sym.simplify(e), "numpy")
    return tuple(map(lam, (u1, u2, p, f1, f2)))


def stationary_solution():
    """(u1, u2, p) callables of (x, y)."""
    u1, u2, p, _, _ = _stationary()
    return u1, u2, p


def stationary_forcing():
    """(f1, f2) callables of (x, y) with f = -Laplace(u) + grad(p)."""
    *_, f1, f2 = _stationary()
    return f1, f2


def stationary_fields(grid: StaggeredGrid):
    """Exact solution and forcing sampled on the grid."""
    u1, u2, p = stationary_solution()
    f1, f2 = stationary_forcing()
    u = VelocityField.from_functions(grid, u1, u2)
    f = VelocityField.from_functions(grid, f1, f2)
    pr = PressureField.from_function(grid, p).zero_mean()
    return u, f, pr


@lru_cache(maxsize=None)
def _time_dependent():
    # phi(0) = 0 so the plain evolution path (zero initial state) applies
    phi = sym.sin(2 * _t)
    psi = (sym.sin(sym.pi * _x) * sym.sin(sym.pi * _y)) ** 2
    u1 = phi * sym.diff(psi, _y)
    u2 = -phi * sym.diff(psi, _x)
    p = sym.sin(_t) * sym.cos(sym.pi * _x) * sym.cos(sym.pi * _y)
    f1 = sym.diff(u1, _t) - sym.diff(u1, _x, 2) - sym.diff(u1, _y, 2) + sym.diff(p, _x)
    f2 = sym.diff(u2, _t) - sym.diff(u2, _x, 2) - sym.diff(u2, _y, 2) + sym.diff(p, _y)
    lam = lambda e: sym.lambdify((_t, _x, _y), sym.simplify(e), "numpy")
    return tuple(map(lam, (u1, u2, p, f1, f2)))


def time_dependent_solution():
    """(u1, u2, p) callables of (t, x, y); the velocity vanishes at t = 0."""
    u1, u2, p, _, _ = _time_dependent()
    return u1, u2, p


def time_dependent_forcing():
    """(f1, f2) callables of (t, x, y) with f = du/dt - Laplace(u) + grad(p)."""
    *_, f1, f2 = _time_dependent()
    return f1, f2


@lru_cache(maxsize=None)
def _biharmonic():
    psi = (_x * (1 - _x) * _y * (1 - _y)) ** 2
    lap = sym.diff(psi, _x, 2) + sym.diff(psi, _y, 2)
    src = sym.diff(lap, _x, 2) + sym.diff(lap, _y, 2)
    lam = lambda e: sym.lambdify((_x, _y), sym.expand(e), "numpy")
    return lam(psi), lam(src)


def biharmonic_stream():
    """Clamped test stream x^2 (1-x)^2 y^2 (1-y)^2 as a callable of (x, y)."""
    return _biharmonic()[0]


def biharmonic_source():
    """Biharmonic of the test stream (polynomial), callable of (x, y)."""
    return _biharmonic()[1]
