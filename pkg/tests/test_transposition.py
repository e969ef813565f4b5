import warnings

import numpy as np
import pytest

from vws.boundary import cavity_g, cavity_g_eps, rotation_data
from vws.errors import UnderResolvedWarning, ZeroBoundaryData
from vws.grid import PressureField, VelocityField, build_grid, l2_norm_omega
from vws.manufactured import stationary_solution
from vws.stokes import solve_boundary
from vws.transposition import (
    adjoint_gradient_pairing,
    boundary_pressure,
    estimate_ratio,
    normal_derivative_on_gamma,
    solve_adjoint,
    transposition_identity,
)

from support import observed_orders


def _lid(n, eps=0.1):
    grid = build_grid(n)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UnderResolvedWarning)
        return grid, cavity_g_eps(grid, eps)


def test_identity_rotation_frozen():
    gaps = []
    for n in (32, 64):
        grid = build_grid(n)
        r = transposition_identity(grid, rotation_data(grid))
        assert r["rhs"] == pytest.approx(r["term_q"] - r["term_dvdn"],
                                         abs=1e-14)
        gaps.append(r["rel_gap"])
    assert gaps[0] == pytest.approx(5.80400894007e-2, rel=1e-3)
    assert gaps[1] == pytest.approx(3.02995257767e-2, rel=1e-3)
    assert observed_orders(gaps)[0] >= 0.8


def test_identity_lhs_is_velocity_norm():
    grid = build_grid(32)
    g = rotation_data(grid)
    sol = solve_boundary(grid, g)
    r = transposition_identity(grid, g, u=sol.velocity)
    assert r["lhs"] == pytest.approx(l2_norm_omega(sol.velocity) ** 2,
                                     rel=1e-12)


def test_identity_lid_frozen():
    grid, g = _lid(64)
    r = transposition_identity(grid, g)
    assert r["rel_gap"] == pytest.approx(7.11010530118e-2, rel=1e-3)


def test_estimate_ratio_frozen_and_zero_guard():
    grid, g = _lid(64)
    assert estimate_ratio(grid, g) == pytest.approx(0.28414760985, rel=2e-3)
    from vws.boundary import BoundaryData

    with pytest.raises(ZeroBoundaryData):
        estimate_ratio(grid, BoundaryData.zeros(grid))


def test_adjoint_solves_homogeneous_problem():
    grid = build_grid(16)
    u = VelocityField.from_functions(
        grid,
        lambda x, y: np.sin(np.pi * x) * np.sin(np.pi * y),
        lambda x, y: 0.0 * x,
    )
    sol = solve_adjoint(grid, u)
    # boundary faces at rest: the adjoint problem has zero boundary data
    assert np.abs(sol.velocity.u1[0, :]).max() == 0.0
    assert np.abs(sol.velocity.u2[:, -1]).max() == 0.0
    assert np.abs(sol.velocity.u1[-1, :]).max() == 0.0


def test_normal_derivative_recovery_frozen():
    u1f, u2f, _ = stationary_solution()
    errs = []
    for n in (32, 64):
        grid = build_grid(n)
        v = VelocityField.from_functions(grid, u1f, u2f)
        dvdn = normal_derivative_on_gamma(v)
        x = grid.x_centers()
        exact = -2.0 * np.pi ** 2 * np.sin(np.pi * x) ** 2  # outward normal
        errs.append(np.abs(dvdn.tangential_part("bottom") - exact).max())
        assert np.abs(dvdn.normal_part("bottom")).max() <= 0.02
    assert errs[0] == pytest.approx(4.775010e-2, rel=1e-3)
    assert errs[1] == pytest.approx(1.190263e-2, rel=1e-3)
    assert observed_orders(errs)[0] >= 1.9


def test_boundary_pressure_extrapolation_order():
    _, _, pf = stationary_solution()
    errs = []
    for n in (32, 64):
        grid = build_grid(n)
        p = PressureField.from_function(grid, pf)
        bp = boundary_pressure(p)
        x = grid.x_centers()
        errs.append(max(
            np.abs(bp["bottom"] - np.cos(np.pi * x)).max(),
            np.abs(bp["top"] + np.cos(np.pi * x)).max(),
            np.abs(bp["left"] - np.cos(np.pi * x)).max(),
            np.abs(bp["right"] + np.cos(np.pi * x)).max(),
        ))
    assert errs[0] == pytest.approx(3.600587e-3, rel=1e-3)
    assert observed_orders(errs)[0] >= 1.9


def test_gradient_echo_tangential_data():
    for n in (16, 32):
        grid = build_grid(n)
        assert abs(adjoint_gradient_pairing(grid, cavity_g(grid))) <= 1e-10
