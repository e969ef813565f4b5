import warnings

import numpy as np
import pytest

from vws.biharmonic import (
    StreamFunction,
    apply_biharmonic,
    biharmonic_diagonal,
    biharmonic_load,
    solve_biharmonic,
    velocity_from_stream,
    write_stream,
)
from vws.boundary import (
    BoundaryData,
    cavity_g_eps,
    outward_normal_data,
    rotation_data,
)
from vws.errors import NonTangentialData, UnderResolvedWarning
from vws.grid import build_grid, l2_norm_omega, read_field
from vws.manufactured import biharmonic_source, biharmonic_stream
from vws.operators import divergence
from vws.stokes import SolverOptions, solve_boundary

from support import observed_orders


def _lid(grid, eps=0.1):
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", UnderResolvedWarning)
        return cavity_g_eps(grid, eps)


def _mms_err(n):
    grid = build_grid(n)
    z = grid.nodes()
    psi_ex = biharmonic_stream()(z[:, None], z[None, :])
    src = biharmonic_source()(z[:, None], z[None, :])
    st = solve_biharmonic(grid, BoundaryData.zeros(grid), f_nodes=src)
    return grid.h * float(np.sqrt(((st.psi - psi_ex) ** 2).sum()))


def test_clamped_plate_mms_frozen():
    errs = [_mms_err(n) for n in (16, 32)]
    assert errs[0] == pytest.approx(5.992852e-5, rel=1e-3)
    assert errs[1] == pytest.approx(1.503265e-5, rel=1e-3)
    assert observed_orders(errs)[0] >= 1.5


def test_stencil_interior_truncation_frozen():
    # near-wall rows feel the mirror ghosts at O(1); the pure 13-point
    # stencil (depth >= 2 from the wall) is second order
    errs = []
    for n in (16, 32):
        grid = build_grid(n)
        z = grid.nodes()
        psi = biharmonic_stream()(z[:, None], z[None, :])
        src = biharmonic_source()(z[:, None], z[None, :])
        out = apply_biharmonic(grid, psi[1:n, 1:n])
        errs.append(np.abs(out[2:-2, 2:-2] - src[3:-3, 3:-3]).max())
    assert errs[0] == pytest.approx(3.112793e-2, rel=1e-3)
    assert errs[1] == pytest.approx(7.804871e-3, rel=1e-3)
    assert observed_orders(errs)[0] >= 1.9


def test_operator_symmetric_positive():
    grid = build_grid(12)
    rng = np.random.default_rng(11)
    for _ in range(4):
        x = rng.standard_normal((11, 11))
        y = rng.standard_normal((11, 11))
        ax = apply_biharmonic(grid, x)
        ay = apply_biharmonic(grid, y)
        sxy = float(np.sum(ax * y))
        syx = float(np.sum(x * ay))
        assert abs(sxy - syx) <= 1e-9 * max(abs(sxy), 1.0)
        assert float(np.sum(ax * x)) > 0.0


def test_diagonal_matches_operator():
    grid = build_grid(10)
    d = biharmonic_diagonal(grid)
    for i, j in [(0, 0), (4, 4), (0, 5), (8, 8)]:
        e = np.zeros((9, 9))
        e[i, j] = 1.0
        assert apply_biharmonic(grid, e)[i, j] == pytest.approx(d[i, j],
                                                                rel=1e-14)


def test_cross_check_against_saddle_solver():
    grid = build_grid(32)
    g = _lid(grid)
    st = solve_biharmonic(grid, g)
    u_bi = velocity_from_stream(st)
    u_mac = solve_boundary(grid, g).velocity
    assert l2_norm_omega(u_bi - u_mac) <= 1e-6
    assert np.abs(divergence(u_bi).p).max() <= 1e-13


def test_tight_tolerance_equivalence():
    # the two discretizations agree algebraically; with tight solver
    # tolerances the gap sits at rounding level
    grid = build_grid(16)
    g = _lid(grid)
    st = solve_biharmonic(grid, g, rel_tol=1e-13)
    u_bi = velocity_from_stream(st)
    opts = SolverOptions(div_tol=1e-13, cg_tol=1e-14)
    u_mac = solve_boundary(grid, g, opts=opts).velocity
    assert l2_norm_omega(u_bi - u_mac) <= 1e-9


def test_rejects_data_with_normal_component():
    grid = build_grid(16)
    g = rotation_data(grid) + outward_normal_data(grid)
    with pytest.raises(NonTangentialData):
        solve_biharmonic(grid, g)


def test_lid_vortex_location_frozen():
    grid = build_grid(64)
    st = solve_biharmonic(grid, _lid(grid))
    x0, y0, val = st.extremum()
    assert x0 == pytest.approx(0.5, abs=1e-12)
    assert y0 == pytest.approx(0.765625, abs=1e-12)
    assert val == pytest.approx(-0.0959898932016, rel=1e-3)


def test_zero_data_gives_zero_stream():
    grid = build_grid(16)
    st = solve_biharmonic(grid, BoundaryData.zeros(grid))
    assert np.abs(st.psi).max() == 0.0
    assert st.diagnostics["iterations"] == 0


def test_load_shape_validation():
    grid = build_grid(16)
    g = BoundaryData.zeros(grid)
    with pytest.raises(ValueError):
        biharmonic_load(grid, g, f_nodes=np.zeros((5, 5)))


def test_stream_shape_validation():
    grid = build_grid(16)
    with pytest.raises(ValueError):
        StreamFunction(grid, np.zeros((4, 4)))


def test_write_stream_round_trip(tmp_path):
    grid = build_grid(8)
    src = biharmonic_source()(grid.nodes()[:, None], grid.nodes()[None, :])
    st = solve_biharmonic(grid, BoundaryData.zeros(grid), f_nodes=src)
    path = tmp_path / "psi.dat"
    write_stream(path, st)
    arr, n, component = read_field(path)
    assert n == 8 and component == "node"
    assert np.array_equal(arr, st.psi)
