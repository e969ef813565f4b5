import warnings

import numpy as np
import pytest

from vws.boundary import (
    BoundaryData,
    SIDES,
    cavity_g,
    cavity_g_eps,
    compatibility_defect,
    corner_variant,
    l2_norm_gamma,
    outward_normal_data,
    project_compatible,
    read_boundary_data,
    rotation_data,
    smoothstep,
    write_boundary_data,
)
from vws.errors import UnderResolvedWarning
from vws.grid import build_grid


def test_smoothstep_values():
    assert smoothstep(0.0) == 0.0
    assert smoothstep(1.0) == 1.0
    assert smoothstep(0.5) == 0.5
    assert smoothstep(0.25) == 0.103515625   # quintic: s^3 (10 - 15 s + 6 s^2)
    assert smoothstep(-3.0) == 0.0
    assert smoothstep(4.0) == 1.0
    s = np.linspace(0.0, 1.0, 101)
    assert np.all(np.diff(smoothstep(s)) >= 0.0)


def test_cavity_g_layout():
    grid = build_grid(16)
    g = cavity_g(grid)
    assert np.all(g.samples["top"][:, 0] == 1.0)
    assert np.all(g.samples["top"][:, 1] == 0.0)
    for side in ("bottom", "left", "right"):
        assert np.all(g.samples[side] == 0.0)
    assert compatibility_defect(g) == 0.0
    assert abs(l2_norm_gamma(g) - 1.0) <= 1e-14


def test_cavity_eps_profile_shape():
    grid = build_grid(128)
    g = cavity_g_eps(grid, 0.1)
    prof = g.samples["top"][:, 0]
    # layer tails e^{-x/eps} from both corners meet at the middle
    mid = prof[len(prof) // 2]
    assert abs(mid - 1.0) <= 2.5 * np.exp(-0.5 / 0.1)
    assert prof[0] < 0.25 and prof[-1] < 0.25
    assert abs(prof[0] - prof[-1]) <= 1e-13  # symmetric corners
    assert abs(compatibility_defect(g)) <= 1e-15

    sharp = cavity_g_eps(build_grid(512), 0.0125).samples["top"][:, 0]
    assert abs(sharp[len(sharp) // 2] - 1.0) <= 1e-12


def test_underresolved_warning():
    grid = build_grid(32)
    with pytest.warns(UnderResolvedWarning):
        cavity_g_eps(grid, 0.05)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        cavity_g_eps(build_grid(128), 0.05)  # resolved: must not warn


def test_corner_variants_compatible():
    grid = build_grid(64)
    for which in ("corner_01", "corner_11"):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", UnderResolvedWarning)
            g = corner_variant(grid, which, eps=0.05)
        assert abs(compatibility_defect(g)) <= 1e-14
    with pytest.raises(ValueError):
        corner_variant(grid, "corner_00")


def test_projection():
    grid = build_grid(32)
    bad = outward_normal_data(grid)
    assert abs(compatibility_defect(bad) - 4.0) <= 1e-12
    fixed = project_compatible(bad)
    assert abs(compatibility_defect(fixed)) <= 1e-13
    twice = project_compatible(fixed)
    for side in SIDES:
        assert np.allclose(twice.samples[side], fixed.samples[side],
                           atol=1e-15)
    # tangential parts untouched
    for side in SIDES:
        assert np.allclose(fixed.tangential_part(side),
                           bad.tangential_part(side), atol=1e-15)


def test_rotation_data_properties():
    grid = build_grid(32)
    g = rotation_data(grid)
    for side in SIDES:
        assert np.allclose(g.tangential_part(side), 0.5, atol=1e-14)
    assert abs(compatibility_defect(g)) <= 1e-14


def test_boundary_arithmetic_and_zeros():
    grid = build_grid(16)
    g = cavity_g(grid)
    z = BoundaryData.zeros(grid)
    assert z.is_zero()
    assert not g.is_zero()
    two = g + g
    assert np.allclose(two.samples["top"], 2.0 * g.samples["top"], atol=1e-15)
    diff = two - g * 2.0
    assert diff.is_zero()
    assert np.array_equal(g.arc("top"), grid.x_centers())


def test_normal_tangential_split():
    grid = build_grid(16)
    g = rotation_data(grid)
    for side in SIDES:
        nt = g.normal_part(side)
        tg = g.tangential_part(side)
        assert np.allclose(nt ** 2 + tg ** 2,
                           (g.samples[side] ** 2).sum(axis=1), atol=1e-13)


def test_write_read_roundtrip(tmp_path):
    grid = build_grid(8)
    g = rotation_data(grid)
    path = tmp_path / "g.txt"
    write_boundary_data(path, g)
    back = read_boundary_data(path, grid)
    for side in SIDES:
        assert np.allclose(back.samples[side], g.samples[side], atol=1e-12)
