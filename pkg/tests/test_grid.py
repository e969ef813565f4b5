import numpy as np
import pytest

from vws.grid import (
    PressureField,
    VelocityField,
    build_grid,
    l2_norm_omega,
    max_norm,
    read_field,
    write_field,
)


def test_geometry_n4():
    grid = build_grid(4)
    assert grid.h == 0.25
    assert np.array_equal(grid.x_faces(), [0.0, 0.25, 0.5, 0.75, 1.0])
    assert np.array_equal(grid.x_centers(), [0.125, 0.375, 0.625, 0.875])
    assert np.array_equal(grid.nodes(), grid.x_faces())
    assert np.array_equal(grid.y_faces(), grid.x_faces())
    assert np.array_equal(grid.y_centers(), grid.x_centers())


def test_build_grid_rejects_tiny():
    with pytest.raises(ValueError):
        build_grid(1)


def test_field_shape_validation():
    grid = build_grid(8)
    with pytest.raises(ValueError):
        VelocityField(grid, np.zeros((8, 8)), np.zeros((8, 9)))
    with pytest.raises(ValueError):
        PressureField(grid, np.zeros((8, 9)))


def test_fields_are_read_only():
    grid = build_grid(8)
    u = VelocityField.zeros(grid)
    with pytest.raises(ValueError):
        u.u1[0, 0] = 1.0


def test_norm_of_constant_field():
    # face weights integrate constants exactly: |(1,1)| = sqrt(2)
    grid = build_grid(16)
    ones = VelocityField(grid, np.ones((17, 16)), np.ones((16, 17)))
    assert abs(l2_norm_omega(ones) - np.sqrt(2.0)) <= 1e-13
    p = PressureField(grid, np.ones((16, 16)))
    assert abs(l2_norm_omega(p) - 1.0) <= 1e-13


def test_norm_approximates_integral():
    # int sin^2(pi x) sin^2(pi y) = 1/4 per component
    f = lambda x, y: np.sin(np.pi * x) * np.sin(np.pi * y)
    grid = build_grid(64)
    v = VelocityField.from_functions(grid, f, f)
    assert abs(l2_norm_omega(v) - np.sqrt(0.5)) <= 1e-3


def test_max_norm():
    grid = build_grid(8)
    u1 = np.zeros((9, 8))
    u1[4, 3] = -7.0
    v = VelocityField(grid, u1, np.zeros((8, 9)))
    assert max_norm(v) == 7.0


def test_field_arithmetic():
    grid = build_grid(8)
    f = lambda x, y: x + 2.0 * y
    g = lambda x, y: x * y
    a = VelocityField.from_functions(grid, f, g)
    b = 2.0 * a
    c = b - a
    assert np.allclose(c.u1, a.u1, atol=1e-15)
    assert np.allclose((a + a).u2, b.u2, atol=1e-15)


def test_pressure_zero_mean():
    grid = build_grid(8)
    p = PressureField.from_function(grid, lambda x, y: x).zero_mean()
    assert abs(p.mean()) <= 1e-15


def test_write_read_roundtrip(tmp_path):
    grid = build_grid(8)
    rng = np.random.default_rng(0)
    arr = rng.standard_normal((9, 8))
    path = tmp_path / "field_u1.dat"
    write_field(path, arr, 8, "u1")
    back, n, comp = read_field(path)
    assert n == 8 and comp == "u1"
    assert np.array_equal(back, arr)


def test_write_field_rejects_unknown_component(tmp_path):
    with pytest.raises(ValueError):
        write_field(tmp_path / "x.dat", np.zeros((3, 3)), 3, "vorticity")


def test_read_field_rejects_bad_magic(tmp_path):
    path = tmp_path / "junk.dat"
    path.write_bytes(b"nope" + bytes(24))
    with pytest.raises(ValueError):
        read_field(path)
