import json
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from carleson_lab import domains
from carleson_lab.domains import (
    DomainSpec,
    anchor_point,
    boundary_distance,
    boundary_projection,
    complex_ellipsoid,
    contains,
    convex_polynomial,
    defining_gradient,
    defining_value,
    line_boundary_distance,
    line_level_distance,
    load_spec,
    project_to_level,
    quasi_interior,
    random_interior,
    save_spec,
    spec_from_json,
    spec_to_json,
    to_complex,
    to_real,
    unit_ball,
    unit_disk,
)
from carleson_lab.errors import ConfigError, InputError

DISK = unit_disk()
BALL2 = unit_ball(2)
ELL12 = complex_ellipsoid((1, 2), (1.0, 1.0))
# |z1|^2 + |z2|^2 + (Re z1)^4/4 - 1: convex, finite type
POLY = convex_polynomial(
    [
        (1.0, (2, 0, 0, 0)),
        (1.0, (0, 2, 0, 0)),
        (1.0, (0, 0, 2, 0)),
        (1.0, (0, 0, 0, 2)),
        (0.25, (4, 0, 0, 0)),
        (-1.0, (0, 0, 0, 0)),
    ],
    dim=2,
    box=(1.01, 1.01),
)

ALL_SPECS = [DISK, BALL2, ELL12, POLY]


def _dense_projection_oracle(spec, q, level=0.0, sweeps=4000, seed=11):
    """Independent upper bound on the projection distance: best of many rays."""
    rng = np.random.default_rng(seed)
    best = math.inf
    for _ in range(sweeps):
        v = rng.standard_normal(spec.dim) + 1j * rng.standard_normal(spec.dim)
        v /= np.linalg.norm(v)
        best = min(best, domains._ray_root(spec, q, v, level))
    return best


class TestSpecs:
    def test_factories(self):
        assert DISK.kind == "disk" and DISK.dim == 1
        assert BALL2.kind == "ball" and BALL2.dim == 2
        assert ELL12.kind == "ellipsoid" and tuple(ELL12.exponents) == (1, 2)
        assert POLY.kind == "polynomial" and POLY.dim == 2

    def test_ellipsoid_validation(self):
        with pytest.raises(ConfigError):
            complex_ellipsoid((0, 2), (1.0, 1.0))  # exponents must be >= 1
        with pytest.raises(ConfigError):
            complex_ellipsoid((1, 2), (1.0, -1.0))

    def test_defining_values(self):
        assert defining_value(DISK, [0.0]) == -1.0
        assert defining_value(DISK, [0.6]) == pytest.approx(-0.64)
        assert defining_value(BALL2, [0.6, 0.0]) == pytest.approx(-0.64)
        # (0, 0.9): 0.9^4 - 1
        assert defining_value(ELL12, [0.0, 0.9]) == pytest.approx(0.9**4 - 1.0)

    def test_gradient_matches_fd(self):
        rng = np.random.default_rng(0)
        for spec in ALL_SPECS:
            z = random_interior(spec, 1, rng)[0] * 0.8
            g = defining_gradient(spec, z)
            x = to_real(z)
            h = 1e-7
            for j in range(2 * spec.dim):
                xp = x.copy()
                xp[j] += h
                xm = x.copy()
                xm[j] -= h
                fd = (
                    defining_value(spec, to_complex(xp)) - defining_value(spec, to_complex(xm))
                ) / (2 * h)
                assert g[j] == pytest.approx(fd, abs=1e-5)

    def test_contains_batch(self):
        pts = np.array([[0.2 + 0.1j], [0.99 + 0.0j], [1.1 + 0.0j]])
        assert contains(DISK, pts).tolist() == [True, True, False]


class TestProjection:
    def test_disk_closed_form(self):
        res = project_to_level(DISK, [0.3 + 0.4j])
        assert res.distance == pytest.approx(0.5)
        assert abs(res.point[0]) == pytest.approx(1.0)
        assert res.unique

    def test_center_tie(self):
        res = project_to_level(BALL2, [0.0, 0.0])
        assert res.distance == pytest.approx(1.0)
        assert not res.unique

    def test_ellipsoid_fast_path_against_ray_oracle(self):
        rng = np.random.default_rng(5)
        for trial in range(8):
            q = random_interior(ELL12, 1, rng)[0] * 0.9
            res = project_to_level(ELL12, q)
            oracle = _dense_projection_oracle(ELL12, q, seed=trial)
            assert res.distance <= oracle + 1e-6
            assert abs(defining_value(ELL12, res.point)) < 1e-9
            assert np.linalg.norm(res.point - q) == pytest.approx(res.distance, abs=1e-9)

    def test_ellipsoid_anchor_axis_tie(self):
        res = project_to_level(ELL12, [0.0, 0.0])
        assert res.distance == pytest.approx(1.0)
        assert not res.unique
        # canonical winner is the first axis
        assert res.point[0] == pytest.approx(1.0)
        assert res.point[1] == pytest.approx(0.0)

    def test_polynomial_generic_path(self):
        q = np.array([0.1 + 0.2j, -0.3 + 0.1j])
        res = project_to_level(POLY, q)
        oracle = _dense_projection_oracle(POLY, q)
        assert res.distance <= oracle + 1e-5
        assert abs(defining_value(POLY, res.point)) < 1e-8

    def test_interior_precondition(self):
        with pytest.raises(InputError):
            project_to_level(DISK, [1.5])


class TestDistances:
    def test_boundary_distance_disk(self):
        assert boundary_distance(DISK, [0.3 + 0.4j]) == pytest.approx(0.5)

    def test_boundary_distance_batch(self):
        pts = np.array([[0.0], [0.5 + 0.0j], [0.0 + 0.8j]])
        got = domains.boundary_distance_batch(DISK, pts)
        assert got == pytest.approx([1.0, 0.5, 0.2])

    def test_line_distance_disk_closed_form(self):
        # line through z in direction v: sqrt(|<z,v>|^2 + 1 - |z|^2) - |<z,v>|
        z = np.array([0.5 + 0.0j])
        got = line_boundary_distance(DISK, z, np.array([1.0 + 0.0j]))
        assert got == pytest.approx(0.5)

    def test_line_distance_ellipsoid_axis(self):
        # along e2 from (0, t): remaining quartic room is 1 - t
        got = line_boundary_distance(ELL12, np.array([0.0, 0.3 + 0j]), np.array([0.0, 1.0 + 0j]))
        assert got == pytest.approx(0.7, abs=1e-9)

    def test_level_distance_monotone_in_level(self):
        q = np.array([0.2 + 0.1j, 0.1 - 0.2j])
        d0 = line_level_distance(ELL12, q, np.array([1.0, 1.0 + 0j]), level=0.0)
        dm = line_level_distance(ELL12, q, np.array([1.0, 1.0 + 0j]), level=-0.3)
        assert dm < d0

    def test_projection_vs_boundary_projection(self):
        q = np.array([0.4 + 0.2j])
        p = boundary_projection(DISK, q)
        assert abs(abs(p.point[0]) - 1.0) < 1e-12


class TestSampling:
    def test_random_interior_inside(self):
        rng = np.random.default_rng(1)
        for spec in ALL_SPECS:
            pts = random_interior(spec, 200, rng)
            assert contains(spec, pts).all()

    def test_quasi_interior_deterministic(self):
        a = quasi_interior(DISK, 64, seed=3)
        b = quasi_interior(DISK, 64, seed=3)
        np.testing.assert_array_equal(a, b)
        c = quasi_interior(DISK, 64, seed=4)
        assert not np.array_equal(a, c)

    def test_quasi_interior_level_floor(self):
        pts = quasi_interior(ELL12, 128, seed=0, level_floor=0.2)
        assert (defining_value(ELL12, pts) <= -0.2 + 1e-12).all()

    def test_counts(self):
        assert quasi_interior(DISK, 17, seed=0).shape == (17, 1)


class TestIO:
    def test_roundtrip(self, tmp_path):
        for spec in ALL_SPECS:
            path = tmp_path / f"{spec.kind}.json"
            save_spec(spec, path)
            again = load_spec(path)
            assert again == spec

    def test_unknown_key_rejected(self, tmp_path):
        data = spec_to_json(DISK)
        data["frobnicate"] = 1
        with pytest.raises(ConfigError):
            spec_from_json(data)

    def test_bad_file(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text(json.dumps({"kind": "disk"})[:-3])
        with pytest.raises(ConfigError):
            load_spec(path)


@given(x=st.floats(-0.99, 0.99), y=st.floats(-0.99, 0.99))
@settings(max_examples=50, deadline=None)
def test_disk_membership_property(x, y):
    inside = x * x + y * y < 1.0
    assert bool(contains(DISK, np.array([[complex(x, y)]]))[0]) == inside


@given(seed=st.integers(0, 10), level=st.floats(0.0, 0.5))
@settings(max_examples=20, deadline=None)
def test_quasi_interior_respects_floor_property(seed, level):
    pts = quasi_interior(BALL2, 32, seed=seed, level_floor=level)
    assert (defining_value(BALL2, pts) <= -level + 1e-12).all()


@given(
    re=st.floats(-0.7, 0.7),
    im=st.floats(-0.7, 0.7),
)
@settings(max_examples=40, deadline=None)
def test_projection_distance_bounds_boundary_distance(re, im):
    q = np.array([complex(re, im)])
    if not float(defining_value(DISK, q)) < 0.0:
        return
    # projection to the zero level IS the boundary distance on the disk
    res = project_to_level(DISK, q)
    assert res.distance == pytest.approx(1.0 - abs(q[0]), abs=1e-12)
