import math

import numpy as np
import pytest

from carleson_lab import bergman, carleson, domains, geometry, kobayashi, measures
from carleson_lab.carleson import (
    BOUNDED,
    DIVERGING,
    INCONCLUSIVE,
    CarlesonConfig,
    build_grid,
    carleson_test,
    grid_levels,
    kobayashi_cover,
    overlap_count,
    overlap_count_many,
    report_level_rows,
    report_point_rows,
    report_summary,
    submean_check,
    verdict_from_levels,
    write_csv,
)
from carleson_lab.domains import complex_ellipsoid, unit_disk
from carleson_lab.errors import ConfigError, InputError, ResourceError
from carleson_lab.measures import atomic_measure, lebesgue_measure
from carleson_lab.polynomials import HoloPolynomial, random_polynomial

DISK = unit_disk()
ELL12 = complex_ellipsoid((1, 2), (1.0, 1.0))

FAST = CarlesonConfig(
    r=0.3,
    levels=4,
    extra_rays=2,
    interior_points=8,
    berezin_samples=1 << 12,
    mass_samples=1 << 12,
    dictionary_polynomials=3,
    polynomial_degree=4,
)


class TestVerdicts:
    def test_flat_is_bounded(self):
        assert verdict_from_levels([1.0, 1.0, 1.0, 1.0]) == BOUNDED

    def test_zero_is_bounded(self):
        assert verdict_from_levels([0.0, 0.0, 0.0, 0.0]) == BOUNDED

    def test_monotone_x4_growth_diverges(self):
        assert verdict_from_levels([1.0, 2.0, 5.0, 20.0]) == DIVERGING
        assert verdict_from_levels([0.1, 1.0, 2.0, 5.0, 20.0]) == DIVERGING

    def test_growth_below_factor_is_not_diverging(self):
        assert verdict_from_levels([1.0, 2.0, 3.0, 3.9]) == INCONCLUSIVE

    def test_plateau_after_growth_is_bounded(self):
        assert verdict_from_levels([1.0, 10.0, 10.5, 11.0, 11.5]) == BOUNDED

    def test_nonmonotone_tail_is_not_diverging(self):
        assert verdict_from_levels([1.0, 8.0, 4.0, 16.0]) != DIVERGING

    def test_too_few_levels(self):
        with pytest.raises(InputError):
            verdict_from_levels([1.0, 2.0, 3.0])


class TestConfigAndGrid:
    def test_config_validation(self):
        with pytest.raises(ConfigError):
            CarlesonConfig(r=0.0)
        with pytest.raises(ConfigError):
            CarlesonConfig(levels=3)

    def test_levels_are_dyadic(self):
        lams = grid_levels(DISK, CarlesonConfig(levels=5))
        assert abs(lams[0] - 0.5) < 1e-12  # half of |r(0)| = 1
        np.testing.assert_allclose(lams[:-1] / lams[1:], 2.0)

    def test_grid_structure_and_determinism(self):
        grid1 = build_grid(DISK, FAST)
        grid2 = build_grid(DISK, FAST)
        rays = FAST.levels * (4 * DISK.dim + FAST.extra_rays)
        assert len(grid1) == rays + FAST.interior_points
        for a, b in zip(grid1, grid2):
            np.testing.assert_array_equal(a.point, b.point)
            assert (a.kind, a.level_index, a.ray_index) == (b.kind, b.level_index, b.ray_index)
        for gp in grid1:
            assert domains.contains(DISK, gp.point[None, :])[0]
            if gp.kind == "ray":
                # ray points sit on the prescribed defining level
                assert abs(domains.defining_value(DISK, gp.point) - gp.level_value) < 1e-9
            else:
                assert gp.level_index == -1 and gp.ray_index == -1

    def test_disk_ray_deltas_match_levels(self):
        grid = build_grid(DISK, FAST)
        for gp in grid:
            if gp.kind == "ray":
                lam = -gp.level_value
                expected = 1.0 - math.sqrt(1.0 - lam)
                assert abs(gp.delta - expected) < 1e-9


class TestParallelMap:
    def test_threaded_map_preserves_order(self, monkeypatch):
        monkeypatch.setenv("CARLESON_LAB_THREADS", "4")
        got = carleson._parallel_map(lambda i: i * i, list(range(50)))
        assert got == [i * i for i in range(50)]

    def test_thread_count_fallback(self, monkeypatch):
        monkeypatch.setenv("CARLESON_LAB_THREADS", "junk")
        assert carleson._thread_count() == 1


class TestCarlesonLebesgue:
    def test_disk_lebesgue_report(self):
        model = bergman.kernel_model(DISK)
        report = carleson_test(DISK, model, lebesgue_measure(), FAST)
        # Berezin transform of nu is identically 1 (variance-free estimator)
        np.testing.assert_array_equal(report.berezin.values, 1.0)
        np.testing.assert_array_equal(report.berezin.stderr, 0.0)
        assert report.berezin.verdict == BOUNDED
        assert report.berezin.sup == 1.0
        # geometric bracket: pure sandwich volume-ratio bound
        cap = ((2.0 / (1.0 - FAST.r)) * (1.0 / FAST.r)) ** 2
        assert report.geometric.sup <= cap
        assert report.geometric.verdict == BOUNDED
        assert report.operator.verdict == BOUNDED
        assert report.measure_label == "lebesgue"

    def test_geometric_bracket_orders(self):
        model = bergman.kernel_model(DISK)
        report = carleson_test(DISK, model, lebesgue_measure(), FAST)
        assert report.geometric.lower is not None
        assert np.all(report.geometric.lower <= report.geometric.values + 1e-12)

    def test_operator_equals_berezin_on_kernels(self):
        # f = normalized kernel: quotient IS the Berezin value, bit for bit
        model = bergman.kernel_model(DISK)
        mu = atomic_measure(DISK, [0.3, -0.4j], [1.0, 2.0])
        report = carleson_test(DISK, model, mu, FAST)
        np.testing.assert_array_equal(report.operator.values, report.berezin.values)

    def test_dictionary_quotients_for_lebesgue(self):
        # integral |f|^2 dnu / ||f||^2 = 1 up to MC error for every polynomial
        model = bergman.kernel_model(DISK)
        report = carleson_test(DISK, model, lebesgue_measure(), FAST)
        assert len(report.dictionary) == FAST.dictionary_polynomials
        for entry in report.dictionary:
            assert abs(entry.quotient - 1.0) < 0.15


class TestCarlesonVerdictCases:
    def test_boundary_ray_atoms_diverge(self):
        # unit masses marching to the boundary: Berezin blows up like delta^-2
        ks = np.arange(1, 11)
        pts = (1.0 - 0.5**ks)[:, None].astype(complex)
        mu = atomic_measure(DISK, pts, np.ones(len(pts)), label="ray")
        model = bergman.kernel_model(DISK)
        report = carleson_test(DISK, model, mu, FAST)
        assert report.berezin.verdict == DIVERGING
        assert report.geometric.verdict == DIVERGING
        assert report.operator.verdict == DIVERGING

    def test_single_interior_atom_bounded(self):
        mu = atomic_measure(DISK, [0.5], [1.0], label="atom")
        model = bergman.kernel_model(DISK)
        report = carleson_test(DISK, model, mu, FAST)
        assert report.berezin.verdict == BOUNDED
        assert report.geometric.verdict == BOUNDED
        # sup of Berezin over the grid is below the global sup K(z0,z0)=16/9
        assert report.berezin.sup <= 16.0 / 9.0 + 1e-12


class TestCover:
    def test_disk_seeded_regression(self):
        res = kobayashi_cover(DISK, 0.5, seed=0, candidates=3000, test_count=1000)
        assert len(res.centers) == 171
        assert res.level == pytest.approx(0.1)
        assert res.coverage.total == 1000
        assert res.coverage.certified == 1000
        assert res.coverage.uncovered == 0
        assert res.frames is None and not res.external_sample
        assert overlap_count(DISK, res.centers, 0.75, 0.2) == 30

    def test_disk_centers_separated(self):
        res = kobayashi_cover(DISK, 0.5, seed=0, candidates=3000, test_count=1000)
        rho = carleson._pseudo_distance_matrix(DISK, res.centers, res.centers)
        np.fill_diagonal(rho, 1.0)
        r_star = math.tanh(2.0 * math.atanh(0.5 / 3.0))
        assert rho.min() >= r_star - 1e-12

    def test_anchor_is_first_center(self):
        res = kobayashi_cover(DISK, 0.4, seed=3, candidates=500, test_count=100)
        np.testing.assert_array_equal(res.centers[0], domains.anchor_point(DISK))

    def test_ellipsoid_cover_coverage(self):
        res = kobayashi_cover(ELL12, 0.5, seed=1, candidates=3000, test_count=1000)
        assert res.coverage.uncovered == 0
        assert res.coverage.certified + res.coverage.heuristic == 1000
        assert res.frames is not None and len(res.frames) == len(res.centers)

    def test_input_validation(self):
        with pytest.raises(InputError):
            kobayashi_cover(DISK, 1.5)
        with pytest.raises(ConfigError):
            kobayashi_cover(DISK, 0.3, candidates=100, test_count=200)

    def test_uncovered_external_points_raise(self):
        with pytest.raises(ResourceError):
            kobayashi_cover(
                DISK, 0.3, seed=0, candidates=50, test_count=10,
                test_points=np.array([[0.995]]),
            )

    def test_external_sample_flag(self):
        res = kobayashi_cover(
            DISK, 0.5, seed=0, candidates=2000, test_count=100,
            test_points=np.array([[0.0], [0.1]]),
        )
        assert res.external_sample
        assert res.coverage.total == 2

    def test_overlap_count_basics(self):
        centers = np.array([[0.0]], dtype=complex)
        assert overlap_count(DISK, centers, 0.3, 0.9) == 0
        assert overlap_count(DISK, centers, 0.3, 0.0) == 1
        many = overlap_count_many(DISK, centers, 0.3, np.array([[0.9], [0.0], [0.2]]))
        np.testing.assert_array_equal(many, [0, 1, 1])

    def test_overlap_conservative_on_ellipsoid(self):
        # generic counting may overcount but never undercounts a certified hit
        res = kobayashi_cover(ELL12, 0.5, seed=0, candidates=1000, test_count=200)
        counts = overlap_count_many(ELL12, res.centers, 0.75, res.centers)
        assert np.all(counts >= 1)  # each center lies in its own ball


class TestSubmean:
    def test_constant_function(self):
        f = HoloPolynomial(dim=1, coeffs={(0,): 2.0})
        rep = submean_check(DISK, f, 0.9, 0.3, samples=1 << 12, seed=0)
        assert rep.passed
        assert rep.value == pytest.approx(4.0)

    def test_vanishing_at_center(self):
        f = HoloPolynomial(dim=1, coeffs={(0,): -0.8, (1,): 1.0})  # z - 0.8
        rep = submean_check(DISK, f, 0.8, 0.3, samples=1 << 12, seed=1)
        assert rep.value == pytest.approx(0.0, abs=1e-25)
        assert rep.passed

    def test_random_polys_on_disk_collar(self):
        rng = np.random.default_rng(5)
        for r in (0.1, 0.3, 0.5):
            for _ in range(5):
                f = random_polynomial(1, 3, rng)
                rep = submean_check(DISK, f, 0.9, r, samples=1 << 13, seed=2)
                assert rep.passed, (r, rep)
                assert rep.margin_mean > 0.0

    def test_ellipsoid_collar_point(self):
        rng = np.random.default_rng(9)
        f = random_polynomial(2, 3, rng)
        rep = submean_check(ELL12, f, np.array([0.0, 0.7]), 0.3, samples=1 << 13, seed=3)
        assert rep.passed

    def test_radius_validation(self):
        f = HoloPolynomial(dim=1, coeffs={(0,): 1.0})
        with pytest.raises(InputError):
            submean_check(DISK, f, 0.5, 1.0)


@pytest.fixture(scope="module")
def report():
    model = bergman.kernel_model(DISK)
    mu = atomic_measure(DISK, [0.2, 0.5], [1.0, 1.0], label="pair")
    return carleson_test(DISK, model, mu, FAST)


class TestEmitters:
    def test_point_rows_shape(self, report):
        header, rows = report_point_rows(report)
        assert header[:3] == ["criterion", "index", "kind"]
        assert len(rows) == 3 * len(report.grid)
        assert {row[0] for row in rows} == {"berezin", "geometric", "operator"}

    def test_level_rows_match_traces(self, report):
        header, rows = report_level_rows(report)
        assert len(rows) == FAST.levels
        for j, row in enumerate(rows):
            assert float(row[2]) == report.berezin.per_level[j]

    def test_summary_fields(self, report):
        s = report_summary(report)
        assert s["measure"] == "pair"
        assert set(s["verdicts"]) == {"berezin", "geometric", "operator"}
        assert s["grid_points"] == len(report.grid)
        assert len(s["dictionary"]) == FAST.dictionary_polynomials

    def test_csv_bytes_deterministic(self, report, tmp_path):
        header, rows = report_point_rows(report)
        p1, p2 = tmp_path / "a.csv", tmp_path / "b.csv"
        write_csv(p1, header, rows)
        header2, rows2 = report_point_rows(report)
        write_csv(p2, header2, rows2)
        assert p1.read_bytes() == p2.read_bytes()
