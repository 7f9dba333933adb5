"""Masses, configurations, sector measures, and serialization."""

import numpy as np
import pytest
from conftest import random_configuration, random_gaussian_mass, random_planar_mixture
from scipy.stats import norm

from qfan import (
    Configuration,
    DegenerateConfigurationError,
    Disk,
    Gaussian,
    MassSpec,
    MeasureError,
    PlanarMassSpec,
    load_masses,
    mass_from_dict,
    mass_to_dict,
    monte_carlo_sector_measure,
    pushforward_planar,
    sample,
    save_masses,
    sector_contains,
    sector_measure,
    total_mass,
    wedge_measure,
)


class TestConstruction:
    def test_total_mass(self):
        m = MassSpec([Gaussian(mean=[0j], sigma=1.0, weight=2.0), Disk(0j, 1.0, weight=3.0)])
        assert total_mass(m) == 5.0
        assert total_mass(MassSpec([Gaussian(mean=[0j], sigma=1.0)])) == 1.0

    def test_empty_rejected(self):
        with pytest.raises(MeasureError):
            MassSpec([])

    def test_nonpositive_parameters_rejected(self):
        with pytest.raises(ValueError):
            Gaussian(mean=[0j], sigma=0.0)
        with pytest.raises(ValueError):
            Gaussian(mean=[0j], sigma=1.0, weight=-1.0)
        with pytest.raises(ValueError):
            Disk(0j, radius=-2.0)

    def test_mixed_dimensions_rejected(self):
        with pytest.raises(MeasureError, match="dimension"):
            MassSpec([Gaussian(mean=[0j], sigma=1.0), Gaussian(mean=[0j, 0j], sigma=1.0)])

    def test_disk_needs_the_plane(self):
        with pytest.raises(MeasureError):
            MassSpec([Gaussian(mean=[0j, 1j], sigma=1.0), Disk(0j, 1.0)], dim=2)

    def test_immutable(self):
        m = MassSpec([Gaussian(mean=[0j], sigma=1.0)])
        with pytest.raises(AttributeError):
            m.dim = 3
        with pytest.raises(ValueError):
            m.components[0].mean[0] = 1.0  # read-only array

    def test_planar_alias(self):
        p = PlanarMassSpec([Disk(1j, 0.5)])
        assert p.dim == 1


class TestConfiguration:
    def test_normalized(self, rng):
        x = Configuration(a=np.array([3.0 + 0j, 4.0j]), b=12.0 + 0j)
        norm2 = np.sum(np.abs(x.a) ** 2) + abs(x.b) ** 2
        assert norm2 == pytest.approx(1.0, abs=1e-12)

    def test_apex_examples(self):
        assert Configuration(a=[1.0 + 0j], b=0j).apex() == 0j
        x = Configuration(a=[1.0 + 0j], b=-1.0 + 0j)  # (1, -1)/sqrt(2) after scaling
        assert x.apex() == pytest.approx(1.0 + 0j, abs=1e-15)

    def test_apex_solves_defining_equation(self, rng):
        for _ in range(20):
            x = random_configuration(rng, dim=1)
            v = x.project(np.array([[x.apex()]]))
            assert abs(v[0]) < 1e-10

    def test_from_apex_round_trip(self, rng):
        for _ in range(10):
            p = complex(rng.uniform(-5, 5), rng.uniform(-5, 5))
            assert Configuration.from_apex(p).apex() == pytest.approx(p, abs=1e-12)

    def test_vector_round_trip(self, rng):
        x = random_configuration(rng, dim=3)
        y = Configuration.from_vector(x.as_vector())
        assert np.allclose(y.a, x.a) and y.b == pytest.approx(x.b)

    def test_degenerate_flag_and_apex_error(self):
        x = Configuration(a=[0j], b=1.0 + 0j)
        assert x.is_degenerate
        with pytest.raises(DegenerateConfigurationError):
            x.apex()

    def test_apex_needs_dimension_one(self, rng):
        with pytest.raises(ValueError):
            random_configuration(rng, dim=2).apex()

    def test_rotate_keeps_hyperplane(self, rng):
        x = random_configuration(rng, dim=1)
        y = x.rotate(1.234)
        assert y.apex() == pytest.approx(x.apex(), abs=1e-12)


class TestPushforward:
    def test_identity_map(self):
        m = MassSpec([Gaussian(mean=[0j], sigma=1.0)])
        p = pushforward_planar(m, Configuration(a=[1.0 + 0j], b=0j))
        (g,) = p.components
        assert complex(g.mean[0]) == 0j and g.sigma == 1.0

    def test_two_dimensional_example(self, rng):
        # a = (1, 0)/sqrt(2), b = 1/sqrt(2): the centered Gaussian lands at
        # conj(b) = 1/sqrt(2) with sigma scaled by ||a|| = 1/sqrt(2).
        s = 1 / np.sqrt(2)
        x = Configuration(a=np.array([1.0 + 0j, 0j]) * s, b=s + 0j)
        m = MassSpec([Gaussian(mean=[0j, 0j], sigma=1.0)])
        (g,) = pushforward_planar(m, x).components
        assert complex(g.mean[0]) == pytest.approx(s + 0j, abs=1e-14)
        assert g.sigma == pytest.approx(s, abs=1e-14)
        # Cross-check against sampled projections.
        pts = x.project(sample(m, 100_000, seed=7))
        assert np.mean(pts) == pytest.approx(complex(g.mean[0]), abs=0.02)
        assert np.std(pts.real) == pytest.approx(g.sigma, abs=0.01)

    def test_weights_preserved(self, rng):
        m = random_gaussian_mass(rng, dim=2, k=4)
        x = random_configuration(rng, dim=2)
        p = pushforward_planar(m, x)
        assert p.total == pytest.approx(m.total, abs=0)

    def test_disk_image(self, rng):
        x = random_configuration(rng, dim=1)
        m = PlanarMassSpec([Disk(1 + 2j, 0.5, weight=2.0)])
        (d,) = pushforward_planar(m, x).components
        assert d.radius == pytest.approx(0.5 * abs(x.a[0]), abs=1e-14)
        assert complex(d.center) == pytest.approx(
            (1 + 2j) * np.conj(x.a[0]) + np.conj(x.b), abs=1e-14
        )

    def test_degenerate_rejected(self):
        m = MassSpec([Gaussian(mean=[0j], sigma=1.0)])
        with pytest.raises(DegenerateConfigurationError):
            pushforward_planar(m, Configuration(a=[0j], b=1.0 + 0j))


class TestWedgeMeasure:
    def test_symmetry_examples(self):
        g = PlanarMassSpec([Gaussian(mean=[0j], sigma=1.0)])
        for q in (2, 3, 4, 7):
            assert wedge_measure(g, q, 1.234) == pytest.approx(1 / q, abs=1e-12)
        d = PlanarMassSpec([Disk(0j, 1.0)])
        assert wedge_measure(d, 3, 0.4) == pytest.approx(1 / 3, abs=1e-12)

    def test_far_mean_saturates(self):
        g = PlanarMassSpec([Gaussian(mean=[1000.0 + 0j], sigma=1.0, weight=1.5)])
        assert wedge_measure(g, 4, 0.0) == pytest.approx(1.5, abs=1e-8)

    def test_halfplane_value(self):
        g = PlanarMassSpec([Gaussian(mean=[2.0 + 0j], sigma=1.0)])
        assert wedge_measure(g, 2, 0.0) == pytest.approx(norm.cdf(2.0), abs=1e-12)

    def test_quadrature_route_agrees(self, rng):
        p = random_planar_mixture(rng, k=3, with_disks=False)
        for theta in (0.0, 0.9, -2.1):
            a = wedge_measure(p, 5, theta)
            b = wedge_measure(p, 5, theta, method="quadrature")
            assert a == pytest.approx(b, abs=1e-10)

    def test_bad_arguments(self):
        p = PlanarMassSpec([Disk(0j, 1.0)])
        with pytest.raises(ValueError):
            wedge_measure(p, 1, 0.0)
        with pytest.raises(ValueError):
            wedge_measure(p, 3, 0.0, method="magic")


class TestSectorMeasure:
    def test_degenerate_all_or_nothing(self):
        m = MassSpec([Gaussian(mean=[0j], sigma=1.0, weight=2.5)])
        x = Configuration(a=[0j], b=1.0 + 0j)
        assert sector_measure(m, x, 2, 0.0) == pytest.approx(2.5, abs=0)
        assert sector_measure(m, x, 4, np.pi) == 0.0

    def test_apex_at_mean_is_constant(self, rng):
        mu = 0.7 - 0.2j
        m = MassSpec([Gaussian(mean=[mu], sigma=0.9, weight=1.3)])
        x = Configuration.from_apex(mu)
        for theta in rng.uniform(-np.pi, np.pi, 5):
            assert sector_measure(m, x, 5, theta) == pytest.approx(1.3 / 5, abs=1e-10)

    def test_tiling(self, rng):
        for q in (2, 3, 5, 8):
            m = random_planar_mixture(rng)
            x = random_configuration(rng, dim=1)
            angles = 0.3 + 2 * np.pi * np.arange(q) / q
            total = sum(sector_measure(m, x, q, t) for t in angles)
            assert total == pytest.approx(m.total, abs=1e-7 * m.total)

    def test_range(self, rng):
        m = random_gaussian_mass(rng, dim=2)
        x = random_configuration(rng, dim=2)
        vals = sector_measure(m, x, 3, np.linspace(0, 2 * np.pi, 32))
        assert np.all(vals >= 0) and np.all(vals <= m.total + 1e-12)

    def test_rotation_covariance(self, rng):
        m = random_gaussian_mass(rng, dim=2)
        x = random_configuration(rng, dim=2)
        for _ in range(5):
            phi = rng.uniform(-np.pi, np.pi)
            theta = rng.uniform(-np.pi, np.pi)
            assert sector_measure(m, x.rotate(phi), 3, theta) == pytest.approx(
                sector_measure(m, x, 3, theta + phi), abs=1e-12
            )

    def test_monte_carlo_agreement(self, rng):
        for _ in range(5):
            m = random_planar_mixture(rng)
            x = random_configuration(rng, dim=1)
            q = int(rng.integers(2, 7))
            theta = rng.uniform(-np.pi, np.pi)
            exact = sector_measure(m, x, q, theta)
            est = monte_carlo_sector_measure(m, x, q, theta, n=200_000, seed=rng)
            assert abs(est.value - exact) <= 4 * max(est.stderr, 1e-4)

    def test_continuity_into_the_degenerate_locus(self):
        # As a -> 0 the sector measure tends to the all-or-nothing indicator
        # away from the boundary angles.
        m = MassSpec([Gaussian(mean=[0.3 + 0.1j], sigma=1.0, weight=2.0)])
        inside, outside = 0.1, np.pi  # relative to b = 1: I_b = [-pi/2, pi/2]
        for eps in (1e-4, 1e-6, 1e-8):
            x = Configuration(a=[eps + 0j], b=1.0 + 0j)
            assert sector_measure(m, x, 2, inside) == pytest.approx(2.0, abs=1e-6)
            assert sector_measure(m, x, 2, outside) == pytest.approx(0.0, abs=1e-6)


class TestSectorContains:
    def test_hyperplane_points_always_inside(self, rng):
        x = random_configuration(rng, dim=1)
        apex = x.apex()
        for theta in rng.uniform(-np.pi, np.pi, 8):
            assert sector_contains(x, 5, theta, np.array([apex]))

    def test_boundary_convention(self):
        x = Configuration.from_apex(0j)
        assert sector_contains(x, 2, 0.0, np.array([1.0 + 0j]))
        assert not sector_contains(x, 2, 0.0, np.array([-1.0 + 0j]))
        assert sector_contains(x, 2, 0.0, np.array([1j]))  # closed at arg = pi/2

    def test_batch_shape(self, rng):
        x = random_configuration(rng, dim=2)
        pts = rng.normal(size=(10, 2)) + 1j * rng.normal(size=(10, 2))
        out = sector_contains(x, 3, 0.0, pts)
        assert out.shape == (10,) and out.dtype == bool


class TestMonteCarlo:
    def test_symmetric_fraction(self):
        m = MassSpec([Gaussian(mean=[1 + 1j], sigma=1.0)])
        x = Configuration.from_apex(1 + 1j)
        est = monte_carlo_sector_measure(m, x, 4, 0.0, n=1_000_000, seed=123)
        assert abs(est.value - 0.25) <= 4 * est.stderr

    def test_rotations_tile_exactly(self):
        m = MassSpec([Gaussian(mean=[0.5j], sigma=0.8, weight=2.0)])
        x = Configuration.from_apex(-0.2 + 0j)
        parts = [
            monte_carlo_sector_measure(m, x, 3, 0.1 + 2 * np.pi * k / 3, n=50_000, seed=9).value
            for k in range(3)
        ]
        assert sum(parts) == pytest.approx(2.0, abs=1e-9)

    def test_seed_reproducibility(self):
        m = MassSpec([Gaussian(mean=[0j], sigma=1.0), Gaussian(mean=[2j], sigma=0.5)])
        x = Configuration.from_apex(1j)
        a = monte_carlo_sector_measure(m, x, 3, 0.7, n=10_000, seed=42)
        b = monte_carlo_sector_measure(m, x, 3, 0.7, n=10_000, seed=42)
        assert a == b


class TestSerialization:
    def test_round_trip(self, rng, tmp_path):
        masses = [random_planar_mixture(rng), random_gaussian_mass(rng, dim=3, k=2)]
        path = tmp_path / "masses.json"
        save_masses(masses, path)
        back = load_masses(path)
        assert len(back) == 2
        for orig, copy in zip(masses, back):
            assert copy.dim == orig.dim
            assert copy.total == pytest.approx(orig.total, abs=1e-15)
            for c1, c2 in zip(orig.components, copy.components):
                assert type(c1) is type(c2)

    def test_single_object_file(self, tmp_path):
        path = tmp_path / "one.json"
        path.write_text(
            '{"dim": 1, "components": [{"type": "disk", "center": [0, 0], "radius": 1}]}'
        )
        (m,) = load_masses(path)
        assert isinstance(m.components[0], Disk)
        assert m.components[0].weight == 1.0  # default

    def test_dict_round_trip(self, rng):
        m = random_planar_mixture(rng)
        again = mass_from_dict(mass_to_dict(m))
        assert again.total == pytest.approx(m.total, abs=1e-15)

    def test_error_locations(self):
        with pytest.raises(MeasureError, match=r"components\[0\]\.sigma"):
            mass_from_dict(
                {"dim": 1, "components": [{"type": "gaussian", "mean": [[0, 0]]}]}
            )
        with pytest.raises(MeasureError, match=r"\[re, im\]"):
            mass_from_dict(
                {"dim": 1, "components": [{"type": "disk", "center": [0], "radius": 1}]}
            )
        with pytest.raises(MeasureError, match="type"):
            mass_from_dict({"dim": 1, "components": [{"type": "cauchy"}]})
        with pytest.raises(MeasureError, match="dim"):
            mass_from_dict({"dim": 0, "components": []})

    def test_invalid_json_reports_position(self, tmp_path):
        path = tmp_path / "broken.json"
        path.write_text('{"dim": 1,\n  "components": }\n')
        with pytest.raises(MeasureError, match="line 2"):
            load_masses(path)
