import numpy as np
import pytest

from gaugelab import library as lib
from gaugelab.errors import BoundaryUnsupported, IncompatibleSource
from gaugelab.gauge import Potentials, transform_potentials
from gaugelab.grid import Grid, ScalarField, VectorField
from gaugelab.helmholtz import (
    decompose,
    decompose_vector,
    inverse_laplacian,
    phys_scalar_from_potentials,
    phys_scalar_from_rho,
    spectral_curl,
    spectral_divergence,
    spectral_gradient,
)


@pytest.fixture
def plane():
    return Grid.box((48, 40), (10.0, 8.0))


def _mixed_field(grid):
    x, y = grid.coords
    kx, ky = (2 * np.pi / p for p in grid.periods)
    # gradient of sin(kx x) cos(ky y) plus a transverse part and a constant
    grad = (kx * np.cos(kx * x) * np.cos(ky * y), -ky * np.sin(kx * x) * np.sin(ky * y))
    trans = (np.sin(2 * ky * y), np.cos(kx * x))
    return VectorField.from_arrays(grid, [g + s + 0.3 for g, s in zip(grad, trans)]), grad, trans


class TestDecomposition:
    def test_parts_match_construction(self, plane):
        a, grad, trans = _mixed_field(plane)
        pure, phys = decompose_vector(a)
        for axis in range(2):
            np.testing.assert_allclose(pure[axis].array, grad[axis], atol=1e-12)
            np.testing.assert_allclose(phys[axis].array, trans[axis] + 0.3, atol=1e-12)

    def test_residuals(self, plane):
        a, _, _ = _mixed_field(plane)
        pure, phys = decompose_vector(a)
        assert np.max(np.abs(spectral_divergence(phys).values)) < 1e-10
        assert np.max(np.abs(spectral_curl(pure).values)) < 1e-10
        assert (pure + phys - a).max_abs() < 1e-12

    def test_gradient_of_periodic_chi_is_pure(self, plane):
        chi = lib.random_smooth(plane, seed=8)
        pure, phys = decompose_vector(chi.gradient(0.2))
        assert phys.max_abs() < 1e-12

    def test_one_dimensional_mean_is_physical(self):
        g = Grid.box(32, 4.0)
        a = VectorField.from_arrays(g, [np.sin(2 * np.pi * g.coords[0] / 4.0) + 2.0])
        pure, phys = decompose_vector(a)
        np.testing.assert_allclose(phys[0].values, 2.0)

    def test_dirichlet_rejected(self):
        g = Grid.box((16, 16), 4.0, "dirichlet")
        with pytest.raises(BoundaryUnsupported):
            decompose_vector(VectorField.zeros(g))


class TestPoisson:
    def test_cosine_mode_closed_form(self, plane):
        x, y = plane.coords
        kx = 2 * np.pi / plane.periods[0]
        rho = ScalarField(plane, np.cos(kx * x), real=True)
        np.testing.assert_allclose(phys_scalar_from_rho(rho).array, np.cos(kx * x) / kx**2, atol=1e-12)

    def test_nonzero_mean_rejected(self, plane):
        with pytest.raises(IncompatibleSource):
            phys_scalar_from_rho(ScalarField(plane, np.ones(plane.size), real=True))

    def test_inverse_laplacian_zero_mode(self, plane):
        assert abs(np.mean(inverse_laplacian(ScalarField(plane, np.ones(plane.size))).values)) < 1e-15

    def test_spectral_gradient_exact_on_modes(self, plane):
        x, _ = plane.coords
        k = 2 * np.pi / plane.periods[0] * 3
        g = spectral_gradient(ScalarField(plane, np.sin(k * x), real=True))
        np.testing.assert_allclose(g[0].array, k * np.cos(k * x), atol=1e-11)


class TestPhysicalScalar:
    def test_invariant_under_time_dependent_gauge(self, plane):
        p = lib.periodic_transverse(plane, 1.0)
        chi = lib.random_smooth(plane, seed=21)
        moved = transform_potentials(p, chi)
        for t in (0.0, 0.4, 1.7):
            ref = decompose(p, t)
            new = decompose(moved, t)
            assert np.max(np.abs(new.a0_phys.values - ref.a0_phys.values)) < 1e-10
            assert (new.a_phys - ref.a_phys).max_abs() < 1e-10

    def test_uniform_rate_gauge_absorbed_by_zero_mean(self, plane):
        p = lib.soft_coulomb(plane)
        moved = transform_potentials(p, lib.constant_rate(plane, 0.9))
        np.testing.assert_allclose(phys_scalar_from_potentials(moved, 0.5).values,
                                   phys_scalar_from_potentials(p, 0.5).values, atol=1e-12)

    def test_finite_difference_time_derivative(self, plane):
        p = lib.periodic_transverse(plane, 1.0)
        moved = transform_potentials(p, lib.random_smooth(plane, seed=2))
        analytic = phys_scalar_from_potentials(moved, 0.5).values
        fd = phys_scalar_from_potentials(moved, 0.5, dt=1e-4).values
        assert np.max(np.abs(analytic - fd)) < 1e-6

    def test_rho_takes_precedence(self, plane):
        rho = lib.gaussian_dipole_density(plane)
        p = Potentials(plane, rho=rho)
        expected = phys_scalar_from_rho(ScalarField(plane, rho, real=True)).values
        np.testing.assert_allclose(decompose(p, 0.0).a0_phys.values, expected)
        assert np.max(np.abs(decompose(p, 0.0, use_rho=False).a0_phys.values)) == 0.0
