import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from gaugelab.errors import DimensionUnsupported, GridMismatch
from gaugelab.grid import (
    Grid,
    ScalarField,
    SpinorField,
    VectorField,
    curl2d,
    divergence,
    gradient,
    inner_product,
    laplacian,
    laplacian_matrix,
    norm,
    sample,
    wide_laplacian,
)


class TestGridConstruction:
    def test_box_periodic_layout(self):
        g = Grid.box(16, 8.0, "periodic")
        assert g.spacing == (0.5,)
        assert g.origin == (-4.0,)
        assert g.periods == (8.0,)
        np.testing.assert_allclose(g.axis_coordinates(0)[[0, -1]], [-4.0, 3.5])

    def test_box_dirichlet_excludes_walls(self):
        g = Grid.box(9, 10.0, "dirichlet")
        assert g.spacing[0] == pytest.approx(1.0)
        x = g.axis_coordinates(0)
        assert x[0] == pytest.approx(-4.0) and x[-1] == pytest.approx(4.0)

    @pytest.mark.parametrize("points", [(4,), (16, 7), (8, 8, 8)])
    def test_rejects_bad_shapes(self, points):
        with pytest.raises((ValueError, DimensionUnsupported)):
            Grid(points, 0.1)

    def test_rejects_nonpositive_spacing(self):
        with pytest.raises(ValueError):
            Grid((16,), (0.0,))

    def test_row_major_flattening(self):
        g = Grid.box((8, 10), 4.0)
        x, y = g.coords
        flat = ScalarField(g, x + 10 * y, real=True).values
        # site (i, j) sits at i * ny + j
        assert flat[1 * 10 + 3] == pytest.approx(x[1, 3] + 10 * y[1, 3])


class TestFields:
    def test_inner_product_weights_cell_volume(self, plane):
        one = ScalarField(plane, np.ones(plane.size))
        assert inner_product(one, one) == pytest.approx(64.0)

    def test_grid_mismatch(self, ring):
        other = Grid.box(128, 21.0)
        with pytest.raises(GridMismatch):
            inner_product(ScalarField(ring, np.ones(128)), ScalarField(other, np.ones(128)))

    def test_real_tag_rejects_imaginary(self, ring):
        with pytest.raises(ValueError):
            ScalarField(ring, 1j * np.ones(128), real=True)

    def test_values_are_read_only(self, ring):
        f = ScalarField(ring, np.zeros(128))
        with pytest.raises(ValueError):
            f.values[0] = 1.0

    def test_spinor_only_in_1d(self, plane):
        f = ScalarField(plane, np.zeros(plane.size))
        with pytest.raises(DimensionUnsupported):
            SpinorField(plane, f, f)

    def test_spinor_norm_sums_components(self, ring):
        s = SpinorField.from_values(ring, np.ones(256))
        assert norm(s) == pytest.approx(np.sqrt(2 * 20.0))


def _smooth(c):
    return np.sin(2 * np.pi * c[0] / 10.0) * np.cos(2 * np.pi * c[1] / 10.0) + 0.3 * np.cos(4 * np.pi * c[0] / 10.0)


class TestDifferenceOperators:
    def test_gradient_order_against_spectral_oracle(self):
        errors, spacings = [], []
        for n in (32, 64, 128):
            g = Grid.box((n, n), 10.0)
            f = sample(g, _smooth)
            k = 2 * np.pi * np.fft.fftfreq(n, d=g.spacing[0])
            exact = np.real(np.fft.ifft2(1j * k[:, None] * np.fft.fft2(f.array)))
            errors.append(np.max(np.abs(gradient(f)[0].array - exact)))
            spacings.append(g.spacing[0])
        orders = np.log(np.array(errors[:-1]) / errors[1:]) / np.log(np.array(spacings[:-1]) / spacings[1:])
        assert np.all((orders > 1.9) & (orders < 2.1))

    def test_div_grad_is_wide_laplacian(self, plane, rng):
        f = ScalarField(plane, rng.standard_normal(plane.size), real=True)
        np.testing.assert_allclose(divergence(gradient(f)).values, wide_laplacian(f).values, atol=1e-12)

    def test_curl_of_gradient_vanishes(self, plane, rng):
        f = ScalarField(plane, rng.standard_normal(plane.size), real=True)
        assert np.max(np.abs(curl2d(gradient(f)).values)) < 1e-12

    def test_curl_needs_2d(self, ring):
        with pytest.raises(DimensionUnsupported):
            curl2d(VectorField.zeros(ring))

    @pytest.mark.parametrize("boundary", ["periodic", "dirichlet"])
    def test_laplacian_matches_dense_stencil(self, boundary):
        g = Grid.box((9, 11), 5.0, boundary)
        nx, ny = g.points
        hx, hy = g.spacing
        dense = np.zeros((g.size, g.size))
        for i in range(nx):
            for j in range(ny):
                row = i * ny + j
                dense[row, row] = -2 / hx**2 - 2 / hy**2
                for di, dj, h in ((1, 0, hx), (-1, 0, hx), (0, 1, hy), (0, -1, hy)):
                    a, b = i + di, j + dj
                    if boundary == "periodic":
                        a, b = a % nx, b % ny
                    elif not (0 <= a < nx and 0 <= b < ny):
                        continue
                    dense[row, a * ny + b] += 1 / h**2
        np.testing.assert_allclose(laplacian_matrix(g).toarray(), dense, atol=1e-12)

    def test_dirichlet_derivative_uses_zero_padding(self):
        g = Grid.box(8, 9.0, "dirichlet")
        f = ScalarField(g, np.ones(8), real=True)
        d = gradient(f)[0].values
        assert d[0] == pytest.approx(0.5 / g.spacing[0])
        assert d[-1] == pytest.approx(-0.5 / g.spacing[0])
        assert np.all(d[1:-1] == 0)

    def test_laplacian_of_constant_vanishes_on_ring(self, ring):
        assert np.max(np.abs(laplacian(ScalarField(ring, np.ones(128))).values)) == 0

    @settings(max_examples=25, deadline=None)
    @given(n=st.integers(8, 40), m=st.integers(8, 40))
    def test_periodic_laplacian_symmetric_negative(self, n, m):
        lap = laplacian_matrix(Grid.box((n, m), 3.0)).toarray()
        np.testing.assert_allclose(lap, lap.T, atol=1e-12)
        assert np.max(np.linalg.eigvalsh(lap)) < 1e-9
