import pytest
import numpy as np
from conftest import coordinate_field
from src.fields import (
    Grid,
    MetricField,
    ScalarField,
    SymTensor2Field,
    VectorField,
    backward,
    forward,
    integrate,
    mean,
    pack_symmetric,
    partial_derivative,
    random_band_limited,
    resample,
    spectrum,
    unpack_symmetric,
    volume
)


class TestGrid:

    def test_torus_defaults(self):
        grid = Grid.torus(3, 24)
        assert grid.shape == (24, 24, 24)
        assert grid.spectral_shape == (24, 24, 13)
        assert grid.n_points == 24**3
        np.testing.assert_allclose(grid.volume, (2*np.pi)**3)
        np.testing.assert_allclose(grid.cell_volume*grid.n_points, grid.volume)

    @pytest.mark.parametrize("dim, resolution", [(1, 16), (3, 15), (3, 6)])
    def test_invalid(self, dim, resolution):
        with pytest.raises(ValueError):
            Grid.torus(dim, resolution)

    def test_non_positive_period(self):
        with pytest.raises(ValueError, match="period"):
            Grid.torus(2, 16, period=0.0)

    def test_nyquist_zeroed_for_derivatives(self):
        grid = Grid.torus(2, 8)
        k = grid.wavenumbers(derivative=True)[0].ravel()
        assert k[4] == 0.0
        assert grid.wavenumbers()[0].ravel()[4] != 0.0

    def test_anisotropic(self):
        grid = Grid.torus(3, (16, 8, 8), period=(2*np.pi, np.pi, np.pi))
        assert grid.shape == (16, 8, 8)
        assert grid.coordinates().shape == (3, 16, 8, 8)


class TestSpectral:

    def test_derivative_of_trigonometric_polynomial(self, grid3):
        f = coordinate_field(grid3, lambda x: np.sin(x[0])*np.cos(2*x[1]))
        df = partial_derivative(f, 1)
        expected = -2*np.sin(grid3.coordinates()[0])*np.sin(2*grid3.coordinates()[1])
        np.testing.assert_allclose(df.values, expected, atol=1e-12)

    def test_derivative_axis_out_of_range(self, grid3):
        f = ScalarField.constant(grid3, 1.0)
        with pytest.raises(ValueError, match="Axis"):
            partial_derivative(f, 3)

    def test_bare_array_needs_grid(self, grid3):
        with pytest.raises(ValueError, match="grid"):
            partial_derivative(np.zeros(grid3.shape), 0)

    def test_integrate(self, grid3, flat3):
        np.testing.assert_allclose(integrate(ScalarField.constant(grid3, 2.0)), 2*(2*np.pi)**3)
        s = coordinate_field(grid3, lambda x: np.sin(x[0] + x[2]))
        assert abs(integrate(s, flat3)) < 1e-12
        np.testing.assert_allclose(volume(flat3), (2*np.pi)**3)

    def test_volume_of_scaled_metric(self, flat3):
        np.testing.assert_allclose(volume(flat3.scaled(4.0)), 8*(2*np.pi)**3)

    def test_mean(self, grid3, flat3):
        f = coordinate_field(grid3, lambda x: 3 + np.cos(x[1]))
        np.testing.assert_allclose(mean(f, flat3), 3.0)

    def test_backward_is_real(self, grid3):
        f = random_band_limited(grid3, "vector", 2, 1.0, seed=10)
        coeffs = forward(f.values, grid3)
        assert np.iscomplexobj(coeffs)
        assert np.isrealobj(backward(coeffs, grid3))
        # arbitrary, non Hermitian, coefficients still come back real
        assert np.isrealobj(backward(1j*coeffs + coeffs**2, grid3))
        np.testing.assert_allclose(backward(coeffs, grid3), f.values, atol=1e-14)

    def test_integral_of_derivative_vanishes(self, grid3, flat3):
        f = random_band_limited(grid3, "scalar", 3, 1.0, seed=11)
        for axis in range(3):
            assert abs(integrate(partial_derivative(f, axis), flat3)) <= 1e-12

    def test_resample_is_exact_on_band_limited(self, grid3):
        f = random_band_limited(grid3, "sym2", 3, 1.0, seed=12)
        fine = resample(f, 48)
        assert fine.grid == Grid.torus(3, 48)
        assert fine.variance == "lower"
        np.testing.assert_allclose(fine.values[..., ::2, ::2, ::2], f.values, atol=1e-13)
        np.testing.assert_allclose(resample(fine, 24).values, f.values, atol=1e-13)

    def test_doubling_leaves_derivatives_unchanged(self, grid3):
        f = random_band_limited(grid3, "scalar", 3, 1.0, seed=13)
        fine = resample(f, 48)
        for axis in range(3):
            coarse = partial_derivative(f, axis).values
            np.testing.assert_allclose(
                partial_derivative(fine, axis).values[::2, ::2, ::2],
                coarse,
                atol=1e-11*np.max(np.abs(coarse))
            )


class TestRandomBandLimited:

    @pytest.mark.parametrize("kind", ["scalar", "vector", "sym2"])
    def test_amplitude_and_band(self, grid3, kind):
        f = random_band_limited(grid3, kind, 2, 0.05, seed=3)
        np.testing.assert_allclose(f.sup_norm(), 0.05)
        outside = ~grid3.max_mode_mask(2)
        assert np.max(spectrum(f)[..., outside]) < 1e-15

    def test_deterministic(self, grid3):
        a = random_band_limited(grid3, "scalar", 2, 1.0, seed=7)
        b = random_band_limited(grid3, "scalar", 2, 1.0, seed=7)
        c = random_band_limited(grid3, "scalar", 2, 1.0, seed=8)
        np.testing.assert_array_equal(a.values, b.values)
        assert not np.allclose(a.values, c.values)

    def test_zero_mean(self, grid3):
        f = random_band_limited(grid3, "scalar", 2, 1.0, seed=1, zero_mean=True)
        assert abs(mean(f)) < 1e-14

    def test_max_mode_too_large(self, grid3):
        with pytest.raises(ValueError, match="max_mode"):
            random_band_limited(grid3, "scalar", 12, 1.0, seed=0)

    def test_unknown_kind(self, grid3):
        with pytest.raises(AssertionError, match="supported"):
            random_band_limited(grid3, "tensor3", 2, 1.0, seed=0)


class TestField:

    def test_values_are_read_only(self, grid3):
        f = ScalarField.constant(grid3, 1.0)
        with pytest.raises(ValueError):
            f.values[0, 0, 0] = 2.0

    def test_shape_checked(self, grid3):
        with pytest.raises(ValueError, match="shape"):
            VectorField(grid3, np.zeros((2,) + grid3.shape), "lower")

    def test_non_finite(self, grid3):
        values = np.zeros(grid3.shape)
        values[0, 0, 0] = np.nan
        with pytest.raises(ValueError, match="finite"):
            ScalarField(grid3, values)

    def test_mixed_kinds_do_not_add(self, grid3):
        with pytest.raises(ValueError, match="combine"):
            VectorField.zeros(grid3, "lower") + VectorField.zeros(grid3, "upper")

    def test_arithmetic(self, grid3):
        h = random_band_limited(grid3, "sym2", 2, 1.0, seed=0)
        f = coordinate_field(grid3, lambda x: np.cos(x[0]))
        scaled = f*h
        assert isinstance(scaled, SymTensor2Field)
        np.testing.assert_allclose(scaled.values, h.values*f.values)
        np.testing.assert_allclose((2.0*h - h).values, h.values)
        np.testing.assert_allclose((h/2).values, 0.5*h.values)
        np.testing.assert_allclose((-h).values, -h.values)

    def test_pack_symmetric(self):
        m = np.arange(9.0).reshape(3, 3)
        m = m + m.T
        packed = pack_symmetric(m)
        assert packed.shape == (6,)
        np.testing.assert_array_equal(unpack_symmetric(packed, 3), m)


class TestMetricField:

    def test_flat(self, flat3):
        np.testing.assert_allclose(flat3.volume_element, 1.0)
        assert flat3.is_constant()
        np.testing.assert_allclose(flat3.constant_matrix, np.eye(3))

    def test_inverse(self, metric3):
        product = np.einsum("ij...,jk...->ik...", metric3.matrix, metric3.inverse)
        np.testing.assert_allclose(product, np.broadcast_to(np.eye(3).reshape(3, 3, 1, 1, 1), product.shape), atol=1e-13)
        assert not metric3.is_constant()

    def test_not_positive_definite(self, grid3):
        with pytest.raises(ValueError, match="positive definite"):
            MetricField.flat(grid3, np.diag([1.0, -1.0, 1.0]))

    def test_upper_variance_rejected(self, grid3):
        with pytest.raises(ValueError, match="lower"):
            MetricField(grid3, MetricField.flat(grid3).values, "upper")

    def test_perturb_and_scale(self, flat3, grid3):
        h = random_band_limited(grid3, "sym2", 2, 0.1, seed=0)
        g = flat3.perturb(h, 0.5)
        np.testing.assert_allclose(g.values, flat3.values + 0.5*h.values)
        with pytest.raises(ValueError, match="positive"):
            g.scaled(-1.0)

    def test_constant_matrix_of_non_constant_metric(self, metric3):
        with pytest.raises(ValueError, match="not constant"):
            metric3.constant_matrix
