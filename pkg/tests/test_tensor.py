import pytest
import numpy as np
from conftest import conformally_flat, coordinate_field
from src.fields import ScalarField, VectorField, integrate, random_band_limited, resample
from src.tensor import (
    christoffel,
    cotton,
    covariant_derivative,
    curvature,
    differential,
    dot,
    divergence_delta,
    double_divergence,
    gradient,
    hessian,
    laplacian,
    lichnerowicz,
    lie_derivative_metric,
    lower_index,
    norm_squared,
    product_x,
    raise_index,
    ricci_curvature,
    riemann,
    rm_dot,
    scalar_curvature,
    trace,
    traceless,
    weyl
)


class TestConnection:

    def test_flat_metric_has_no_christoffel(self, flat3):
        assert np.max(np.abs(christoffel(flat3).full)) == 0.0

    def test_hessian_is_symmetric_second_partials_at_flat(self, grid3, flat3):
        f = coordinate_field(grid3, lambda x: np.sin(x[0])*np.sin(x[1]))
        H = hessian(flat3, f).matrix
        x = grid3.coordinates()
        np.testing.assert_allclose(H[0, 1], np.cos(x[0])*np.cos(x[1]), atol=1e-12)
        np.testing.assert_allclose(H[0, 0], -f.values, atol=1e-12)

    def test_gradient_is_upper(self, metric3, grid3):
        f = random_band_limited(grid3, "scalar", 2, 1.0, seed=0)
        grad = gradient(metric3, f)
        assert grad.variance == "upper"
        df = lower_index(metric3, grad)
        np.testing.assert_allclose(raise_index(metric3, df).values, grad.values, atol=1e-13)

    def test_conformally_flat_closed_form(self, grid3):
        x = grid3.coordinates()
        g = conformally_flat(grid3, 0.1*np.sin(x[0]))
        zero = np.zeros(grid3.shape)
        dw = np.stack([0.1*np.cos(x[0]), zero, zero])
        delta = np.eye(3)
        # Γ^k_ij = δ^k_i ∂_j w + δ^k_j ∂_i w − δ_ij ∂_k w
        expected = (
            np.einsum("ki,j...->kij...", delta, dw)
            + np.einsum("kj,i...->kij...", delta, dw)
            - np.einsum("ij,k...->kij...", delta, dw)
        )
        np.testing.assert_allclose(christoffel(g).full, expected, atol=1e-10)

    def test_scale_invariance(self, metric3):
        np.testing.assert_allclose(christoffel(metric3.scaled(4.0)).full, christoffel(metric3).full, atol=1e-13)


class TestCurvature:

    def test_flat_is_flat(self, flat3):
        assert np.max(np.abs(riemann(flat3).values)) == 0.0
        assert scalar_curvature(flat3).sup_norm() == 0.0

    def test_conformally_flat_scalar_curvature(self, grid3):
        x = grid3.coordinates()
        w = 0.05*np.sin(x[0]) + 0.03*np.cos(x[1] + x[2])
        g = conformally_flat(grid3, w)
        lap_w = -0.05*np.sin(x[0]) - 2*0.03*np.cos(x[1] + x[2])
        grad_w2 = (0.05*np.cos(x[0]))**2 + 2*(0.03*np.sin(x[1] + x[2]))**2
        expected = -np.exp(-2*w)*(4*lap_w + 2*grad_w2)
        np.testing.assert_allclose(scalar_curvature(g).values, expected, atol=1e-10)

    def test_riemann_symmetries(self, metric3):
        rm = riemann(metric3)
        scale = rm.sup_norm()
        assert scale > 0
        assert rm.symmetry_residual() <= 1e-9*scale
        assert rm.bianchi_residual() <= 1e-9*scale

    def test_ricci_is_contraction_of_riemann(self, metric3):
        contracted = np.einsum("il...,ijkl...->jk...", metric3.inverse, riemann(metric3).values)
        np.testing.assert_allclose(ricci_curvature(metric3).matrix, contracted, atol=1e-12)

    def test_scaling(self, metric3):
        np.testing.assert_allclose(
            scalar_curvature(metric3.scaled(3.0)).values,
            scalar_curvature(metric3).values/3.0,
            atol=1e-13
        )

    def test_ricci_is_scale_invariant(self, metric3):
        ric = ricci_curvature(metric3).matrix
        np.testing.assert_allclose(ricci_curvature(metric3.scaled(3.0)).matrix, ric, atol=1e-11*max(1.0, np.max(np.abs(ric))))

    def test_contracted_bianchi(self, metric3):
        dR = differential(scalar_curvature(metric3)).values
        residual = divergence_delta(metric3, ricci_curvature(metric3)).values + 0.5*dR
        assert np.max(np.abs(dR)) > 0.1
        assert np.max(np.abs(residual)) <= 1e-7*np.max(np.abs(dR))

    def test_doubling_resolution(self, metric3):
        fine = resample(metric3, 48)
        coarse = scalar_curvature(metric3).values
        np.testing.assert_allclose(
            scalar_curvature(fine).values[::2, ::2, ::2],
            coarse,
            atol=1e-7*np.max(np.abs(coarse))
        )

    def test_weyl_vanishes_in_dimension_three(self, metric3):
        assert weyl(metric3).sup_norm() == 0.0

    def test_weyl_vanishes_on_conformally_flat_four_torus(self, grid4):
        x = grid4.coordinates()
        g = conformally_flat(grid4, 0.02*(np.sin(x[0]) + np.cos(x[3])))
        assert riemann(g).sup_norm() > 1e-3
        assert weyl(g).sup_norm() < 1e-9

    def test_weyl_norm_of_generic_metric(self, metric4):
        assert norm_squared(metric4, weyl(metric4)).sup_norm() > 0

    def test_curvature_bundle(self, metric3):
        c = curvature(metric3)
        np.testing.assert_allclose(c.scalar.values, trace(metric3, c.ricci).values, atol=1e-13)

    def test_cotton_vanishes_on_conformally_flat(self, grid3, metric3):
        x = grid3.coordinates()
        g = conformally_flat(grid3, 0.05*np.sin(x[0]) + 0.03*np.cos(x[1]))
        assert np.max(np.abs(cotton(g))) < 1e-9
        assert np.max(np.abs(cotton(metric3))) > 1e-4


class TestOperators:

    def test_flat_laplacian(self, grid3, flat3):
        f = coordinate_field(grid3, lambda x: np.sin(x[0])*np.cos(2*x[1]))
        np.testing.assert_allclose(laplacian(flat3, f).values, -5*f.values, atol=1e-11)
        np.testing.assert_allclose(laplacian(flat3.scaled(2.0), f).values, -2.5*f.values, atol=1e-11)

    def test_laplacian_self_adjoint(self, metric3, grid3):
        f = random_band_limited(grid3, "scalar", 2, 1.0, seed=14)
        k = random_band_limited(grid3, "scalar", 2, 1.0, seed=15)
        lhs = integrate(ScalarField(grid3, f.values*laplacian(metric3, k).values), metric3)
        rhs = integrate(ScalarField(grid3, k.values*laplacian(metric3, f).values), metric3)
        assert abs(lhs - rhs) <= 1e-9*max(abs(lhs), 1.0)

    def test_divergence_is_adjoint_of_lie_derivative(self, metric3, grid3):
        h = random_band_limited(grid3, "sym2", 2, 1.0, seed=16)
        X = random_band_limited(grid3, "vector", 2, 1.0, seed=17)
        dh = divergence_delta(metric3, h).values
        lhs = integrate(ScalarField(grid3, np.einsum("ij...,i...,j...->...", metric3.inverse, dh, X.values)), metric3)
        rhs = 0.5*integrate(dot(metric3, h, lie_derivative_metric(metric3, X)), metric3)
        assert abs(lhs - rhs) <= 1e-9*max(abs(lhs), 1.0)

    def test_divergence_of_lie_derivative_at_flat(self, grid3, flat3):
        x = grid3.coordinates()
        zero = np.zeros(grid3.shape)
        X = VectorField(grid3, np.stack([np.sin(x[1]), zero, zero]), "lower")
        h = lie_derivative_metric(flat3, X)
        expected = np.zeros((3, 3) + grid3.shape)
        expected[0, 1] = expected[1, 0] = np.cos(x[1])
        np.testing.assert_allclose(h.matrix, expected, atol=1e-12)
        # δh = −(ΔX + ∇ div X) = (sin x₂, 0, 0)
        np.testing.assert_allclose(divergence_delta(flat3, h).values, X.values, atol=1e-12)

    def test_lichnerowicz_is_rough_laplacian_at_flat(self, grid3, flat3):
        h = random_band_limited(grid3, "sym2", 2, 1.0, seed=2)
        np.testing.assert_allclose(lichnerowicz(flat3, h).values, laplacian(flat3, h).values, atol=1e-12)

    def test_lichnerowicz_term_by_term(self, metric3, grid3):
        h = random_band_limited(grid3, "sym2", 2, 1.0, seed=18)
        ginv, hm = metric3.inverse, h.matrix
        ric = ricci_curvature(metric3).matrix
        h_up = np.einsum("ia...,lb...,ab...->il...", ginv, ginv, hm)
        rm_h = np.einsum("ijkl...,il...->jk...", riemann(metric3).values, h_up)
        ric_h = np.einsum("ji...,il...,lk...->jk...", ric, ginv, hm)
        expected = laplacian(metric3, h).matrix + 2*rm_h - ric_h - np.swapaxes(ric_h, 0, 1)
        np.testing.assert_allclose(lichnerowicz(metric3, h).matrix, expected, atol=1e-10*np.max(np.abs(expected)))

    def test_constant_vector_is_killing_on_flat(self, grid3, flat3):
        X = VectorField.constant(grid3, [1.0, -2.0, 0.5])
        assert lie_derivative_metric(flat3, X).sup_norm() < 1e-14

    def test_divergence_of_metric_vanishes(self, metric3):
        assert divergence_delta(metric3, metric3).sup_norm() < 1e-12

    def test_double_divergence_of_conformal_tensor(self, grid3, flat3):
        phi = coordinate_field(grid3, lambda x: np.cos(x[0] + x[1]))
        # δ²(φ ḡ) = Δφ
        np.testing.assert_allclose(double_divergence(flat3, phi*flat3).values, -2*phi.values, atol=1e-11)

    def test_divergence_needs_a_tensor(self, flat3):
        with pytest.raises(ValueError, match="Divergence"):
            divergence_delta(flat3, ScalarField.constant(flat3.grid, 1.0))


class TestAlgebra:

    def test_trace_and_norm_of_metric(self, metric3):
        np.testing.assert_allclose(trace(metric3, metric3).values, 3.0, atol=1e-13)
        np.testing.assert_allclose(norm_squared(metric3, metric3).values, 3.0, atol=1e-12)

    def test_traceless(self, metric3, grid3):
        h = random_band_limited(grid3, "sym2", 2, 1.0, seed=4)
        assert trace(metric3, traceless(metric3, h)).sup_norm() < 1e-13

    def test_raise_lower(self, metric3, grid3):
        h = random_band_limited(grid3, "sym2", 2, 1.0, seed=5)
        up = raise_index(metric3, h)
        assert up.variance == "upper"
        np.testing.assert_allclose(lower_index(metric3, up).values, h.values, atol=1e-12)

    def test_lower_field_required(self, metric3):
        up = raise_index(metric3, random_band_limited(metric3.grid, "vector", 2, 1.0, seed=0))
        with pytest.raises(ValueError):
            laplacian(metric3, up)

    def test_product_with_metric(self, metric3, grid3):
        h = random_band_limited(grid3, "sym2", 2, 1.0, seed=6)
        np.testing.assert_allclose(product_x(metric3, h, metric3), h.matrix, atol=1e-12)

    def test_dot_with_metric_is_trace(self, metric3, grid3):
        h = random_band_limited(grid3, "sym2", 2, 1.0, seed=7)
        np.testing.assert_allclose(dot(metric3, h, metric3).values, trace(metric3, h).values, atol=1e-12)

    def test_rm_dot(self, flat3, metric3, grid3):
        h = random_band_limited(grid3, "sym2", 2, 1.0, seed=8)
        assert rm_dot(flat3, riemann(flat3), h).sup_norm() <= 1e-12
        ric = ricci_curvature(metric3)
        contracted = rm_dot(metric3, riemann(metric3), metric3)
        np.testing.assert_allclose(contracted.values, ric.values, atol=1e-10*ric.sup_norm())


class TestCovariantDerivative:

    def test_metric_is_parallel(self, metric3):
        assert np.max(np.abs(covariant_derivative(metric3, metric3))) <= 1e-10

    def test_scalar_is_differential(self, metric3, grid3):
        f = random_band_limited(grid3, "scalar", 2, 1.0, seed=9)
        np.testing.assert_allclose(covariant_derivative(metric3, f), differential(f).values, atol=1e-14)
        assert differential(f).variance == "lower"
