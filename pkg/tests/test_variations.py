import pytest
import numpy as np
from conftest import coordinate_field
from src.fields import MetricField, ScalarField, SymTensor2Field, random_band_limited, random_metric
from src.qcurv import constants, q_curvature
from src.tensor import hessian, laplacian, scalar_curvature, trace
from src.prescribe import random_divergence_free
from src.variations import (
    adjointness_check,
    convergence_order,
    diffeo_check,
    functional_F,
    functional_G,
    functional_first_variation,
    functional_second_variation_check,
    gamma,
    gamma_fd_check,
    gamma_scalar,
    gamma_scalar_star,
    gamma_star,
    linearize_scalar,
    principal_symbol,
    quadratic_form_flat,
    scalar_adjointness_check,
    scalar_fd_check,
    second_variation_fd_check,
    second_variation_q,
    trace_gamma_star,
    vacuum_static
)

def _conformal_direction(g: MetricField, phi: ScalarField) -> SymTensor2Field:
    return SymTensor2Field.from_matrix(g.grid, g.matrix*phi.values)

@pytest.fixture(scope="module")
def direction3(grid3) -> SymTensor2Field:
    return random_band_limited(grid3, "sym2", 2, 1.0, seed=11)

@pytest.fixture(scope="module")
def potential3(grid3) -> ScalarField:
    return random_band_limited(grid3, "scalar", 2, 1.0, seed=12)


class TestLinearization:

    def test_conformal_direction_at_flat(self, grid3, flat3):
        phi = coordinate_field(grid3, lambda x: np.sin(x[0]))
        # Γ(φ ḡ) = ½ Δ²φ and R' = −(n−1) Δφ
        np.testing.assert_allclose(gamma(flat3, _conformal_direction(flat3, phi)).values, 0.5*phi.values, atol=1e-12)
        np.testing.assert_allclose(gamma_scalar(flat3, _conformal_direction(flat3, phi)).values, 2*phi.values, atol=1e-12)

    def test_scalar_variation_bundle(self, metric3, direction3):
        variation = linearize_scalar(metric3, direction3)
        np.testing.assert_allclose(variation.scalar.values, gamma_scalar(metric3, direction3).values, atol=1e-12)

    @pytest.mark.parametrize("metric", ["metric3", "metric4"])
    def test_gamma_fd_order(self, request, metric):
        g = request.getfixturevalue(metric)
        h = random_band_limited(g.grid, "sym2", 1, 1.0, seed=3)
        report = gamma_fd_check(g, h)
        assert report.min_order >= 1.9

    def test_scalar_fd_order(self, metric3, direction3):
        assert scalar_fd_check(metric3, direction3).min_order >= 1.9

    def test_convergence_order(self):
        np.testing.assert_allclose(convergence_order(4e-4, 1e-4, 2e-2, 1e-2), 2.0)
        assert convergence_order(1.0, 0.0, 1e-2, 1e-3) == float("inf")


class TestAdjoint:

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_pairing_three_torus(self, grid3, seed):
        g = random_metric(grid3, 0.05, 2, seed)
        f = random_band_limited(grid3, "scalar", 2, 1.0, seed + 100)
        h = random_band_limited(grid3, "sym2", 2, 1.0, seed + 200)
        assert adjointness_check(g, f, h).max_residual <= 1e-7
        assert scalar_adjointness_check(g, f, h).max_residual <= 1e-7

    def test_pairing_four_torus(self, metric4):
        f = random_band_limited(metric4.grid, "scalar", 1, 1.0, seed=5)
        h = random_band_limited(metric4.grid, "sym2", 1, 1.0, seed=6)
        assert adjointness_check(metric4, f, h).max_residual <= 1e-7

    def test_trace_identity(self, metric3, potential3):
        identity = trace_gamma_star(metric3, potential3)
        assert identity.relative_residual <= 1e-8
        np.testing.assert_allclose(identity.trace.values, trace(metric3, gamma_star(metric3, potential3)).values, rtol=1e-10, atol=1e-10)

    def test_trace_of_one_is_minus_twice_q(self, metric3):
        identity = trace_gamma_star(metric3, ScalarField.constant(metric3.grid, 1.0))
        Q = q_curvature(metric3).values
        assert np.max(np.abs(identity.trace.values + 2*Q)) <= 1e-8*np.max(np.abs(Q))

    def test_principal_symbol_at_flat(self, grid3, flat3):
        xi = np.array([2.0, 1.0, 0.0])
        f = coordinate_field(grid3, lambda x: np.cos(2*x[0] + x[1]))
        sigma = principal_symbol(xi)
        expected = sigma[:, :, None, None, None]*f.values
        np.testing.assert_allclose(gamma_star(flat3, f).matrix, expected, atol=1e-9)
        A = constants(3).A
        np.testing.assert_allclose(np.trace(sigma), -A*2*np.dot(xi, xi)**2)

    def test_principal_symbol_is_injective_on_traces(self):
        for xi in [np.array([1.0, 0.0, 0.0, 0.0]), np.array([0.3, -1.2, 2.0, 0.5])]:
            assert abs(np.trace(principal_symbol(xi))) > 0


class TestScalarAdjoint:

    def test_flat(self, grid3, flat3):
        f = coordinate_field(grid3, lambda x: np.sin(x[0]))
        star = gamma_scalar_star(flat3, f)
        np.testing.assert_allclose(trace(flat3, star).values, 2*f.values, atol=1e-12)

    def test_vacuum_static_at_flat_is_hessian(self, grid3, flat3, potential3):
        np.testing.assert_allclose(vacuum_static(flat3, potential3).values, hessian(flat3, potential3).values, atol=1e-13)

    def test_vacuum_static_trace(self, metric3, potential3):
        R = scalar_curvature(metric3).values
        expected = laplacian(metric3, potential3).values + R*potential3.values/2
        np.testing.assert_allclose(trace(metric3, vacuum_static(metric3, potential3)).values, expected, atol=1e-10)


class TestDiffeomorphism:

    def test_duality(self, metric3, potential3):
        X = random_band_limited(metric3.grid, "vector", 2, 1.0, seed=21, variance="upper")
        report = diffeo_check(metric3, X, potential3)
        assert report.residuals["gamma_lie"] <= 1e-6
        assert report.residuals["divergence"] <= 1e-6

    def test_lower_vector_rejected(self, metric3, potential3):
        X = random_band_limited(metric3.grid, "vector", 2, 1.0, seed=21)
        with pytest.raises(ValueError, match="upper"):
            diffeo_check(metric3, X, potential3)


class TestSecondVariation:

    def test_zero_direction(self, metric3):
        zero = SymTensor2Field.zeros(metric3.grid)
        assert second_variation_q(metric3, zero).sup_norm() <= 1e-12

    def test_nested_differences(self, small_metric3):
        h = random_band_limited(small_metric3.grid, "sym2", 2, 1.0, seed=31)
        report = second_variation_fd_check(small_metric3, h)
        assert report.min_order >= 1.9


class TestFunctional:

    def test_flat_values(self, flat3):
        assert abs(functional_F(flat3, flat3)) <= 1e-12
        assert abs(functional_G(flat3, flat3)) <= 1e-12

    def test_first_variation_vanishes_at_flat(self, flat3):
        h = random_divergence_free(flat3, 0.05, 0, 2)
        assert abs(functional_first_variation(flat3, h)) <= 1e-8

    @pytest.mark.parametrize("seed", [0, 1])
    def test_quadratic_form_against_nested_differences(self, flat3, seed):
        h = random_divergence_free(flat3, 0.05, seed, 2)
        report = functional_second_variation_check(flat3, h)
        assert report.residuals["nested_fd"] <= 1e-4
        assert report.residuals["integrated"] <= 1e-4

    @pytest.mark.parametrize("seed", [0, 1, 2])
    def test_quadratic_form_is_negative(self, flat3, seed):
        h = random_divergence_free(flat3, 0.05, seed, 2)
        assert quadratic_form_flat(h, flat3) < 0

    def test_constant_direction(self, grid3, flat3):
        h = SymTensor2Field.from_matrix(grid3, np.broadcast_to(np.diag([0.01, -0.02, 0.0]).reshape(3, 3, 1, 1, 1), (3, 3) + grid3.shape))
        assert abs(quadratic_form_flat(h, flat3)) <= 1e-12

    def test_divergence_precondition(self, grid3, flat3):
        h = random_band_limited(grid3, "sym2", 2, 0.05, seed=0)
        with pytest.raises(ValueError, match="divergence free"):
            quadratic_form_flat(h, flat3)
        assert np.isfinite(quadratic_form_flat(h, flat3, strict=False))

    def test_needs_flat_background(self, metric3):
        h = SymTensor2Field.zeros(metric3.grid)
        with pytest.raises(ValueError, match="flat"):
            quadratic_form_flat(h, metric3)
