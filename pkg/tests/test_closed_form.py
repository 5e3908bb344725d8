import math
import pytest
from fractions import Fraction
from src.closed_form import (
    EinsteinBackground,
    InconsistentModelError,
    ModelPotential,
    einstein_q,
    gauss_bonnet_sphere4,
    identity_table,
    nonsingular_negative_einstein_check,
    sectional_curvature_3d,
    sphere_kernel_dimension,
    sphere_spectral_check,
    sphere_volume,
    total_q,
    verify_q_singular,
    verify_vacuum_static
)


class TestBackground:

    def test_unit_sphere(self):
        bg = EinsteinBackground.sphere(4)
        assert bg.R == 12
        assert bg.sectional == 1
        assert bg.radius == pytest.approx(1.0)

    def test_ricci_flat_has_no_radius(self):
        assert EinsteinBackground.ricci_flat(5).radius is None

    def test_inconsistent_sign(self):
        with pytest.raises(InconsistentModelError, match="hyperbolic"):
            EinsteinBackground(n=3, R=6, model="hyperbolic")

    def test_low_dimension(self):
        with pytest.raises(ValueError, match="Dimension"):
            EinsteinBackground(n=2, R=2, model="sphere")

    def test_foreign_potential(self):
        with pytest.raises(InconsistentModelError, match="does not belong"):
            ModelPotential.for_background(EinsteinBackground.sphere(4), "constant")

    def test_first_eigenfunction(self):
        pot = ModelPotential.for_background(EinsteinBackground.sphere(4))
        assert (pot.mu, pot.kappa) == (-4, -1)


class TestQValues:

    def test_unit_four_sphere(self):
        assert einstein_q(EinsteinBackground.sphere(4)) == 6

    def test_unit_three_sphere(self):
        assert einstein_q(EinsteinBackground.sphere(3)) == Fraction(15, 8)

    def test_ricci_flat(self):
        assert einstein_q(EinsteinBackground.ricci_flat(6)) == 0

    @pytest.mark.parametrize("n, target", [(4, Fraction(24)), (3, Fraction(105, 16))])
    def test_spectral_values(self, n, target):
        check = sphere_spectral_check(n)
        assert check.target == target
        assert check.eigenvalue == target

    @pytest.mark.parametrize("n, coefficient, power", [(2, 4, 1), (3, 2, 2), (4, Fraction(8, 3), 2)])
    def test_sphere_volume(self, n, coefficient, power):
        volume = sphere_volume(n)
        assert volume.coefficient == coefficient
        assert volume.power == power

    def test_total_q_four_sphere(self):
        assert total_q(EinsteinBackground.sphere(4)) == pytest.approx(16*math.pi**2)

    def test_total_q_needs_sphere(self):
        with pytest.raises(InconsistentModelError):
            total_q(EinsteinBackground.hyperbolic(4))

    @pytest.mark.parametrize("R", [12, 3, Fraction(1, 2)])
    def test_gauss_bonnet_is_scale_invariant(self, R):
        total, euler = gauss_bonnet_sphere4(R)
        assert total == euler
        assert total.value == pytest.approx(16*math.pi**2)


class TestModels:

    @pytest.mark.parametrize("n", range(3, 11))
    @pytest.mark.parametrize("model", ["sphere", "hyperbolic", "ricci_flat"])
    def test_q_singular_residual_vanishes(self, n, model):
        bg = getattr(EinsteinBackground, model)(n)
        report = verify_q_singular(bg, ModelPotential.for_background(bg))
        assert report.residual == 0

    @pytest.mark.parametrize("n", range(3, 11))
    def test_vacuum_static(self, n):
        for bg in [EinsteinBackground.sphere(n), EinsteinBackground.hyperbolic(n), EinsteinBackground.ricci_flat(n)]:
            assert verify_vacuum_static(bg, ModelPotential.for_background(bg)).residual == 0

    def test_vacuum_static_detects_traceless_ricci(self):
        bg = EinsteinBackground.sphere(3)
        report = verify_vacuum_static(bg, ModelPotential.for_background(bg), ricci_eigenvalues=[1, 2, 3])
        assert report.traceless_ricci == 2
        assert report.static == 0
        assert report.residual == 2

    def test_vacuum_static_einstein_eigenvalues(self):
        bg = EinsteinBackground.hyperbolic(4)
        report = verify_vacuum_static(bg, ModelPotential.for_background(bg), ricci_eigenvalues=[-3]*4)
        assert report.residual == 0

    def test_vacuum_static_eigenvalues_must_trace_to_r(self):
        bg = EinsteinBackground.sphere(3)
        with pytest.raises(InconsistentModelError, match="trace"):
            verify_vacuum_static(bg, ModelPotential.for_background(bg), ricci_eigenvalues=[1, 1, 1])
        with pytest.raises(ValueError, match="Ricci eigenvalues"):
            verify_vacuum_static(bg, ModelPotential.for_background(bg), ricci_eigenvalues=[3, 3])

    def test_mismatched_potential(self):
        sphere = EinsteinBackground.sphere(4)
        flat_pot = ModelPotential.for_background(EinsteinBackground.ricci_flat(4))
        with pytest.raises(InconsistentModelError):
            verify_q_singular(sphere, flat_pot)

    def test_kernel_dimension(self):
        assert sphere_kernel_dimension(EinsteinBackground.sphere(4)) == 5
        with pytest.raises(InconsistentModelError):
            sphere_kernel_dimension(EinsteinBackground.ricci_flat(4))

    def test_identity_table(self):
        rows = identity_table([3, 4])
        assert len(rows) == 6
        assert {r["model"] for r in rows} == {"sphere", "hyperbolic", "ricci_flat"}
        assert all(r["q_singular_residual"] == "0" for r in rows)


class TestNonsingular:

    @pytest.mark.parametrize("spectrum, expected", [
        ([0, Fraction(5, 2), 6], False),
        ([0, 2.5, 6], False),
        ([0, 3, 6], True),
        ([0, 1, 2], True)
    ])
    def test_three_dimensional(self, spectrum, expected):
        assert nonsingular_negative_einstein_check(3, -6, spectrum) is expected

    def test_positive_curvature_rejected(self):
        with pytest.raises(ValueError, match="negative"):
            nonsingular_negative_einstein_check(3, 6, [0])


class TestSectional:

    def test_round(self):
        assert set(sectional_curvature_3d([2, 2, 2]).values()) == {1}

    def test_product(self):
        # S² × R with Ric = diag(1, 1, 0)
        K = sectional_curvature_3d([1, 1, 0])
        assert K[(0, 1)] == 1
        assert K[(0, 2)] == 0

    def test_wrong_size(self):
        with pytest.raises(ValueError):
            sectional_curvature_3d([1, 1])
