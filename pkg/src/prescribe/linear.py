import numpy as np
from src.fields import MetricField, ScalarField, SymTensor2Field, backward, forward, mean
from src.tensor.connection import check_grid
from .projection import flat_symbols

MEAN_TOL = 1e-12

def inverse_bilaplacian(background: MetricField, psi: ScalarField) -> ScalarField:
    """zero mean φ with ½ Δ²φ = ψ on a flat torus"""
    check_grid(background, psi)
    scale = max(1.0, psi.sup_norm())
    m = mean(psi, background)
    if abs(m) > MEAN_TOL*scale:
        raise ValueError(f"Right-hand side must have zero mean against dv_ḡ, mean is {m:.3e}")
    _, _, k2 = flat_symbols(background)
    nonzero = k2 > 0
    safe = np.where(nonzero, k2, 1.0)
    phi_hat = np.where(nonzero, 2*forward(psi.values, psi.grid)/safe**2, 0.0)
    return ScalarField(psi.grid, backward(phi_hat, psi.grid))

def linear_solve_flat(background: MetricField, psi: ScalarField) -> SymTensor2Field:
    """conformal right inverse of Γ_ḡ: h = φ ḡ with Γ_ḡ(h) = ½Δ²φ = ψ

    Args:
        background (MetricField): constant metric ḡ
        psi (ScalarField): zero mean right-hand side

    Returns:
        SymTensor2Field: h = φ ḡ
    """
    phi = inverse_bilaplacian(background, psi)
    return SymTensor2Field(background.grid, background.values*phi.values, "lower")
