import numpy as np
from typing import Optional
from src.qcurv import constants, q_curvature
from src.fields import MetricField, ScalarField, SymTensor2Field, integrate
from src.tensor import divergence_array, laplacian_array, scalar_curvature, trace_array
from src.tensor.connection import check_grid, check_lower

DIVERGENCE_TOL = 1e-10

def _weight(g: MetricField, f: Optional[ScalarField]) -> np.ndarray:
    if f is None:
        return np.ones(g.grid.shape)
    check_grid(g, f)
    return f.values

def functional_F(g: MetricField, background: MetricField, f: Optional[ScalarField] = None) -> float:
    """ℱ(g) = ∫ Q_g f dv_ḡ with the volume element frozen at the background

    Args:
        g (MetricField): metric along the path
        background (MetricField): ḡ, whose volume element is used
        f (ScalarField, optional): potential, 1 if None. Defaults to None.

    Returns:
        float: ℱ(g)
    """
    check_grid(background, g)
    return integrate(ScalarField(g.grid, q_curvature(g).values*_weight(g, f)), background)

def functional_G(g: MetricField, background: MetricField, f: Optional[ScalarField] = None) -> float:
    """𝒢(g) = ∫ R_g f dv_ḡ, the scalar curvature counterpart of ℱ"""
    check_grid(background, g)
    return integrate(ScalarField(g.grid, scalar_curvature(g).values*_weight(g, f)), background)

def quadratic_form_flat(
    h: SymTensor2Field,
    background: MetricField,
    strict: bool = True,
    tol: float = DIVERGENCE_TOL
) -> float:
    """D²ℱ(h, h) = −2α ∫|Δ tr h|² dv_ḡ + ½ B ∫|Δ h̊|² dv_ḡ at a flat metric

    Args:
        h (SymTensor2Field): direction, divergence free when strict
        background (MetricField): constant metric ḡ
        strict (bool, optional): enforce ‖δh‖∞ <= tol. Defaults to True.
        tol (float, optional): divergence tolerance. Defaults to 1e-10.

    Returns:
        float: value of the quadratic form
    """
    check_grid(background, h)
    check_lower(h)
    if not background.is_constant():
        raise ValueError("quadratic_form_flat needs a flat (constant) background metric")
    H = h.matrix
    if strict:
        divergence = float(np.max(np.abs(divergence_array(background, H, 2))))
        if divergence > tol:
            raise ValueError(f"h is not divergence free (‖δh‖∞ = {divergence:.3e} > {tol}); project it first")
    c = constants(background.grid.dim)
    n = background.grid.dim
    trh = trace_array(background, H)
    lap_trh = laplacian_array(background, trh, 0)
    lap_traceless = laplacian_array(background, H - trh*background.matrix/n, 2)
    traceless_sq = np.einsum(
        "ia...,jb...,ij...,ab...->...",
        background.inverse, background.inverse, lap_traceless, lap_traceless
    )
    return (
        -2*c.alpha*integrate(ScalarField(h.grid, lap_trh**2), background)
        + 0.5*c.B*integrate(ScalarField(h.grid, traceless_sq), background)
    )
