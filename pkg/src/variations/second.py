import numpy as np
from typing import Tuple
from src.qcurv import constants
from src.fields import MetricField, ScalarField, SymTensor2Field, gradient_array
from src.tensor import (
    covariant_derivative_array,
    dot_array,
    hessian_array,
    laplacian_array,
    product_x_array,
    raise_matrix,
    ricci_curvature,
    scalar_curvature
)
from src.tensor.connection import check_grid, check_lower
from .linearize import covector_dot, divergence_terms, ricci_variation_array, scalar_variation_array

FD_STEP = 1e-3

def _first_variations(g: MetricField, h: np.ndarray) -> Tuple[np.ndarray, np.ndarray]:
    return ricci_variation_array(g, h), scalar_variation_array(g, h)

def curvature_second_variations(
    g: MetricField,
    h: SymTensor2Field,
    step: float = FD_STEP
) -> Tuple[np.ndarray, np.ndarray]:
    """Ric'' and R'' along t -> g + t h, by central differences of the
    first variations with one Richardson extrapolation level

    Args:
        g (MetricField): metric
        h (SymTensor2Field): direction
        step (float, optional): base difference step. Defaults to 1e-3.

    Returns:
        Tuple[np.ndarray, np.ndarray]: Ric'' as a full matrix, R''
    """
    H = h.matrix
    def central(eps: float):
        ric_plus, r_plus = _first_variations(g.perturb(h, eps), H)
        ric_minus, r_minus = _first_variations(g.perturb(h, -eps), H)
        return (ric_plus - ric_minus)/(2*eps), (r_plus - r_minus)/(2*eps)
    ric_coarse, r_coarse = central(step)
    ric_fine, r_fine = central(step/2)
    return (4*ric_fine - ric_coarse)/3, (4*r_fine - r_coarse)/3

def second_variation_q(g: MetricField, h: SymTensor2Field, step: float = FD_STEP) -> ScalarField:
    """d²/dt² Q(g + t h) at t = 0

    Args:
        g (MetricField): metric
        h (SymTensor2Field): direction, lower indices
        step (float, optional): difference step for Ric'' and R''. Defaults to 1e-3.

    Returns:
        ScalarField: second variation of Q
    """
    check_grid(g, h)
    check_lower(h)
    if not np.any(h.values):
        return ScalarField.zeros(g.grid)
    c = constants(g.grid.dim)
    H = h.matrix
    ric = ricci_curvature(g).matrix
    R = scalar_curvature(g).values
    dR = gradient_array(R, g.grid)
    trh, delta_h, _ = divergence_terms(g, H)
    w = 2*delta_h + gradient_array(trh, g.grid)
    ric_1, r_1 = _first_variations(g, H)
    ric_2, r_2 = curvature_second_variations(g, h, step)
    h_up = raise_matrix(g, H)
    h_x_h = product_x_array(g, H, H)

    # (ΔR)''
    dh = covariant_derivative_array(g, H, 2)
    # v_c = h^ij (2 ∇_i h_jc − ∇_c h_ij)
    v = np.einsum("ij...,ijc...->c...", h_up, 2*dh - np.einsum("cij...->ijc...", dh))
    a_part = (
        laplacian_array(g, r_2, 0)
        + 2*dot_array(g, hessian_array(g, R), h_x_h)
        - 2*dot_array(g, H, hessian_array(g, r_1))
        + covector_dot(g, w, gradient_array(r_1, g.grid))
        + covector_dot(g, v, dR)
        - np.einsum("ij...,i...,j...->...", h_up, w, dR)
    )
    # |Ric|²''
    y = np.einsum("ik...,kj...->ij...", h_up, ric)
    b_part = (
        4*dot_array(g, product_x_array(g, ric, ric), h_x_h)
        + 2*np.einsum("ij...,ji...->...", y, y)
        - 8*dot_array(g, ric_1, product_x_array(g, ric, H))
        + 2*dot_array(g, ric_2, ric)
        + 2*dot_array(g, ric_1, ric_1)
    )
    # (R²)''
    c_part = 2*R*r_2 + 2*r_1**2
    return ScalarField(g.grid, c.A*a_part + c.B*b_part + c.C*c_part)
