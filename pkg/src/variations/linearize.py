import numpy as np
from dataclasses import dataclass
from src.fields import MetricField, ScalarField, SymTensor2Field, gradient_array
from src.tensor import (
    covariant_derivative_array,
    divergence_array,
    dot_array,
    hessian_array,
    laplacian_array,
    lichnerowicz_array,
    ricci_curvature,
    scalar_curvature,
    trace_array
)
from src.tensor.connection import check_grid, check_lower


@dataclass(frozen=True)
class ScalarVariation:
    """first variations of Ric, R and ΔR along h"""
    ricci: SymTensor2Field
    scalar: ScalarField
    laplacian_scalar: ScalarField


def divergence_terms(g: MetricField, h: np.ndarray):
    """tr h, δh, δ²h for a full 2-tensor array"""
    trh = trace_array(g, h)
    delta_h = divergence_array(g, h, 2)
    return trh, delta_h, divergence_array(g, delta_h, 1)

def covector_dot(g: MetricField, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """g^ij a_i b_j"""
    return np.einsum("ij...,i...,j...->...", g.inverse, a, b)

def scalar_variation_array(g: MetricField, h: np.ndarray) -> np.ndarray:
    """R' = −Δ tr h + δ²h − Ric·h"""
    trh, _, delta2_h = divergence_terms(g, h)
    return -laplacian_array(g, trh, 0) + delta2_h - dot_array(g, ricci_curvature(g).matrix, h)

def ricci_variation_array(g: MetricField, h: np.ndarray) -> np.ndarray:
    """Ric' = −½(Δ_L h + ∇² tr h + ∇δh + (∇δh)^T)"""
    trh, delta_h, _ = divergence_terms(g, h)
    nabla_delta = covariant_derivative_array(g, delta_h, 1)
    return -0.5*(
        lichnerowicz_array(g, h)
        + hessian_array(g, trh)
        + nabla_delta
        + np.swapaxes(nabla_delta, 0, 1)
    )

def laplacian_scalar_variation_array(g: MetricField, h: np.ndarray, r_prime: np.ndarray) -> np.ndarray:
    """(ΔR)' = −∇²R·h + ΔR' + ½ dR·(d tr h + 2δh)"""
    trh, delta_h, _ = divergence_terms(g, h)
    R = scalar_curvature(g).values
    dR = gradient_array(R, g.grid)
    w = gradient_array(trh, g.grid) + 2*delta_h
    return (
        -dot_array(g, hessian_array(g, R), h)
        + laplacian_array(g, r_prime, 0)
        + 0.5*covector_dot(g, dR, w)
    )

def linearize_scalar(g: MetricField, h: SymTensor2Field) -> ScalarVariation:
    """first variations of Ric, R and ΔR at g in the direction h

    Args:
        g (MetricField): metric
        h (SymTensor2Field): symmetric 2-tensor with lower indices

    Returns:
        ScalarVariation: Ric', R', (ΔR)'
    """
    check_grid(g, h)
    check_lower(h)
    H = h.matrix
    r_prime = scalar_variation_array(g, H)
    return ScalarVariation(
        ricci=SymTensor2Field.from_matrix(g.grid, ricci_variation_array(g, H)),
        scalar=ScalarField(g.grid, r_prime),
        laplacian_scalar=ScalarField(g.grid, laplacian_scalar_variation_array(g, H, r_prime))
    )

def gamma_scalar(g: MetricField, h: SymTensor2Field) -> ScalarField:
    """linearization of the scalar curvature, R'"""
    check_grid(g, h)
    check_lower(h)
    return ScalarField(g.grid, scalar_variation_array(g, h.matrix))

def scalar_adjoint_array(g: MetricField, f: np.ndarray) -> np.ndarray:
    """γ* f = ∇²f − g Δf − f Ric"""
    return (
        hessian_array(g, f)
        - laplacian_array(g, f, 0)*g.matrix
        - f*ricci_curvature(g).matrix
    )

def gamma_scalar_star(g: MetricField, f: ScalarField) -> SymTensor2Field:
    """L² adjoint of gamma_scalar against dv_g"""
    check_grid(g, f)
    return SymTensor2Field.from_matrix(g.grid, scalar_adjoint_array(g, f.values))

def vacuum_static(g: MetricField, f: ScalarField) -> SymTensor2Field:
    """∇²f − (Ric − R/(n−1) g) f"""
    check_grid(g, f)
    n = g.grid.dim
    R = scalar_curvature(g).values
    matrix = hessian_array(g, f.values) - (ricci_curvature(g).matrix - R*g.matrix/(n - 1))*f.values
    return SymTensor2Field.from_matrix(g.grid, matrix)
