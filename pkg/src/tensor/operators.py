import numpy as np
from src.fields import (
    Field,
    MetricField,
    ScalarField,
    SymTensor2Field,
    VectorField,
    gradient_array
)
from .connection import check_grid, check_lower, covariant_derivative_array
from .curvature import riemann, ricci_curvature
from .algebra import product_x_array, rm_dot_array

def _rank_and_array(field: Field):
    if isinstance(field, ScalarField):
        return 0, field.values
    if isinstance(field, VectorField):
        return 1, field.values
    if isinstance(field, SymTensor2Field):
        return 2, field.matrix
    raise ValueError(f"Unsupported field {field}")

def laplacian_array(g: MetricField, tensor: np.ndarray, rank: int) -> np.ndarray:
    """Δ T = g^ab ∇_a ∇_b T for a covariant full array"""
    first = covariant_derivative_array(g, tensor, rank)
    second = covariant_derivative_array(g, first, rank + 1)
    return np.einsum("ab...,ab...->...", g.inverse, second)

def laplacian(g: MetricField, field: Field) -> Field:
    """rough Laplacian g^ij ∇_i ∇_j of a lower field, same kind as the input"""
    check_grid(g, field)
    check_lower(field)
    rank, array = _rank_and_array(field)
    out = laplacian_array(g, array, rank)
    if rank == 2:
        return SymTensor2Field.from_matrix(g.grid, out)
    return field.with_values(out)

def divergence_array(g: MetricField, tensor: np.ndarray, rank: int) -> np.ndarray:
    """δ T_{...} = −∇^a T_{a...} for a covariant full array of rank 1 or 2"""
    dT = covariant_derivative_array(g, tensor, rank)
    if rank == 1:
        return -np.einsum("ab...,ab...->...", g.inverse, dT)
    return -np.einsum("ka...,kai...->i...", g.inverse, dT)

def divergence_delta(g: MetricField, field: Field) -> Field:
    """(δh)_i = −∇^j h_ij for 2-tensors, δX = −∇^i X_i for 1-forms"""
    check_grid(g, field)
    check_lower(field)
    if isinstance(field, SymTensor2Field):
        return VectorField(g.grid, divergence_array(g, field.matrix, 2), "lower")
    if isinstance(field, VectorField):
        return ScalarField(g.grid, divergence_array(g, field.values, 1))
    raise ValueError(f"Divergence needs a vector or 2-tensor field, not {field}")

def double_divergence(g: MetricField, h: SymTensor2Field) -> ScalarField:
    """δ²h = ∇^i ∇^j h_ij"""
    return divergence_delta(g, divergence_delta(g, h))

def lie_derivative_array(g: MetricField, one_form: np.ndarray) -> np.ndarray:
    dX = covariant_derivative_array(g, one_form, 1)
    return dX + np.swapaxes(dX, 0, 1)

def lie_derivative_metric(g: MetricField, X: VectorField) -> SymTensor2Field:
    """(L_X g)_ij = ∇_i X_j + ∇_j X_i, X given with a lower index"""
    check_grid(g, X)
    check_lower(X)
    return SymTensor2Field.from_matrix(g.grid, lie_derivative_array(g, X.values))

def lichnerowicz_array(g: MetricField, matrix: np.ndarray) -> np.ndarray:
    ric_h = product_x_array(g, ricci_curvature(g).matrix, matrix)
    return (
        laplacian_array(g, matrix, 2)
        + 2*rm_dot_array(g, riemann(g), matrix)
        - ric_h
        - np.swapaxes(ric_h, 0, 1)
    )

def lichnerowicz(g: MetricField, h: SymTensor2Field) -> SymTensor2Field:
    """Δ_L h = Δh + 2 R̊·h − Ric × h − (Ric × h)^T"""
    check_grid(g, h)
    check_lower(h)
    return SymTensor2Field.from_matrix(g.grid, lichnerowicz_array(g, h.matrix))

def gradient(g: MetricField, f: ScalarField) -> VectorField:
    """∇f with an upper index"""
    check_grid(g, f)
    return VectorField(g.grid, np.einsum("ij...,j...->i...", g.inverse, gradient_array(f.values, g.grid)), "upper")
