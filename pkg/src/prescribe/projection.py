import numpy as np
from dataclasses import dataclass
from typing import Tuple
from src.tensor import divergence_array, lie_derivative_metric
from src.tensor.connection import check_grid, check_lower
from src.fields import Grid, MetricField, SymTensor2Field, VectorField, backward, forward


@dataclass(frozen=True)
class Projection:
    """h = h_df + L_X ḡ with δ_ḡ h_df = 0"""
    h_df: SymTensor2Field
    X: VectorField


def flat_symbols(background: MetricField) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
    """wavevector k (n, *spectral), k♯ = ḡ^{-1}k and |k|²_ḡ of a constant metric"""
    if not background.is_constant():
        raise ValueError("A flat (constant) background metric is required")
    grid: Grid = background.grid
    G_inv = np.linalg.inv(background.constant_matrix)
    k = np.stack(np.broadcast_arrays(*grid.wavenumbers(derivative=True)))
    k_sharp = np.einsum("ij,j...->i...", G_inv, k)
    return k, k_sharp, np.sum(k*k_sharp, axis=0)

def project_divergence_free(background: MetricField, h: SymTensor2Field) -> Projection:
    """splits h into a divergence free part and a Lie derivative of the flat metric

    X solves δ(L_X ḡ) = δh, i.e. |k|² X + k (k♯·X) = (δh)^ mode by mode,
    with the constant mode of X set to zero.

    Args:
        background (MetricField): constant metric ḡ
        h (SymTensor2Field): symmetric 2-tensor, lower indices

    Returns:
        Projection: h_df and the lower vector field X
    """
    check_grid(background, h)
    check_lower(h)
    grid = background.grid
    k, k_sharp, k2 = flat_symbols(background)
    b = forward(divergence_array(background, h.matrix, 2), grid)
    nonzero = k2 > 0
    safe = np.where(nonzero, k2, 1.0)
    k_sharp_b = np.sum(k_sharp*b, axis=0)
    X_hat = np.where(nonzero, (b - k*k_sharp_b/(2*safe))/safe, 0.0)
    X = VectorField(grid, backward(X_hat, grid), "lower")
    return Projection(h_df=h - lie_derivative_metric(background, X), X=X)
