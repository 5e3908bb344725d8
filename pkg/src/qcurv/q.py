import numpy as np
from .constants import constants
from src.fields import MetricField, ScalarField, gradient_array
from src.tensor import (
    divergence_array,
    laplacian_array,
    norm_squared,
    ricci_curvature,
    scalar_curvature
)
from src.tensor.connection import check_grid, memoize

def q_curvature(g: MetricField) -> ScalarField:
    """Q = A ΔR + B |Ric|² + C R²"""
    def compute():
        c = constants(g.grid.dim)
        R = scalar_curvature(g).values
        ric_sq = norm_squared(g, ricci_curvature(g)).values
        return ScalarField(g.grid, c.A*laplacian_array(g, R, 0) + c.B*ric_sq + c.C*R**2)
    return memoize(g, "q", compute)

def paneitz_array(g: MetricField, f: np.ndarray) -> np.ndarray:
    """P f = Δ²f − div[(a R g + b Ric) df] + (n−4)/2 Q f on a grid array"""
    c = constants(g.grid.dim)
    R = scalar_curvature(g).values
    ric = ricci_curvature(g).matrix
    bilaplacian = laplacian_array(g, laplacian_array(g, f, 0), 0)
    df = gradient_array(f, g.grid)
    # ((a R g + b Ric) df)_i = a R ∂_i f + b R_i^k ∂_k f
    flux = c.a*R*df + c.b*np.einsum("ij...,jk...,k...->i...", ric, g.inverse, df)
    # div ω = −δω
    return bilaplacian + divergence_array(g, flux, 1) + 0.5*(c.n - 4)*q_curvature(g).values*f

def paneitz(g: MetricField, f: ScalarField) -> ScalarField:
    check_grid(g, f)
    return ScalarField(g.grid, paneitz_array(g, f.values))
