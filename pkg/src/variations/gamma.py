import numpy as np
from dataclasses import dataclass
from src.qcurv import constants, paneitz_array, q_curvature
from src.fields import MetricField, ScalarField, SymTensor2Field, gradient_array
from src.tensor import (
    covariant_derivative_array,
    divergence_array,
    dot_array,
    hessian_array,
    laplacian_array,
    lichnerowicz_array,
    product_x_array,
    riemann,
    ricci_curvature,
    rm_dot_array,
    scalar_curvature,
    trace_array
)
from src.tensor.connection import check_grid, check_lower
from .linearize import divergence_terms, laplacian_scalar_variation_array, scalar_variation_array

def _sym(matrix: np.ndarray) -> np.ndarray:
    return 0.5*(matrix + np.swapaxes(matrix, 0, 1))

def gamma_array(g: MetricField, h: np.ndarray) -> np.ndarray:
    c = constants(g.grid.dim)
    ric = ricci_curvature(g).matrix
    R = scalar_curvature(g).values
    trh, delta_h, _ = divergence_terms(g, h)
    r_prime = scalar_variation_array(g, h)
    nabla_delta = covariant_derivative_array(g, delta_h, 1)
    # A (ΔR)'
    a_part = laplacian_scalar_variation_array(g, h, r_prime)
    # −B (Ric·Δ_L h + Ric·∇² tr h + 2 Ric·∇δh + 2 (Ric × Ric)·h)
    b_part = -(
        dot_array(g, ric, lichnerowicz_array(g, h))
        + dot_array(g, ric, hessian_array(g, trh))
        + 2*dot_array(g, ric, nabla_delta)
        + 2*dot_array(g, product_x_array(g, ric, ric), h)
    )
    # 2 C R R'
    c_part = 2*R*r_prime
    return c.A*a_part + c.B*b_part + c.C*c_part

def gamma(g: MetricField, h: SymTensor2Field) -> ScalarField:
    """linearization Γ_g h of the Q-curvature

    Args:
        g (MetricField): metric
        h (SymTensor2Field): direction, lower indices

    Returns:
        ScalarField: d/dt Q(g + t h) at t = 0
    """
    check_grid(g, h)
    check_lower(h)
    return ScalarField(g.grid, gamma_array(g, h.matrix))

def gamma_star_array(g: MetricField, f: np.ndarray) -> np.ndarray:
    c = constants(g.grid.dim)
    G = g.matrix
    ric = ricci_curvature(g).matrix
    R = scalar_curvature(g).values
    dR = gradient_array(R, g.grid)
    lap_f = laplacian_array(g, f, 0)
    f_dR = f*dR
    f_ric = f*ric
    delta_f_ric = divergence_array(g, f_ric, 2)
    fR = f*R
    a_part = (
        -G*laplacian_array(g, lap_f, 0)
        + hessian_array(g, lap_f)
        - ric*lap_f
        + 0.5*G*divergence_array(g, f_dR, 1)
        + _sym(covariant_derivative_array(g, f_dR, 1))
        - f*hessian_array(g, R)
    )
    b_part = -(
        laplacian_array(g, f_ric, 2)
        + 2*f*rm_dot_array(g, riemann(g), ric)
        + G*divergence_array(g, delta_f_ric, 1)
        + 2*_sym(covariant_derivative_array(g, delta_f_ric, 1))
    )
    c_part = -2*(
        G*laplacian_array(g, fR, 0)
        - hessian_array(g, fR)
        + fR*ric
    )
    return c.A*a_part + c.B*b_part + c.C*c_part

def gamma_star(g: MetricField, f: ScalarField) -> SymTensor2Field:
    """L² formal adjoint Γ*_g f of the linearized Q-curvature against dv_g"""
    check_grid(g, f)
    return SymTensor2Field.from_matrix(g.grid, gamma_star_array(g, f.values))


@dataclass(frozen=True)
class TraceIdentity:
    """tr Γ* f computed directly and through ½(P f − (n+4)/2 Q f)"""
    trace: ScalarField
    paneitz_side: ScalarField
    residual: float
    relative_residual: float


def trace_gamma_star(g: MetricField, f: ScalarField) -> TraceIdentity:
    check_grid(g, f)
    n = g.grid.dim
    lhs = trace_array(g, gamma_star_array(g, f.values))
    rhs = 0.5*(paneitz_array(g, f.values) - 0.5*(n + 4)*q_curvature(g).values*f.values)
    residual = float(np.max(np.abs(lhs - rhs)))
    scale = max(float(np.max(np.abs(rhs))), float(np.max(np.abs(lhs))), np.finfo(float).tiny)
    return TraceIdentity(
        trace=ScalarField(g.grid, lhs),
        paneitz_side=ScalarField(g.grid, rhs),
        residual=residual,
        relative_residual=residual/scale
    )

def principal_symbol(xi: np.ndarray, metric: np.ndarray = None) -> np.ndarray:
    """principal symbol of Γ* at a flat metric, −A (g|ξ|² − ξ⊗ξ)|ξ|²

    Args:
        xi (np.ndarray): covector ξ, shape (n,)
        metric (np.ndarray, optional): constant metric, identity if None. Defaults to None.

    Returns:
        np.ndarray: (n, n) symmetric matrix
    """
    xi = np.asarray(xi, dtype=float)
    n = xi.size
    G = np.eye(n) if metric is None else np.asarray(metric, dtype=float)
    norm2 = float(xi @ np.linalg.inv(G) @ xi)
    return -constants(n).A*(G*norm2 - np.outer(xi, xi))*norm2
