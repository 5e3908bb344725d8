import numpy as np
from .q import paneitz_array, q_curvature
from src.tensor.connection import check_grid
from src.fields import MetricField, ScalarField

U_FLOOR = 1e-6

def _check_factor(g: MetricField, u: ScalarField, floor: float):
    check_grid(g, u)
    if g.grid.dim != 4 and np.min(u.values) <= floor:
        raise ValueError(f"Conformal factor must be > {floor} everywhere for n={g.grid.dim}, min is {np.min(u.values):.3e}")

def conformal_metric(g: MetricField, u: ScalarField, floor: float = U_FLOOR) -> MetricField:
    """g̃ = e^{2u} g for n = 4, g̃ = u^{4/(n−4)} g otherwise"""
    _check_factor(g, u, floor)
    n = g.grid.dim
    if n == 4:
        return g.conformal(np.exp(2*u.values))
    return g.conformal(u.values**(4/(n - 4)))

def conformal_q(g: MetricField, u: ScalarField, floor: float = U_FLOOR) -> ScalarField:
    """Q of the conformal metric from the transformation law

    Args:
        g (MetricField): background metric
        u (ScalarField): conformal factor (positive when n != 4)
        floor (float, optional): lower bound on u when n != 4. Defaults to 1e-6.

    Returns:
        ScalarField: e^{−4u}(P u + Q) for n = 4, (2/(n−4)) u^{−(n+4)/(n−4)} P u otherwise
    """
    _check_factor(g, u, floor)
    n = g.grid.dim
    Pu = paneitz_array(g, u.values)
    if n == 4:
        return ScalarField(g.grid, np.exp(-4*u.values)*(Pu + q_curvature(g).values))
    return ScalarField(g.grid, 2/(n - 4)*u.values**(-(n + 4)/(n - 4))*Pu)

def conformal_paneitz(g: MetricField, u: ScalarField, phi: ScalarField, floor: float = U_FLOOR) -> ScalarField:
    """P of the conformal metric applied to phi, from the transformation law"""
    _check_factor(g, u, floor)
    check_grid(g, phi)
    n = g.grid.dim
    if n == 4:
        return ScalarField(g.grid, np.exp(-4*u.values)*paneitz_array(g, phi.values))
    return ScalarField(g.grid, u.values**(-(n + 4)/(n - 4))*paneitz_array(g, u.values*phi.values))

def conformal_q_check(g: MetricField, u: ScalarField, floor: float = U_FLOOR) -> float:
    """sup |Q(g̃) − law|, Q(g̃) through the full curvature pipeline"""
    direct = q_curvature(conformal_metric(g, u, floor))
    return float(np.max(np.abs(direct.values - conformal_q(g, u, floor).values)))

def conformal_paneitz_check(g: MetricField, u: ScalarField, phi: ScalarField, floor: float = U_FLOOR) -> float:
    """sup |P(g̃) phi − law|"""
    direct = paneitz_array(conformal_metric(g, u, floor), phi.values)
    return float(np.max(np.abs(direct - conformal_paneitz(g, u, phi, floor).values)))
