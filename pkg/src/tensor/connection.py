import numpy as np
from src.fields import (
    Field,
    Grid,
    MetricField,
    ScalarField,
    SymTensor2Field,
    VectorField,
    gradient_array,
    symmetric_index
)
from typing import Callable

def memoize(g: MetricField, key: str, compute: Callable):
    """caches a derived quantity of g on the metric itself"""
    if key not in g.cache:
        g.cache[key] = compute()
    return g.cache[key]

def check_grid(g: MetricField, *fields: Field):
    for f in fields:
        if f.grid != g.grid:
            raise ValueError(f"Grid mismatch: metric on {g.grid.shape}, field on {f.grid.shape}")

def check_lower(*fields: Field):
    for f in fields:
        if f.variance not in (None, "lower"):
            raise ValueError(f"Expected lower indices, got {f.variance} {f.kind} field; lower it explicitly")


class Christoffel:
    
    def __init__(
        self,
        grid: Grid,
        values: np.ndarray
    ) -> None:
        """Christoffel symbols Γ^k_ij stored symmetric in (i, j)

        Args:
            grid (Grid): grid
            values (np.ndarray): shape (n, n(n+1)/2, *grid.shape)
        """
        values = np.array(values, dtype=float)
        expected = (grid.dim, grid.dim*(grid.dim+1)//2) + grid.shape
        if values.shape != expected:
            raise ValueError(f"Christoffel values must have shape {expected}, not {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("Christoffel values must be finite")
        values.setflags(write=False)
        self.grid = grid
        self.values = values

    @property
    def full(self) -> np.ndarray:
        """Γ^k_ij as (k, i, j, *grid.shape)"""
        return self.values[:, symmetric_index(self.grid.dim)]


def christoffel(g: MetricField) -> Christoffel:
    """Γ^k_ij = ½ g^kl (∂_i g_jl + ∂_j g_il − ∂_l g_ij)"""
    def compute():
        dg = gradient_array(g.matrix, g.grid)
        first_kind = 0.5*(
            np.einsum("ijl...->lij...", dg)
            + np.einsum("jil...->lij...", dg)
            - dg
        )
        full = np.einsum("kl...,lij...->kij...", g.inverse, first_kind)
        iu, ju = np.triu_indices(g.grid.dim)
        return Christoffel(g.grid, full[:, iu, ju])
    return memoize(g, "christoffel", compute)

def covariant_derivative_array(
    g: MetricField,
    tensor: np.ndarray,
    rank: int
) -> np.ndarray:
    """∇ of a fully covariant tensor given as a full component array

    Args:
        g (MetricField): metric
        tensor (np.ndarray): shape (n,)*rank + grid.shape, all indices lower
        rank (int): number of tensor indices

    Returns:
        np.ndarray: (∇_a T_{i1..ir}) with the derivative index first
    """
    gamma = christoffel(g).full
    out = gradient_array(tensor, g.grid)
    for slot in range(rank):
        moved = np.moveaxis(tensor, slot, 0)
        # Γ^m_{a i} T_{.. m ..}
        term = np.einsum("mai...,m...->ai...", gamma, moved)
        out = out - np.moveaxis(term, 1, 1 + slot)
    return out

def covariant_derivative(g: MetricField, field: Field) -> np.ndarray:
    """∇T for a lower scalar, vector or symmetric 2-tensor field, as a full array"""
    check_grid(g, field)
    check_lower(field)
    if isinstance(field, ScalarField):
        return gradient_array(field.values, g.grid)
    if isinstance(field, VectorField):
        return covariant_derivative_array(g, field.values, 1)
    if isinstance(field, SymTensor2Field):
        return covariant_derivative_array(g, field.matrix, 2)
    raise ValueError(f"Unsupported field {field}")

def hessian_array(g: MetricField, f: np.ndarray) -> np.ndarray:
    """∇²f_ij = ∂_i ∂_j f − Γ^k_ij ∂_k f"""
    df = gradient_array(f, g.grid)
    return covariant_derivative_array(g, df, 1)

def hessian(g: MetricField, f: ScalarField) -> SymTensor2Field:
    check_grid(g, f)
    return SymTensor2Field.from_matrix(g.grid, hessian_array(g, f.values))

def differential(f: ScalarField) -> VectorField:
    """df as a lower vector field"""
    return VectorField(f.grid, gradient_array(f.values, f.grid), "lower")
