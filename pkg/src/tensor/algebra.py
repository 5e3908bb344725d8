import numpy as np
from typing import Union
from .curvature import Riemann4
from .connection import check_grid, check_lower
from src.fields import Field, MetricField, ScalarField, SymTensor2Field, VectorField

def raise_index(g: MetricField, field: Union[VectorField, SymTensor2Field]) -> Union[VectorField, SymTensor2Field]:
    """raises every index of a lower field"""
    check_grid(g, field)
    if field.variance != "lower":
        raise ValueError(f"Field already has {field.variance} indices")
    if isinstance(field, VectorField):
        return VectorField(g.grid, np.einsum("ij...,j...->i...", g.inverse, field.values), "upper")
    if isinstance(field, SymTensor2Field):
        return SymTensor2Field.from_matrix(g.grid, raise_matrix(g, field.matrix), "upper")
    raise ValueError(f"Unsupported field {field}")

def lower_index(g: MetricField, field: Union[VectorField, SymTensor2Field]) -> Union[VectorField, SymTensor2Field]:
    """lowers every index of an upper field"""
    check_grid(g, field)
    if field.variance != "upper":
        raise ValueError(f"Field already has {field.variance} indices")
    G = g.matrix
    if isinstance(field, VectorField):
        return VectorField(g.grid, np.einsum("ij...,j...->i...", G, field.values), "lower")
    if isinstance(field, SymTensor2Field):
        lowered = np.einsum("ia...,ab...,bj...->ij...", G, field.matrix, G)
        return SymTensor2Field.from_matrix(g.grid, lowered, "lower")
    raise ValueError(f"Unsupported field {field}")

def raise_matrix(g: MetricField, matrix: np.ndarray) -> np.ndarray:
    """A^ij = g^ia A_ab g^bj for a full (n, n, *grid) array"""
    ginv = g.inverse
    return np.einsum("ia...,ab...,jb...->ij...", ginv, matrix, ginv)

def raise_all(g: MetricField, tensor: np.ndarray, rank: int) -> np.ndarray:
    """raises each index of a covariant full array, one slot at a time"""
    out = tensor
    for slot in range(rank):
        moved = np.moveaxis(out, slot, 0)
        out = np.moveaxis(np.einsum("ia...,a...->i...", g.inverse, moved), 0, slot)
    return out

def trace_array(g: MetricField, matrix: np.ndarray) -> np.ndarray:
    return np.einsum("ij...,ij...->...", g.inverse, matrix)

def trace(g: MetricField, h: SymTensor2Field) -> ScalarField:
    """tr_g h = g^ij h_ij"""
    check_grid(g, h)
    check_lower(h)
    return ScalarField(g.grid, trace_array(g, h.matrix))

def traceless(g: MetricField, h: SymTensor2Field) -> SymTensor2Field:
    """h̊ = h − (tr h / n) g"""
    tr = trace(g, h)
    return SymTensor2Field.from_matrix(g.grid, h.matrix - tr.values*g.matrix/g.grid.dim)

def dot_array(g: MetricField, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """a · b = g^ik g^jl a_ij b_kl for full (not necessarily symmetric) 2-tensors"""
    return np.einsum("ij...,ij...->...", raise_matrix(g, a), b)

def dot(g: MetricField, h: SymTensor2Field, k: SymTensor2Field) -> ScalarField:
    """h · k = h_ij k^ij"""
    check_grid(g, h, k)
    check_lower(h, k)
    return ScalarField(g.grid, dot_array(g, h.matrix, k.matrix))

def product_x_array(g: MetricField, a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """(a × b)_ij = g^kl a_ik b_jl"""
    return np.einsum("kl...,ik...,jl...->ij...", g.inverse, a, b)

def product_x(g: MetricField, h: SymTensor2Field, k: SymTensor2Field) -> np.ndarray:
    """h × k as a full (n, n, *grid) array, symmetric only when h and k commute"""
    check_grid(g, h, k)
    check_lower(h, k)
    return product_x_array(g, h.matrix, k.matrix)

def rm_dot_array(g: MetricField, rm: Riemann4, matrix: np.ndarray) -> np.ndarray:
    """(R̊ · h)_jk = R_ijkl h^il"""
    return np.einsum("ijkl...,il...->jk...", rm.values, raise_matrix(g, matrix))

def rm_dot(g: MetricField, rm: Riemann4, h: SymTensor2Field) -> SymTensor2Field:
    check_grid(g, h)
    check_lower(h)
    return SymTensor2Field.from_matrix(g.grid, rm_dot_array(g, rm, h.matrix))

def norm_squared(g: MetricField, field: Union[Field, Riemann4]) -> ScalarField:
    """|T|²_g for a lower vector, symmetric 2-tensor or curvature tensor"""
    if isinstance(field, Riemann4):
        return ScalarField(g.grid, np.einsum("ijkl...,ijkl...->...", raise_all(g, field.values, 4), field.values))
    check_grid(g, field)
    check_lower(field)
    if isinstance(field, ScalarField):
        return ScalarField(g.grid, field.values**2)
    if isinstance(field, VectorField):
        return ScalarField(g.grid, np.einsum("ij...,i...,j...->...", g.inverse, field.values, field.values))
    if isinstance(field, SymTensor2Field):
        return ScalarField(g.grid, dot_array(g, field.matrix, field.matrix))
    raise ValueError(f"Unsupported field {field}")
