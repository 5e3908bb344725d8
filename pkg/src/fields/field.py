import numpy as np
from .grid import Grid
from numbers import Real
from typing import Dict, Optional, Tuple

VARIANCES = ["lower", "upper"]

def symmetric_index(n: int) -> np.ndarray:
    """(n, n) table mapping a matrix position (i, j) to its slot in packed symmetric storage"""
    index = np.empty((n, n), dtype=int)
    iu, ju = np.triu_indices(n)
    slots = np.arange(iu.size)
    index[iu, ju] = slots
    index[ju, iu] = slots
    return index

def pack_symmetric(matrix: np.ndarray) -> np.ndarray:
    """(n, n, ...) -> (n(n+1)/2, ...) keeping the upper triangle"""
    iu, ju = np.triu_indices(matrix.shape[0])
    return matrix[iu, ju]

def unpack_symmetric(packed: np.ndarray, n: int) -> np.ndarray:
    """(n(n+1)/2, ...) -> (n, n, ...)"""
    return packed[symmetric_index(n)]

def symmetrize(matrix: np.ndarray) -> np.ndarray:
    return 0.5*(matrix + np.swapaxes(matrix, 0, 1))


class Field:
    """sampled tensor field on a periodic grid. Component axes lead, grid axes trail.
    Values are copied on construction and kept read-only.
    """
    kind = "field"
    # numpy scalars defer to the reflected operators below
    __array_ufunc__ = None

    def __init__(
        self,
        grid: Grid,
        values: np.ndarray,
        variance: Optional[str] = None
    ) -> None:
        values = np.array(values, dtype=float)
        expected = self.component_shape(grid.dim) + grid.shape
        if values.shape != expected:
            raise ValueError(f"{type(self).__name__} on grid {grid.shape} needs values of shape {expected}, not {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError(f"{type(self).__name__} values must be finite")
        if self.component_shape(grid.dim) != () and variance not in VARIANCES:
            raise ValueError(f"Variance must be one of {VARIANCES}, not {variance}")
        values.setflags(write=False)
        self.grid = grid
        self.values = values
        self.variance = variance

    @staticmethod
    def component_shape(dim: int) -> Tuple[int, ...]:
        raise NotImplementedError

    @classmethod
    def zeros(cls, grid: Grid, variance: str = "lower") -> "Field":
        if cls.component_shape(grid.dim) == ():
            return cls(grid, np.zeros(grid.shape))
        return cls(grid, np.zeros(cls.component_shape(grid.dim) + grid.shape), variance)

    def _like(self, values: np.ndarray) -> "Field":
        if self.variance is None:
            return type(self)(self.grid, values)
        return type(self)(self.grid, values, self.variance)

    def with_values(self, values: np.ndarray) -> "Field":
        """same kind, grid and variance with new values"""
        return self._like(values)

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))

    def _check_compatible(self, other: "Field"):
        if self.grid != other.grid:
            raise ValueError(f"Grid mismatch: {self.grid} vs {other.grid}")
        if self.kind != other.kind or self.variance != other.variance:
            raise ValueError(f"Cannot combine {self.kind}/{self.variance} with {other.kind}/{other.variance}")

    def __add__(self, other: "Field") -> "Field":
        self._check_compatible(other)
        return self._like(self.values + other.values)

    def __sub__(self, other: "Field") -> "Field":
        self._check_compatible(other)
        return self._like(self.values - other.values)

    def __neg__(self) -> "Field":
        return self._like(-self.values)

    def __mul__(self, other) -> "Field":
        if isinstance(other, ScalarField):
            if other.grid != self.grid:
                raise ValueError(f"Grid mismatch: {self.grid} vs {other.grid}")
            return self._like(self.values * other.values)
        if isinstance(other, Real):
            return self._like(self.values * float(other))
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other) -> "Field":
        if isinstance(other, Real):
            return self._like(self.values / float(other))
        return NotImplemented

    def header(self) -> Dict:
        header = self.grid.to_dict()
        header.update({"kind": self.kind, "variance": self.variance})
        return header

    def __repr__(self) -> str:
        variance = "" if self.variance is None else f", variance={self.variance}"
        return f"{type(self).__name__}(grid={self.grid.shape}{variance})"


class ScalarField(Field):
    kind = "scalar"

    def __init__(self, grid: Grid, values: np.ndarray, variance: Optional[str] = None) -> None:
        super().__init__(grid, values, None)

    @staticmethod
    def component_shape(dim: int) -> Tuple[int, ...]:
        return ()

    @classmethod
    def constant(cls, grid: Grid, value: float) -> "ScalarField":
        return cls(grid, np.full(grid.shape, float(value)))

    def __mul__(self, other):
        # scalar * tensor promotes to the tensor kind
        if isinstance(other, Field) and not isinstance(other, ScalarField):
            return other.__mul__(self)
        return super().__mul__(other)

    __rmul__ = __mul__


class VectorField(Field):
    kind = "vector"

    @staticmethod
    def component_shape(dim: int) -> Tuple[int, ...]:
        return (dim,)

    @classmethod
    def constant(cls, grid: Grid, components, variance: str = "lower") -> "VectorField":
        components = np.asarray(components, dtype=float).reshape((grid.dim,) + (1,)*grid.dim)
        return cls(grid, np.broadcast_to(components, (grid.dim,) + grid.shape), variance)


class SymTensor2Field(Field):
    """symmetric 2-tensor stored as its n(n+1)/2 upper-triangle components"""
    kind = "sym2"

    @staticmethod
    def component_shape(dim: int) -> Tuple[int, ...]:
        return (dim*(dim+1)//2,)

    @classmethod
    def from_matrix(cls, grid: Grid, matrix: np.ndarray, variance: str = "lower") -> "SymTensor2Field":
        """packs a full (n, n, *shape) array, symmetrizing it first"""
        return cls(grid, pack_symmetric(symmetrize(np.asarray(matrix, dtype=float))), variance)

    @property
    def matrix(self) -> np.ndarray:
        return unpack_symmetric(self.values, self.grid.dim)


class MetricField(SymTensor2Field):
    """pointwise positive definite symmetric 2-tensor with cached inverse and volume element

    Args:
        grid (Grid): grid
        values (np.ndarray): packed lower components, shape (n(n+1)/2, *grid.shape)
    """
    kind = "sym2"

    def __init__(self, grid: Grid, values: np.ndarray, variance: Optional[str] = "lower") -> None:
        if variance != "lower":
            raise ValueError(f"A metric has lower indices, not {variance}")
        super().__init__(grid, values, "lower")
        n = grid.dim
        pointwise = np.moveaxis(self.matrix.reshape(n, n, -1), -1, 0)
        eigenvalues = np.linalg.eigvalsh(pointwise)
        if eigenvalues.min() <= 0:
            raise ValueError(f"Metric is not positive definite, smallest eigenvalue {eigenvalues.min():.3e}")
        inverse = np.linalg.inv(pointwise)
        defect = np.max(np.abs(pointwise @ inverse - np.eye(n)))
        if defect > 1e-12 * max(1.0, float(eigenvalues.max()/eigenvalues.min())):
            raise ValueError(f"Metric inverse is inaccurate (g g^-1 - I = {defect:.3e})")
        inverse = np.moveaxis(inverse, 0, -1).reshape((n, n) + grid.shape)
        inverse = symmetrize(inverse)
        volume_element = np.sqrt(np.linalg.det(pointwise)).reshape(grid.shape)
        inverse.setflags(write=False)
        volume_element.setflags(write=False)
        self.inverse = inverse
        self.volume_element = volume_element
        # derived geometry (connection, curvature) memoized by src.tensor
        self.cache: Dict[str, object] = {}

    def _like(self, values: np.ndarray) -> SymTensor2Field:
        return SymTensor2Field(self.grid, values, "lower")

    @classmethod
    def flat(cls, grid: Grid, matrix: Optional[np.ndarray] = None) -> "MetricField":
        """constant metric, Euclidean unless a constant (n, n) matrix is given"""
        matrix = np.eye(grid.dim) if matrix is None else np.asarray(matrix, dtype=float)
        full = np.broadcast_to(matrix.reshape((grid.dim, grid.dim) + (1,)*grid.dim), (grid.dim, grid.dim) + grid.shape)
        return cls(grid, pack_symmetric(symmetrize(full)))

    @classmethod
    def from_matrix(cls, grid: Grid, matrix: np.ndarray, variance: str = "lower") -> "MetricField":
        return cls(grid, pack_symmetric(symmetrize(np.asarray(matrix, dtype=float))), variance)

    @classmethod
    def from_tensor(cls, tensor: SymTensor2Field) -> "MetricField":
        return cls(tensor.grid, tensor.values, tensor.variance)

    def perturb(self, h: SymTensor2Field, eps: float = 1.0) -> "MetricField":
        """the metric g + eps h"""
        return MetricField.from_tensor(self + eps*h)

    def conformal(self, factor: np.ndarray) -> "MetricField":
        """the metric factor * g for a positive array factor"""
        return MetricField(self.grid, self.values * np.asarray(factor, dtype=float))

    def scaled(self, factor: float) -> "MetricField":
        if factor <= 0:
            raise ValueError(f"Scaling factor must be positive, not {factor}")
        return MetricField(self.grid, self.values * float(factor))

    @property
    def inverse_field(self) -> SymTensor2Field:
        return SymTensor2Field.from_matrix(self.grid, self.inverse, "upper")

    def is_constant(self, tol: float = 1e-12) -> bool:
        """True when every component is constant in space (a flat torus metric)"""
        flat = self.values.reshape(self.values.shape[0], -1)
        return bool(np.max(np.abs(flat - flat[:, :1])) <= tol*max(1.0, np.max(np.abs(flat))))

    @property
    def constant_matrix(self) -> np.ndarray:
        """(n, n) value of a constant metric"""
        if not self.is_constant():
            raise ValueError("Metric is not constant on the grid")
        return self.matrix.reshape(self.grid.dim, self.grid.dim, -1)[..., 0].copy()
