import numpy as np
from dataclasses import dataclass
from src.fields import (
    Grid,
    MetricField,
    ScalarField,
    SymTensor2Field,
    derivative_array,
    gradient_array
)
from .connection import christoffel, covariant_derivative_array, memoize


class Riemann4:
    
    def __init__(
        self,
        grid: Grid,
        values: np.ndarray
    ) -> None:
        """fully covariant curvature tensor R_ijkl

        Args:
            grid (Grid): grid
            values (np.ndarray): shape (n, n, n, n, *grid.shape)
        """
        values = np.array(values, dtype=float)
        expected = (grid.dim,)*4 + grid.shape
        if values.shape != expected:
            raise ValueError(f"Riemann values must have shape {expected}, not {values.shape}")
        if not np.all(np.isfinite(values)):
            raise ValueError("Riemann values must be finite")
        values.setflags(write=False)
        self.grid = grid
        self.values = values

    def symmetry_residual(self) -> float:
        """largest violation of the antisymmetries and of pair symmetry"""
        R = self.values
        return float(max(
            np.max(np.abs(R + np.swapaxes(R, 0, 1))),
            np.max(np.abs(R + np.swapaxes(R, 2, 3))),
            np.max(np.abs(R - np.einsum("klij...->ijkl...", R)))
        ))

    def bianchi_residual(self) -> float:
        """sup of R_ijkl + R_jkil + R_kijl"""
        R = self.values
        cyclic = R + np.einsum("jkil...->ijkl...", R) + np.einsum("kijl...->ijkl...", R)
        return float(np.max(np.abs(cyclic)))

    def sup_norm(self) -> float:
        return float(np.max(np.abs(self.values)))


@dataclass(frozen=True)
class Curvature:
    riemann: Riemann4
    ricci: SymTensor2Field
    scalar: ScalarField
    weyl: Riemann4


def riemann(g: MetricField) -> Riemann4:
    """R_ijkl = g_lm R_ijk^m with R_ijk^l = ∂_i Γ^l_jk − ∂_j Γ^l_ik + Γ^l_im Γ^m_jk − Γ^l_jm Γ^m_ik"""
    def compute():
        gamma = christoffel(g).full
        dgamma = gradient_array(gamma, g.grid)
        mixed = (
            np.einsum("iljk...->ijkl...", dgamma)
            - np.einsum("jlik...->ijkl...", dgamma)
            + np.einsum("lim...,mjk...->ijkl...", gamma, gamma)
            - np.einsum("ljm...,mik...->ijkl...", gamma, gamma)
        )
        return Riemann4(g.grid, np.einsum("lm...,ijkm...->ijkl...", g.matrix, mixed))
    return memoize(g, "riemann", compute)

def ricci_curvature(g: MetricField) -> SymTensor2Field:
    """Ric_jk = R_ijk^i, assembled from Γ without forming the full curvature tensor"""
    def compute():
        gamma = christoffel(g).full
        n = g.grid.dim
        divergence = sum(derivative_array(gamma[i], g.grid, i) for i in range(n))
        trace = np.einsum("iik...->k...", gamma)
        matrix = (
            divergence
            - gradient_array(trace, g.grid)
            + np.einsum("m...,mjk...->jk...", trace, gamma)
            - np.einsum("ijm...,mik...->jk...", gamma, gamma)
        )
        return SymTensor2Field.from_matrix(g.grid, matrix)
    return memoize(g, "ricci", compute)

def scalar_curvature(g: MetricField) -> ScalarField:
    def compute():
        ric = ricci_curvature(g)
        return ScalarField(g.grid, np.einsum("jk...,jk...->...", g.inverse, ric.matrix))
    return memoize(g, "scalar", compute)

def schouten(g: MetricField) -> np.ndarray:
    """P = (Ric − R g/(2(n−1)))/(n−2) as a full matrix"""
    n = g.grid.dim
    return (ricci_curvature(g).matrix - scalar_curvature(g).values*g.matrix/(2*(n-1)))/(n-2)

def weyl(g: MetricField) -> Riemann4:
    """W = Rm − P ∧ g, identically zero for n = 3"""
    def compute():
        if g.grid.dim == 3:
            return Riemann4(g.grid, np.zeros((3,)*4 + g.grid.shape))
        P, G = schouten(g), g.matrix
        kulkarni = (
            np.einsum("il...,jk...->ijkl...", P, G)
            + np.einsum("jk...,il...->ijkl...", P, G)
            - np.einsum("ik...,jl...->ijkl...", P, G)
            - np.einsum("jl...,ik...->ijkl...", P, G)
        )
        return Riemann4(g.grid, riemann(g).values - kulkarni)
    return memoize(g, "weyl", compute)

def curvature(g: MetricField) -> Curvature:
    """Riemann, Ricci, scalar and Weyl curvature of g"""
    return Curvature(
        riemann=riemann(g),
        ricci=ricci_curvature(g),
        scalar=scalar_curvature(g),
        weyl=weyl(g)
    )

def cotton(g: MetricField) -> np.ndarray:
    """C_ijk = ∇_i R_jk − ∇_j R_ik − (g_jk ∇_i R − g_ik ∇_j R)/(2(n−1)), shape (n, n, n, *grid.shape)"""
    n = g.grid.dim
    dric = covariant_derivative_array(g, ricci_curvature(g).matrix, 2)
    dR = gradient_array(scalar_curvature(g).values, g.grid)
    G = g.matrix
    return (
        dric
        - np.einsum("jik...->ijk...", dric)
        - (np.einsum("jk...,i...->ijk...", G, dR) - np.einsum("ik...,j...->ijk...", G, dR))/(2*(n-1))
    )
