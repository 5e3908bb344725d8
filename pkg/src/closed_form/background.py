import math
from fractions import Fraction
from dataclasses import dataclass
from typing import Optional, Union

Rational = Union[int, Fraction]

MODELS = ["sphere", "hyperbolic", "ricci_flat"]

# potential family in the kernel of Γ* for each model
POTENTIALS = {
    "sphere": "first_eigenfunction",
    "hyperbolic": "coordinate",
    "ricci_flat": "constant",
}

class InconsistentModelError(ValueError):
    pass


@dataclass(frozen=True)
class EinsteinBackground:
    """Einstein model space with Ric = (R/n) g and constant R

    Args:
        n (int): dimension, >= 3
        R (Fraction): scalar curvature
        model (str): one of sphere, hyperbolic, ricci_flat
    """
    n: int
    R: Fraction
    model: str

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 3:
            raise ValueError(f"Dimension must be an integer >= 3, not {self.n}")
        assert self.model in MODELS, f"Only {MODELS} models are supported, not {self.model}"
        object.__setattr__(self, "R", Fraction(self.R))
        sign = {"sphere": 1, "hyperbolic": -1, "ricci_flat": 0}[self.model]
        if (self.R > 0) - (self.R < 0) != sign:
            raise InconsistentModelError(f"A {self.model} background cannot have R = {self.R}")

    @classmethod
    def sphere(cls, n: int, radius: Rational = 1) -> "EinsteinBackground":
        return cls(n=n, R=Fraction(n*(n - 1))/Fraction(radius)**2, model="sphere")

    @classmethod
    def hyperbolic(cls, n: int, radius: Rational = 1) -> "EinsteinBackground":
        return cls(n=n, R=-Fraction(n*(n - 1))/Fraction(radius)**2, model="hyperbolic")

    @classmethod
    def ricci_flat(cls, n: int) -> "EinsteinBackground":
        return cls(n=n, R=Fraction(0), model="ricci_flat")

    @property
    def sectional(self) -> Fraction:
        """constant sectional curvature R/(n(n−1)) of the space form"""
        return self.R/(self.n*(self.n - 1))

    @property
    def radius(self) -> Optional[float]:
        if self.R == 0:
            return None
        return math.sqrt(self.n*(self.n - 1)/abs(float(self.R)))

    def to_dict(self) -> dict:
        return {"n": self.n, "R": str(self.R), "model": self.model}


@dataclass(frozen=True)
class ModelPotential:
    """potential f described by Δf = μ f and ∇²f = κ g f"""
    kind: str
    mu: Fraction
    kappa: Fraction

    @classmethod
    def for_background(cls, bg: EinsteinBackground, kind: Optional[str] = None) -> "ModelPotential":
        """the kernel family of a model: first eigenfunctions on spheres,
        the last hyperboloid coordinate on hyperbolic space, constants on Ricci flat spaces

        Args:
            bg (EinsteinBackground): background
            kind (str, optional): requested family, the model's own if None. Defaults to None.

        Returns:
            ModelPotential: potential with its Laplace and Hessian factors
        """
        expected = POTENTIALS[bg.model]
        kind = expected if kind is None else kind
        if kind != expected:
            raise InconsistentModelError(f"A {kind} potential does not belong to a {bg.model} background, use {expected}")
        if kind == "constant":
            return cls(kind=kind, mu=Fraction(0), kappa=Fraction(0))
        # ∇²f = −K g f, K the sectional curvature, hence Δf = −n K f = −R/(n−1) f
        kappa = -bg.sectional
        return cls(kind=kind, mu=bg.n*kappa, kappa=kappa)

    def to_dict(self) -> dict:
        return {"kind": self.kind, "mu": str(self.mu), "kappa": str(self.kappa)}
