from fractions import Fraction
from dataclasses import dataclass
from functools import lru_cache

NAMES = ["A", "B", "C", "a", "b", "Lambda", "alpha"]

@dataclass(frozen=True)
class ExactConstants:
    """dimension constants of Q and the Paneitz operator as exact rationals"""
    n: int
    A: Fraction
    B: Fraction
    C: Fraction
    a: Fraction
    b: Fraction
    Lambda: Fraction
    alpha: Fraction

    def cancellation(self) -> Fraction:
        """(n−4)/2 A + n/2 B + 2(n−1) C, zero in every dimension"""
        n = self.n
        return Fraction(n - 4, 2)*self.A + Fraction(n, 2)*self.B + 2*(n - 1)*self.C

    def to_dict(self) -> dict:
        return {name: str(getattr(self, name)) for name in NAMES}


@dataclass(frozen=True)
class Constants:
    """the same constants as floats, ready for field arithmetic"""
    n: int
    A: float
    B: float
    C: float
    a: float
    b: float
    Lambda: float
    alpha: float
    exact: ExactConstants

    def to_dict(self) -> dict:
        return {name: getattr(self, name) for name in NAMES}


@lru_cache(maxsize=None)
def exact_constants(n: int) -> ExactConstants:
    """A_n, B_n, C_n, a_n, b_n, Λ_n, α_n in rational arithmetic

    Args:
        n (int): dimension, >= 3

    Returns:
        ExactConstants: constants
    """
    if not isinstance(n, int) or n < 3:
        raise ValueError(f"Dimension must be an integer >= 3, not {n}")
    A = Fraction(-1, 2*(n - 1))
    B = Fraction(-2, (n - 2)**2)
    C = Fraction(n**2*(n - 4) + 16*(n - 1), 8*(n - 1)**2*(n - 2)**2)
    a = Fraction((n - 2)**2 + 4, 2*(n - 1)*(n - 2))
    b = Fraction(-4, n - 2)
    Lambda = 2/A*(B/n + C)
    alpha = -Fraction(1, 2)*(A + Fraction(n + 1, 2*n)*B + 2*C)
    constants = ExactConstants(n=n, A=A, B=B, C=C, a=a, b=b, Lambda=Lambda, alpha=alpha)
    assert constants.cancellation() == 0, f"Constant identity fails for n={n}"
    assert Lambda == Fraction(-(n + 2)*(n - 2), 2*n*(n - 1)), f"Λ_{n} disagrees with its closed form"
    assert Lambda < 0 and alpha > 0, f"Sign conditions fail for n={n}"
    return constants

@lru_cache(maxsize=None)
def constants(n: int) -> Constants:
    exact = exact_constants(n)
    return Constants(n=n, exact=exact, **{name: float(getattr(exact, name)) for name in NAMES})
