import math
from fractions import Fraction
from dataclasses import dataclass
from src.qcurv import exact_constants
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union
from .background import EinsteinBackground, InconsistentModelError, ModelPotential

Number = Union[int, float, Fraction]
SPECTRUM_TOL = 1e-12


@dataclass(frozen=True)
class PiMultiple:
    """coefficient * π^power"""
    coefficient: Fraction
    power: int

    @property
    def value(self) -> float:
        return float(self.coefficient)*math.pi**self.power

    def __str__(self) -> str:
        return f"{self.coefficient}*pi^{self.power}"


@dataclass(frozen=True)
class QSingularReport:
    """Γ* f = coefficient * g f evaluated three ways on an Einstein model

    full: every term of the adjoint evaluated with the model relations
    einstein: A (μ + ΛR)(κ − μ − R/n), the Einstein reduction for any such f
    kernel: A (μ + ΛR)(κ + R/(n(n−1))), the reduction valid on the kernel
    trace: A (μ + ΛR)(−(n−1)μ − R), the trace relation forced on kernel members
    """
    background: EinsteinBackground
    potential: ModelPotential
    full: Fraction
    einstein: Fraction
    kernel: Fraction
    trace: Fraction

    @property
    def residual(self) -> Fraction:
        return abs(self.full) + abs(self.full - self.einstein) + abs(self.kernel) + abs(self.trace)

    def to_dict(self) -> Dict:
        return {
            "background": self.background.to_dict(),
            "potential": self.potential.to_dict(),
            "full": str(self.full),
            "einstein": str(self.einstein),
            "kernel": str(self.kernel),
            "trace": str(self.trace),
            "residual": float(self.residual)
        }


@dataclass(frozen=True)
class SpectralCheck:
    n: int
    eigenvalue: Fraction
    target: Fraction

    @property
    def residual(self) -> Fraction:
        return abs(self.eigenvalue - self.target)


@dataclass(frozen=True)
class VacuumStaticReport:
    """vacuum static coefficient κ + R/(n(n−1)), the trace f ΔR + n Ric·∇²f + R² f/(n−1)
    and |Ric − R g/n|², all per unit f"""
    static: Fraction
    trace: Fraction
    traceless_ricci: Fraction

    @property
    def residual(self) -> Fraction:
        return abs(self.static) + abs(self.trace) + abs(self.traceless_ricci)


def einstein_q(bg: EinsteinBackground) -> Fraction:
    """Q = (B/n + C) R² on an Einstein background"""
    c = exact_constants(bg.n)
    n, R = bg.n, bg.R
    q = (c.B/n + c.C)*R**2
    assert q == Fraction((n + 2)*(n - 2), 8*n*(n - 1)**2)*R**2, f"Einstein Q disagrees with its closed form for n={n}"
    return q

def sphere_volume(n: int) -> PiMultiple:
    """volume of the unit n-sphere, 2 π^{(n+1)/2} / Γ((n+1)/2)"""
    if n % 2 == 1:
        # Γ(k) = (k−1)! with k = (n+1)/2
        return PiMultiple(Fraction(2, math.factorial((n - 1)//2)), (n + 1)//2)
    # Γ(m + ½) = (2m)! √π / (4^m m!) with m = n/2
    m = n//2
    return PiMultiple(Fraction(2*4**m*math.factorial(m), math.factorial(2*m)), m)

def total_q(bg: EinsteinBackground) -> float:
    """∫ Q dv on a round sphere"""
    if bg.model != "sphere":
        raise InconsistentModelError(f"Total Q is only closed form on spheres, not {bg.model}")
    return float(einstein_q(bg))*sphere_volume(bg.n).value*bg.radius**bg.n

def gauss_bonnet_sphere4(R: Number = 12) -> Tuple[PiMultiple, PiMultiple]:
    """(∫ Q dv, 8π² χ(S⁴)) exactly; Q·Vol is scale invariant in dimension 4"""
    bg = EinsteinBackground(n=4, R=Fraction(R), model="sphere")
    volume = sphere_volume(4)
    # Vol(r) = Vol(1) r⁴ with r² = 12/R
    total = PiMultiple(einstein_q(bg)*volume.coefficient*(Fraction(12)/bg.R)**2, volume.power)
    euler = 2
    return total, PiMultiple(Fraction(8*euler), 2)

def gamma_star_coefficient(bg: EinsteinBackground, pot: ModelPotential) -> Fraction:
    """Γ* f / (g f) with every term of the adjoint evaluated through Δf = μf, ∇²f = κgf, Ric = (R/n)g"""
    c = exact_constants(bg.n)
    n, R, mu, kappa = bg.n, bg.R, pot.mu, pot.kappa
    a_part = -mu**2 + mu*kappa - R/n*mu
    # Δ(f Ric) + 2f R̊·Ric + g δ²(f Ric) + 2∇δ(f Ric)
    b_part = R/n*mu + 2*(R/n)**2 + R/n*mu - 2*R/n*kappa
    c_part = R*mu - R*kappa + R**2/n
    return c.A*a_part - c.B*b_part - 2*c.C*c_part

def verify_q_singular(bg: EinsteinBackground, pot: ModelPotential) -> QSingularReport:
    """exact residuals of the Q-singular equation on a model with its kernel potential"""
    if pot.kind != ModelPotential.for_background(bg).kind:
        raise InconsistentModelError(f"A {pot.kind} potential does not belong to a {bg.model} background")
    c = exact_constants(bg.n)
    n, R, mu, kappa = bg.n, bg.R, pot.mu, pot.kappa
    shifted = mu + c.Lambda*R
    return QSingularReport(
        background=bg,
        potential=pot,
        full=gamma_star_coefficient(bg, pot),
        einstein=c.A*shifted*(kappa - mu - R/n),
        kernel=c.A*shifted*(kappa + R/(n*(n - 1))),
        trace=c.A*shifted*(-(n - 1)*mu - R)
    )

def sphere_spectral_check(n: int) -> SpectralCheck:
    """P f / f against (n+4)/2 Q for a first eigenfunction of the unit n-sphere"""
    c = exact_constants(n)
    q = einstein_q(EinsteinBackground.sphere(n))
    # Δf = −n f, Ric = (n−1) g, R = n(n−1)
    eigenvalue = n**2 + (c.a*n*(n - 1) + c.b*(n - 1))*n + Fraction(n - 4, 2)*q
    return SpectralCheck(n=n, eigenvalue=eigenvalue, target=Fraction(n + 4, 2)*q)

def sphere_kernel_dimension(bg: EinsteinBackground) -> int:
    """dimension of ker Γ* on a round sphere: the first eigenspace, n+1"""
    if bg.model != "sphere":
        raise InconsistentModelError(f"Kernel dimension is recorded for spheres only, not {bg.model}")
    return bg.n + 1

def verify_vacuum_static(
    bg: EinsteinBackground,
    pot: ModelPotential,
    ricci_eigenvalues: Optional[Sequence[Number]] = None
) -> VacuumStaticReport:
    """vacuum static residuals of the model potential, per unit f

    Args:
        bg (EinsteinBackground): background
        pot (ModelPotential): potential with ∇²f = κ f g
        ricci_eigenvalues (Optional[Sequence[Number]], optional): principal Ricci curvatures, summing to R. Defaults to None (all R/n).

    Returns:
        VacuumStaticReport: static, trace and traceless Ricci terms
    """
    if pot.kind != ModelPotential.for_background(bg).kind:
        raise InconsistentModelError(f"A {pot.kind} potential does not belong to a {bg.model} background")
    n, R, kappa = bg.n, bg.R, pot.kappa
    ricci = [R/n]*n if ricci_eigenvalues is None else [Fraction(r) for r in ricci_eigenvalues]
    if len(ricci) != n:
        raise ValueError(f"Need {n} Ricci eigenvalues, got {len(ricci)}")
    if sum(ricci) != R:
        raise InconsistentModelError(f"Ricci eigenvalues {[str(r) for r in ricci]} do not trace to R = {R}")
    return VacuumStaticReport(
        static=kappa + R/(n*(n - 1)),
        trace=n*kappa*sum(ricci) + R**2/(n - 1),
        traceless_ricci=sum((r - R/n)**2 for r in ricci)
    )

def _in_spectrum(value: Fraction, spectrum: Iterable[Number]) -> bool:
    for s in spectrum:
        if isinstance(s, (int, Fraction)):
            if Fraction(s) == value:
                return True
        elif abs(float(s) - float(value)) <= SPECTRUM_TOL:
            return True
    return False

def nonsingular_negative_einstein_check(n: int, R: Number, spectrum: Iterable[Number]) -> bool:
    """whether ΛR and R/(n−1) both avoid a supplied spectrum of −Δ, which
    rules out a kernel of Γ* on a closed negative Einstein manifold

    Args:
        n (int): dimension
        R (Number): negative scalar curvature
        spectrum (Iterable[Number]): eigenvalues of −Δ

    Returns:
        bool: True when the hypothesis holds
    """
    R = Fraction(R) if not isinstance(R, float) else Fraction(R).limit_denominator(10**12)
    if R >= 0:
        raise ValueError(f"The criterion is for negative scalar curvature, not R = {R}")
    spectrum = list(spectrum)
    c = exact_constants(n)
    return not _in_spectrum(c.Lambda*R, spectrum) and not _in_spectrum(R/(n - 1), spectrum)

def sectional_curvature_3d(ricci_eigenvalues: Iterable[Number]) -> Dict[Tuple[int, int], Fraction]:
    """sectional curvatures K_ij = R_ii + R_jj − R/2 of a 3-manifold in a frame diagonalizing Ric"""
    r = [Fraction(x) for x in ricci_eigenvalues]
    if len(r) != 3:
        raise ValueError(f"Need 3 Ricci eigenvalues, got {len(r)}")
    R = sum(r)
    return {(i, j): r[i] + r[j] - R/2 for i in range(3) for j in range(i + 1, 3)}

def identity_table(dims: Iterable[int]) -> List[Dict]:
    """one record per (model, n): Q, Q-singular and vacuum static residuals, spectral check"""
    rows = []
    for n in dims:
        spectral = sphere_spectral_check(n)
        for bg in [EinsteinBackground.sphere(n), EinsteinBackground.hyperbolic(n), EinsteinBackground.ricci_flat(n)]:
            pot = ModelPotential.for_background(bg)
            singular = verify_q_singular(bg, pot)
            static = verify_vacuum_static(bg, pot)
            rows.append({
                "n": n,
                "model": bg.model,
                "R": str(bg.R),
                "potential": pot.kind,
                "Q": str(einstein_q(bg)),
                "q_singular_residual": str(singular.residual),
                "vacuum_static_residual": str(static.residual),
                "spectral_residual": str(spectral.residual) if bg.model == "sphere" else "",
                "kernel_dimension": sphere_kernel_dimension(bg) if bg.model == "sphere" else ""
            })
    return rows
