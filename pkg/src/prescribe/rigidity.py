import numpy as np
from tqdm import tqdm
from dataclasses import dataclass, field
from typing import Dict, List
from concurrent.futures import ThreadPoolExecutor
from src.utils import child_seeds, workers
from src.tensor import covariant_derivative_array
from src.fields import MetricField, ScalarField, SymTensor2Field, integrate, random_band_limited
from src.variations import functional_F, functional_G, quadratic_form_flat
from .projection import project_divergence_free

POSITIVE_TOL = 1e-12

@dataclass
class RigidityTrial:
    """one random divergence free direction h and its expansion of ℱ(ḡ + h)"""
    seed: int
    amplitudes: List[float]
    quadratic_forms: List[float]
    functionals: List[float]
    remainders: List[float]
    scalar_functionals: List[float]
    hessian_norm: float
    orders: List[float] = field(default_factory=list)
    constant_fit: float = 0.0

    @property
    def quadratic_form(self) -> float:
        return self.quadratic_forms[0]

    @property
    def min_order(self) -> float:
        return min(self.orders) if self.orders else float("nan")

    def to_dict(self) -> Dict:
        return {
            "seed": self.seed,
            "amplitudes": list(self.amplitudes),
            "quadratic_forms": list(self.quadratic_forms),
            "functionals": list(self.functionals),
            "remainders": list(self.remainders),
            "scalar_functionals": list(self.scalar_functionals),
            "hessian_norm": self.hessian_norm,
            "orders": list(self.orders),
            "constant_fit": self.constant_fit
        }


@dataclass
class RigidityReport:
    trials: List[RigidityTrial]
    constant_mode: Dict[str, float]

    @property
    def max_quadratic_form(self) -> float:
        return max(t.quadratic_form for t in self.trials)

    @property
    def min_order(self) -> float:
        return min(t.min_order for t in self.trials)

    @property
    def constant_fit(self) -> float:
        """smallest C with |E₃| <= C ‖h‖∞ ∫|∇²h|² over every trial and amplitude"""
        return max(t.constant_fit for t in self.trials)

    @property
    def non_positive(self) -> bool:
        return self.max_quadratic_form <= POSITIVE_TOL

    def rows(self) -> List[Dict]:
        """one row per trial and amplitude, for csv tables"""
        rows = []
        for t in self.trials:
            for i, amp in enumerate(t.amplitudes):
                rows.append({
                    "seed": t.seed,
                    "amplitude": amp,
                    "quadratic_form": t.quadratic_forms[i],
                    "functional": t.functionals[i],
                    "remainder": t.remainders[i],
                    "scalar_functional": t.scalar_functionals[i],
                    "order": t.orders[i - 1] if i > 0 else ""
                })
        return rows

    def to_dict(self) -> Dict:
        return {
            "trials": [t.to_dict() for t in self.trials],
            "constant_mode": dict(self.constant_mode),
            "max_quadratic_form": self.max_quadratic_form,
            "min_order": self.min_order,
            "constant_fit": self.constant_fit,
            "non_positive": self.non_positive
        }


def hessian_norm_squared(background: MetricField, h: SymTensor2Field) -> float:
    """∫ |∇²h|² dv_ḡ on a flat background"""
    second = covariant_derivative_array(background, covariant_derivative_array(background, h.matrix, 2), 3)
    G_inv = np.linalg.inv(background.constant_matrix)
    density = np.einsum("ia,jb,kc,ld,ijkl...,abcd...->...", G_inv, G_inv, G_inv, G_inv, second, second, optimize=True)
    return integrate(ScalarField(h.grid, density), background)

def random_divergence_free(background: MetricField, amplitude: float, seed: int, max_mode: int) -> SymTensor2Field:
    """random band limited h with δ_ḡ h = 0 and ‖h‖∞ = amplitude"""
    h = random_band_limited(background.grid, "sym2", max_mode, 1.0, seed, zero_mean=True)
    h_df = project_divergence_free(background, h).h_df
    return h_df*(amplitude/h_df.sup_norm())

def run_trial(
    background: MetricField,
    amplitude: float,
    seed: int,
    max_mode: int,
    halvings: int = 2
) -> RigidityTrial:
    """expansion of ℱ(ḡ + h) = ½ D²ℱ(h, h) + E₃ along an amplitude sweep

    ℱ(ḡ) and Dℱ_ḡ vanish on a flat torus, so E₃ = ℱ(ḡ + h) − ½ D²ℱ(h, h).

    Args:
        background (MetricField): flat metric ḡ
        amplitude (float): sup-norm of the largest h
        seed (int): seed of the direction
        max_mode (int): band limit of h
        halvings (int, optional): number of amplitude halvings. Defaults to 2.

    Returns:
        RigidityTrial: trial record
    """
    direction = random_divergence_free(background, 1.0, seed, max_mode)
    amplitudes = [amplitude/2**k for k in range(halvings + 1)]
    quadratic, functionals, remainders, scalars = [], [], [], []
    for amp in amplitudes:
        h = direction*amp
        g = background.perturb(h)
        q = quadratic_form_flat(h, background)
        F = functional_F(g, background)
        quadratic.append(q)
        functionals.append(F)
        remainders.append(F - 0.5*q)
        scalars.append(functional_G(g, background))
    orders = [
        float(np.log2(abs(remainders[k])/abs(remainders[k + 1])))
        if remainders[k + 1] != 0 else float("inf")
        for k in range(halvings)
    ]
    hessian = hessian_norm_squared(background, direction)
    # E₃ of amp·h against amp³ ‖h‖∞ ∫|∇²h|², with ‖h‖∞ = 1
    fit = max(abs(r)/(amp**3*hessian) for r, amp in zip(remainders, amplitudes)) if hessian > 0 else 0.0
    return RigidityTrial(
        seed=seed,
        amplitudes=amplitudes,
        quadratic_forms=quadratic,
        functionals=functionals,
        remainders=remainders,
        scalar_functionals=scalars,
        hessian_norm=hessian,
        orders=orders,
        constant_fit=fit
    )

def constant_mode_trial(background: MetricField, amplitude: float, seed: int) -> Dict[str, float]:
    """h with only the constant Fourier mode: ḡ + h is flat, so the form and ℱ vanish

    Returns:
        Dict[str, float]: quadratic form and ℱ(ḡ + h)
    """
    n = background.grid.dim
    rng = np.random.default_rng(seed)
    matrix = rng.standard_normal((n, n))
    matrix = amplitude*(matrix + matrix.T)/np.max(np.abs(matrix + matrix.T))
    h = SymTensor2Field.from_matrix(
        background.grid,
        np.broadcast_to(matrix.reshape((n, n) + (1,)*n), (n, n) + background.grid.shape)
    )
    g = background.perturb(h)
    return {
        "quadratic_form": quadratic_form_flat(h, background),
        "functional": functional_F(g, background)
    }

def rigidity_experiment(
    background: MetricField,
    trials: int,
    amplitude: float,
    seed: int,
    max_mode: int = 2,
    halvings: int = 2,
    verbose: bool = True
) -> RigidityReport:
    """samples random divergence free directions around a flat metric and records the sign
    of the quadratic form, the cubic remainder and its order under amplitude halving

    Args:
        background (MetricField): flat metric ḡ
        trials (int): number of random directions
        amplitude (float): largest sup-norm of h
        seed (int): base seed, every trial gets a derived one
        max_mode (int, optional): band limit of h. Defaults to 2.
        halvings (int, optional): amplitude halvings per trial. Defaults to 2.
        verbose (bool, optional): show a progress bar. Defaults to True.

    Returns:
        RigidityReport: report
    """
    if not background.is_constant():
        raise ValueError("The rigidity experiment needs a flat (constant) background metric")
    assert trials >= 1, f"trials must be >= 1, not {trials}"
    assert halvings >= 1, f"halvings must be >= 1, not {halvings}"
    seeds = child_seeds(seed, trials + 1)
    with ThreadPoolExecutor(max_workers=min(trials, workers())) as executor:
        futures = [executor.submit(run_trial, background, amplitude, s, max_mode, halvings) for s in seeds[:trials]]
        results: List[RigidityTrial] = []
        for future in tqdm(futures, total=trials, disable=not verbose, desc="Rigidity"):
            results.append(future.result())
    report = RigidityReport(
        trials=results,
        constant_mode=constant_mode_trial(background, amplitude, seeds[-1])
    )
    if verbose:
        print(f"> max quadratic form {report.max_quadratic_form:.3e}, min remainder order {report.min_order:.3f}, C fit {report.constant_fit:.3e}")
    return report
