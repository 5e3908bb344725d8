import numpy as np
from src.qcurv import q_curvature
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Tuple
from src.fields import Field, MetricField, ScalarField, SymTensor2Field, VectorField, gradient_array, integrate
from src.tensor import divergence_array, dot_array, lie_derivative_metric, lower_index, scalar_curvature
from .gamma import gamma_array, gamma_star_array
from .functional import functional_F, quadratic_form_flat
from .second import second_variation_q
from .linearize import scalar_adjoint_array, scalar_variation_array

FD_STEPS = (1e-2, 1e-3)
NESTED_FD_STEPS = (2e-2, 1e-2)


@dataclass
class VariationReport:
    """outcome of one oracle: residuals, measured orders and the steps used"""
    name: str
    residuals: Dict[str, float]
    orders: Dict[str, float] = field(default_factory=dict)
    steps: Tuple[float, ...] = ()
    values: Dict[str, Field] = field(default_factory=dict, repr=False)
    notes: List[str] = field(default_factory=list)

    def __post_init__(self):
        for k, v in self.residuals.items():
            assert v >= 0 or np.isnan(v), f"Residual {k} is negative ({v})"

    @property
    def max_residual(self) -> float:
        return max(self.residuals.values()) if self.residuals else 0.0

    @property
    def min_order(self) -> float:
        return min(self.orders.values()) if self.orders else float("nan")

    def to_dict(self) -> Dict:
        return {
            "name": self.name,
            "residuals": dict(self.residuals),
            "orders": dict(self.orders),
            "steps": list(self.steps),
            "notes": list(self.notes)
        }


def convergence_order(err_coarse: float, err_fine: float, eps_coarse: float, eps_fine: float) -> float:
    """observed order p of err ~ eps^p between two steps"""
    if err_fine == 0:
        return float("inf")
    return float(np.log(err_coarse/err_fine)/np.log(eps_coarse/eps_fine))

def l2_norm(g: MetricField, values: np.ndarray) -> float:
    """L²(dv_g) norm of a scalar array or of a full 2-tensor array"""
    if values.ndim == g.grid.dim:
        density = values**2
    else:
        density = dot_array(g, values, values)
    return float(np.sqrt(integrate(ScalarField(g.grid, density), g)))

def _fd_against(
    name: str,
    exact: np.ndarray,
    evaluate: Callable[[MetricField], np.ndarray],
    g: MetricField,
    h: SymTensor2Field,
    steps: Tuple[float, ...]
) -> VariationReport:
    errors = []
    for eps in steps:
        fd = (evaluate(g.perturb(h, eps)) - evaluate(g.perturb(h, -eps)))/(2*eps)
        errors.append(float(np.max(np.abs(fd - exact))))
    residuals = {f"eps={eps:.0e}": e for eps, e in zip(steps, errors)}
    orders = {
        f"{steps[i]:.0e}->{steps[i+1]:.0e}": convergence_order(errors[i], errors[i+1], steps[i], steps[i+1])
        for i in range(len(steps) - 1)
    }
    return VariationReport(name=name, residuals=residuals, orders=orders, steps=tuple(steps))

def gamma_fd_check(g: MetricField, h: SymTensor2Field, steps: Tuple[float, ...] = FD_STEPS) -> VariationReport:
    """central differences of Q along g ± eps h against Γ_g h"""
    exact = gamma_array(g, h.matrix)
    return _fd_against("gamma-fd", exact, lambda m: q_curvature(m).values, g, h, steps)

def scalar_fd_check(g: MetricField, h: SymTensor2Field, steps: Tuple[float, ...] = FD_STEPS) -> VariationReport:
    """central differences of R along g ± eps h against R'"""
    exact = scalar_variation_array(g, h.matrix)
    return _fd_against("scalar-fd", exact, lambda m: scalar_curvature(m).values, g, h, steps)

def adjointness_check(g: MetricField, f: ScalarField, h: SymTensor2Field) -> VariationReport:
    """|∫ f Γh dv_g − ∫ ⟨Γ*f, h⟩ dv_g| / (‖f‖‖Γh‖ + ‖Γ*f‖‖h‖)"""
    H = h.matrix
    gamma_h = gamma_array(g, H)
    gamma_star_f = gamma_star_array(g, f.values)
    lhs = integrate(ScalarField(g.grid, f.values*gamma_h), g)
    rhs = integrate(ScalarField(g.grid, dot_array(g, gamma_star_f, H)), g)
    scale = l2_norm(g, f.values)*l2_norm(g, gamma_h) + l2_norm(g, gamma_star_f)*l2_norm(g, H)
    return VariationReport(
        name="adjoint",
        residuals={"relative": abs(lhs - rhs)/scale if scale > 0 else abs(lhs - rhs)},
        notes=[f"<f, Γh> = {lhs:.12e}", f"<Γ*f, h> = {rhs:.12e}"]
    )

def scalar_adjointness_check(g: MetricField, f: ScalarField, h: SymTensor2Field) -> VariationReport:
    """same pairing for the scalar curvature linearization and its adjoint"""
    H = h.matrix
    r_prime = scalar_variation_array(g, H)
    adjoint = scalar_adjoint_array(g, f.values)
    lhs = integrate(ScalarField(g.grid, f.values*r_prime), g)
    rhs = integrate(ScalarField(g.grid, dot_array(g, adjoint, H)), g)
    scale = l2_norm(g, f.values)*l2_norm(g, r_prime) + l2_norm(g, adjoint)*l2_norm(g, H)
    return VariationReport(
        name="scalar-adjoint",
        residuals={"relative": abs(lhs - rhs)/scale if scale > 0 else abs(lhs - rhs)}
    )

def diffeo_check(g: MetricField, X: VectorField, f: ScalarField) -> VariationReport:
    """Γ(L_X g) = X(Q) and δ Γ* f = ½ f dQ

    Args:
        g (MetricField): metric
        X (VectorField): vector field with an upper index
        f (ScalarField): potential
    """
    if X.variance != "upper":
        raise ValueError("diffeo_check takes X with an upper index")
    dQ = gradient_array(q_curvature(g).values, g.grid)
    lie = lie_derivative_metric(g, lower_index(g, X))
    along = gamma_array(g, lie.matrix) - np.einsum("i...,i...->...", X.values, dQ)
    divergence = divergence_array(g, gamma_star_array(g, f.values), 2) - 0.5*f.values*dQ
    return VariationReport(
        name="diffeo",
        residuals={
            "gamma_lie": float(np.max(np.abs(along))),
            "divergence": float(np.max(np.abs(divergence)))
        }
    )

def second_variation_fd_check(
    g: MetricField,
    h: SymTensor2Field,
    steps: Tuple[float, ...] = NESTED_FD_STEPS
) -> VariationReport:
    """(Q(g+εh) − 2Q(g) + Q(g−εh))/ε² against second_variation_q, relative sup errors"""
    exact = second_variation_q(g, h).values
    scale = max(float(np.max(np.abs(exact))), np.finfo(float).tiny)
    q0 = q_curvature(g).values
    errors = []
    for eps in steps:
        nested = (q_curvature(g.perturb(h, eps)).values - 2*q0 + q_curvature(g.perturb(h, -eps)).values)/eps**2
        errors.append(float(np.max(np.abs(nested - exact)))/scale)
    return VariationReport(
        name="second-variation-fd",
        residuals={f"eps={eps:.0e}": e for eps, e in zip(steps, errors)},
        orders={f"{steps[0]:.0e}->{steps[1]:.0e}": convergence_order(errors[0], errors[1], steps[0], steps[1])},
        steps=tuple(steps),
        notes=["Ric'' and R'' from differences of the first variations"]
    )

def functional_first_variation(background: MetricField, h: SymTensor2Field, eps: float = 1e-5) -> float:
    """(ℱ(ḡ+εh) − ℱ(ḡ−εh))/2ε with f = 1"""
    return (functional_F(background.perturb(h, eps), background) - functional_F(background.perturb(h, -eps), background))/(2*eps)

def functional_second_variation_check(background: MetricField, h: SymTensor2Field, eps: float = 1e-2) -> VariationReport:
    """quadratic_form_flat against nested differences of ℱ and against ∫ Q'' dv_ḡ"""
    form = quadratic_form_flat(h, background)
    nested = (
        functional_F(background.perturb(h, eps), background)
        - 2*functional_F(background, background)
        + functional_F(background.perturb(h, -eps), background)
    )/eps**2
    integrated = integrate(second_variation_q(background, h), background)
    scale = max(abs(form), np.finfo(float).tiny)
    return VariationReport(
        name="second-variation",
        residuals={
            "nested_fd": abs(nested - form)/scale,
            "integrated": abs(integrated - form)/scale
        },
        steps=(eps,),
        notes=[f"quadratic form = {form:.12e}", f"nested fd = {nested:.12e}", f"∫Q'' = {integrated:.12e}"]
    )
