import os
import numpy as np
from tqdm import tqdm
from fractions import Fraction
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Callable, Dict, List, Optional, Tuple
from src.utils import child_seeds, timeit, workers
from src.qcurv import (
    conformal_paneitz_check,
    conformal_q_check,
    exact_constants,
    q_curvature
)
from src.fields import (
    Grid,
    MetricField,
    ScalarField,
    SymTensor2Field,
    integrate,
    random_band_limited,
    random_metric
)
from src.tensor import divergence_delta, lie_derivative_metric, norm_squared, weyl
from src.variations import (
    adjointness_check,
    diffeo_check,
    functional_first_variation,
    functional_second_variation_check,
    gamma_fd_check,
    scalar_adjointness_check,
    scalar_fd_check,
    second_variation_fd_check,
    trace_gamma_star
)
from src.closed_form import (
    EinsteinBackground,
    einstein_q,
    gauss_bonnet_sphere4,
    identity_table,
    sphere_spectral_check
)
from src.prescribe import (
    prescribe_q,
    project_divergence_free,
    random_divergence_free,
    rigidity_experiment
)
from src.io import save_field
from .config import ExperimentConfig
from .report import Check, ExperimentResult

FD_ORDER = 1.9
SCALING_TOL = 1e-9
RIGIDITY_ORDER = 2.9
FIRST_VARIATION_TOL = 1e-8
CONSTANTS_MAX_DIM = 64

Case = Tuple[Grid, int, Any, float]

def torus_grid(config: ExperimentConfig, n: int) -> Grid:
    return Grid.torus(n, config.grid_resolution(n))

def run_cases(
    config: ExperimentConfig,
    case: Callable[[ExperimentConfig, Grid, int], Any],
    desc: str,
    grid_fn: Callable[[ExperimentConfig, int], Grid] = torus_grid
) -> List[Case]:
    """runs case(config, grid, seed) for every dimension and seed, concurrently, in a deterministic order

    Returns:
        List[Case]: (grid, seed, result, elapsed) in (n, seed) order
    """
    cases = [(grid_fn(config, n), seed) for n in config.n for seed in config.seeds]
    timed = timeit(case)
    with ThreadPoolExecutor(max_workers=max(1, min(len(cases), workers()))) as executor:
        futures = [executor.submit(timed, config, grid, seed) for grid, seed in cases]
        out = []
        for (grid, seed), future in tqdm(zip(cases, futures), total=len(cases), disable=not config.verbose, desc=desc):
            value, elapsed = future.result()
            out.append((grid, seed, value, elapsed))
    return out

def _label(name: str, grid: Grid, seed: Optional[int] = None) -> str:
    label = f"{name}/n={grid.dim}/res={'x'.join(str(r) for r in grid.resolution)}"
    return label if seed is None else f"{label}/seed={seed}"

###### verify ######

def _adjoint_case(config: ExperimentConfig, grid: Grid, seed: int):
    s_metric, s_f, s_h = child_seeds(seed, 3)
    g = random_metric(grid, config.amplitude, config.max_mode, s_metric)
    f = random_band_limited(grid, "scalar", config.max_mode, 1.0, s_f)
    h = random_band_limited(grid, "sym2", config.max_mode, 1.0, s_h)
    return adjointness_check(g, f, h), scalar_adjointness_check(g, f, h)

def verify_adjoint(config: ExperimentConfig) -> ExperimentResult:
    result = ExperimentResult()
    for grid, seed, (q_report, r_report), elapsed in run_cases(config, _adjoint_case, "Adjoint"):
        result.add(Check(_label("adjoint", grid, seed), q_report.max_residual, config.tol, details=q_report.to_dict(), elapsed=elapsed), grid)
        result.add(Check(_label("scalar-adjoint", grid, seed), r_report.max_residual, config.tol, details=r_report.to_dict()), grid)
    return result

def _gamma_fd_case(config: ExperimentConfig, grid: Grid, seed: int):
    s_metric, s_h = child_seeds(seed, 2)
    g = random_metric(grid, config.amplitude, config.max_mode, s_metric)
    h = random_band_limited(grid, "sym2", config.max_mode, 1.0, s_h)
    return gamma_fd_check(g, h), scalar_fd_check(g, h)

def verify_gamma_fd(config: ExperimentConfig) -> ExperimentResult:
    result = ExperimentResult()
    for grid, seed, (q_report, r_report), elapsed in run_cases(config, _gamma_fd_case, "Gamma FD"):
        result.add(Check(_label("gamma-fd", grid, seed), q_report.min_order, FD_ORDER, "lower", q_report.to_dict(), elapsed), grid)
        result.add(Check(_label("scalar-fd", grid, seed), r_report.min_order, FD_ORDER, "lower", r_report.to_dict()), grid)
    return result

def _trace_case(config: ExperimentConfig, grid: Grid, seed: int):
    s_metric, s_f = child_seeds(seed, 2)
    g = random_metric(grid, config.amplitude, config.max_mode, s_metric)
    f = random_band_limited(grid, "scalar", config.max_mode, 1.0, s_f)
    identity = trace_gamma_star(g, f)
    # 𝓛 1 = −2Q
    one = trace_gamma_star(g, ScalarField.constant(grid, 1.0))
    Q = q_curvature(g).values
    defect = float(np.max(np.abs(one.trace.values + 2*Q)))/max(float(np.max(np.abs(Q))), np.finfo(float).tiny)
    return identity.relative_residual, defect

def verify_trace(config: ExperimentConfig) -> ExperimentResult:
    result = ExperimentResult()
    for grid, seed, (relative, defect), elapsed in run_cases(config, _trace_case, "Trace"):
        result.add(Check(_label("trace", grid, seed), relative, config.tol, elapsed=elapsed), grid)
        result.add(Check(_label("trace-of-one", grid, seed), defect, config.tol), grid)
    return result

def conformal_grid(config: ExperimentConfig, n: int) -> Grid:
    """isotropic up to n = 4; from n = 5 on the factor and the background depend on x₁ only, the other axes are coarse"""
    res = config.grid_resolution(n)
    if n < 5:
        return Grid.torus(n, res)
    return Grid.torus(n, (res,) + (max(8, res//2),)*(n - 1))

def _axis_profile(grid: Grid, max_mode: int, seed: int) -> np.ndarray:
    """random trigonometric polynomial of x₁ with sup-norm 1, broadcast over the grid"""
    rng = np.random.default_rng(seed)
    x = grid.coordinates()[0]
    k = 2*np.pi/grid.period[0]
    profile = sum(
        rng.standard_normal()*np.cos(m*k*x) + rng.standard_normal()*np.sin(m*k*x)
        for m in range(1, max(1, max_mode) + 1)
    )
    return profile/np.max(np.abs(profile))

def axis_metric(grid: Grid, amplitude: float, max_mode: int, seed: int) -> MetricField:
    """diagonal metric 1 + amplitude * w_a * p(x₁) on the axes x₂..x_n, weights w_a alternating 1 and ½,
    curved whenever p is not constant"""
    profile = _axis_profile(grid, max_mode, seed)
    h = np.zeros((grid.dim, grid.dim) + grid.shape)
    for a in range(1, grid.dim):
        h[a, a] = (1 + a % 2)/2 * profile
    return MetricField.flat(grid).perturb(SymTensor2Field.from_matrix(grid, h), amplitude)

def _conformal_case(config: ExperimentConfig, grid: Grid, seed: int):
    n = grid.dim
    s_metric, s_u, s_phi = child_seeds(seed, 3)
    if n >= 5:
        g = axis_metric(grid, config.amplitude/5, config.max_mode, s_metric)
        w = _axis_profile(grid, config.max_mode, s_u)
        phi = random_band_limited(grid, "scalar", 1, 1.0, s_phi)
    else:
        g = random_metric(grid, config.amplitude/5, config.max_mode, s_metric)
        w = random_band_limited(grid, "scalar", config.max_mode, 1.0, s_u).values
        phi = random_band_limited(grid, "scalar", config.max_mode, 1.0, s_phi)
    u = ScalarField(grid, config.amplitude*w if n == 4 else 1 + config.amplitude*w)
    return conformal_q_check(g, u), conformal_paneitz_check(g, u, phi)

def verify_conformal(config: ExperimentConfig) -> ExperimentResult:
    result = ExperimentResult()
    for grid, seed, (q_residual, p_residual), elapsed in run_cases(config, _conformal_case, "Conformal", conformal_grid):
        result.add(Check(_label("conformal-q", grid, seed), q_residual, config.tol, elapsed=elapsed), grid)
        result.add(Check(_label("conformal-paneitz", grid, seed), p_residual, config.tol), grid)
    return result

def _diffeo_case(config: ExperimentConfig, grid: Grid, seed: int):
    s_metric, s_X, s_f = child_seeds(seed, 3)
    g = random_metric(grid, config.amplitude, config.max_mode, s_metric)
    X = random_band_limited(grid, "vector", config.max_mode, 1.0, s_X, variance="upper")
    f = random_band_limited(grid, "scalar", config.max_mode, 1.0, s_f)
    return diffeo_check(g, X, f)

def verify_diffeo(config: ExperimentConfig) -> ExperimentResult:
    result = ExperimentResult()
    for grid, seed, report, elapsed in run_cases(config, _diffeo_case, "Diffeo"):
        for name, value in report.residuals.items():
            result.add(Check(_label(f"diffeo-{name}", grid, seed), value, config.tol, elapsed=elapsed), grid)
            elapsed = 0.0
    return result

def _decomposition_case(config: ExperimentConfig, grid: Grid, seed: int):
    s_matrix, s_h, s_Y = child_seeds(seed, 3)
    rng = np.random.default_rng(s_matrix)
    S = rng.standard_normal((grid.dim, grid.dim))
    background = MetricField.flat(grid, np.eye(grid.dim) + config.amplitude*(S + S.T)/np.max(np.abs(S + S.T)))
    h = random_band_limited(grid, "sym2", config.max_mode, 1.0, s_h)
    Y = random_band_limited(grid, "vector", config.max_mode, 1.0, s_Y)
    projection = project_divergence_free(background, h)
    again = project_divergence_free(background, projection.h_df).h_df
    lie = lie_derivative_metric(background, Y)
    annihilated = project_divergence_free(background, lie).h_df
    return {
        "idempotence": (again - projection.h_df).sup_norm()/h.sup_norm(),
        "annihilation": annihilated.sup_norm()/lie.sup_norm(),
        "divergence": divergence_delta(background, projection.h_df).sup_norm()/h.sup_norm()
    }

def verify_decomposition(config: ExperimentConfig) -> ExperimentResult:
    result = ExperimentResult()
    for grid, seed, residuals, elapsed in run_cases(config, _decomposition_case, "Decomposition"):
        for name, value in residuals.items():
            result.add(Check(_label(f"decomposition-{name}", grid, seed), value, config.tol, elapsed=elapsed), grid)
            elapsed = 0.0
    return result

###### closed form and topology ######

def _gbc_case(config: ExperimentConfig, grid: Grid, seed: int) -> Dict[str, float]:
    g = random_metric(grid, config.amplitude, config.max_mode, seed)
    Q = q_curvature(g).values
    W2 = norm_squared(g, weyl(g)).values
    total = integrate(ScalarField(grid, Q + 0.25*W2), g)
    scale = integrate(ScalarField(grid, np.abs(Q) + 0.25*W2), g)
    return {"integral": total, "scale": scale, "defect": abs(total)/scale if scale > 0 else abs(total)}

def gbc(config: ExperimentConfig) -> ExperimentResult:
    result = ExperimentResult()
    for grid, seed, values, elapsed in run_cases(config, _gbc_case, "Gauss-Bonnet-Chern"):
        result.add(Check(_label("gbc-torus", grid, seed), values["defect"], config.tol, details=values, elapsed=elapsed), grid)
    unit = einstein_q(EinsteinBackground.sphere(4))
    total, euler = gauss_bonnet_sphere4()
    result.add(Check("gbc-sphere/unit-q", abs(float(unit - 6)), 0.0, details={"Q": str(unit)}))
    result.add(Check(
        "gbc-sphere/total",
        abs(float(total.coefficient - euler.coefficient)) + abs(total.power - euler.power),
        0.0,
        details={"total": str(total), "euler": str(euler)}
    ))
    return result

def models(config: ExperimentConfig) -> ExperimentResult:
    result = ExperimentResult(dims=list(config.n))
    cancellation = [abs(exact_constants(n).cancellation()) for n in range(3, CONSTANTS_MAX_DIM + 1)]
    result.add(Check("constants/cancellation", float(max(cancellation)), 0.0, details={"dims": f"3..{CONSTANTS_MAX_DIM}"}))
    signs = sum(
        int(exact_constants(n).Lambda >= 0) + int(exact_constants(n).alpha <= 0)
        for n in range(3, CONSTANTS_MAX_DIM + 1)
    )
    result.add(Check("constants/signs", float(signs), 0.0))
    rows = identity_table(config.n)
    for row in tqdm(rows, disable=not config.verbose, desc="Models"):
        label = f"models/{row['model']}/n={row['n']}"
        result.add(Check(f"{label}/q-singular", float(Fraction(row["q_singular_residual"])), 0.0))
        result.add(Check(f"{label}/vacuum-static", float(Fraction(row["vacuum_static_residual"])), 0.0))
        if row["spectral_residual"] != "":
            result.add(Check(f"{label}/spectral", float(Fraction(row["spectral_residual"])), 0.0))
    if 4 in config.n:
        spectral = sphere_spectral_check(4)
        result.add(Check("models/sphere/n=4/eigenvalue", abs(float(spectral.eigenvalue - 24)), 0.0, details={"eigenvalue": str(spectral.eigenvalue)}))
    result.rows = rows
    return result

###### solver, second variation and rigidity ######

def prescribe(config: ExperimentConfig) -> ExperimentResult:
    result = ExperimentResult()
    for n in config.n:
        grid = torus_grid(config, n)
        background = MetricField.flat(grid)
        for seed in config.seeds:
            psi = random_band_limited(grid, "scalar", config.max_mode, config.amplitude, seed, zero_mean=True)
            if config.verbose:
                print(f"> prescribing Q on T^{n} res {grid.resolution[0]}, seed={seed}, ‖ψ‖∞={psi.sup_norm():.3e}")
            run_dir = os.path.join(config.output, f"prescribe-n={n}-seed={seed}")
            report, elapsed = timeit(prescribe_q)(
                background,
                psi,
                tol=config.tol,
                max_iter=config.max_iter,
                output_dir=run_dir,
                verbose=config.verbose
            )
            save_field(os.path.join(run_dir, "final_metric.npz"), report.final_metric)
            details = report.to_dict()
            details.pop("elapsed")
            details["seed"] = seed
            result.add(Check(_label("prescribe", grid, seed), report.verified_residual, config.tol, details=details, elapsed=elapsed), grid)
            result.add(Check(_label("prescribe-scaling", grid, seed), report.scaling_check["relative_residual"], SCALING_TOL), grid)
            increases = sum(int(b >= a) for a, b in zip(report.residuals[2:], report.residuals[3:]))
            result.add(Check(_label("prescribe-monotone", grid, seed), float(increases), 0.0), grid)
            for k, (residual, defect) in enumerate(zip(report.residuals, report.mean_defects)):
                result.rows.append({"n": n, "seed": seed, "iteration": k, "residual": residual, "mean_defect": defect})
    return result

def _secondvar_case(config: ExperimentConfig, grid: Grid, seed: int):
    s_h, s_metric, s_k = child_seeds(seed, 3)
    background = MetricField.flat(grid)
    h = random_divergence_free(background, config.amplitude, s_h, config.max_mode)
    functional = functional_second_variation_check(background, h)
    first = functional_first_variation(background, h)
    g = random_metric(grid, config.amplitude, config.max_mode, s_metric)
    k = random_band_limited(grid, "sym2", config.max_mode, 1.0, s_k)
    pointwise = second_variation_fd_check(g, k)
    return functional, first, pointwise

def secondvar(config: ExperimentConfig) -> ExperimentResult:
    result = ExperimentResult()
    for grid, seed, (functional, first, pointwise), elapsed in run_cases(config, _secondvar_case, "Second variation"):
        for name, value in functional.residuals.items():
            result.add(Check(_label(f"secondvar-{name}", grid, seed), value, config.tol, details=functional.to_dict(), elapsed=elapsed), grid)
            elapsed = 0.0
        result.add(Check(_label("secondvar-first-variation", grid, seed), abs(first), FIRST_VARIATION_TOL), grid)
        result.add(Check(_label("secondvar-pointwise-order", grid, seed), pointwise.min_order, FD_ORDER, "lower", pointwise.to_dict()), grid)
    return result

def rigidity(config: ExperimentConfig) -> ExperimentResult:
    result = ExperimentResult()
    for n in config.n:
        grid = torus_grid(config, n)
        background = MetricField.flat(grid)
        for seed in config.seeds:
            report, elapsed = timeit(rigidity_experiment)(
                background,
                trials=config.trials,
                amplitude=config.amplitude,
                seed=seed,
                max_mode=config.max_mode,
                halvings=config.halvings,
                verbose=config.verbose
            )
            negative = sum(int(t.quadratic_form < -config.tol) for t in report.trials)
            result.add(Check(_label("rigidity-max-form", grid, seed), report.max_quadratic_form, config.tol, elapsed=elapsed), grid)
            result.add(Check(_label("rigidity-strictly-negative", grid, seed), float(len(report.trials) - negative), 0.0), grid)
            result.add(Check(_label("rigidity-order", grid, seed), report.min_order, RIGIDITY_ORDER, "lower", {"constant_fit": report.constant_fit}), grid)
            constant = abs(report.constant_mode["quadratic_form"]) + abs(report.constant_mode["functional"])
            result.add(Check(_label("rigidity-constant-mode", grid, seed), constant, config.tol, details=dict(report.constant_mode)), grid)
            result.rows.extend({"n": n, **row} for row in report.rows())
    return result

EXPERIMENTS = {
    "verify_adjoint": verify_adjoint,
    "verify_gamma_fd": verify_gamma_fd,
    "verify_trace": verify_trace,
    "verify_conformal": verify_conformal,
    "verify_diffeo": verify_diffeo,
    "verify_decomposition": verify_decomposition,
    "gbc": gbc,
    "models": models,
    "prescribe": prescribe,
    "rigidity": rigidity,
    "secondvar": secondvar
}
