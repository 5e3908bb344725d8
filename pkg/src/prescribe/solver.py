import numpy as np
from dataclasses import dataclass, field
from src.qcurv import q_curvature
from typing import Dict, List, Optional, Tuple
from src.utils import timeit, TimeMonitor
from src.tensor import gradient, lie_derivative_metric, lower_index
from src.fields import MetricField, ScalarField, VectorField, gradient_array, mean
from .checkpoint import SolverCheckpoint
from .linear import linear_solve_flat


@dataclass
class SolveReport:
    """outcome of prescribe_q"""
    iterations: int
    residuals: List[float]
    mean_defects: List[float]
    final_metric: MetricField
    gauge: VectorField
    gauge_coefficients: List[float]
    scaling: float
    converged: bool
    verified_residual: float
    scaling_check: Dict[str, float] = field(default_factory=dict)
    elapsed: float = 0.0

    @property
    def mean_defect(self) -> float:
        return self.mean_defects[-1] if self.mean_defects else 0.0

    def to_dict(self) -> Dict:
        grid = self.final_metric.grid
        return {
            "n": grid.dim,
            "resolution": list(grid.resolution),
            "iterations": self.iterations,
            "residuals": list(self.residuals),
            "mean_defect": self.mean_defect,
            "mean_defects": list(self.mean_defects),
            "gauge_coefficients": list(self.gauge_coefficients),
            "scaling": self.scaling,
            "converged": self.converged,
            "verified_residual": self.verified_residual,
            "scaling_check": dict(self.scaling_check),
            "elapsed": self.elapsed
        }


class PrescribeSolver:
    
    def __init__(
        self,
        background: MetricField,
        psi: ScalarField,
        tol: float = 1e-9,
        max_iter: int = 30,
        checkpoint: Optional[SolverCheckpoint] = None,
        verbose: bool = True
    ) -> None:
        """quasi-Newton solver for Q_g = ψ near a flat metric.

        Each step splits the residual r = ψ − Q_g between a gauge direction L_X g,
        X = ∇ψ, whose linearization dQ_g(X) is exact at the iterate and whose
        coefficient removes the mean of r against dv_ḡ, and the frozen conformal
        inverse of Γ_ḡ applied to the remaining zero mean part.

        Args:
            background (MetricField): flat metric ḡ
            psi (ScalarField): zero mean target
            tol (float, optional): sup-norm tolerance on Q_g − ψ. Defaults to 1e-9.
            max_iter (int, optional): max number of iterations. Defaults to 30.
            checkpoint (SolverCheckpoint, optional): best iterate tracker. Defaults to None.
            verbose (bool, optional): print one status line per iteration. Defaults to True.
        """
        if not background.is_constant():
            raise ValueError("The prescribing solver needs a flat (constant) background metric")
        if psi.grid != background.grid:
            raise ValueError(f"Grid mismatch: {psi.grid} vs {background.grid}")
        assert tol > 0, f"Tolerance must be positive, not {tol}"
        assert max_iter >= 1, f"max_iter must be >= 1, not {max_iter}"
        scale = max(1.0, psi.sup_norm())
        if abs(mean(psi, background)) > 1e-12*scale:
            raise ValueError(f"ψ must have zero mean against dv_ḡ, mean is {mean(psi, background):.3e}")
        self.background = background
        self.psi = psi
        self.tol = tol
        self.max_iter = max_iter
        self.checkpoint = SolverCheckpoint() if checkpoint is None else checkpoint
        self.verbose = verbose
        self.X = gradient(background, psi)
        grad_psi = gradient_array(psi.values, psi.grid)
        self.grad_scale = mean(ScalarField(psi.grid, np.einsum("i...,i...->...", self.X.values, grad_psi)), background)

    def residual(self, g: MetricField) -> Tuple[float, float]:
        """sup |ψ − Q_g| and |mean(Q_g − ψ)| against dv_ḡ"""
        r = ScalarField(g.grid, self.psi.values - q_curvature(g).values)
        return r.sup_norm(), abs(mean(r, self.background))

    @timeit
    def newton_step(self, g: MetricField) -> Tuple[MetricField, float]:
        """one correction of g

        Args:
            g (MetricField): current iterate

        Returns:
            Tuple[MetricField, float]: next iterate, gauge coefficient used
        """
        Q = q_curvature(g).values
        r = self.psi.values - Q
        m = mean(ScalarField(g.grid, r), self.background)
        d = np.einsum("i...,i...->...", self.X.values, gradient_array(Q, g.grid))
        d_mean = mean(ScalarField(g.grid, d), self.background)
        # the gauge direction carries the mean once Q_g is aligned with ψ
        c = m/d_mean if d_mean > 0.5*self.grad_scale else 0.0
        rhs = r - c*d
        rhs = rhs - mean(ScalarField(g.grid, rhs), self.background)
        h = linear_solve_flat(self.background, ScalarField(g.grid, rhs))
        if c != 0.0:
            h = h + c*lie_derivative_metric(g, lower_index(g, self.X))
        return g.perturb(h), c

    def fit(self) -> SolveReport:
        """runs the iteration until the residual is below tolerance, patience is over or max_iter is reached"""
        g = self.background
        residual, defect = self.residual(g)
        residuals, defects, coefficients = [residual], [defect], []
        time_monitor = TimeMonitor(self.max_iter)
        self.checkpoint.step(0, {"residual": residual, "mean_defect": defect}, g)
        iteration = 0
        while residual > self.tol and iteration < self.max_iter:
            iteration += 1
            (g, c), t_step = self.newton_step(g)
            residual, defect = self.residual(g)
            residuals.append(residual)
            defects.append(defect)
            coefficients.append(c)
            time_monitor.update(t_step)
            self.checkpoint.step(iteration, {"residual": residual, "mean_defect": defect}, g)
            if self.verbose:
                print("> iter=[{}/{}]-residual={:.3e}-mean_defect={:.3e}-gauge={:.3e}-time={}<{}".format(
                    iteration,
                    self.max_iter,
                    residual,
                    defect,
                    c,
                    time_monitor.elapsed(),
                    time_monitor.estimate()
                ))
            if self.checkpoint.patience_over:
                if self.verbose:
                    print(f"> residual did not improve for {self.checkpoint.patience} iterations, stopping.")
                break
        best = self.checkpoint.best_metric
        best_residual = self.checkpoint.best_val
        return SolveReport(
            iterations=iteration,
            residuals=residuals,
            mean_defects=defects,
            final_metric=best,
            gauge=VectorField(self.X.grid, self.X.values*sum(coefficients), "upper"),
            gauge_coefficients=coefficients,
            scaling=1.0,
            converged=best_residual <= self.tol,
            verified_residual=float("nan"),
            elapsed=time_monitor.total
        )


def prescribe_q(
    background: MetricField,
    psi: ScalarField,
    tol: float = 1e-9,
    max_iter: int = 30,
    max_amplitude: Optional[float] = None,
    scaling_factor: float = 2.0,
    patience: int = 5,
    output_dir: Optional[str] = None,
    verbose: bool = True
) -> SolveReport:
    """finds g near ḡ with Q_g = ψ, rescaling large targets into the solver's basin

    A target with sup-norm above max_amplitude is shrunk to λ²ψ, solved for g₀,
    and mapped back by g = λ g₀ since Q(λ g₀) = λ^{-2} Q(g₀).

    Args:
        background (MetricField): flat metric ḡ
        psi (ScalarField): zero mean target
        tol (float, optional): sup-norm tolerance. Defaults to 1e-9.
        max_iter (int, optional): max number of iterations. Defaults to 30.
        max_amplitude (float, optional): largest sup-norm solved directly. Defaults to None.
        scaling_factor (float, optional): factor of the Q(λg) = λ^{-2} Q(g) recheck. Defaults to 2.0.
        patience (int, optional): non improving iterations before stopping. Defaults to 5.
        output_dir (str, optional): where to write the best metric. Defaults to None.
        verbose (bool, optional): print progress. Defaults to True.

    Returns:
        SolveReport: report, with final metric verified through a fresh curvature pipeline
    """
    scaling = 1.0
    target = psi
    if max_amplitude is not None and psi.sup_norm() > max_amplitude:
        scaling = float(np.sqrt(max_amplitude/psi.sup_norm()))
        target = psi*scaling**2
        if verbose:
            print(f"> target sup-norm {psi.sup_norm():.3e} above {max_amplitude:.3e}, solving for λ²ψ with λ={scaling:.6f}")
    solver = PrescribeSolver(
        background=background,
        psi=target,
        tol=tol*scaling**2,
        max_iter=max_iter,
        checkpoint=SolverCheckpoint(output_dir=output_dir, patience=patience),
        verbose=verbose
    )
    report = solver.fit()
    final = report.final_metric if scaling == 1.0 else report.final_metric.scaled(scaling)
    # fresh metric, nothing memoized from the iteration
    fresh = MetricField(final.grid, np.array(final.values))
    q_final = q_curvature(fresh).values
    verified = float(np.max(np.abs(q_final - psi.values)))
    q_scaled = q_curvature(fresh.scaled(scaling_factor)).values
    expected = q_final/scaling_factor**2
    relative = float(np.max(np.abs(q_scaled - expected)))/max(float(np.max(np.abs(expected))), np.finfo(float).tiny)
    report.final_metric = final
    report.scaling = scaling
    report.verified_residual = verified
    report.scaling_check = {"factor": scaling_factor, "relative_residual": relative}
    report.converged = report.converged and verified <= tol
    if verbose:
        status = "converged" if report.converged else "did not converge"
        print(f"> solver {status} in {report.iterations} iterations, verified residual {verified:.3e}")
    return report
