from .projection import Projection, flat_symbols, project_divergence_free
from .linear import inverse_bilaplacian, linear_solve_flat
from .checkpoint import SolverCheckpoint
from .solver import PrescribeSolver, SolveReport, prescribe_q
from .rigidity import (
    RigidityTrial,
    RigidityReport,
    hessian_norm_squared,
    random_divergence_free,
    run_trial,
    constant_mode_trial,
    rigidity_experiment
)
