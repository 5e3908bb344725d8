from .background import (
    EinsteinBackground,
    ModelPotential,
    InconsistentModelError,
    MODELS,
    POTENTIALS
)
from .identities import (
    PiMultiple,
    QSingularReport,
    SpectralCheck,
    VacuumStaticReport,
    einstein_q,
    sphere_volume,
    total_q,
    gauss_bonnet_sphere4,
    gamma_star_coefficient,
    verify_q_singular,
    sphere_spectral_check,
    sphere_kernel_dimension,
    verify_vacuum_static,
    nonsingular_negative_einstein_check,
    sectional_curvature_3d,
    identity_table
)
