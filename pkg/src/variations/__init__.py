from .linearize import (
    ScalarVariation,
    linearize_scalar,
    gamma_scalar,
    gamma_scalar_star,
    vacuum_static
)
from .gamma import (
    TraceIdentity,
    gamma,
    gamma_array,
    gamma_star,
    gamma_star_array,
    trace_gamma_star,
    principal_symbol
)
from .second import second_variation_q, curvature_second_variations
from .functional import functional_F, functional_G, quadratic_form_flat
from .oracle import (
    VariationReport,
    convergence_order,
    l2_norm,
    gamma_fd_check,
    scalar_fd_check,
    adjointness_check,
    scalar_adjointness_check,
    diffeo_check,
    second_variation_fd_check,
    functional_first_variation,
    functional_second_variation_check
)
