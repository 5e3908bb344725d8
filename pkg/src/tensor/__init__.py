from .connection import (
    Christoffel,
    christoffel,
    covariant_derivative,
    covariant_derivative_array,
    hessian,
    hessian_array,
    differential
)
from .curvature import (
    Riemann4,
    Curvature,
    riemann,
    ricci_curvature,
    scalar_curvature,
    schouten,
    weyl,
    curvature,
    cotton
)
from .algebra import (
    raise_index,
    lower_index,
    raise_matrix,
    raise_all,
    trace,
    trace_array,
    traceless,
    dot,
    dot_array,
    product_x,
    product_x_array,
    rm_dot,
    rm_dot_array,
    norm_squared
)
from .operators import (
    laplacian,
    laplacian_array,
    divergence_delta,
    divergence_array,
    double_divergence,
    lie_derivative_metric,
    lie_derivative_array,
    lichnerowicz,
    lichnerowicz_array,
    gradient
)
