from .grid import Grid
from .field import (
    Field,
    ScalarField,
    VectorField,
    SymTensor2Field,
    MetricField,
    pack_symmetric,
    unpack_symmetric,
    symmetric_index,
    symmetrize
)
from .spectral import (
    forward,
    backward,
    apply_symbol,
    derivative_array,
    gradient_array,
    partial_derivative,
    integrate,
    volume,
    mean,
    random_band_limited,
    random_metric,
    resample,
    spectrum,
    FIELD_KINDS
)
