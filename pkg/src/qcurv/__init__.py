from .constants import Constants, ExactConstants, constants, exact_constants
from .q import q_curvature, paneitz, paneitz_array
from .conformal import (
    conformal_metric,
    conformal_q,
    conformal_paneitz,
    conformal_q_check,
    conformal_paneitz_check
)
