"""Paths, numerical parallel transport and braid group monodromy."""
from .integrate import (
    DEFAULT_BACKEND,
    DEFAULT_TOL,
    TransportError,
    TransportResult,
    available_backends,
    parallel_transport,
    tolerance_sweep,
)
from .monodromy import (
    Equivariance,
    MonodromyRep,
    ResidualReport,
    bmw_check,
    bmw_r,
    braid_residuals,
    default_words,
    hecke_check,
    hecke_parameter,
    hecke_residuals,
    kd_compare,
    local_model,
    monodromy_rep,
    permutation_equivariance,
    reflection_equivariance,
    spectral_distance,
    spectrum,
    tits_equivariance,
    verify_braid_relations,
)
from .paths import (
    ClearanceError,
    PathSpec,
    Segment,
    braid_path_cartan,
    braid_path_config,
    loop_path,
    reflect_point,
)
