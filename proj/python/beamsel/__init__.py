"""Beamspace MIMO beam selection.

Greedy decremental beam selection with rank-1 inverse downdates,
zero-forcing sum rates, leverage-score pre-selection and the norm/rate
guarantees relating the reduced system to the full one.
"""

from beamsel._core import (  # noqa: F401
    IdentityReport,
    InfeasibleSelectionError,
    LeverageScores,
    NumericalFailureError,
    SelectionResult,
    SingularGramError,
    __version__,
    bound_factor,
    decremental_select,
    dft_matrix,
    exhaustive_select,
    generate_beamspace_channel,
    generate_spatial_channel,
    hyperbola_profile,
    leverage_scores,
    pinv_fro_norm_sq,
    preselect,
    rate_lower_bound,
    run_sweep,
    selection_identities,
    selection_norm_bound,
    single_step_costs,
    spatial_frequency,
    steering_vector,
    sum_rate,
    zf_precoder,
)

__all__ = [
    "IdentityReport",
    "InfeasibleSelectionError",
    "LeverageScores",
    "NumericalFailureError",
    "SelectionResult",
    "SingularGramError",
    "__version__",
    "bound_factor",
    "decremental_select",
    "dft_matrix",
    "exhaustive_select",
    "generate_beamspace_channel",
    "generate_spatial_channel",
    "hyperbola_profile",
    "leverage_scores",
    "pinv_fro_norm_sq",
    "preselect",
    "rate_lower_bound",
    "run_sweep",
    "selection_identities",
    "selection_norm_bound",
    "single_step_costs",
    "spatial_frequency",
    "steering_vector",
    "sum_rate",
    "zf_precoder",
]
