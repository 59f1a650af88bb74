"""Joint antenna-placement and time-allocation optimizer for
wireless-powered networks with movable antennas.

The public surface re-exports the pieces most scripts need: system
parameters, channel generation, the continuous and discrete solvers,
baseline schemes, and the Monte-Carlo experiment harness.
"""

from .baselines import (
    ALL_SCHEMES,
    BaselineResult,
    fpa_no_compensation,
    fpa_with_compensation,
    movement_time,
    partially_ma,
    random_ma,
)
from .channel import (
    ChannelRealization,
    Position,
    channel_coefficient,
    generate_realization,
    receive_field_response,
    transmit_field_response,
)
from .continuous import (
    SolveResult,
    SolverOptions,
    lambert_w0,
    optimal_tau1,
    per_user_rates,
    solve_continuous,
)
from .discrete import CandidateGrid, build_grid, solve_discrete
from .harness import ExperimentSpec, run_experiment, spec_from_config, summarize
from .kernels import BACKEND
from .params import (
    SystemParams,
    default_params,
    load_config,
    params_from_config,
    validate_config,
)

__version__ = "0.1.0"

__all__ = [
    "ALL_SCHEMES",
    "BACKEND",
    "BaselineResult",
    "CandidateGrid",
    "ChannelRealization",
    "ExperimentSpec",
    "Position",
    "SolveResult",
    "SolverOptions",
    "SystemParams",
    "build_grid",
    "channel_coefficient",
    "default_params",
    "fpa_no_compensation",
    "fpa_with_compensation",
    "generate_realization",
    "lambert_w0",
    "load_config",
    "movement_time",
    "optimal_tau1",
    "params_from_config",
    "partially_ma",
    "per_user_rates",
    "random_ma",
    "receive_field_response",
    "run_experiment",
    "solve_continuous",
    "solve_discrete",
    "spec_from_config",
    "summarize",
    "transmit_field_response",
    "validate_config",
    "__version__",
]
