"""Traffic balancing toolkit for a dual-band small cell coexisting with a
macro cell on its licensed carrier and with WiFi on an unlicensed channel."""

from .balancer import (
    BalancerInput,
    Decision,
    InfeasibleInputError,
    KktCertificate,
    NoFeasibleCandidateError,
    UndefinedUtilityError,
    alpha_single_sue,
    check_kkt,
    grid_oracle,
    solve_candidate,
    solve_holistic,
    utility_log,
)
from .baselines import BaselineCase, solve_case, solve_pf_1d
from .metrics import MetricsReport, efficiency, jain_index, summarize_runs
from .radio import (
    PathLossParams,
    RadioEnvironment,
    RatePrimitives,
    WifiMacParams,
    bianchi_tau,
    dbm_to_watts,
    epoch_throughputs,
    path_loss,
    shannon_rate,
    sinr,
    watts_to_dbm,
    wifi_exclusive_throughput,
    wifi_slot_probabilities,
)

__version__ = "0.1.0"
