"""Link-level rate and user-selection analysis for power-domain NOMA.

The package computes per-user spectral efficiencies of NOMA clusters
under successive interference cancellation (downlink and uplink, any
cluster size, optional residual cancellation error), the equal-share
TDMA baseline, and the closed-form threshold radii that decide when a
two-user cluster beats that baseline for both of its members.  On top
sit a pairing criterion with a random baseline, distance sweeps, and
Monte-Carlo selection experiments.
"""

__version__ = "0.1.0"

from .link_model import (
    PathLoss,
    PowerBudget,
    UserTerminal,
    avg_channel_gain,
    normalized_power,
)
from .rate_engine import (
    PERFECT_SIC,
    DlCluster,
    RateReport,
    SicModel,
    UlCluster,
    UserRates,
    dl_noma_rates,
    oma_rates,
    rate_report,
    ul_noma_rates,
)
from .pairing import (
    DlThresholdInput,
    PairDecision,
    PairSelection,
    UlPairingConfig,
    dl_dominant,
    dl_threshold,
    select_pairs,
    threshold_oracle,
    ul_dominant,
    ul_threshold,
)
from .experiments import (
    DlScenario,
    ModeStats,
    MonteCarloSpec,
    MonteCarloSummary,
    SweepRecord,
    SweepResult,
    SweepSpec,
    UlScenario,
    run_monte_carlo,
    run_sweep,
)
from .cli import ConfigError, ScenarioConfig, emit_csv, emit_json, parse_config

__all__ = [
    "__version__",
    "PathLoss",
    "PowerBudget",
    "UserTerminal",
    "avg_channel_gain",
    "normalized_power",
    "PERFECT_SIC",
    "SicModel",
    "DlCluster",
    "UlCluster",
    "UserRates",
    "RateReport",
    "dl_noma_rates",
    "ul_noma_rates",
    "oma_rates",
    "rate_report",
    "DlThresholdInput",
    "UlPairingConfig",
    "PairDecision",
    "PairSelection",
    "dl_threshold",
    "ul_threshold",
    "dl_dominant",
    "ul_dominant",
    "select_pairs",
    "threshold_oracle",
    "DlScenario",
    "UlScenario",
    "SweepSpec",
    "SweepRecord",
    "SweepResult",
    "MonteCarloSpec",
    "ModeStats",
    "MonteCarloSummary",
    "run_sweep",
    "run_monte_carlo",
    "ConfigError",
    "ScenarioConfig",
    "parse_config",
    "emit_csv",
    "emit_json",
]
