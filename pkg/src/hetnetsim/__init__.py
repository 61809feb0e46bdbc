"""Monte Carlo downlink simulator for a two-tier macro/femto OFDMA network."""

from .config import ConfigError, ScenarioConfig, default_delta_grid
from .runner import run_scenario, simulate_drop

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "ScenarioConfig",
    "default_delta_grid",
    "run_scenario",
    "simulate_drop",
    "__version__",
]
