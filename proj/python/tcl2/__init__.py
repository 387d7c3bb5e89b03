"""TCL2 master-equation simulator for a dimer coupled to a sink through an Ohmic bath."""

from ._core import (
    MODES,
    ConfigError,
    IntegrationFailure,
    Model,
    MultiplicityError,
    NumericalFailure,
    OhmicBath,
    SiteSystem,
    evolve,
    gibbs_state,
    la_analytic_stationary,
    min_eigenvalue,
    parse_config,
    run_command,
    stationary_state,
    trace_distance,
)

__all__ = [
    "MODES",
    "ConfigError",
    "IntegrationFailure",
    "Model",
    "MultiplicityError",
    "NumericalFailure",
    "OhmicBath",
    "SiteSystem",
    "evolve",
    "gibbs_state",
    "la_analytic_stationary",
    "min_eigenvalue",
    "parse_config",
    "run_command",
    "stationary_state",
    "trace_distance",
]
