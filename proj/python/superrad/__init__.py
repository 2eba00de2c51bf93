"""Dipolar superradiance in small spin ensembles.

Two engines are exposed: the full N-spin master equation (``evolve``,
``rhs``, ``adr_full``) and the collective Dicke-population model
(``evolve_populations``, ``rate_matrix``, ``adr``). Units are rad/us for
angular frequencies, us for times and 1/us for rates.
"""

from ._core import (
    ConfigError,
    Geometry,
    IoError,
    NoDecayError,
    NumericalFailure,
    SystemConfig,
    __version__,
    adr,
    adr_full,
    canonical_form,
    collective_adr,
    config_hash,
    cross_engine_check,
    dipolar_amplitude,
    evolve,
    evolve_populations,
    find_peak,
    gamma,
    liouvillian_matrix,
    load_config,
    log_grid,
    log_int_grid,
    loglog_fit,
    parse_config,
    rate_matrix,
    rhs,
    sweep_geometry,
    sweep_n,
    sweep_ratio,
    sweep_tauc,
    timescales,
    transition_rates,
)

__all__ = [name for name in dir() if not name.startswith("_")]
