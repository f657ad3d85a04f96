"""Timelike signaling between Unruh-DeWitt detectors in matter- and Lambda-dominated FRW universes."""

__version__ = "0.1.0"

from .capacity import (
    CapacityResult,
    capacity_lambda_closed,
    capacity_matter_closed,
    channel_capacity,
    evaluate,
)
from .causality import (
    CausalClass,
    Comoving,
    CommPair,
    DetectorConfig,
    Proper,
    classify,
    comoving_from_proper,
    max_timelike_comoving_separation,
    min_timelike_switch_on_comoving,
    min_timelike_switch_on_proper,
)
from .cosmology import (
    CosmologyModel,
    Kind,
    comoving_time,
    conformal_time,
    horizon_scale,
    normalized_pair,
    proper_distance,
    scale_factor,
)
from .errors import ConfigError, ConvergenceError, DomainError, UnreachableError
from .signaling import (
    DetectorState,
    Method,
    SignalingResult,
    i_delta,
    i_theta,
    i_theta_closed_lambda,
    i_theta_closed_matter,
    receiver_state,
    s2,
    sender_state,
)

__all__ = [
    "__version__",
    "CapacityResult",
    "CausalClass",
    "CommPair",
    "Comoving",
    "ConfigError",
    "ConvergenceError",
    "CosmologyModel",
    "DetectorConfig",
    "DetectorState",
    "DomainError",
    "Kind",
    "Method",
    "Proper",
    "SignalingResult",
    "UnreachableError",
    "capacity_lambda_closed",
    "capacity_matter_closed",
    "channel_capacity",
    "classify",
    "comoving_from_proper",
    "comoving_time",
    "conformal_time",
    "evaluate",
    "horizon_scale",
    "i_delta",
    "i_theta",
    "i_theta_closed_lambda",
    "i_theta_closed_matter",
    "max_timelike_comoving_separation",
    "min_timelike_switch_on_comoving",
    "min_timelike_switch_on_proper",
    "normalized_pair",
    "proper_distance",
    "receiver_state",
    "s2",
    "scale_factor",
    "sender_state",
]
