"""Capacity regions of a two-user MAC aided by passive reflecting elements.

Two element deployments are compared: distributed (each user served by its
own nearby surface, capacity known in closed form) and centralized (one
surface near the receiver, bracketed between a certified outer bound and a
rate-profile inner bound), with a brute-force phase-grid oracle for small
instances.
"""

__version__ = "0.1.0"

from .channel_model import (
    ChannelRealization,
    Deployment,
    ReflectionConfig,
    ScenarioConfig,
    effective_channel,
    generate_realization,
    load_scenario_config,
    path_loss,
    twin_channels,
)
from .distributed_capacity import (
    DistributedSolution,
    distributed_capacity_region,
    optimal_distributed_phases,
)
from .oracle import (
    BudgetExceededError,
    GridSpec,
    oracle_max_received_power,
    oracle_region,
)
from .rate_geometry import (
    Pentagon,
    RatePair,
    RateRegion,
    contains,
    convex_hull_union,
    hausdorff_distance,
    mac_pentagon,
    pentagon_region,
    region_area,
)
from .rate_profile_inner import (
    AltOptOptions,
    AltOptTrace,
    DecodingOrder,
    InnerBound,
    RateProfileQuery,
    affine_coefficients,
    centralized_contains_distributed,
    heuristic_twin_phases,
    inner_bound,
    maximize_rate_profile,
    rate_pair_from_profile,
    solve_element,
)
from .sdr_outer import (
    OuterBound,
    QuadraticForm,
    SdpReport,
    SolverStatus,
    build_quadratic_form,
    outer_bound,
    solve_diag_sdp,
)

__all__ = [
    "AltOptOptions",
    "AltOptTrace",
    "BudgetExceededError",
    "ChannelRealization",
    "DecodingOrder",
    "Deployment",
    "DistributedSolution",
    "GridSpec",
    "InnerBound",
    "OuterBound",
    "Pentagon",
    "QuadraticForm",
    "RatePair",
    "RateProfileQuery",
    "RateRegion",
    "ReflectionConfig",
    "ScenarioConfig",
    "SdpReport",
    "SolverStatus",
    "affine_coefficients",
    "build_quadratic_form",
    "centralized_contains_distributed",
    "contains",
    "convex_hull_union",
    "distributed_capacity_region",
    "effective_channel",
    "generate_realization",
    "hausdorff_distance",
    "heuristic_twin_phases",
    "inner_bound",
    "load_scenario_config",
    "mac_pentagon",
    "maximize_rate_profile",
    "optimal_distributed_phases",
    "oracle_max_received_power",
    "oracle_region",
    "outer_bound",
    "path_loss",
    "pentagon_region",
    "rate_pair_from_profile",
    "region_area",
    "solve_diag_sdp",
    "solve_element",
    "twin_channels",
]
