"""Ruin-minimising deductible-with-limit insurance contracts."""

from ._core import (
    DimlContract,
    Distortion,
    LossModel,
    Market,
    PremiumNotFinite,
    PremiumQuote,
    Solution,
    Thresholds,
    UnboundedError,
    ValidationError,
    grid_oracle,
    market_from_config,
    monte_carlo_ruin,
    phi,
    premium_diml,
    psi,
    psi_inverse,
    random_admissible_oracle,
    ruin_probability,
    solution_json,
    solve,
    thresholds,
)

__all__ = [
    "DimlContract",
    "Distortion",
    "LossModel",
    "Market",
    "PremiumNotFinite",
    "PremiumQuote",
    "Solution",
    "Thresholds",
    "UnboundedError",
    "ValidationError",
    "grid_oracle",
    "market_from_config",
    "monte_carlo_ruin",
    "phi",
    "premium_diml",
    "psi",
    "psi_inverse",
    "random_admissible_oracle",
    "ruin_probability",
    "solution_json",
    "solve",
    "thresholds",
]
