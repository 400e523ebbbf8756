from .surrogate import (
    cycle_schedule,
    default_oracle_config,
    force_profile,
    generate_dataset,
    project_to_surface,
    surrogate_response,
    temperature_at,
)

__all__ = [
    "cycle_schedule",
    "default_oracle_config",
    "force_profile",
    "generate_dataset",
    "project_to_surface",
    "surrogate_response",
    "temperature_at",
]
