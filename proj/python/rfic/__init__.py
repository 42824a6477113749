"""Python bindings for the rfic C++ core."""

from ._rfic import (
    discrepancy_csv,
    enumerate_log_partition,
    free_energy_csv,
    free_energy_zero_field,
    gamma_extrema,
    hat_l,
    log_partition,
    marginals,
    rg_breakpoints,
    rg_report,
    sample_field,
)

__all__ = [
    "discrepancy_csv",
    "enumerate_log_partition",
    "free_energy_csv",
    "free_energy_zero_field",
    "gamma_extrema",
    "hat_l",
    "log_partition",
    "marginals",
    "rg_breakpoints",
    "rg_report",
    "sample_field",
]
