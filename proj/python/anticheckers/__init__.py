"""Two-component Minkowskian lattice propagator toolkit.

Thin re-export of the compiled extension: point/grid propagator evaluation
by several independent methods, exact-identity and charge checks, the
continuum-limit figure profiles, the finite torus model with its
infinite-lattice limit, and the two-electron / coupled-species operations.
"""

from ._anticheckers import (
    DegenerateLatticeError,
    DomainError,
    NumericError,
    charge_density_profile,
    expected_charge,
    feynman_continuum,
    fermi_perturbation_slope,
    gauss_constant,
    identity_suite,
    infinite_limit,
    lemniscate_reciprocal,
    massless_heavy,
    propagate,
    propagate_row,
    torus_arrow,
    torus_partition_function,
    total_charge,
    two_electron_probability,
    two_electron_total_probability,
    wave_profile,
)

__all__ = [
    "DegenerateLatticeError",
    "DomainError",
    "NumericError",
    "charge_density_profile",
    "expected_charge",
    "feynman_continuum",
    "fermi_perturbation_slope",
    "gauss_constant",
    "identity_suite",
    "infinite_limit",
    "lemniscate_reciprocal",
    "massless_heavy",
    "propagate",
    "propagate_row",
    "torus_arrow",
    "torus_partition_function",
    "total_charge",
    "two_electron_probability",
    "two_electron_total_probability",
    "wave_profile",
]
