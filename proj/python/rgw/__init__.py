"""Relative limit densities of Galton-Watson processes in random environments."""

from ._rgw import (
    Densities,
    DomainError,
    Error,
    IoError,
    Measure,
    ResourceError,
    SolverError,
    ValidationError,
    __version__,
    chi_square,
    densities,
    exact_distribution,
    example1_alpha,
    example2_a,
    fit_leading_constant,
    picard,
    primary_root,
    roots_in_box,
    simulate,
)

__all__ = [
    "Densities",
    "DomainError",
    "Error",
    "IoError",
    "Measure",
    "ResourceError",
    "SolverError",
    "ValidationError",
    "__version__",
    "chi_square",
    "densities",
    "exact_distribution",
    "example1_alpha",
    "example2_a",
    "fit_leading_constant",
    "picard",
    "primary_root",
    "roots_in_box",
    "simulate",
]
