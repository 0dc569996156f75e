"""Bloch finite elements with gradient recovery for honeycomb edge states."""

from ._core import (
    ConfigError,
    ConvergenceError,
    EigenSolverError,
    MaterialError,
    RunConfig,
    bands,
    converge,
    load_config,
    mesh,
    modes,
    parse_config,
    solve,
    validate,
)

__all__ = [
    "ConfigError",
    "ConvergenceError",
    "EigenSolverError",
    "MaterialError",
    "RunConfig",
    "bands",
    "converge",
    "load_config",
    "mesh",
    "modes",
    "parse_config",
    "solve",
    "validate",
]
