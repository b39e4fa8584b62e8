"""Penalty Robin-Robin domain decomposition for two-body unilateral contact."""

from ._contactdd import (
    ConfigError,
    DivergenceError,
    Error,
    ExperimentSpec,
    Hypothesis,
    InvalidArgument,
    InvalidMaterial,
    Material,
    Mesh,
    MeshError,
    ProblemKind,
    SolverError,
    compare_schemes,
    constitutive_matrix,
    estimate_rate,
    generate_rect_mesh,
    groove_defaults,
    hertz_defaults,
    load_config,
    negative_part,
    penalty_theta,
    reference_oracle,
    solve,
    spectral_bounds,
    sweep_gamma,
    sweep_penalty,
)

__all__ = [name for name in dir() if not name.startswith("_")]
