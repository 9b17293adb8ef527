"""Numerical tolerances used across the package, kept in one record."""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    unit_axis: float = 1e-10
    unitary: float = 1e-12
    identity_sin: float = 1e-12
    svd_offdiag: float = 1e-14
    svd_max_sweeps: int = 60
    bisect_width: float = 1e-13
    inner_residual: float = 1e-10
    outer_residual: float = 1e-9
    phase_rotation: float = 1e-8
    success_reduced: float = 1e-9
    success_full: float = 1e-8
    leakage: float = 1e-9
    reduced_vs_full: float = 1e-8
    norm: float = 1e-10
    degenerate_beta: float = 1e-9
    beta_not_multiple: float = 1e-6
    singularity_guard: float = 1e-6


DEFAULT = Tolerances()

# default cap on the full state-vector dimension C(N, r) * (N - r)
DEFAULT_CAP = 2_000_000
