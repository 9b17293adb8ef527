"""Glue between the solver and the simulators, shared by the CLI and the scripts."""

from __future__ import annotations

import time
from dataclasses import replace

import numpy as np

from .config import DEFAULT, DEFAULT_CAP, Tolerances
from .errors import DomainError
from .fullspace import enumerate_vertices, make_instance, run_full
from .params import (
    AlgorithmParams, InnerParams, derive_structure, outer_residuals, solve_params, subset_size,
    verify_inner,
)
from .records import RunRecord
from .reduced import build_reduced_model, run_reduced, verify_phase_rotation


def tolerances_for(tol: float | None) -> Tolerances:
    """--tol bounds the root residuals; the bracket is never wider than the default 1e-13."""
    if tol is None:
        return DEFAULT
    if not tol > 0:
        raise DomainError(f"--tol must be positive, got {tol!r}")
    return replace(DEFAULT, bisect_width=min(tol, DEFAULT.bisect_width))


def inner_params_of(p: AlgorithmParams) -> InnerParams:
    return InnerParams(d=p.d, theta1=p.theta1, theta2=p.theta2, beta=p.beta)


def residuals(p: AlgorithmParams) -> dict:
    sp = derive_structure(p.N, p.c)
    inner = verify_inner(sp, inner_params_of(p))
    outer = outer_residuals(p.alpha1, p.alpha2, p.beta, p.lam, p.t1)
    model = build_reduced_model(p.N, p.r)
    rot = verify_phase_rotation(model, inner_params_of(p), p.ct2)
    return {
        "inner": max(abs(inner["phi1"]), abs(inner["phi2"])),
        "outer": max(abs(outer["real_cleared"]), abs(outer["imag_cleared"])),
        "phase_rotation": rot["residual"],
    }


def solve_record(n: int, c: int = 10, tol: float | None = None) -> RunRecord:
    start = time.perf_counter()
    p = solve_params(n, c, tolerances_for(tol))
    res = residuals(p)
    red = run_reduced(build_reduced_model(p.N, p.r), p)
    return RunRecord(
        params=p, success_prob=red.success_prob, residual_inner=res["inner"], residual_outer=res["outer"],
        residual_phase=res["phase_rotation"], query_count=p.query_count,
        wall_time=time.perf_counter() - start, mode="reduced",
    )


def verify_row(n: int, mode: str = "reduced", c: int = 10, tol: float | None = None,
               cap: int = DEFAULT_CAP, pair=(0, 1), seed: int = 0) -> dict:
    """One verification row; raises ResourceError before solving if full mode is too big."""
    tols = tolerances_for(tol)
    if mode in ("full", "both"):
        enumerate_vertices(n, subset_size(n), cap)  # fail fast on the dimension cap
    start = time.perf_counter()
    p = solve_params(n, c, tols)
    res = residuals(p)
    row = {
        "N": n, "mode": mode, "phase_rotation": res["phase_rotation"], "inner": res["inner"],
        "outer": res["outer"], "query_count": p.query_count, "leakage": float("nan"),
        "agreement": float("nan"),
    }
    model = build_reduced_model(n, p.r)
    red = run_reduced(model, p, keep_trajectory=True)
    success = red.success_prob
    checks = {
        "phase_rotation": res["phase_rotation"] <= DEFAULT.phase_rotation,
        "reduced": 1 - red.success_prob <= DEFAULT.success_reduced,
    }
    if mode in ("full", "both"):
        inst = make_instance(n, pair, seed=seed)
        full = run_full(inst, p, cap=cap, track_leakage=True)
        success = full.success_prob
        row["leakage"] = full.max_leakage
        row["full_query_count"] = full.query_count
        checks["full"] = 1 - full.success_prob <= DEFAULT.success_full
        checks["leakage"] = full.max_leakage <= DEFAULT.leakage
        checks["ledger"] = full.query_count == p.query_count
        if mode == "both":
            diffs = [np.max(np.abs(a - b)) for a, b in zip(full.outer_projections, red.trajectory[1:])]
            row["agreement"] = float(max(diffs)) if diffs else 0.0
            checks["agreement"] = row["agreement"] <= DEFAULT.reduced_vs_full
    row["success_prob"] = success
    row["failure_prob"] = 1 - success
    row["wall_time"] = time.perf_counter() - start
    row["passed"] = all(checks.values())
    row["failed_checks"] = [k for k, ok in checks.items() if not ok]
    return row


def sweep_point(n: int, c: int = 10, tol: float | None = None):
    p = solve_params(n, c, tolerances_for(tol))
    red = run_reduced(build_reduced_model(n, p.r), p)
    return p, red.success_prob
