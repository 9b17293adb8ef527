"""Simulation with an explicit value register, for tiny N.

The index-only simulator drops the second register on the grounds that it
always holds the values x_S (in ascending index order, plus an empty extra
slot) for the vertex (S, y) it is entangled with.  Here that register is
kept: basis states are ``(vertex, values)`` with ``values`` a tuple of r+1
slots (0 = empty), and the extended U_B permutes the stored values along
with the indices.  Every step checks that the register is still the
deterministic function of the vertex.
"""

from __future__ import annotations

from collections import defaultdict

import numpy as np

from .config import DEFAULT_CAP
from .errors import ContractError, ModelViolationError
from .fullspace import Instance, enumerate_vertices, make_instance, run_full
from .params import AlgorithmParams

AMP_FLOOR = 1e-13


def value_map(subset, y, values) -> dict:
    """index -> stored value: sorted S takes slots 0..r-1, y takes slot r."""
    m = {s: v for s, v in zip(sorted(subset), values[:-1])}
    m[y] = values[-1]
    return m


def b_clique_terms(subset, y, values):
    """Members of the B-clique through (S, y) with their permuted value tuples.

    Each stored value stays attached to its index, so the member
    (U - {y'}, y') carries the values of U - {y'} in ascending order followed
    by the value of y'.
    """
    f = value_map(subset, y, values)
    union = sorted(set(subset) | {y})
    terms = []
    for yp in union:
        rest = tuple(u for u in union if u != yp)
        terms.append((rest, yp, tuple(f[u] for u in rest) + (f[yp],)))
    return terms


class RegisterState:
    """Sparse amplitudes over (vertex index, value tuple)."""

    def __init__(self, graph, amps: dict):
        self.graph = graph
        self.amps = amps

    def norm(self) -> float:
        return float(np.sqrt(sum(abs(a) ** 2 for a in self.amps.values())))

    def vertex_amplitudes(self) -> np.ndarray:
        out = np.zeros(self.graph.dimension, dtype=complex)
        for (v, _), a in self.amps.items():
            out[v] += a
        return out


def _prune(amps: dict) -> dict:
    return {k: a for k, a in amps.items() if abs(a) > AMP_FLOOR}


def _load(state: RegisterState, instance: Instance, slot: int, use_y: bool) -> RegisterState:
    """One oracle call XOR-ing x_i into ``slot``; i is S's slot-th index or y."""
    g = state.graph
    out = {}
    for (v, vals), a in state.amps.items():
        s, y = g.vertex(v)
        i = y if use_y else s[slot]
        new = list(vals)
        new[slot] ^= instance.values[i]
        out[(v, tuple(new))] = out.get((v, tuple(new)), 0) + a
    instance.charge(1)
    return RegisterState(g, out)


def _apply_ua(state: RegisterState, theta: float) -> RegisterState:
    g = state.graph
    sums = defaultdict(complex)
    for (v, vals), a in state.amps.items():
        sums[(v // g.width, vals)] += a
    out = dict(state.amps)
    factor = (1 - np.exp(1j * theta)) / g.width
    for (row, vals), total in sums.items():
        for pos in range(g.width):
            key = (row * g.width + pos, vals)
            out[key] = out.get(key, 0) - factor * total
    return RegisterState(g, _prune(out))


def _apply_ub_ext(state: RegisterState, theta: float) -> RegisterState:
    g = state.graph
    groups = defaultdict(complex)
    members = {}
    for (v, vals), a in state.amps.items():
        s, y = g.vertex(v)
        f = value_map(s, y, vals)
        union = tuple(sorted(set(s) | {y}))
        key = (union, tuple(f[u] for u in union))
        groups[key] += a
        if key not in members:
            members[key] = [(g.index(rest, yp), w) for rest, yp, w in b_clique_terms(s, y, vals)]
    out = dict(state.amps)
    factor = (1 - np.exp(1j * theta)) / (g.r + 1)
    for key, total in groups.items():
        for v, w in members[key]:
            out[(v, w)] = out.get((v, w), 0) - factor * total
    return RegisterState(g, _prune(out))


def _apply_rt(state: RegisterState, alpha: float, r: int) -> RegisterState:
    out = {}
    phase = np.exp(1j * alpha)
    for (v, vals), a in state.amps.items():
        stored = vals[:r]
        hit = vals[r] == 0 and len(set(stored)) < r
        out[(v, vals)] = a * phase if hit else a
    return RegisterState(state.graph, out)


def _check_deterministic(state: RegisterState, instance: Instance, extra_loaded: bool):
    g = state.graph
    for (v, vals), a in state.amps.items():
        if abs(a) <= AMP_FLOOR:
            continue
        s, y = g.vertex(v)
        want = tuple(instance.values[i] for i in s) + ((instance.values[y],) if extra_loaded else (0,))
        if vals != want:
            raise ModelViolationError(
                f"vertex {(s, y)} carries values {vals}, expected {want} (|amp|={abs(a):.3g})"
            )


def explicit_register_run(instance: Instance, params: AlgorithmParams, cap: int = 10_000) -> dict:
    """Run the algorithm with the value register and compare to the index-only run."""
    if instance.N != params.N:
        raise ContractError(f"instance has N={instance.N}, params are for N={params.N}")
    g = enumerate_vertices(params.N, params.r, min(cap, DEFAULT_CAP))
    r = params.r
    amp0 = 1 / np.sqrt(g.dimension)
    state = RegisterState(g, {(v, (0,) * (r + 1)): amp0 for v in range(g.dimension)})
    for slot in range(r):
        state = _load(state, instance, slot, use_y=False)
    _check_deterministic(state, instance, False)
    checks = 1

    def inner(st):
        nonlocal checks
        for _ in range(params.ct2):
            st = _apply_ua(st, params.theta1)
            st = _load(st, instance, r, use_y=True)
            _check_deterministic(st, instance, True)
            st = _apply_ub_ext(st, params.theta2)
            _check_deterministic(st, instance, True)
            st = _load(st, instance, r, use_y=True)
            _check_deterministic(st, instance, False)
            checks += 3
        return st

    for _ in range(params.t1):
        state = _apply_rt(state, params.alpha1, r)
        state = inner(state)
        state = _apply_rt(state, params.alpha2, r)
        state = inner(state)

    shadow = Instance(instance.values, instance.M, instance.colliding_pair)
    index_only = run_full(shadow, params, cap=cap)
    amps = state.vertex_amplitudes()
    if instance.colliding_pair is not None:
        mask = g.contains_mask(instance.colliding_pair)
        success = float(np.sum(np.abs(amps[mask]) ** 2))
    else:
        success = float("nan")
    return {
        "max_amplitude_diff": float(np.max(np.abs(amps - index_only.final.amplitudes))),
        "success_prob": success,
        "index_only_success_prob": index_only.success_prob,
        "norm_error": abs(state.norm() - 1.0),
        "basis_states": len(state.amps),
        "invariant_checks": checks,
        "query_count": instance.query_count,
        "index_only_query_count": index_only.query_count,
    }


def default_n5_instance(pair=(0, 2), seed=0) -> Instance:
    return make_instance(5, pair, seed=seed)
