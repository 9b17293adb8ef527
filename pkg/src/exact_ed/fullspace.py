"""Brute-force state-vector simulation on the quasi-Johnson graph.

Vertices are pairs (S, y) with S an r-subset of {0..N-1} and y not in S.
They are stored densely: S in colex order, then y ascending over the
complement of S, so vertex ``rank(S) * (N - r) + pos`` where ``pos`` is the
position of y in the complement.  A-cliques are therefore contiguous rows of
length N - r; B-cliques (same union S + {y}) are gathered through an index
table.

Indices in this module are 0-based.  The value register is not simulated
here; see :mod:`exact_ed.registers` for the N = 5 check that it is safe to
drop.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .combinatorics import binomial_table, colex_rank, colex_rank_rows, colex_subsets
from .config import DEFAULT, DEFAULT_CAP, Tolerances
from .errors import ContractError, DomainError, ResourceError
from .params import AlgorithmParams
from .reduced import GROUPS

ALL_DISTINCT = "all distinct"


@dataclass
class Instance:
    """A string x over [M] (values 1..M) with zero or one colliding pair.

    ``query_count`` is the oracle ledger; simulators charge it by control-flow
    position rather than by looking at amplitudes.
    """

    values: tuple[int, ...]
    M: int
    colliding_pair: tuple[int, int] | None = None
    query_count: int = 0

    def __post_init__(self):
        self.values = tuple(int(v) for v in self.values)
        if self.M < self.N:
            raise DomainError(f"alphabet size M={self.M} must be >= N={self.N}")
        if any(not 1 <= v <= self.M for v in self.values):
            raise DomainError("values must lie in 1..M")
        counts = Counter(self.values)
        dupes = [v for v, c in counts.items() if c > 1]
        if self.colliding_pair is None:
            if dupes:
                raise DomainError("all-distinct instance has repeated values")
            return
        i1, i2 = sorted(self.colliding_pair)
        self.colliding_pair = (i1, i2)
        if i1 == i2 or self.values[i1] != self.values[i2] or dupes != [self.values[i1]] or counts[dupes[0]] != 2:
            raise DomainError(f"values do not have exactly one colliding pair at {self.colliding_pair}")

    @property
    def N(self) -> int:
        return len(self.values)

    def query(self, i: int) -> int:
        self.query_count += 1
        return self.values[i]

    def charge(self, n: int = 1) -> None:
        self.query_count += n


def make_instance(n: int, pair=None, m: int | None = None, seed=None) -> Instance:
    """Random instance: a permutation of values, then x[i2] <- x[i1] if a pair is given."""
    m = n if m is None else m
    rng = np.random.default_rng(seed)
    values = [int(v) + 1 for v in rng.permutation(m)[:n]]
    if pair is not None:
        i1, i2 = sorted(pair)
        if not 0 <= i1 < i2 < n:
            raise DomainError(f"pair {pair} is not two distinct indices in 0..{n - 1}")
        values[i2] = values[i1]
        # the value displaced from i2 is simply dropped; with distinct draws nothing else collides
    return Instance(tuple(values), m, None if pair is None else (i1, i2))


class QuasiJohnsonGraph:
    """Indexed vertex set of the quasi-Johnson graph for (N, r)."""

    def __init__(self, n: int, r: int, cap: int = DEFAULT_CAP):
        if not 1 <= r < n:
            raise DomainError(f"need 1 <= r < N, got N={n}, r={r}")
        dim = math.comb(n, r) * (n - r)
        if dim > cap:
            raise ResourceError(
                f"full state vector for N={n}, r={r} has dimension C({n},{r})*{n - r} = {dim} > cap {cap}",
                dimension=dim, cap=cap,
            )
        self.N, self.r, self.dimension = n, r, dim
        self.subsets = np.array(colex_subsets(n, r), dtype=np.int64).reshape(-1, r)
        self.n_cliques_a = len(self.subsets)
        self.width = n - r
        member = np.zeros((self.n_cliques_a, n), dtype=bool)
        member[np.arange(self.n_cliques_a)[:, None], self.subsets] = True
        self._member = member
        # y-values of each A-clique row, ascending over the complement of S
        self.complements = np.nonzero(~member)[1].reshape(self.n_cliques_a, self.width)

    def vertex(self, index: int) -> tuple[tuple[int, ...], int]:
        if not 0 <= index < self.dimension:
            raise IndexError(index)
        row, pos = divmod(index, self.width)
        return tuple(int(s) for s in self.subsets[row]), int(self.complements[row, pos])

    def index(self, subset, y: int) -> int:
        subset = tuple(sorted(subset))
        if len(subset) != self.r or y in subset or not 0 <= y < self.N:
            raise DomainError(f"({subset}, {y}) is not a vertex")
        pos = y - sum(1 for s in subset if s < y)
        return colex_rank(subset) * self.width + pos

    @cached_property
    def b_cliques(self) -> np.ndarray:
        """(C(N, r+1), r+1) table of vertex indices; row = one union S + {y}."""
        unions = np.array(colex_subsets(self.N, self.r + 1), dtype=np.int64).reshape(-1, self.r + 1)
        table = binomial_table(self.N, self.r + 1)
        out = np.empty_like(unions)
        for p in range(self.r + 1):
            rest = np.delete(unions, p, axis=1)
            ranks = colex_rank_rows(rest, table) if self.r else np.zeros(len(unions), dtype=np.int64)
            # y = unions[:, p] has exactly p elements of S below it
            out[:, p] = ranks * self.width + (unions[:, p] - p)
        return out

    def contains_mask(self, members) -> np.ndarray:
        """Boolean over vertices: does S contain every index in ``members``."""
        rows = np.all(self._member[:, list(members)], axis=1)
        return np.repeat(rows, self.width)

    def group_labels(self, pair) -> np.ndarray:
        """Index into GROUPS (0..4) of each vertex for colliding pair K."""
        k = list(pair)
        l = self._member[:, k].sum(axis=1)
        l = np.repeat(l, self.width)
        j = np.isin(self.complements, k).ravel().astype(int)
        lookup = {g: i for i, g in enumerate(GROUPS)}
        codes = np.full(self.dimension, -1)
        for (gl, gj), i in lookup.items():
            codes[(l == gl) & (j == gj)] = i
        return codes


def enumerate_vertices(n: int, r: int, cap: int = DEFAULT_CAP) -> QuasiJohnsonGraph:
    return QuasiJohnsonGraph(n, r, cap)


@dataclass(frozen=True, eq=False)
class VertexState:
    graph: QuasiJohnsonGraph
    amplitudes: np.ndarray

    @classmethod
    def uniform(cls, graph: QuasiJohnsonGraph) -> "VertexState":
        amps = np.full(graph.dimension, 1 / math.sqrt(graph.dimension), dtype=complex)
        return cls(graph, amps)

    @property
    def norm(self) -> float:
        return float(np.linalg.norm(self.amplitudes))


def apply_UA(state: VertexState, theta1: float) -> VertexState:
    """Phased diffusion inside every A-clique (fixed S)."""
    g = state.graph
    rows = state.amplitudes.reshape(g.n_cliques_a, g.width)
    rows = rows - (1 - np.exp(1j * theta1)) * rows.mean(axis=1, keepdims=True)
    return VertexState(g, rows.ravel())


def apply_UB(state: VertexState, theta2: float) -> VertexState:
    """Phased diffusion inside every B-clique (fixed union S + {y})."""
    g = state.graph
    idx = g.b_cliques
    groups = state.amplitudes[idx]
    groups = groups - (1 - np.exp(1j * theta2)) * groups.mean(axis=1, keepdims=True)
    out = np.empty_like(state.amplitudes)
    out[idx] = groups
    return VertexState(g, out)


def apply_RT(state: VertexState, alpha: float, instance: Instance) -> VertexState:
    """Phase e^{i alpha} on vertices whose S holds the colliding pair; no queries."""
    if instance.colliding_pair is None:
        return state
    mask = state.graph.contains_mask(instance.colliding_pair)
    out = state.amplitudes.copy()
    out[mask] *= np.exp(1j * alpha)
    return VertexState(state.graph, out)


def project_to_H0(state: VertexState, pair) -> tuple[np.ndarray, float]:
    """Coordinates on the five group states and the norm of what is left over."""
    codes = state.graph.group_labels(pair)
    coords = np.zeros(5, dtype=complex)
    recon = np.zeros_like(state.amplitudes)
    for i in range(5):
        sel = codes == i
        size = int(sel.sum())
        if size == 0:
            continue
        coords[i] = state.amplitudes[sel].sum() / math.sqrt(size)
        recon[sel] = coords[i] / math.sqrt(size)
    return coords, float(np.linalg.norm(state.amplitudes - recon))


@dataclass(frozen=True, eq=False)
class FullRunResult:
    final: VertexState
    success_prob: float
    query_count: int
    outcome_distribution: dict
    outer_projections: tuple = ()
    max_leakage: float = 0.0
    max_norm_error: float = 0.0


def _outcome_for_row(subset, instance: Instance):
    seen = {}
    for i in subset:
        v = instance.values[i]
        if v in seen:
            return (seen[v], int(i))
        seen[v] = int(i)
    return ALL_DISTINCT


def outcome_distribution(state: VertexState, instance: Instance) -> dict:
    g = state.graph
    probs = (np.abs(state.amplitudes) ** 2).reshape(g.n_cliques_a, g.width).sum(axis=1)
    dist: dict = {}
    for row, p in zip(g.subsets, probs):
        key = _outcome_for_row(row, instance)
        dist[key] = dist.get(key, 0.0) + float(p)
    return dist


def run_full(instance: Instance, params: AlgorithmParams, cap: int = DEFAULT_CAP,
             track_leakage: bool = False, tol: Tolerances = DEFAULT) -> FullRunResult:
    """Algorithm control flow on the explicit vertex state.

    Charges r queries for loading the start state and 2 per walk step
    (fetch and un-fetch of the extra slot around U_B).
    """
    if instance.N != params.N:
        raise ContractError(f"instance has N={instance.N}, params are for N={params.N}")
    graph = enumerate_vertices(params.N, params.r, cap)
    pair = instance.colliding_pair
    state = VertexState.uniform(graph)
    instance.charge(params.r)

    leak = 0.0
    norm_err = 0.0
    projections = []

    def check(st):
        nonlocal leak, norm_err
        norm_err = max(norm_err, abs(st.norm - 1.0))
        if track_leakage and pair is not None:
            leak = max(leak, project_to_H0(st, pair)[1])

    def inner(st):
        for _ in range(params.ct2):
            st = apply_UA(st, params.theta1)
            instance.charge(1)
            st = apply_UB(st, params.theta2)
            instance.charge(1)
            check(st)
        return st

    for _ in range(params.t1):
        state = apply_RT(state, params.alpha1, instance)
        state = inner(state)
        state = apply_RT(state, params.alpha2, instance)
        state = inner(state)
        if pair is not None:
            projections.append(project_to_H0(state, pair)[0])

    if pair is not None:
        success = float(np.sum(np.abs(state.amplitudes[graph.contains_mask(pair)]) ** 2))
    else:
        success = float("nan")
    return FullRunResult(
        final=state, success_prob=success, query_count=instance.query_count,
        outcome_distribution=outcome_distribution(state, instance),
        outer_projections=tuple(projections), max_leakage=leak, max_norm_error=norm_err,
    )


def sample_vertices(state: VertexState, seed: int, shots: int) -> np.ndarray:
    probs = np.abs(state.amplitudes) ** 2
    probs = probs / probs.sum()
    rng = np.random.default_rng(seed)
    return rng.choice(state.graph.dimension, size=shots, p=probs)


def measure(result: FullRunResult, instance: Instance, rng_seed: int):
    """One computational-basis measurement, decoded to a pair or ``"all distinct"``."""
    return sample_outcomes(result, instance, rng_seed, shots=1).most_common(1)[0][0]


def sample_outcomes(result: FullRunResult, instance: Instance, rng_seed: int, shots: int) -> Counter:
    g = result.final.graph
    picks = sample_vertices(result.final, rng_seed, shots)
    rows = picks // g.width
    counts = Counter(rows.tolist())
    out: Counter = Counter()
    for row, c in counts.items():
        out[_outcome_for_row(g.subsets[row], instance)] += c
    return out
