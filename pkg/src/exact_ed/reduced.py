"""Exact simulation in the 5-dimensional invariant subspace H0.

H0 is spanned by the uniform superpositions over the five vertex groups
eta_l^j = {(S, y): |S & K| = l, [y in K] = j} for the colliding pair K.
Coordinates are always in the order (eta_0^0, eta_0^1, eta_1^0, eta_1^1, eta_2^0);
the last one is the target |T>.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import ContractError, IllConditionedError, UnsupportedInstanceError
from .linalg import Rotation, compose_rotations, matrix_power, rotation_to_matrix, svd3
from .params import AlgorithmParams, InnerParams, walk_eigen_lambda

GROUPS = ((0, 0), (0, 1), (1, 0), (1, 1), (2, 0))
K = 2


def group_fractions(n: int, r: int) -> dict[tuple[int, int], Fraction]:
    """|eta_l^j| / |V| as exact rationals (no huge binomials needed)."""
    nn = n * (n - 1)
    # C(N-2, r-l) / C(N, r) for l = 0, 1, 2
    subset_share = {
        0: Fraction((n - r) * (n - r - 1), nn),
        1: Fraction(r * (n - r), nn),
        2: Fraction(r * (r - 1), nn),
    }
    out = {}
    for l, j in GROUPS:
        mult = (n - r - (K - l)) if j == 0 else (K - l)
        out[(l, j)] = math.comb(K, l) * subset_share[l] * Fraction(mult, n - r)
    return out


def group_sizes(n: int, r: int) -> dict[tuple[int, int], int]:
    """|eta_l^j| = C(k,l) C(N-k, r-l) * (N-r-(k-l) or k-l)."""
    out = {}
    for l, j in GROUPS:
        base = math.comb(K, l) * math.comb(n - K, r - l)
        out[(l, j)] = base * ((n - r - (K - l)) if j == 0 else (K - l))
    return out


@dataclass(frozen=True, eq=False)
class ReducedModel:
    N: int
    r: int
    A: np.ndarray
    B: np.ndarray
    psi0: np.ndarray
    T: np.ndarray
    k: int = K

    @property
    def group_sizes(self) -> dict[tuple[int, int], int]:
        return group_sizes(self.N, self.r)

    @property
    def lam(self) -> float:
        return float(self.psi0[4] ** 2)


def build_reduced_model(n: int, r: int) -> ReducedModel:
    if not 2 <= r < n - 2:
        raise UnsupportedInstanceError(f"need 2 <= r < N-2, got N={n}, r={r}")
    a_cols = n - r  # size of an A clique
    b_cols = r + 1  # size of a B clique
    A = np.zeros((5, 3))
    A[0, 0] = math.sqrt(1 - 2 / a_cols)
    A[1, 0] = math.sqrt(2 / a_cols)
    A[2, 1] = math.sqrt(1 - 1 / a_cols)
    A[3, 1] = math.sqrt(1 / a_cols)
    A[4, 2] = 1.0
    B = np.zeros((5, 3))
    B[0, 0] = 1.0
    B[1, 1] = math.sqrt(1 / b_cols)
    B[2, 1] = math.sqrt(1 - 1 / b_cols)
    B[3, 2] = math.sqrt(2 / b_cols)
    B[4, 2] = math.sqrt(1 - 2 / b_cols)
    fr = group_fractions(n, r)
    psi0 = np.sqrt(np.array([float(fr[g]) for g in GROUPS]))
    T = np.zeros(5)
    T[4] = 1.0
    return ReducedModel(N=n, r=r, A=A, B=B, psi0=psi0, T=T)


def phased_projector(theta: float, cols: np.ndarray) -> np.ndarray:
    """I - (1 - e^{i theta}) P with P the projector onto the column span."""
    dim = cols.shape[0]
    return np.eye(dim) - (1 - np.exp(1j * theta)) * (cols @ cols.conj().T)


def build_step_operators(model: ReducedModel, theta1: float, theta2: float, alpha: float):
    """(U_A, U_B, R_T) restricted to H0."""
    ua = phased_projector(theta1, model.A)
    ub = phased_projector(theta2, model.B)
    rt = np.diag([1, 1, 1, 1, np.exp(1j * alpha)])
    return ua, ub, rt


def walk_operator(model: ReducedModel, theta1: float, theta2: float) -> np.ndarray:
    ua, ub, _ = build_step_operators(model, theta1, theta2, 0.0)
    return ub @ ua


@dataclass(frozen=True)
class JordanDecomposition:
    gammas: tuple[float, float, float]
    phis: tuple[float, float]
    singular_values: np.ndarray
    subspace_bases: tuple[np.ndarray, np.ndarray]
    fixed_vector: np.ndarray
    block_residual: float
    invariance_residual: float


def jordan_analysis(model: ReducedModel, theta1: float, theta2: float,
                    tol: Tolerances = DEFAULT) -> JordanDecomposition:
    """Split u into its action on psi0 plus two Bloch-sphere rotations.

    For each i in {1, 2} the block of u on {A w_i, (A w_i)^perp} is compared
    with the composition of the two phased reflections written as Bloch
    rotations; ``block_residual`` is the worst Frobenius mismatch.
    """
    W, s, V = svd3(model.A.T @ model.B, tol)
    gammas = tuple(2.0 * math.acos(min(1.0, float(si))) for si in s)
    if abs(gammas[1] - gammas[2]) < 1e-12:
        raise IllConditionedError("principal angles gamma_1 and gamma_2 coincide")
    u = walk_operator(model, theta1, theta2)

    aw0 = model.A @ W[:, 0]
    if aw0 @ model.psi0 < 0:
        aw0 = -aw0
    bases, phis = [], []
    block_res = 0.0
    inv_res = float(np.linalg.norm(u @ aw0 - np.exp(1j * (theta1 + theta2)) * aw0))
    half = 0.5 * (theta1 + theta2)
    for i in (1, 2):
        aw = model.A @ W[:, i]
        bv = model.B @ V[:, i]
        # orient so that <Aw|Bv> = cos(gamma/2) > 0
        if aw @ bv < 0:
            bv = -bv
        perp = bv - (aw @ bv) * aw
        perp = perp / np.linalg.norm(perp)
        q = np.column_stack([aw, perp])
        block = q.T @ u @ q
        inv_res = max(inv_res, float(np.linalg.norm(u @ q - q @ block)))
        # U_A is a rotation about z by -theta1, U_B about (sin g, 0, cos g) by -theta2
        g = gammas[i]
        predicted = compose_rotations(
            Rotation((math.sin(g), 0.0, math.cos(g)), -0.5 * theta2, 0.5 * theta2),
            Rotation((0.0, 0.0, 1.0), -0.5 * theta1, 0.5 * theta1),
            tol,
        )
        block_res = max(block_res, float(np.linalg.norm(block - rotation_to_matrix(predicted, tol))))
        cos_meas = 0.5 * (block * np.exp(-1j * half)).trace().real
        bases.append(q)
        phis.append(math.acos(max(-1.0, min(1.0, cos_meas))))
    return JordanDecomposition(
        gammas=gammas, phis=tuple(phis), singular_values=s,
        subspace_bases=tuple(bases), fixed_vector=aw0,
        block_residual=block_res, invariance_residual=inv_res,
    )


def closed_form_singular_values(n: int, r: int) -> np.ndarray:
    """s_i = sqrt((1 - i/(N-r)) (1 - i/(r+1))), i.e. lambda_i = 1 - s_i^2."""
    return np.array([math.sqrt(1.0 - walk_eigen_lambda(i, n, r)) for i in range(3)])


def inner_block(model: ReducedModel, params: AlgorithmParams) -> np.ndarray:
    """u^{ct2} in H0."""
    return matrix_power(walk_operator(model, params.theta1, params.theta2), params.ct2)


@dataclass(frozen=True, eq=False)
class RunResult:
    final: np.ndarray
    success_prob: float
    target_amplitude: complex
    trajectory: tuple[np.ndarray, ...] = ()
    max_outside_h1: float = 0.0


def h1_basis(model: ReducedModel) -> np.ndarray:
    """Columns (|R>, |T>) with psi0 = sqrt(1-lambda)|R> + sqrt(lambda)|T>."""
    rvec = model.psi0 - (model.T @ model.psi0) * model.T
    rvec = rvec / np.linalg.norm(rvec)
    return np.column_stack([rvec, model.T])


def run_reduced(model: ReducedModel, params: AlgorithmParams, marked: bool = True,
                keep_trajectory: bool = False) -> RunResult:
    """[u^{ct2} R_T(alpha2) u^{ct2} R_T(alpha1)]^{t1} psi0.

    ``marked=False`` models the all-distinct input, where R_T is the identity.
    """
    if (model.N, model.r) != (params.N, params.r):
        raise ContractError(f"model is for N={model.N}, r={model.r}; params for N={params.N}, r={params.r}")
    big = inner_block(model, params)
    if marked:
        _, _, rt1 = build_step_operators(model, 0, 0, params.alpha1)
        _, _, rt2 = build_step_operators(model, 0, 0, params.alpha2)
    else:
        rt1 = rt2 = np.eye(5)
    h1 = h1_basis(model)
    state = model.psi0.astype(complex)
    traj = [state] if keep_trajectory else []
    outside = 0.0
    for _ in range(params.t1):
        state = big @ (rt1 @ state)
        outside = max(outside, float(np.linalg.norm(state - h1 @ (h1.T @ state))))
        state = big @ (rt2 @ state)
        outside = max(outside, float(np.linalg.norm(state - h1 @ (h1.T @ state))))
        if keep_trajectory:
            traj.append(state)
    amp = complex(model.T @ state)
    return RunResult(final=state, success_prob=abs(amp) ** 2, target_amplitude=amp,
                     trajectory=tuple(traj), max_outside_h1=outside)


def phase_rotation_closed_form(model: ReducedModel, beta: float) -> np.ndarray:
    """I - (1 - e^{-i beta}) |psi0><psi0|."""
    return np.eye(5) - (1 - np.exp(-1j * beta)) * np.outer(model.psi0, model.psi0)


def verify_phase_rotation(model: ReducedModel, ip: InnerParams, ct2: int) -> dict:
    """Compare u^{ct2} with I - (1 - e^{-i beta}) psi0 psi0^T.

    u^{ct2} equals that operator times the global factor e^{i chi},
    chi = ct2 (theta1+theta2)/2, which is e^{-i beta} itself for even ct2.
    ``residual`` removes this predicted factor (nothing is fitted);
    ``raw_residual`` keeps it.
    """
    u_pow = matrix_power(walk_operator(model, ip.theta1, ip.theta2), ct2)
    chi = ct2 * 0.5 * (ip.theta1 + ip.theta2)
    closed = phase_rotation_closed_form(model, ip.beta)
    return {
        "residual": float(np.linalg.norm(np.exp(-1j * chi) * u_pow - closed)),
        "raw_residual": float(np.linalg.norm(u_pow - closed)),
        "phase_vs_beta": float(abs(np.exp(1j * chi) - np.exp(-1j * ip.beta))),
    }


def fxr_block(model: ReducedModel, params: AlgorithmParams) -> np.ndarray:
    """u^{ct2}R_T(alpha2) u^{ct2}R_T(alpha1) restricted to span{R, T}."""
    big = inner_block(model, params)
    _, _, rt1 = build_step_operators(model, 0, 0, params.alpha1)
    _, _, rt2 = build_step_operators(model, 0, 0, params.alpha2)
    h1 = h1_basis(model)
    return h1.T @ (big @ rt2 @ big @ rt1) @ h1
