"""Small dense linear algebra: SU(2) rotations, matrix powers and a 3x3 SVD.

Matrices are plain ``numpy`` arrays.  A rotation uses the half-angle
convention ``R_n(phi) = cos(phi) I - i sin(phi) n.sigma``, so ``phi`` is half
of the geometric angle on the Bloch sphere.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import DomainError

PAULI_X = np.array([[0, 1], [1, 0]], dtype=complex)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=complex)
CANONICAL_AXIS = (0.0, 0.0, 1.0)
EPS = float(np.finfo(float).eps)


@dataclass(frozen=True)
class Rotation:
    """An SU(2) element ``R_n(angle)`` times ``exp(i * global_phase)``.

    ``is_identity`` is set when the rotation part is +-I and the axis is
    therefore meaningless; the axis is then the canonical z axis.
    """

    axis: tuple[float, float, float]
    angle: float
    global_phase: float = 0.0
    is_identity: bool = field(default=False, compare=False)

    def __post_init__(self):
        object.__setattr__(self, "axis", tuple(float(a) for a in self.axis))

    @property
    def n(self) -> np.ndarray:
        return np.asarray(self.axis)

    def inverse(self) -> "Rotation":
        return Rotation(self.axis, -self.angle, -self.global_phase, self.is_identity)


def _check_axis(axis, tol: Tolerances = DEFAULT) -> np.ndarray:
    n = np.asarray(axis, dtype=float)
    if n.shape != (3,):
        raise DomainError(f"axis must be a 3-vector, got shape {n.shape}")
    if abs(np.linalg.norm(n) - 1.0) > tol.unit_axis:
        raise DomainError(f"axis {n} is not unit-norm (|n| = {np.linalg.norm(n)!r})")
    return n


def rotation_to_matrix(rot: Rotation, tol: Tolerances = DEFAULT) -> np.ndarray:
    n = _check_axis(rot.axis, tol)
    ndots = n[0] * PAULI_X + n[1] * PAULI_Y + n[2] * PAULI_Z
    su2 = math.cos(rot.angle) * np.eye(2) - 1j * math.sin(rot.angle) * ndots
    return np.exp(1j * rot.global_phase) * su2


def _from_components(cos_phi, sin_n, global_phase, tol: Tolerances = DEFAULT) -> Rotation:
    """Build a rotation from ``cos(phi)`` and the vector ``sin(phi) * n``."""
    sin_n = np.asarray(sin_n, dtype=float)
    s = float(np.linalg.norm(sin_n))
    if s < tol.identity_sin:
        if cos_phi < 0:
            # -I is the identity up to a phase of pi
            global_phase += math.pi
        return Rotation(CANONICAL_AXIS, 0.0, global_phase, is_identity=True)
    return Rotation(tuple(sin_n / s), math.atan2(s, cos_phi), global_phase)


def rotation_from_matrix(m: np.ndarray, tol: Tolerances = DEFAULT) -> Rotation:
    """Axis-angle form of a 2x2 unitary, with the U(1) part kept as a global phase."""
    m = np.asarray(m, dtype=complex)
    if m.shape != (2, 2):
        raise DomainError(f"expected a 2x2 matrix, got {m.shape}")
    chi = 0.5 * np.angle(np.linalg.det(m))
    su = m * np.exp(-1j * chi)
    cos_phi = 0.5 * (su[0, 0] + su[1, 1]).real
    sin_n = (
        -0.5 * (su[0, 1] + su[1, 0]).imag,
        0.5 * (su[1, 0] - su[0, 1]).real,
        0.5 * (su[1, 1] - su[0, 0]).imag,
    )
    return _from_components(float(np.clip(cos_phi, -1.0, 1.0)), sin_n, float(chi), tol)


def compose_rotations(second: Rotation, first: Rotation, tol: Tolerances = DEFAULT) -> Rotation:
    """Rotation equal to ``matrix(second) @ matrix(first)``, phases included.

    Uses the closed-form product of two half-angle rotations:
    ``cos = c1 c2 - s1 s2 n1.n2`` and
    ``sin * n = s1 c2 n1 + c1 s2 n2 + s1 s2 (n2 x n1)``.
    """
    n1 = _check_axis(first.axis, tol)
    n2 = _check_axis(second.axis, tol)
    c1, s1 = math.cos(first.angle), math.sin(first.angle)
    c2, s2 = math.cos(second.angle), math.sin(second.angle)
    cos_phi = c1 * c2 - s1 * s2 * float(n1 @ n2)
    sin_n = s1 * c2 * n1 + c1 * s2 * n2 + s1 * s2 * np.cross(n2, n1)
    return _from_components(cos_phi, sin_n, first.global_phase + second.global_phase, tol)


def _nearest_unitary(m: np.ndarray) -> np.ndarray:
    w, _, vh = np.linalg.svd(m)
    return w @ vh


def matrix_power(u: np.ndarray, k: int) -> np.ndarray:
    """``u**k`` by binary exponentiation.

    Unitary input is re-projected onto the unitary group after every product;
    otherwise the squarings double the rounding error about 20 times for k near 1e6.
    """
    u = np.asarray(u)
    if u.ndim != 2 or u.shape[0] != u.shape[1]:
        raise DomainError(f"matrix_power needs a square matrix, got {u.shape}")
    if k < 0:
        raise DomainError("negative powers are not supported")
    snap = _nearest_unitary if unitarity_defect(u) <= 1e-10 else (lambda m: m)
    result = np.eye(u.shape[0], dtype=np.result_type(u, float))
    base = u
    while k:
        if k & 1:
            result = snap(result @ base)
        k >>= 1
        if k:
            base = snap(base @ base)
    return result


def unitarity_defect(u: np.ndarray) -> float:
    """Frobenius norm of ``U^dagger U - I``."""
    u = np.asarray(u)
    return float(np.linalg.norm(u.conj().T @ u - np.eye(u.shape[1])))


def is_unitary(u: np.ndarray, tol: Tolerances = DEFAULT) -> bool:
    return unitarity_defect(u) <= tol.unitary


def equal_up_to_phase(a: np.ndarray, b: np.ndarray) -> float:
    """Smallest ``|a - e^{i chi} b|_F`` over global phases chi."""
    a = np.asarray(a)
    b = np.asarray(b)
    overlap = np.vdot(b, a)
    phase = overlap / abs(overlap) if abs(overlap) > 0 else 1.0
    return float(np.linalg.norm(a - phase * b))


def _orthonormal_completion(cols: list[np.ndarray]) -> np.ndarray:
    """Extend up to three orthonormal 3-vectors to an orthonormal basis."""
    basis = list(cols)
    while len(basis) < 3:
        # the axis with the largest residual always keeps norm >= 1/sqrt(3)
        cands = []
        for e in np.eye(3):
            v = e
            for _ in range(2):
                v = v - sum((b @ v) * b for b in basis)
            cands.append(v)
        best = max(cands, key=np.linalg.norm)
        basis.append(best / np.linalg.norm(best))
    return np.column_stack(basis)


def svd3(d: np.ndarray, tol: Tolerances = DEFAULT):
    """One-sided (Hestenes) Jacobi SVD of a real 3x3 matrix.

    Returns ``(W, s, V)`` with ``W @ diag(s) @ V.T == d``, ``s`` descending and
    non-negative, ``W`` and ``V`` orthogonal.
    """
    a = np.array(d, dtype=float)
    if a.shape != (3, 3):
        raise DomainError(f"svd3 needs a 3x3 matrix, got {a.shape}")
    if not np.all(np.isfinite(a)):
        raise DomainError("svd3 needs finite entries")
    v = np.eye(3)
    for _ in range(tol.svd_max_sweeps):
        off = 0.0
        for p in range(2):
            for q in range(p + 1, 3):
                alpha = a[:, p] @ a[:, p]
                beta = a[:, q] @ a[:, q]
                gamma = a[:, p] @ a[:, q]
                if gamma == 0.0 or alpha == 0.0 or beta == 0.0:
                    continue
                coupling = abs(gamma) / math.sqrt(alpha) / math.sqrt(beta)
                off = max(off, coupling)
                if coupling < EPS:
                    continue  # rotation would be the identity to working precision
                zeta = (beta - alpha) / (2.0 * gamma)
                if abs(zeta) > 1e150:
                    t = 0.5 / zeta
                else:
                    t = math.copysign(1.0, zeta) / (abs(zeta) + math.sqrt(1.0 + zeta * zeta))
                c = 1.0 / math.sqrt(1.0 + t * t)
                s = c * t
                rot = np.array([[c, s], [-s, c]])
                a[:, [p, q]] = a[:, [p, q]] @ rot
                v[:, [p, q]] = v[:, [p, q]] @ rot
        if off < tol.svd_offdiag:
            break

    sv = np.linalg.norm(a, axis=0)
    order = np.argsort(-sv, kind="stable")
    sv, a, v = sv[order], a[:, order], v[:, order]
    scale = max(sv[0], 1.0)
    cols = [a[:, j] / sv[j] for j in range(3) if sv[j] > 1e-15 * scale]
    w = _orthonormal_completion(cols)
    return w, sv, v
