"""Solving for the six parameters of the exact algorithm.

Pipeline for a given N:

1. ``derive_structure``: the integer structure (r, t2, c*t2) plus the
   walk's spectral quantities lambda_i.
2. ``solve_inner``: the offset d (so that (theta1+theta2)/2 = pi - d*pi/t2)
   from a one-dimensional ratio equation, then theta1 in closed form.  This
   makes the two nontrivial Bloch-sphere rotations of u return to the
   identity after c*t2 steps, leaving a phase -beta on the start state.
3. ``compute_outer_schedule`` / ``solve_outer``: the two marking phases
   alpha1, alpha2 and the outer count t1 for which alternating
   generalized Grover iterations G(alpha2, beta) G(alpha1, beta) carry the
   start state exactly onto the target.
"""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass, fields

import numpy as np

from .config import DEFAULT, Tolerances
from .errors import DegeneratePhaseError, DomainError, SolverError, UnsupportedInstanceError
from .linalg import Rotation, _from_components

TWO_PI = 2.0 * math.pi
MAX_T1_RETRIES = 3


def subset_size(n: int) -> int:
    """floor(N^(2/3)) computed exactly in integers."""
    r = int(round(n ** (2.0 / 3.0)))
    while r**3 > n * n:
        r -= 1
    while (r + 1) ** 3 <= n * n:
        r += 1
    return r


def walk_eigen_lambda(i: int, n: int, r: int) -> float:
    """sin^2 of the half principal angle between the two clique projectors."""
    return i * (n + 1 - i) / ((n - r) * (r + 1))


@dataclass(frozen=True)
class StructureParams:
    N: int
    r: int
    c: int
    t2: int
    ct2: int
    lambda_i: tuple[float, float, float]
    lam: float
    Delta: float
    delta_c: float
    k: int = 2

    @property
    def x(self) -> float:
        """The base angle pi / t2."""
        return math.pi / self.t2


@dataclass(frozen=True)
class InnerParams:
    d: float
    theta1: float
    theta2: float
    beta: float


@dataclass(frozen=True)
class OuterParams:
    phi0: float
    t1: int
    alpha1: float
    alpha2: float
    phi: float


@dataclass(frozen=True)
class AlgorithmParams:
    """Everything both simulators need, as produced by :func:`solve_params`."""

    N: int
    r: int
    c: int
    t2: int
    ct2: int
    theta1: float
    theta2: float
    d: float
    beta: float
    lam: float
    phi0: float
    t1: int
    alpha1: float
    alpha2: float
    phi: float

    @property
    def query_count(self) -> int:
        # r queries load the start state; each outer round runs 2*ct2 walk steps at 2 queries each
        return self.r + 4 * self.t1 * self.ct2

    def as_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def field_names(cls) -> list[str]:
        return [f.name for f in fields(cls)]


def derive_structure(n: int, c: int = 10) -> StructureParams:
    if not isinstance(n, (int, np.integer)) or isinstance(n, bool):
        raise DomainError(f"N must be an integer, got {n!r}")
    n = int(n)
    if n < 5:
        raise UnsupportedInstanceError(f"N must be >= 5 (got {n}); the target-free group would be empty")
    if c < 4 or c % 2:
        raise DomainError(f"c must be an even integer >= 4, got {c}")
    r = subset_size(n)
    if not 2 <= r < n - 2:
        raise UnsupportedInstanceError(f"need 2 <= r < N-2, got r={r} for N={n}")
    t2 = math.ceil(0.5 * math.pi * math.sqrt(r))
    lambdas = tuple(walk_eigen_lambda(i, n, r) for i in range(3))
    x = math.pi / t2
    return StructureParams(
        N=n,
        r=r,
        c=c,
        t2=t2,
        ct2=c * t2,
        lambda_i=lambdas,
        lam=r * (r - 1) / (n * (n - 1)),
        Delta=lambdas[2] - lambdas[1],
        delta_c=math.cos((1 - 2 / c) * x) - math.cos(x),
    )


def h_ratio(d: float, x: float, c: int = 10) -> float:
    """(cos(dx) - cos x) / (cos((1-2/c)x) - cos x) for 0 < x < pi/2."""
    if not 0.0 < x < 0.5 * math.pi:
        raise DomainError(f"x must lie in (0, pi/2), got {x!r}")
    b = 1.0 - 2.0 / c
    # cos(u) - cos(x) = 2 sin((x+u)/2) sin((x-u)/2), free of cancellation for small x
    num = math.sin(0.5 * (1 + d) * x) * math.sin(0.5 * (1 - d) * x)
    den = math.sin(0.5 * (1 + b) * x) * math.sin(0.5 * (1 - b) * x)
    return num / den


def bisect(f, lo: float, hi: float, width: float = 1e-13, f_lo: float | None = None) -> float:
    """Plain bisection on a sign-changing bracket."""
    if f_lo is None:
        f_lo = f(lo)
    if f_lo == 0.0:
        return float(lo)
    while hi - lo > width:
        mid = 0.5 * (lo + hi)
        f_mid = f(mid)
        if f_mid == 0.0:
            return float(mid)
        if (f_mid > 0) == (f_lo > 0):
            lo, f_lo = mid, f_mid
        else:
            hi = mid
    return float(0.5 * (lo + hi))


def _scan_brackets(values: np.ndarray) -> np.ndarray:
    """Indices i where values[i], values[i+1] differ in sign (or hit zero)."""
    good = np.isfinite(values[:-1]) & np.isfinite(values[1:])
    return np.nonzero(good & (np.sign(values[:-1]) * np.sign(values[1:]) <= 0))[0]


def solve_inner(sp: StructureParams, tol: Tolerances = DEFAULT) -> InnerParams:
    x = sp.x
    target = 2.0 * (1.0 + 1.0 / (sp.N - 2))

    def first(d):
        return h_ratio(d, x, sp.c) - target

    grid = np.round(np.arange(1, 100) * 0.01, 2)
    values = np.array([first(d) for d in grid])
    idx = _scan_brackets(values)
    if len(idx) == 0:
        raise SolverError(
            f"no sign change of the d-equation on [{grid[0]}, {grid[-1]}] for N={sp.N}",
            equation="first", bracket=(float(grid[0]), float(grid[-1])),
        )
    i = idx[0]
    d = bisect(first, float(grid[i]), float(grid[i + 1]), tol.bisect_width, values[i])

    rhs = (math.cos(d * x) - math.cos(x)) / sp.lambda_i[2]
    arg = math.cos(d * x) - rhs
    if not -1.0 <= arg <= 1.0:
        raise SolverError(
            f"theta1-equation has no solution for N={sp.N}: cos(d x) - rhs = {arg!r} outside [-1, 1]",
            equation="second", bracket=(0.0, TWO_PI),
        )
    theta1 = (math.acos(arg) - d * x) % TWO_PI
    theta2 = 2.0 * (math.pi - d * x) - theta1
    beta = (sp.c * d * math.pi) % TWO_PI
    return InnerParams(d=d, theta1=theta1, theta2=theta2, beta=beta)


def inner_rotation_cosines(sp: StructureParams, theta1: float, theta2: float) -> tuple[float, float]:
    """cos(phi_1), cos(phi_2): rotation angles of u on the two Bloch spheres."""
    base = math.cos(0.5 * (theta1 + theta2))
    amp = 2.0 * math.sin(0.5 * theta1) * math.sin(0.5 * theta2)
    return base + amp * sp.lambda_i[1], base + amp * sp.lambda_i[2]


def verify_inner(sp: StructureParams, ip: InnerParams) -> dict:
    """Residuals of the two inner-angle conditions, plus the d/theta relation."""
    cos1, cos2 = inner_rotation_cosines(sp, ip.theta1, ip.theta2)
    x = sp.x
    return {
        "phi1": cos1 + math.cos((1 - 2 / sp.c) * x),
        "phi2": cos2 + math.cos(x),
        "d_relation": 0.5 * (ip.theta1 + ip.theta2) - (math.pi - ip.d * x),
    }


def _fold_half_pi(a: float) -> float:
    """a + l*pi landing in [-pi/2, pi/2]."""
    return (a + 0.5 * math.pi) % math.pi - 0.5 * math.pi


def compute_outer_schedule(sp: StructureParams, ip: InnerParams, tol: Tolerances = DEFAULT) -> tuple[float, int]:
    return outer_schedule(sp.lam, ip.beta, tol)


def outer_schedule(lam: float, beta: float, tol: Tolerances = DEFAULT) -> tuple[float, int]:
    """phi0 and the minimal outer count t1 = ceil(pi / phi0)."""
    dist = abs((beta + math.pi) % TWO_PI - math.pi)
    if dist < tol.degenerate_beta:
        raise DegeneratePhaseError(f"beta = {beta!r} is a multiple of 2*pi; the walk would be the identity")
    phi0 = abs(_fold_half_pi(4.0 * math.asin(math.sqrt(lam) * math.sin(0.5 * beta))))
    # guards round-off on the exact pi/2 boundary
    t1 = math.ceil(math.pi / phi0 - 1e-12)
    return phi0, t1


def fxr_components(alpha1, alpha2, beta, lam):
    """cos(phi) and sin(phi)*n of G(alpha2, beta) G(alpha1, beta) in the {R, T} basis.

    Vectorized over alpha1/alpha2.  The full operator is
    ``exp(i((alpha1+alpha2)/2 - beta)) R_n(phi)``.
    """
    s1, c1 = np.sin(0.5 * alpha1), np.cos(0.5 * alpha1)
    s2, c2 = np.sin(0.5 * alpha2), np.cos(0.5 * alpha2)
    half_sum = 0.5 * (alpha1 + alpha2)
    sb, cb = math.sin(beta), math.cos(beta)
    sb2 = math.sin(0.5 * beta) ** 2
    m = 1.0 - 2.0 * lam
    cos_phi = (
        np.cos(half_sum + beta)
        + 2 * lam * (np.sin(half_sum) * sb - 4 * s1 * s2 * sb2)
        + 8 * lam**2 * s1 * s2 * sb2
    )
    k = 2.0 * math.sqrt(lam * (1.0 - lam))
    nx = k * (c1 * c2 * sb - 2 * m * c1 * s2 * sb2)
    ny = k * (-s1 * c2 * sb + 2 * m * s1 * s2 * sb2)
    nz = s1 * c2 * cb + c1 * s2 + m * np.cos(half_sum) * sb - 2 * m**2 * c1 * s2 * sb2
    return cos_phi, nx, ny, nz


def fxr_axis_angle(alpha1: float, alpha2: float, beta: float, lam: float, tol: Tolerances = DEFAULT) -> Rotation:
    if not 0.0 < lam < 1.0:
        raise DomainError(f"lambda must lie in (0, 1), got {lam!r}")
    cos_phi, nx, ny, nz = fxr_components(alpha1, alpha2, beta, lam)
    phase = 0.5 * (alpha1 + alpha2) - beta
    return _from_components(float(cos_phi), (float(nx), float(ny), float(nz)), phase, tol)


def alpha1_from_alpha2(alpha2, beta: float, lam: float):
    """The alpha1 solving the imaginary-part equation for a given alpha2.

    That equation is linear in (sin(alpha1/2), cos(alpha1/2)):
    ``P sin(alpha1/2) + Q cos(alpha1/2) = 0``, so alpha1/2 = atan2(-Q, P)
    with no tangent singularities.
    """
    m = 1.0 - 2.0 * lam
    s2, c2 = np.sin(0.5 * alpha2), np.cos(0.5 * alpha2)
    p = math.cos(beta) * c2 - m * math.sin(beta) * s2
    q = (2 * lam + m * math.cos(beta)) * s2 + math.sin(beta) * c2
    return 2.0 * np.arctan2(-q, p)


def _real_part(alpha2, t1: int, beta: float, lam: float):
    """Re <R| R_n(phi)^t1 |psi0>, evaluated on the imaginary-part solution curve."""
    alpha1 = alpha1_from_alpha2(alpha2, beta, lam)
    cos_phi, nx, ny, nz = fxr_components(alpha1, alpha2, beta, lam)
    s = np.sqrt(nx * nx + ny * ny + nz * nz)
    phi = np.arctan2(s, cos_phi)
    n_y = np.divide(ny, s, out=np.zeros_like(np.asarray(s, dtype=float)), where=s > 0)
    return math.sqrt(1 - lam) * np.cos(t1 * phi) - math.sqrt(lam) * np.sin(t1 * phi) * n_y


def outer_residuals(alpha1: float, alpha2: float, beta: float, lam: float, t1: int) -> dict:
    """Residuals of the two target conditions, in their displayed tangent forms."""
    cos_phi, nx, ny, nz = (float(v) for v in fxr_components(alpha1, alpha2, beta, lam))
    s = math.sqrt(nx * nx + ny * ny + nz * nz)
    phi = math.atan2(s, cos_phi)
    sb2 = math.sin(0.5 * beta) ** 2
    m = 1 - 2 * lam
    s1, c2 = math.sin(0.5 * alpha1), math.cos(0.5 * alpha2)
    s2 = math.sin(0.5 * alpha2)
    real = 1 - 2 * lam * math.tan(t1 * phi) / math.sin(phi) * (
        -s1 * c2 * math.sin(beta) + 2 * s1 * s2 * sb2 * m
    )
    ta1, ta2 = math.tan(0.5 * alpha1), math.tan(0.5 * alpha2)
    imag = (
        -m * math.sin(beta) * ta1 * ta2
        + math.cos(beta) * ta1
        + (2 * lam + m * math.cos(beta)) * ta2
        + math.sin(beta)
    )
    # same conditions with denominators cleared; well-defined everywhere
    real_cleared = math.sqrt(1 - lam) * math.cos(t1 * phi) - math.sqrt(lam) * math.sin(t1 * phi) * ny / s
    imag_cleared = math.sqrt(1 - lam) * nz + math.sqrt(lam) * nx
    return {"real": real, "imag": imag, "real_cleared": real_cleared, "imag_cleared": imag_cleared}


def solve_outer(sp: StructureParams, ip: InnerParams, t1: int, tol: Tolerances = DEFAULT,
                grid_points: int = 2001) -> OuterParams:
    return outer_solve(sp.lam, ip.beta, t1, tol, grid_points)


def outer_solve(lam: float, beta: float, t1: int, tol: Tolerances = DEFAULT,
                grid_points: int = 2001) -> OuterParams:
    """Find (alpha1, alpha2) so that t1 rounds of G(alpha2)G(alpha1) hit the target."""
    phi0, t1_min = outer_schedule(lam, beta, tol)
    if t1 < t1_min:
        raise DomainError(f"t1={t1} is below ceil(pi/phi0)={t1_min}")
    grid = np.linspace(-math.pi, math.pi, grid_points)
    values = _real_part(grid, t1, beta, lam)
    for i in _scan_brackets(values):
        alpha2 = bisect(lambda a: float(_real_part(a, t1, beta, lam)), float(grid[i]), float(grid[i + 1]),
                        tol.bisect_width, values[i])
        alpha1 = float(alpha1_from_alpha2(alpha2, beta, lam))
        res = outer_residuals(alpha1, alpha2, beta, lam, t1)
        # a sign flip across a jump of the curve is not a root
        if abs(res["real_cleared"]) <= tol.outer_residual and abs(res["imag_cleared"]) <= tol.outer_residual:
            rot = fxr_axis_angle(alpha1, alpha2, beta, lam, tol)
            return OuterParams(phi0=phi0, t1=t1, alpha1=alpha1, alpha2=alpha2, phi=rot.angle)
    raise SolverError(
        f"no (alpha1, alpha2) root for t1={t1}, beta={beta!r}, lambda={lam!r}",
        equation="real1/im1", bracket=(-math.pi, math.pi),
    )


def solve_params(n: int, c: int = 10, tol: Tolerances = DEFAULT) -> AlgorithmParams:
    """Full parameter bundle for problem size N."""
    sp = derive_structure(n, c)
    ip = solve_inner(sp, tol)
    if abs(math.remainder(sp.c * ip.d * math.pi, TWO_PI)) < tol.beta_not_multiple:
        raise DegeneratePhaseError(f"c*d*pi is a multiple of 2*pi for N={n}")
    phi0, t1 = compute_outer_schedule(sp, ip, tol)
    last = None
    for _ in range(MAX_T1_RETRIES + 1):
        try:
            op = solve_outer(sp, ip, t1, tol)
            break
        except SolverError as exc:
            last = exc
            t1 += 1
    else:
        raise last
    return AlgorithmParams(
        N=sp.N, r=sp.r, c=sp.c, t2=sp.t2, ct2=sp.ct2,
        theta1=ip.theta1, theta2=ip.theta2, d=ip.d, beta=ip.beta, lam=sp.lam,
        phi0=op.phi0, t1=op.t1, alpha1=op.alpha1, alpha2=op.alpha2, phi=op.phi,
    )
