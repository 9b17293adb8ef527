import math
from dataclasses import replace

import numpy as np
import pytest

from conftest import solved
from exact_ed.config import DEFAULT
from exact_ed.errors import DegeneratePhaseError, DomainError, SolverError, UnsupportedInstanceError
from exact_ed.linalg import rotation_to_matrix
from exact_ed.params import (
    InnerParams, alpha1_from_alpha2, derive_structure, fxr_axis_angle, fxr_components, h_ratio,
    inner_rotation_cosines, outer_residuals, outer_schedule, outer_solve, solve_inner, solve_params,
    subset_size, verify_inner,
)


def psi0_2d(lam):
    return np.array([math.sqrt(1 - lam), math.sqrt(lam)])


def explicit_fxr(alpha1, alpha2, beta, lam):
    """G(a2) G(a1) in the {R, T} basis, multiplied out directly."""
    psi = psi0_2d(lam)
    s_r = np.eye(2) - (1 - np.exp(-1j * beta)) * np.outer(psi, psi)

    def s_o(a):
        return np.diag([1, np.exp(1j * a)])

    return s_r @ s_o(alpha2) @ s_r @ s_o(alpha1)


# ---- structure ------------------------------------------------------------


@pytest.mark.parametrize("n, r", [(5, 2), (7, 3), (8, 4), (26, 8), (27, 9), (28, 9), (1000, 100),
                                  (10**6, 10**4), (999_999, 9999), (10**9, 10**6)])
def test_subset_size_is_exact_floor(n, r):
    assert subset_size(n) == r


def test_structure_n5():
    sp = derive_structure(5)
    assert (sp.r, sp.t2, sp.ct2, sp.k) == (2, 3, 30, 2)
    assert sp.lambda_i[0] == 0
    assert sp.lambda_i[1] == pytest.approx(5 / 9, abs=1e-15)
    assert sp.lambda_i[2] == pytest.approx(8 / 9, abs=1e-15)
    assert 1 / sp.lambda_i[2] == pytest.approx(9 / 8, abs=1e-15)
    assert sp.lam == pytest.approx(1 / 10, abs=1e-15)
    assert sp.Delta == pytest.approx(3 / 9, abs=1e-15)


def test_structure_n1000():
    sp = derive_structure(1000)
    assert (sp.r, sp.t2, sp.ct2) == (100, 16, 160)
    assert sp.Delta == pytest.approx((1000 - 2) / (900 * 101), rel=1e-14)
    assert sp.delta_c == pytest.approx(math.cos(0.8 * math.pi / 16) - math.cos(math.pi / 16), rel=1e-14)


@pytest.mark.parametrize("n", [5, 17, 300, 4096, 99_999])
def test_structure_invariants(n):
    sp = derive_structure(n)
    assert 2 <= sp.r < n - 2
    assert sp.t2 == math.ceil(0.5 * math.pi * math.sqrt(sp.r))
    assert 0 == sp.lambda_i[0] < sp.lambda_i[1] < sp.lambda_i[2] <= 1
    assert 0 < sp.lam < 1


@pytest.mark.parametrize("n", [0, 1, 4, -3])
def test_structure_rejects_small_n(n):
    with pytest.raises(UnsupportedInstanceError):
        derive_structure(n)


@pytest.mark.parametrize("c", [3, 2, 0, 11])
def test_structure_rejects_bad_c(c):
    with pytest.raises(DomainError):
        derive_structure(50, c)


def test_structure_rejects_non_integer():
    with pytest.raises(DomainError):
        derive_structure(5.0)


# ---- h ratio --------------------------------------------------------------


@pytest.mark.parametrize("x", [1e-3, 0.3, 1.0, 1.5])
def test_h_ratio_anchor_values(x):
    assert h_ratio(1.0, x, 10) == pytest.approx(0.0, abs=1e-15)
    assert h_ratio(0.8, x, 10) == pytest.approx(1.0, abs=1e-12)
    assert h_ratio(1 - 2 / 6, x, 6) == pytest.approx(1.0, abs=1e-12)


def test_h_ratio_small_x_limit():
    assert h_ratio(0.4, 1e-4, 10) == pytest.approx(7 / 3, abs=1e-6)


@pytest.mark.parametrize("x", [0.0, -0.1, math.pi / 2, 2.0])
def test_h_ratio_domain(x):
    with pytest.raises(DomainError):
        h_ratio(0.5, x, 10)


def monotone_ratio(a, b, xs):
    # (cos(ax) - cos x) / (cos(bx) - cos x) in product form
    return (np.sin((1 + a) * xs / 2) * np.sin((1 - a) * xs / 2)) / (np.sin((1 + b) * xs / 2) * np.sin((1 - b) * xs / 2))


def test_ratio_monotone_on_grid():
    rng = np.random.default_rng(20240601)
    xs = np.linspace(0, 0.5 * math.pi, 1002)[1:-1]
    pairs = 0
    violations = 0
    while pairs < 150:
        a, b = np.sort(rng.uniform(0.02, 0.98, size=2))
        if b - a < 1e-2:
            continue
        h = monotone_ratio(a, b, xs)
        violations += int(np.sum(np.diff(h) <= 0))
        pairs += 1
    assert violations == 0


def test_bracket_facts():
    xs = np.linspace(0, 0.5 * math.pi, 5001)[1:-1]
    assert all(h_ratio(0.6, x, 10) < 2 for x in xs)
    assert all(h_ratio(0.4, x, 10) > 7 / 3 for x in xs)


# ---- inner solve ----------------------------------------------------------


@pytest.mark.parametrize("n, d", [(5, 0.30), (6, 0.38), (7, 0.42)])
def test_d_small_n(n, d):
    assert abs(solved(n).d - d) <= 0.01


def test_d_large_n_limit():
    p = solved(10**6)
    assert abs(p.d - math.sqrt(7) / 5) <= 0.01
    assert abs(p.beta - 1.2915 * math.pi) <= 0.01 * math.pi


@pytest.mark.parametrize("n", [5, 6, 7, 8, 9, 13, 50, 1000])
def test_inner_solution(n):
    sp = derive_structure(n)
    ip = solve_inner(sp)
    target = 2 * (1 + 1 / (n - 2))
    assert abs(h_ratio(ip.d, sp.x, sp.c) - target) <= 1e-10
    rep = verify_inner(sp, ip)
    assert abs(rep["phi1"]) <= 1e-10 and abs(rep["phi2"]) <= 1e-10
    assert abs(rep["d_relation"]) <= 1e-10
    assert 0 < ip.theta1 < 2 * math.pi
    assert ip.beta == pytest.approx((sp.c * ip.d * math.pi) % (2 * math.pi), abs=1e-15)


def test_theta1_sensitivity():
    sp = derive_structure(5)
    ip = solve_inner(sp)
    bumped = replace(ip, theta1=ip.theta1 + 1e-3)
    rep = verify_inner(sp, bumped)
    assert max(abs(rep["phi1"]), abs(rep["phi2"])) > 1e-5


def test_inner_rotation_cosines_matches_branch_form():
    # cos(phi_1) = -cos((1-2/c) pi/t2)  <=>  phi_1 = pi +- (1-2/c) pi/t2
    sp = derive_structure(200)
    ip = solve_inner(sp)
    c1, c2 = inner_rotation_cosines(sp, ip.theta1, ip.theta2)
    assert math.cos(math.pi - 0.8 * sp.x) == pytest.approx(c1, abs=1e-10)
    assert math.cos(math.pi - sp.x) == pytest.approx(c2, abs=1e-10)


def test_inner_solver_failure_is_reported():
    sp = derive_structure(5)
    broken = replace(sp, N=3)  # target 2(1 + 1) = 4 has no root on the scan
    with pytest.raises(SolverError) as info:
        solve_inner(broken)
    assert info.value.equation == "first"
    assert info.value.bracket == (0.01, 0.99)


def test_solver_tolerance_controls_bisection():
    loose = solve_inner(derive_structure(40), replace(DEFAULT, bisect_width=1e-4))
    tight = solve_inner(derive_structure(40))
    assert abs(loose.d - tight.d) <= 1e-4
    assert loose.d != tight.d


# ---- outer schedule -------------------------------------------------------


def test_outer_schedule_small_lambda():
    lam, beta = 1e-6, 1.3 * math.pi
    phi0, t1 = outer_schedule(lam, beta)
    approx = 4 * math.sqrt(lam) * math.sin(beta / 2)
    assert phi0 == pytest.approx(abs(approx), rel=1e-6)
    assert t1 == math.ceil(math.pi / phi0)
    assert t1 == pytest.approx(math.pi / 4 / (math.sqrt(lam) * abs(math.sin(beta / 2))), rel=1e-3)


def test_outer_schedule_quarter_turn():
    lam = 0.25
    beta = 2 * math.asin(math.sin(math.pi / 8) / math.sqrt(lam))
    phi0, t1 = outer_schedule(lam, beta)
    assert phi0 == pytest.approx(math.pi / 2, abs=1e-12)
    assert t1 == 2


@pytest.mark.parametrize("beta", [0.0, 2 * math.pi, -2 * math.pi, 4 * math.pi + 1e-12])
def test_outer_schedule_degenerate(beta):
    with pytest.raises(DegeneratePhaseError):
        outer_schedule(0.1, beta)


def test_t1_scaling_n1000():
    p = solved(1000)
    predicted = math.pi / 4 * p.N / (p.r * abs(math.sin(p.beta / 2)))
    assert predicted / 2 <= p.t1 <= 2 * predicted
    assert p.t1 >= math.ceil(math.pi / p.phi0)


def test_phi0_in_range():
    for n in (5, 7, 50, 1000):
        p = solved(n)
        assert 0 < p.phi0 <= math.pi / 2


# ---- outer solve ----------------------------------------------------------


@pytest.mark.parametrize("n", [5, 6, 7, 8, 20, 50, 200, 1000, 5000])
def test_outer_residuals(n):
    p = solved(n)
    res = outer_residuals(p.alpha1, p.alpha2, p.beta, p.lam, p.t1)
    assert abs(res["real_cleared"]) <= 1e-9
    assert abs(res["imag_cleared"]) <= 1e-9
    rot = fxr_axis_angle(p.alpha1, p.alpha2, p.beta, p.lam)
    assert math.sqrt(1 - p.lam) * rot.n[2] + math.sqrt(p.lam) * rot.n[0] == pytest.approx(0, abs=1e-9)
    assert rot.angle == pytest.approx(p.phi, abs=1e-12)


def test_tangent_form_residuals_where_defined():
    p = solved(50)
    res = outer_residuals(p.alpha1, p.alpha2, p.beta, p.lam, p.t1)
    # the tangent forms blow up near singularities; at N=50 they are well away from them
    assert abs(res["imag"]) <= 1e-8 * (1 + abs(math.tan(p.alpha1 / 2) * math.tan(p.alpha2 / 2)))
    assert abs(res["real"]) <= 1e-8 * (1 + abs(math.tan(p.t1 * p.phi)) / abs(math.sin(p.phi)))


def test_cos_phi_matches_closed_form():
    p = solved(30)
    a1, a2, b, lam = p.alpha1, p.alpha2, p.beta, p.lam
    explicit = explicit_fxr(a1, a2, b, lam) * np.exp(-1j * (0.5 * (a1 + a2) - b))
    assert math.cos(p.phi) == pytest.approx(0.5 * explicit.trace().real, abs=1e-10)


def test_outer_solution_reaches_target_2d():
    p = solved(50)
    f = explicit_fxr(p.alpha1, p.alpha2, p.beta, p.lam)
    final = np.linalg.matrix_power(f, p.t1) @ psi0_2d(p.lam)
    assert abs(final[1]) ** 2 >= 1 - 1e-9


def test_outer_rejects_short_t1():
    p = solved(50)
    with pytest.raises(DomainError):
        outer_solve(p.lam, p.beta, math.ceil(math.pi / p.phi0) - 1)


def test_alpha1_satisfies_imaginary_equation():
    rng = np.random.default_rng(17)
    for _ in range(200):
        a2, beta, lam = rng.uniform(-math.pi, math.pi), rng.uniform(0.1, 6.1), rng.uniform(0.01, 0.99)
        a1 = float(alpha1_from_alpha2(a2, beta, lam))
        _, nx, _, nz = fxr_components(a1, a2, beta, lam)
        assert math.sqrt(1 - lam) * nz + math.sqrt(lam) * nx == pytest.approx(0, abs=1e-12)


# ---- FXR ------------------------------------------------------------------


def test_fxr_matches_explicit_product():
    rng = np.random.default_rng(77)
    worst = 0.0
    for _ in range(2000):
        a1, a2 = rng.uniform(-2 * math.pi, 2 * math.pi, size=2)
        beta = rng.uniform(-2 * math.pi, 2 * math.pi)
        lam = rng.uniform(1e-4, 1 - 1e-4)
        m = rotation_to_matrix(fxr_axis_angle(a1, a2, beta, lam))
        worst = max(worst, np.abs(m - explicit_fxr(a1, a2, beta, lam)).max())
    assert worst <= 1e-10


def test_fxr_zero_alphas_rotates_about_psi0_axis():
    lam, beta = 0.3, 1.1
    rot = fxr_axis_angle(0.0, 0.0, beta, lam)
    bloch_psi0 = np.array([2 * math.sqrt(lam * (1 - lam)), 0.0, 1 - 2 * lam])
    assert np.linalg.norm(np.cross(rot.n, bloch_psi0)) <= 1e-12
    m = rotation_to_matrix(rot)
    assert np.abs(m @ psi0_2d(lam) - np.exp(-2j * beta) * psi0_2d(lam)).max() <= 1e-12


def test_fxr_zero_beta_is_z_rotation():
    a1, a2 = 0.7, -1.9
    rot = fxr_axis_angle(a1, a2, 0.0, 0.4)
    assert math.cos(rot.angle) == pytest.approx(math.cos(0.5 * (a1 + a2)), abs=1e-12)
    assert abs(abs(rot.n[2]) - 1) <= 1e-12


def test_fxr_identity_is_flagged():
    rot = fxr_axis_angle(0.0, 0.0, 0.0, 0.4)
    assert rot.is_identity and rot.axis == (0.0, 0.0, 1.0)


@pytest.mark.parametrize("lam", [0.0, 1.0, -0.1, 1.5])
def test_fxr_lambda_domain(lam):
    with pytest.raises(DomainError):
        fxr_axis_angle(0.1, 0.2, 0.3, lam)


# ---- end to end -----------------------------------------------------------


def test_solve_params_rejects_degenerate_beta(monkeypatch):
    import exact_ed.params as mod

    real = mod.solve_inner

    def fake(sp, tol=DEFAULT):
        ip = real(sp, tol)
        return InnerParams(d=0.2, theta1=ip.theta1, theta2=ip.theta2, beta=0.0)

    monkeypatch.setattr(mod, "solve_inner", fake)
    with pytest.raises(DegeneratePhaseError):
        solve_params(5)


def test_solve_params_retries_t1(monkeypatch):
    import exact_ed.params as mod

    real = mod.solve_outer
    seen = []

    def flaky(sp, ip, t1, tol=DEFAULT, grid_points=2001):
        seen.append(t1)
        if len(seen) == 1:
            raise SolverError("forced", equation="real1/im1", bracket=(-math.pi, math.pi))
        return real(sp, ip, t1, tol, grid_points)

    monkeypatch.setattr(mod, "solve_outer", flaky)
    p = solve_params(20)
    assert seen == [seen[0], seen[0] + 1]
    assert p.t1 == seen[0] + 1


def test_solve_params_gives_up_after_retries(monkeypatch):
    import exact_ed.params as mod

    def never(sp, ip, t1, tol=DEFAULT, grid_points=2001):
        raise SolverError("forced", equation="real1/im1", bracket=(-math.pi, math.pi))

    monkeypatch.setattr(mod, "solve_outer", never)
    with pytest.raises(SolverError):
        solve_params(20)


def test_query_count_formula():
    p = solved(100)
    assert p.query_count == p.r + 4 * p.t1 * p.ct2


@pytest.mark.slow
def test_invariants_all_n_up_to_10k():
    worst_rel, worst_period = 0.0, 0.0
    for n in range(5, 10_001):
        p = solve_params(n)
        sp = derive_structure(n)
        worst_rel = max(worst_rel, abs(0.5 * (p.theta1 + p.theta2) - (math.pi - p.d * math.pi / p.t2)))
        c1, c2 = inner_rotation_cosines(sp, p.theta1, p.theta2)
        for cos_phi in (c1, c2):
            phi = math.acos(max(-1.0, min(1.0, cos_phi)))
            worst_period = max(worst_period, abs(math.remainder(p.ct2 * phi, 2 * math.pi)))
    assert worst_rel <= 1e-10
    assert worst_period <= 1e-8
