import math

import numpy as np
import pytest
from scipy.special import erfc

from dynheat.data import (
    Boundary,
    InitialData,
    Interior,
    NormalProfile,
    UnsupportedDataError,
    boundary_value,
)
from dynheat.kernels import HalfSpacePoint, Params, free_heat_radial
from dynheat.quadrature import QuadSpec
from dynheat.solutions import (
    boundary_trace,
    solve,
    solve_grid,
    witness_phi,
    witness_response,
)

P111 = Params(1.0, 1.0, 1.0, 2)
ONES = InitialData(Interior("constant", c=1.0), Boundary("constant", c=1.0))
GAUSS_PHI = Interior("heat_gaussian", a=0.4,
                     normal=NormalProfile("gaussian", m=0.6, b=0.3))
GAUSS_PSI = Boundary("heat_gaussian", a=0.5)

XP = np.array([0.0, 0.5, 1.0, 0.0, 2.0])
XN = np.array([0.0, 0.5, 0.25, 2.0, 1.0])


def halfline_gauss_product(x, T, m, b):
    """Closed form of int_0^inf Gamma_1(x - y, T) Gamma_1(y - m, b) dy."""
    mu = (b * x + T * m) / (T + b)
    v = T * b / (T + b)
    return free_heat_radial(1, x - m, T + b) * 0.5 * erfc(-mu / (2.0 * math.sqrt(v)))


def hd0_oracle(p, phi, xp, xn, t):
    """Absorbing-kernel action on separable Gaussian data, fully closed."""
    T = t / p.epsilon
    m, b = phi.normal.m, phi.normal.b
    tang = free_heat_radial(p.dim - 1, np.abs(xp - phi.center), T + phi.a)
    normal = (halfline_gauss_product(xn, T, m, b)
              - halfline_gauss_product(-xn, T, m, b))
    return tang * normal


class TestStationaryAndZero:
    @pytest.mark.parametrize("t", [0.25, 1.0, 4.0])
    def test_constants_are_stationary(self, t):
        u, err, conv = solve_grid("HDD", P111, ONES, XP, XN, t)
        assert conv
        assert np.max(np.abs(u - 1.0)) < 1e-9

    def test_constants_other_params(self):
        p = Params(2.0, 0.5, 1.5, 2)
        u, _, _ = solve_grid("HDD", p, ONES, XP, XN, 0.7)
        assert np.max(np.abs(u - 1.0)) < 1e-9

    def test_zero_data_gives_zero(self):
        u, _, _ = solve_grid("HDD", P111, InitialData(), XP, XN, 1.0)
        assert np.all(u == 0.0)

    def test_uniform_bound(self):
        data = InitialData(Interior("constant", c=1.0),
                           Boundary("complement_indicator", rho=1.0))
        u, _, _ = solve_grid("HDD", P111, data, XP, XN, 0.5)
        assert np.max(np.abs(u)) <= 1.0 + 1e-8


class TestLinearityMonotonicity:
    def test_linearity_in_data(self):
        d1 = InitialData(GAUSS_PHI, Boundary("zero"))
        d2 = InitialData(Interior("zero"), GAUSS_PSI)
        u1, e1, _ = solve_grid("HDD", P111, d1, XP, XN, 0.8)
        u2, e2, _ = solve_grid("HDD", P111, d2, XP, XN, 0.8)
        both = InitialData(GAUSS_PHI, GAUSS_PSI)
        u12, e12, _ = solve_grid("HDD", P111, both, XP, XN, 0.8)
        assert np.max(np.abs(u12 - u1 - u2)) <= 2.0 * (e1 + e2 + e12) + 1e-12

    def test_monotone_in_data(self):
        small = InitialData(boundary=GAUSS_PSI)
        peak = float(free_heat_radial(1, 0.0, GAUSS_PSI.a))
        big = InitialData(Interior("constant", c=peak),
                          Boundary("constant", c=peak))
        u_small, _, _ = solve_grid("HDD", P111, small, XP, XN, 0.6)
        u_big, _, _ = solve_grid("HDD", P111, big, XP, XN, 0.6)
        assert np.all(u_small <= u_big + 1e-10)


class TestReductions:
    def test_hd_is_hdd_with_zero_kappa(self):
        data = InitialData(GAUSS_PHI, GAUSS_PSI)
        u_hd, _, _ = solve_grid("HD", P111, data, XP, XN, 0.9)
        u_hdd, _, _ = solve_grid("HDD", Params(1.0, 1.0, 0.0, 2), data, XP, XN, 0.9)
        assert np.all(u_hd == u_hdd)  # same code path, bit for bit

    def test_hd0_closed_form(self):
        data = InitialData(GAUSS_PHI)
        for t in (0.3, 1.2):
            u, _, _ = solve_grid("HD0", P111, data, XP, XN, t)
            ref = hd0_oracle(P111, GAUSS_PHI, XP, XN, t)
            assert np.max(np.abs(u - ref)) < 1e-9

    def test_hd0_closed_form_3d(self):
        p = Params(1.5, 1.0, 1.0, 3)
        data = InitialData(GAUSS_PHI)
        u, _, _ = solve_grid("HD0", p, data, XP, XN, 0.8)
        ref = hd0_oracle(p, GAUSS_PHI, XP, XN, 0.8)
        assert np.max(np.abs(u - ref)) < 1e-9

    def test_ldpsi_indicator_arctan(self):
        rho = 1.0
        data = InitialData(boundary=Boundary("indicator", rho=rho))
        m = XN > 0
        u, _, _ = solve_grid("LDpsi", P111, data, XP[m], XN[m], 1.0)
        ref = (np.arctan((XP[m] + rho) / XN[m])
               - np.arctan((XP[m] - rho) / XN[m])) / math.pi
        assert np.max(np.abs(u - ref)) < 1e-9

    def test_ld_constant_is_one(self):
        data = InitialData(boundary=Boundary("constant", c=1.0))
        u, _, _ = solve_grid("LD", P111, data, XP, XN, 0.7)
        assert np.max(np.abs(u - 1.0)) < 1e-10

    def test_hdpsi_constant_erfc_profile(self):
        data = InitialData(boundary=Boundary("constant", c=1.0))
        for t in (0.5, 2.0):
            u, _, _ = solve_grid("HDpsi", P111, data, XP, XN, t)
            ref = erfc(XN * math.sqrt(P111.epsilon) / (2.0 * math.sqrt(t)))
            assert np.max(np.abs(u - ref)) < 1e-9

    def test_ldpsi_trace_returns_data(self):
        data = InitialData(boundary=GAUSS_PSI)
        u, _, _ = boundary_trace("LDpsi", P111, data, XP, 1.0)
        assert np.allclose(u, boundary_value(GAUSS_PSI, np.abs(XP), 2))

    def test_ldd_reduces_to_ld_at_zero_kappa(self):
        data = InitialData(boundary=GAUSS_PSI)
        p0 = Params(1.0, 1.0, 0.0, 2)
        a, _, _ = solve_grid("LDD", p0, data, XP, XN, 0.8)
        b, _, _ = solve_grid("LD", p0, data, XP, XN, 0.8)
        assert np.max(np.abs(a - b)) < 1e-10


class TestBruteForceOracle:
    def test_full_problem_against_numeric_tangential(self):
        # independent route: numeric tangential integrals of the pointwise
        # kernels (the library eliminates these in closed form)
        from dynheat.dynamic import exchange_log_grid
        from dynheat.kernels import dirichlet_radial, exp_flush
        from dynheat.quadrature import integrate, integrate_2d

        p = Params(1.3, 0.7, 0.9, 2)
        t = 0.8
        data = InitialData(GAUSS_PHI, GAUSS_PSI)
        xs = np.array([0.3, 1.0])
        ns = np.array([0.5, 0.0])
        u, _, _ = solve_grid("HDD", p, data, xs, ns, t)
        for j in range(len(xs)):
            xpj, xnj = xs[j], ns[j]

            def fb(y1):
                lv, _, _, _ = exchange_log_grid(p, np.abs(xpj - y1),
                                                np.full_like(y1, xnj), t)
                return exp_flush(lv) * free_heat_radial(1, y1, GAUSS_PSI.a)

            B = integrate(fb, -25.0, 25.0).value / p.epsilon

            def fi(y1, yn):
                y1b, ynb = np.broadcast_arrays(y1, yn)
                lv, _, _, _ = exchange_log_grid(p, np.abs(xpj - y1b).ravel(),
                                                (xnj + ynb).ravel(), t)
                h = exp_flush(lv).reshape(y1b.shape)
                return (h * free_heat_radial(1, y1b, GAUSS_PHI.a)
                        * free_heat_radial(1, ynb - 0.6, 0.3))

            I = integrate_2d(fi, (-20.0, 20.0), (0.0, 12.0)).value / p.delta

            def fg(y1, yn):
                y1b, ynb = np.broadcast_arrays(y1, yn)
                g0 = dirichlet_radial(np.abs(xpj - y1b), xnj, ynb, t / p.epsilon, 2)
                return (g0 * free_heat_radial(1, y1b, GAUSS_PHI.a)
                        * free_heat_radial(1, ynb - 0.6, 0.3))

            A = integrate_2d(fg, (-20.0, 20.0), (0.0, 12.0)).value
            assert u[j] == pytest.approx(A + B + I, rel=1e-8)


class TestValidation:
    def test_boundary_only_tags_reject_interior(self):
        data = InitialData(GAUSS_PHI, GAUSS_PSI)
        for tag in ("LDD", "LD", "LDpsi"):
            with pytest.raises(UnsupportedDataError):
                solve_grid(tag, P111, data, XP, XN, 1.0)

    def test_interior_only_tags_reject_boundary(self):
        data = InitialData(GAUSS_PHI, GAUSS_PSI)
        for tag in ("HDN", "HhN", "HD0"):
            with pytest.raises(UnsupportedDataError):
                solve_grid(tag, P111, data, XP, XN, 1.0)

    def test_theta_required(self):
        data = InitialData(boundary=GAUSS_PSI)
        with pytest.raises(ValueError):
            solve_grid("HDPsi", P111, data, XP, XN, 1.0)
        with pytest.raises(ValueError):
            solve_grid("LDPsi", P111, data, XP, XN, 1.0, theta=-1.0)

    def test_unknown_tag(self):
        with pytest.raises(ValueError):
            solve_grid("XXX", P111, InitialData(), XP, XN, 1.0)

    def test_power_cutoff_restrictions(self):
        pc = InitialData(Interior("heat_gaussian", a=1.0,
                                  normal=NormalProfile("power_cutoff", alpha=0.5)))
        with pytest.raises(UnsupportedDataError):
            solve_grid("HDN", P111, pc, XP, XN, 1.0)
        with pytest.raises(UnsupportedDataError):
            solve_grid("HDD", Params(1, 1, 1, 3), pc, XP, XN, 1.0)

    def test_negative_normal_rejected(self):
        with pytest.raises(ValueError):
            solve_grid("HDD", P111, ONES, [0.0], [-0.5], 1.0)


class TestSolvePointAPI:
    def test_solve_matches_grid(self):
        data = InitialData(boundary=GAUSS_PSI)
        res = solve("HDD", P111, data, HalfSpacePoint(0.5, 0.25), 0.8)
        grid, _, _ = solve_grid("HDD", P111, data, [0.5], [0.25], 0.8)
        assert res.value == grid[0]

    def test_off_axis_rejected_in_3d(self):
        p = Params(1, 1, 1, 3)
        with pytest.raises(ValueError):
            solve("HD0", p, InitialData(GAUSS_PHI),
                  HalfSpacePoint((0.3, 0.4), 0.5), 1.0)


class TestTraceBehaviour:
    def test_gaussian_boundary_trace_small_time(self):
        data = InitialData(boundary=GAUSS_PSI)
        u, _, _ = boundary_trace("HDD", P111, data, XP, 1e-3)
        target = boundary_value(GAUSS_PSI, np.abs(XP), 2)
        assert np.max(np.abs(u - target)) < 0.05

    def test_power_cutoff_subcritical_trace_vanishes(self):
        spec = QuadSpec(rel_tol=1e-6, abs_tol=1e-9)
        pc = InitialData(Interior("heat_gaussian", a=2.0,
                                  normal=NormalProfile("power_cutoff", alpha=0.5)))
        u, _, _ = solve_grid("HDD", P111, pc, [0.0], [0.0], 1e-3, spec)
        assert 0.0 < u[0] < 0.05


class TestWitness:
    def test_values(self):
        assert witness_phi(1.0, HalfSpacePoint(0.0, 1.0), 1.0, 2) == pytest.approx(
            0.030987498577413244, abs=1e-16)
        assert witness_phi(1.0, HalfSpacePoint(0.7, 0.0), 1.0, 2) == 0.0

    def test_norm_scaling_is_exact(self):
        from dynheat.verification import witness_norm

        ts = np.array([1.0, 2.0, 4.0, 8.0])
        vals = np.array([witness_norm(math.inf, 1.0, t, 2) for t in ts])
        slopes = np.log(vals[:-1] / vals[1:]) / math.log(2.0)
        assert np.allclose(slopes, 1.5, atol=1e-12)

    def test_response_reduces_to_time_shift_without_exchange(self):
        # with a huge capacity the exchange term is negligible and the
        # response is the witness at the doubled time
        p = Params(1.0, 1e8, 1.0, 2)
        xp = np.array([0.0, 0.5])
        xn = np.array([0.7, 1.0])
        u, _, _ = witness_response(p, xp, xn, 1.0)
        rho = np.hypot(xp, xn)
        ref = xn / 4.0 * free_heat_radial(2, rho, 2.0)
        assert np.max(np.abs(u - ref)) < 1e-9
