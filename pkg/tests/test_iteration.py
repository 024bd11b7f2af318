"""Fixed-point iteration, direct frequency-domain oracle, complex recovery."""

import math

import numpy as np
import pytest
import scipy.linalg as la

from waveholtz import dg, fd
from waveholtz.errors import (
    ConfigurationError,
    DegenerateHistoryError,
    ResonanceError,
)
from waveholtz import iteration as it
from waveholtz.spectra import eigendecompose, rho_filtered
from waveholtz.system import BoundarySpec, DiscreteSystem
from waveholtz.timestepping import TimeGrid, choose_time_grid, propagate_and_filter

OMEGA = 10 * math.pi


def gaussian_src(omega, center=-0.5):
    return lambda x: (omega / math.sqrt(math.pi)) * np.exp(-(omega**2) * (x - center) ** 2)


@pytest.fixture(scope="module")
def fd_system():
    return fd.build_fd_1d(OMEGA, fd.fd_resolution(OMEGA), BoundarySpec.half_open(1),
                          gaussian_src(OMEGA))


class TestDirectSolve:
    def test_scalar_surrogate(self):
        sys = DiscreteSystem.from_matrix(np.array([[-1.0]]), omega=1.0, forcing=np.array([1.0]))
        sol = it.direct_helmholtz_solve(sys)
        assert sol[0] == pytest.approx(-0.5 + 0.5j, abs=1e-14)

    def test_zero_forcing(self):
        sys = DiscreteSystem.from_matrix(np.array([[-1.0]]), omega=1.0)
        np.testing.assert_array_equal(it.direct_helmholtz_solve(sys), 0.0)

    def test_eliminated_second_order_system(self, fd_system):
        # eliminating the velocity turns the block system into
        # (L - i omega B) u - omega^2 u = -f with L = -A_vu and B = A_vv
        sys = fd_system
        n = sys.layout.grid.points_per_dim
        sol = it.direct_helmholtz_solve(sys)
        u = sol[:n]
        a = sys.assemble_dense()
        lap_block = a[n:, :n]  # -L
        bnd_block = a[n:, n:]  # B
        f = sys.forcing[n:]
        resid = (-lap_block - 1j * OMEGA * bnd_block) @ u - OMEGA**2 * u + f
        assert np.linalg.norm(resid) / np.linalg.norm(f) < 1e-10

    def test_sparse_matches_dense(self, fd_system):
        dense = it.direct_helmholtz_solve(fd_system, method="dense")
        sparse = it.direct_helmholtz_solve(fd_system, method="sparse")
        np.testing.assert_allclose(sparse, dense, atol=1e-10 * np.linalg.norm(dense))

    def test_resonance_detected(self):
        # an all-wall system driven exactly at a discrete eigenfrequency
        grid = fd.Grid(1, 12)
        probe = fd.build_fd_1d(1.0, grid, BoundarySpec.closed(1), lambda x: np.ones_like(x))
        n = grid.points_per_dim
        lap = probe.assemble_dense()[n:, :n]
        evals = np.linalg.eigvals(lap)
        omega_res = math.sqrt(-np.max(evals[np.abs(evals.imag) < 1e-12].real[
            np.real(evals[np.abs(evals.imag) < 1e-12]) < -1e-8
        ]))
        sys = fd.build_fd_1d(omega_res, grid, BoundarySpec.closed(1), lambda x: np.ones_like(x))
        with pytest.raises(ResonanceError):
            it.direct_helmholtz_solve(sys)


class TestIterate:
    def test_fixed_point_is_stationary(self, fd_system):
        sys = fd_system
        wstar = it.direct_helmholtz_solve(sys)
        w0 = it.real_fixed_point(wstar)
        tg = TimeGrid.for_omega(OMEGA, 2000)
        report = it.waveholtz_iterate(sys, w0, tg, tol=0.0, max_iters=1, oracle=wstar)
        # one filtered period moves the state only by the time-discretization bias
        assert report.err_e[1] <= 1e-6 * np.linalg.norm(w0)
        assert report.residuals[0] == 1.0  # relative-update normalization

    def test_zero_everything_converges_at_start(self):
        sys = fd.build_fd_1d(OMEGA, fd.Grid(1, 16), BoundarySpec.half_open(1))
        tg = choose_time_grid(sys, min_steps=50)
        report = it.waveholtz_iterate(sys, np.zeros(sys.m_total), tg)
        assert report.converged_at_start
        assert report.iterations_to_tol == 0

    def test_residual_convergence_and_histories(self, fd_system):
        sys = fd_system
        wstar = it.direct_helmholtz_solve(sys)
        eigen = eigendecompose(sys)
        tg = choose_time_grid(sys, min_steps=200)
        report = it.waveholtz_iterate(
            sys, np.zeros(sys.m_total), tg, tol=1e-3, max_iters=400, oracle=wstar, eigen=eigen
        )
        assert report.iterations_to_tol is not None
        assert report.residuals[0] == 1.0
        assert report.residuals[report.iterations_to_tol - 1] <= 1e-3
        assert len(report.err_e) == report.n_iterations + 1
        assert report.err_e[-1] < report.err_e[0]
        assert report.err_mu is not None
        # coefficient errors contract monotonically up to the filter bias
        ratios = report.err_mu[1:] / report.err_mu[:-1]
        assert np.max(ratios) <= rho_filtered(eigen.values, OMEGA) + 1e-3

    def test_affine_split_error_recurrence(self):
        # measured e(n+1) equals the homogeneous filtered propagation of e(n)
        omega = 4 * math.pi
        sys = fd.build_fd_1d(omega, fd.fd_resolution(omega), BoundarySpec.half_open(1),
                             gaussian_src(omega))
        wstar = it.direct_helmholtz_solve(sys)
        w0 = np.zeros(sys.m_total)
        tg = TimeGrid.for_omega(omega, 2000)
        report = it.waveholtz_iterate(sys, w0, tg, tol=0.0, max_iters=2, oracle=wstar)
        wstar_real = it.real_fixed_point(wstar)
        e0 = w0 - wstar_real
        e2_measured = report.final_state - wstar_real
        w1 = propagate_and_filter(sys, w0, tg)
        e1_measured = w1 - wstar_real
        e1_predicted = propagate_and_filter(sys.homogeneous(), e0, tg)
        assert (
            np.linalg.norm(e1_measured - e1_predicted) / np.linalg.norm(e1_measured) < 1e-7
        )
        e2_predicted = propagate_and_filter(sys.homogeneous(), e1_measured, tg)
        assert np.linalg.norm(e2_measured - e2_predicted) / np.linalg.norm(e2_measured) < 1e-6

    def test_contraction_against_spectral_radius(self):
        # on a small diagonalizable instance the coefficient-error ratios
        # never exceed rho, and the error obeys the kappa-inflated bound
        omega = 4 * math.pi
        sys = fd.build_fd_1d(omega, fd.fd_resolution(omega), BoundarySpec.half_open(1),
                             gaussian_src(omega))
        eigen = eigendecompose(sys)
        assert eigen.diagonalizable
        rho = rho_filtered(eigen.values, omega)
        wstar = it.direct_helmholtz_solve(sys)
        tg = TimeGrid.for_omega(omega, 4000)
        report = it.waveholtz_iterate(
            sys, np.zeros(sys.m_total), tg, tol=0.0, max_iters=50, oracle=wstar, eigen=eigen
        )
        ratios = report.err_mu[1:] / report.err_mu[:-1]
        assert np.max(ratios) <= rho + 1e-6
        n = np.arange(len(report.err_e))
        bound = eigen.kappa * rho**n * report.err_e[0] * 1.001
        assert np.all(report.err_e <= bound)

    def test_residual_trend_geometric_beyond_transient(self, fd_system):
        tg = choose_time_grid(fd_system, min_steps=200)
        report = it.waveholtz_iterate(
            fd_system, np.zeros(fd_system.m_total), tg, tol=0.0, max_iters=120
        )
        res = report.residuals
        for start in range(20, len(res) - 50, 10):
            window = res[start : start + 50]
            gm_ratio = (window[-1] / window[0]) ** (1.0 / 49.0)
            assert gm_ratio < 1.0

    def test_validation(self, fd_system):
        tg = TimeGrid.for_omega(OMEGA, 10)
        with pytest.raises(ConfigurationError):
            it.waveholtz_iterate(fd_system, np.zeros(fd_system.m_total), tg, tol=-1.0)
        with pytest.raises(ConfigurationError):
            it.waveholtz_iterate(fd_system, np.zeros(fd_system.m_total), tg, max_iters=0)


class TestAverageRate:
    def test_exact_on_geometric(self):
        hist = 3.0 * 0.8 ** np.arange(12)
        assert it.average_rate(hist, 11) == pytest.approx(0.8, abs=1e-14)

    def test_single_step(self):
        assert it.average_rate([2.0, 1.0], 1) == pytest.approx(0.5)

    def test_errors(self):
        with pytest.raises(ConfigurationError):
            it.average_rate([1.0, 0.5], 2)
        with pytest.raises(DegenerateHistoryError):
            it.average_rate([1.0, 0.0, 0.0], 2)


class TestComplexRecovery:
    def test_fd_harmonic_pair(self):
        x = np.linspace(-1.0, 1.0, 33)
        omega = 7.0
        u = np.cos(3 * x)
        v = -omega * np.sin(3 * x)
        recovered = it.recover_complex_fd(u, v, omega)
        np.testing.assert_allclose(recovered, np.cos(3 * x) + 1j * np.sin(3 * x), atol=1e-14)

    def test_fd_zero_velocity(self):
        u = np.array([1.0, 2.0])
        np.testing.assert_array_equal(it.recover_complex_fd(u, np.zeros(2), 2.0), u)

    def test_fd_converged_run_matches_oracle(self, fd_system):
        sys = fd_system
        wstar = it.direct_helmholtz_solve(sys)
        n = sys.layout.grid.points_per_dim
        tg = TimeGrid.for_omega(OMEGA, 2000)
        report = it.waveholtz_iterate(sys, np.zeros(sys.m_total), tg, tol=1e-7, max_iters=2000)
        assert report.iterations_to_tol is not None
        u, v = report.final_state[:n], report.final_state[n:]
        recovered = it.recover_complex_fd(u, v, OMEGA)
        rel = np.linalg.norm(recovered - wstar[:n]) / np.linalg.norm(wstar[:n])
        assert rel < 1e-4
        # the general state recovery agrees with the two-block formula
        full = it.recover_complex_state(sys, report.final_state)
        np.testing.assert_allclose(full[:n], recovered, atol=1e-12)

    def test_dg_manufactured_polynomial_state(self):
        # with wall-compatible polynomial data the discrete divergence is
        # exact: p1 = (div u0) / omega and p_hat = p0 + i p1 to rounding
        omega = 5.0
        mesh = dg.DGMesh(1, 6, 2)
        sys = dg.build_dg(omega, mesh, dg.CENTRAL, BoundarySpec.closed(1))
        x = sys.layout.coords[:, 0]
        p0 = x.copy()
        u0 = 1.0 - x**2  # vanishes at the walls
        w = np.concatenate([p0, u0])
        p_hat = it.recover_complex_dg(sys, w)
        p1 = (-2.0 * x) / omega  # div u0 / omega
        np.testing.assert_allclose(p_hat, p0 + 1j * p1, atol=1e-12)

    def test_dg_zero_velocity(self):
        sys = dg.build_dg(2.0, dg.DGMesh(1, 4, 1), dg.CENTRAL, BoundarySpec.closed(1))
        p = np.ones(8)
        w = np.concatenate([p, np.zeros(8)])
        np.testing.assert_allclose(it.recover_complex_dg(sys, w), p, atol=1e-13)

    def test_dg_converged_run_matches_oracle(self):
        omega = 4 * math.pi
        mesh = dg.dg_resolution(omega, 1)
        sys = dg.build_dg(omega, mesh, dg.CENTRAL, BoundarySpec.half_open(1),
                          gaussian_src(omega))
        wstar = it.direct_helmholtz_solve(sys)
        tg = TimeGrid.for_omega(omega, 2000)
        report = it.waveholtz_iterate(sys, np.zeros(sys.m_total), tg, tol=1e-7, max_iters=2000)
        assert report.iterations_to_tol is not None
        p_hat = it.recover_complex_dg(sys, report.final_state)
        pstar = wstar[sys.layout.fields["p"]]
        assert np.linalg.norm(p_hat - pstar) / np.linalg.norm(pstar) < 1e-4
