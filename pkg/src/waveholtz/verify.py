"""Self-contained property checks behind the ``verify`` command.

Each check re-derives an identity the library must satisfy (closed form vs
defining integral, energy balances, stability of assembled spectra, the
stationarity of the frequency-domain solution under filtered propagation)
and reports pass/fail with a one-line detail.  ``quick`` runs 1D and small
surrogates in seconds; ``full`` adds the 2D point-source convergence run.
"""

from __future__ import annotations

import math
from pathlib import Path

import numpy as np

from . import dg, fd, filters
from .csvio import write_csv
from .iteration import direct_helmholtz_solve, real_fixed_point, waveholtz_iterate
from .presets import gaussian_point_source
from .spectra import eigendecompose, epsilon_star, rho_filtered
from .system import BoundarySpec
from .timestepping import TimeGrid, choose_time_grid, propagate_and_filter

__all__ = ["run_checks", "QUICK_CHECKS", "FULL_CHECKS"]


def check_filter_unit_response(rng):
    omega = 10 * math.pi
    t_period = 2 * math.pi / omega
    x, w = np.polynomial.legendre.leggauss(120)
    t = 0.5 * t_period * (x + 1.0)
    val = (2.0 / t_period) * 0.5 * t_period * np.sum(
        w * filters.filter_weight(t, omega) * np.exp(1j * omega * t)
    )
    err = abs(val - 1.0)
    return err < 1e-12, f"|unit response - 1| = {err:.2e}"


def check_transfer_special_values(rng):
    errs = [
        abs(filters.beta_hat(0.0) + 0.5),
        abs(filters.beta_hat(1j) - 1.0),
        abs(filters.beta_hat(-1j) - 1.0),
    ]
    return max(errs) < 1e-14, f"max special-value error = {max(errs):.2e}"


def check_transfer_closed_vs_integral(rng):
    z = rng.uniform(-5.0, 0.0, 200) + 1j * rng.uniform(-5.0, 5.0, 200)
    err = float(np.max(np.abs(filters.beta_hat(z) - filters.beta_hat_quadrature(z))))
    return err < 1e-10, f"max closed-form vs quadrature = {err:.2e}"


def check_transfer_reflection(rng):
    z = rng.uniform(-5.0, 0.0, 100) + 1j * rng.uniform(-5.0, 5.0, 100)
    err = float(np.max(np.abs(filters.beta_hat(np.conj(z)) - np.conj(filters.beta_hat(z)))))
    return err < 1e-14, f"max reflection asymmetry = {err:.2e}"


def check_axis_bound(rng):
    res = filters.check_axis_bounds(np.linspace(-10.0, 10.0, 2001))
    ok = bool(np.all(res.satisfied))
    return ok, "axis bound satisfied on 2001 grid points" if ok else "axis bound violated"


def check_parabolic_contraction(rng):
    z = rng.uniform(-6.0, 0.0, 2000) + 1j * rng.uniform(-6.0, 6.0, 2000)
    pd = filters.parabolic_distance(z)
    mag = np.abs(filters.beta_hat(z))
    worst = 0.0
    for eps in (0.01, 0.05, 0.1):
        keep = pd >= eps
        excess = float(np.max(mag[keep] - filters.contraction_bound(eps)))
        worst = max(worst, excess)
    return worst <= 1e-12, f"max bound excess = {worst:.2e}"


def check_series_consistency(rng):
    sc = filters.beta_series(40)
    z = 0.9 * (rng.uniform(-1, 1, 50) + 1j * rng.uniform(-1, 1, 50))
    err = float(np.max(np.abs(sc(z) - filters.beta_hat(z))))
    return err < 1e-10, f"series vs closed form = {err:.2e}"


def check_fd_stencil(rng):
    sys = fd.build_fd_1d(1.0, fd.Grid(1, 2), BoundarySpec.one_d("neumann", "outflow"))
    a = sys.assemble_dense()
    expect = np.array(
        [[-2.0, 2.0, 0.0, 0.0, 0.0, 0.0],
         [1.0, -2.0, 1.0, 0.0, 0.0, 0.0],
         [0.0, 2.0, -2.0, 0.0, 0.0, -2.0]]
    )
    err = float(np.max(np.abs(a[3:] - expect)))
    return err < 1e-14, f"ghost-eliminated row error = {err:.2e}"


def check_fd_stability_small(rng):
    omega = 4 * math.pi
    sys = fd.build_fd_1d(omega, fd.fd_resolution(omega), BoundarySpec.half_open(1))
    lam = np.linalg.eigvals(sys.assemble_dense())
    w1, w2 = rng.standard_normal((2, sys.m_total))
    lin = np.linalg.norm(sys.apply(0.3 * w1 - 1.7 * w2) - 0.3 * sys.apply(w1) + 1.7 * sys.apply(w2))
    ok = float(np.max(lam.real)) <= 1e-10 and lin < 1e-10
    return ok, f"max Re lambda = {np.max(lam.real):.2e}, linearity defect = {lin:.2e}"


def check_dg_free_stream(rng):
    sys = dg.build_dg(1.0, dg.DGMesh(1, 5, 2), dg.CENTRAL, BoundarySpec.closed(1))
    w = np.zeros(sys.m_total)
    w[sys.layout.fields["p"]] = 1.0
    err = float(np.max(np.abs(sys.apply(w))))
    return err < 1e-12, f"free-stream defect = {err:.2e}"


def check_dg_stability_small(rng):
    worst = -math.inf
    for P in (1, 2):
        for flux in (dg.CENTRAL, dg.UPWIND):
            sys = dg.build_dg(4 * math.pi, dg.DGMesh(1, 24, P), flux, BoundarySpec.half_open(1))
            lam = np.linalg.eigvals(sys.assemble_dense())
            worst = max(worst, float(np.max(lam.real)))
    return worst <= 1e-10, f"max Re lambda over P/flux = {worst:.2e}"


def check_dg_energy(rng):
    closed = BoundarySpec.closed(1)
    sc = dg.build_dg(1.0, dg.DGMesh(1, 8, 2), dg.CENTRAL, closed)
    su = dg.build_dg(1.0, dg.DGMesh(1, 8, 2), dg.UPWIND, closed)
    w = rng.standard_normal(sc.m_total)

    def rate(sys):
        aw = sys.apply(w)
        return sum(
            float(w[sl] @ dg.apply_mass(sys, aw[sl])) for sl in sys.layout.fields.values()
        )

    rc, ru = rate(sc), rate(su)
    ok = abs(rc) < 1e-10 * np.linalg.norm(w) ** 2 and ru < 0.0
    return ok, f"central dE/dt = {rc:.2e}, upwind dE/dt = {ru:.2e}"


def check_rk4_order(rng):
    from .system import DiscreteSystem
    from .timestepping import rk4_step

    sys = DiscreteSystem.from_matrix(np.array([[-1.0]]), omega=1.0)
    got = rk4_step(sys, np.array([1.0]), 0.0, 0.1)[0]
    err = abs(got - 0.9048375)
    return err < 1e-12, f"stability polynomial error = {err:.2e}"


def _fixed_point_defect(system, n_steps=2000):
    wstar = direct_helmholtz_solve(system)
    w0 = real_fixed_point(wstar)
    out = propagate_and_filter(system, w0, TimeGrid.for_omega(system.omega, n_steps))
    return float(np.linalg.norm(out - w0) / np.linalg.norm(w0))


def check_fixed_point_fd(rng):
    omega = 10 * math.pi
    sys = fd.build_fd_1d(omega, fd.fd_resolution(omega), BoundarySpec.half_open(1),
                         gaussian_point_source(omega, 1))
    defect = _fixed_point_defect(sys)
    return defect < 1e-5, f"relative fixed-point defect = {defect:.2e}"


def check_fixed_point_dg(rng):
    omega = 10 * math.pi
    sys = dg.build_dg(omega, dg.dg_resolution(omega, 1), dg.CENTRAL, BoundarySpec.half_open(1),
                      gaussian_point_source(omega, 1))
    defect = _fixed_point_defect(sys)
    return defect < 1e-5, f"relative fixed-point defect = {defect:.2e}"


def check_spectral_consistency(rng):
    omega = 10 * math.pi
    sys = fd.build_fd_1d(omega, fd.fd_resolution(omega), BoundarySpec.half_open(1))
    eig = eigendecompose(sys)
    star = epsilon_star(eig.values, omega)
    rho = rho_filtered(eig.values, omega)
    ok = (
        float(np.max(eig.values.real)) <= 1e-10
        and star.eps_star > 0.0
        and rho <= max(0.75, 1.0 - star.eps_star) + 1e-9
    )
    return ok, f"eps* = {star.eps_star:.4f}, rho = {rho:.4f}"


def check_eigenvector_transfer(rng):
    omega = 2.0
    sys = fd.build_fd_1d(omega, fd.Grid(1, 8), BoundarySpec.half_open(1))
    eig = eigendecompose(sys)
    tg = TimeGrid.for_omega(omega, 2000)
    j = int(np.argmin(np.abs(eig.values - 1j * omega)))
    r = eig.vectors[:, j]
    out = propagate_and_filter(sys, r.real, tg) + 1j * propagate_and_filter(sys, r.imag, tg)
    err = float(np.linalg.norm(out - filters.beta_hat(eig.values[j] / omega) * r))
    return err < 1e-5, f"eigenvector transfer defect = {err:.2e}"


def check_dg_separation_exceeds_fd(rng):
    omega = 10 * math.pi
    sf = fd.build_fd_1d(omega, fd.fd_resolution(omega), BoundarySpec.half_open(1))
    eps_fd = epsilon_star(np.linalg.eigvals(sf.assemble_dense()), omega).eps_star
    sd = dg.build_dg(omega, dg.dg_resolution(omega, 1), dg.CENTRAL, BoundarySpec.half_open(1))
    eps_dg = epsilon_star(np.linalg.eigvals(sd.assemble_dense()), omega).eps_star
    return eps_dg > eps_fd, f"eps*_dg = {eps_dg:.4f} vs eps*_fd = {eps_fd:.4f}"


def check_fd_2d_convergence(rng):
    omega = 10 * math.pi
    sys = fd.build_fd_2d(omega, fd.fd_resolution(omega, dim=2), BoundarySpec.half_open(2),
                         gaussian_point_source(omega, 2))
    tg = choose_time_grid(sys)
    report = waveholtz_iterate(sys, np.zeros(sys.m_total), tg, tol=1e-6, max_iters=1000)
    ok = report.iterations_to_tol is not None
    n = report.iterations_to_tol if ok else report.n_iterations
    return ok, f"reached 1e-6 in {n} iterations" if ok else f"not converged in {n}"


QUICK_CHECKS = [
    ("filter-unit-response", check_filter_unit_response),
    ("transfer-special-values", check_transfer_special_values),
    ("transfer-closed-vs-integral", check_transfer_closed_vs_integral),
    ("transfer-reflection", check_transfer_reflection),
    ("axis-bound", check_axis_bound),
    ("parabolic-contraction", check_parabolic_contraction),
    ("series-consistency", check_series_consistency),
    ("fd-stencil", check_fd_stencil),
    ("fd-stability-small", check_fd_stability_small),
    ("dg-free-stream", check_dg_free_stream),
    ("dg-stability-small", check_dg_stability_small),
    ("dg-energy", check_dg_energy),
    ("rk4-order", check_rk4_order),
    ("filter-fixed-point-fd", check_fixed_point_fd),
    ("filter-fixed-point-dg", check_fixed_point_dg),
    ("spectral-consistency", check_spectral_consistency),
    ("eigenvector-transfer", check_eigenvector_transfer),
    ("dg-separation-exceeds-fd", check_dg_separation_exceeds_fd),
]

FULL_CHECKS = QUICK_CHECKS + [
    ("fd-2d-convergence", check_fd_2d_convergence),
]


def run_checks(level: str = "quick", seed: int = 0, out_dir=None) -> list[dict]:
    """Run the named property suite; returns one record per check."""
    if level not in ("quick", "full"):
        from .errors import ConfigurationError

        raise ConfigurationError(f"verify level must be quick or full, got {level!r}")
    checks = QUICK_CHECKS if level == "quick" else FULL_CHECKS
    records = []
    for name, fn in checks:
        rng = np.random.default_rng(seed)
        try:
            ok, detail = fn(rng)
        except Exception as exc:  # a crashed check is a failed check
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        records.append({"name": name, "level": level, "passed": bool(ok), "detail": detail})
    if out_dir is not None:
        write_csv(
            Path(out_dir) / "verify.csv",
            ["name", "level", "passed", "detail"],
            [(r["name"], r["level"], int(r["passed"]), r["detail"]) for r in records],
        )
    return records
