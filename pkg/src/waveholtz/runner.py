"""Experiment pipelines behind the command-line interface.

Each command materializes one recipe as CSV tables, SVG charts backed by
the same arrays, and a JSON manifest echoing every resolved tunable.  Sweep
points are independent and may run in a process pool; per-point artifacts
are written by the worker that produced them and the summary is merged
single-threaded.
"""

from __future__ import annotations

import json
import time
from concurrent.futures import ProcessPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__, dg, fd
from .config import ExperimentConfig
from .csvio import write_csv
from .errors import ConfigurationError, WaveHoltzError
from .filters import ALPHA, beta_hat
from .iteration import direct_helmholtz_solve, waveholtz_iterate
from .presets import forcing_callable, initial_state
from .spectra import eigendecompose, fit_power_law, spectral_report
from .svg import Series, render_chart
from .timestepping import choose_time_grid

__all__ = ["build_system", "run_spectrum", "run_iterate", "run_sweep", "write_manifest"]


def build_system(cfg: ExperimentConfig, omega: float):
    dim = cfg.dimension
    bc = cfg.boundary_spec()
    const = cfg[("experiment", "resolution_constant")]
    source = forcing_callable(
        cfg[("forcing", "preset")], omega, dim, cfg[("forcing", "center")]
    )
    if cfg[("experiment", "discretization")] == "fd":
        grid = fd.fd_resolution(omega, const, dim)
        build = fd.build_fd_1d if dim == 1 else fd.build_fd_2d
        return build(omega, grid, bc, source)
    mesh = dg.dg_resolution(omega, cfg[("experiment", "poly_degree")], const, dim)
    return dg.build_dg(omega, mesh, cfg[("experiment", "flux")], bc, source)


def _time_grid(cfg, system):
    return choose_time_grid(
        system, cfl=cfg[("time", "cfl")], min_steps=cfg[("time", "min_steps")]
    )


def write_manifest(out_dir, command: str, cfg: ExperimentConfig, seed: int,
                   workers: int, outputs, extras=None) -> Path:
    import scipy

    manifest = {
        "command": command,
        "package": "waveholtz",
        "version": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "timestamp_utc": time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        "seed": seed,
        "workers": workers,
        "config": cfg.as_nested_dict(),
        "outputs": sorted(str(p) for p in outputs),
    }
    if extras:
        manifest["extras"] = extras
    path = Path(out_dir) / "manifest.json"
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return path


# spectrum ------------------------------------------------------------------


def _level_set_points(level: float, n_points: int = 101):
    span = np.sqrt(max(level, 1e-12) / ALPHA)
    y = 1.0 + np.linspace(-1.25 * span, 1.25 * span, n_points)
    x = ALPHA * (y - 1.0) ** 2 - level
    keep = x <= 0.05
    return x[keep], y[keep]


def _spectrum_single(cfg, omega, out_dir):
    out = Path(out_dir)
    system = build_system(cfg, omega)
    eig = eigendecompose(system, dof_cap=cfg[("diagnostics", "dof_cap")])
    rep = spectral_report(system, eigen=eig)
    z = eig.values / omega
    order = np.lexsort((z.imag, z.real))
    z = z[order]
    babs = np.abs(beta_hat(z))
    star_idx = int(np.argmin(np.abs(z - rep.lambda_star / omega)))
    outputs = []
    outputs.append(
        write_csv(
            out / "spectrum.csv",
            ["j", "re_lambda_over_omega", "im_lambda_over_omega", "beta_abs", "is_lambda_star"],
            [
                (j, float(z[j].real), float(z[j].imag), float(babs[j]), int(j == star_idx))
                for j in range(z.size)
            ],
        )
    )
    levels = [rep.eps_star * m for m in (1.0, 2.0, 4.0)]
    level_rows = []
    level_series = []
    for lv in levels:
        lx, ly = _level_set_points(lv)
        level_rows.extend((float(lv), float(a), float(b)) for a, b in zip(lx, ly))
        level_series.append(Series(name=f"distance={lv:.3g}", x=lx, y=ly, kind="dashed"))
    outputs.append(write_csv(out / "levelsets.csv", ["level", "re", "im"], level_rows))
    outputs.append(
        write_csv(
            out / "stats.csv",
            ["omega", "eps_star", "kappa", "rho", "rate_bound", "euclidean_gap",
             "max_re_lambda", "diagonalizable"],
            [(omega, rep.eps_star, rep.kappa, rep.rho_filtered, rep.rate_bound,
              rep.euclidean_gap, rep.max_real_part, int(rep.diagonalizable))],
        )
    )
    outputs.append(
        render_chart(
            out / "spectrum.svg",
            [
                Series(name="spectrum", x=z.real, y=z.imag, kind="scatter"),
                Series(
                    name="closest-mode",
                    x=np.array([z[star_idx].real]),
                    y=np.array([z[star_idx].imag]),
                    kind="scatter",
                ),
                *level_series,
            ],
            title=f"scaled spectrum, omega={omega:.6g}",
            x_label="Re(lambda/omega)",
            y_label="Im(lambda/omega)",
        )
    )
    return rep, outputs


def _spectrum_point(args):
    cfg, omega = args
    system = build_system(cfg, omega)
    rep = spectral_report(system, dof_cap=cfg[("diagnostics", "dof_cap")])
    return {
        "omega": omega,
        "eps_star": rep.eps_star,
        "kappa": rep.kappa,
        "rho": rep.rho_filtered,
        "euclidean_gap": rep.euclidean_gap,
        "max_re_lambda": rep.max_real_part,
        "diagonalizable": int(rep.diagonalizable),
    }


def run_spectrum(cfg: ExperimentConfig, out_dir, seed: int = 0, workers: int = 1) -> dict:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if not cfg.is_sweep:
        rep, outputs = _spectrum_single(cfg, cfg.omegas()[0], out)
        outputs.append(write_manifest(out, "spectrum", cfg, seed, workers, outputs,
                                      extras={"level_multipliers": [1.0, 2.0, 4.0]}))
        return {"eps_star": rep.eps_star, "kappa": rep.kappa, "rho": rep.rho_filtered}

    omegas = cfg.omegas()
    jobs = [(cfg, om) for om in omegas]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_spectrum_point, jobs))
    else:
        rows = [_spectrum_point(j) for j in jobs]
    outputs = [
        write_csv(
            out / "sweep_spectrum.csv",
            ["omega", "eps_star", "kappa", "rho", "euclidean_gap", "max_re_lambda",
             "diagonalizable"],
            [tuple(r[k] for k in ("omega", "eps_star", "kappa", "rho", "euclidean_gap",
                                  "max_re_lambda", "diagonalizable")) for r in rows],
        )
    ]
    om = np.array([r["omega"] for r in rows])
    fits = {}
    fit_rows = []
    for name, vals in (
        ("eps_star", np.array([r["eps_star"] for r in rows])),
        ("kappa", np.array([r["kappa"] for r in rows])),
        ("one_minus_rho", 1.0 - np.array([r["rho"] for r in rows])),
    ):
        if np.all(vals > 0.0):
            f = fit_power_law(om, vals)
            fits[name] = f
            fit_rows.append((name, f.slope, f.intercept))
    outputs.append(write_csv(out / "fits.csv", ["quantity", "slope", "intercept"], fit_rows))
    for name in ("eps_star", "kappa"):
        series = [Series(name=name, x=om, y=fits[name].values, kind="scatter")]
        series.append(Series(name=f"fit slope {fits[name].slope:.3f}",
                             x=om, y=fits[name].predict(om), kind="dashed"))
        outputs.append(
            render_chart(out / f"sweep_{name}.svg", series, title=f"{name} vs omega",
                         x_label="omega", y_label=name, x_log=True, y_log=True)
        )
    outputs.append(write_manifest(out, "spectrum", cfg, seed, workers, outputs))
    return {"fits": {k: f.slope for k, f in fits.items()}, "rows": rows}


# iterate ---------------------------------------------------------------------


def _prepare_run(cfg, omega):
    system = build_system(cfg, omega)
    tgrid = _time_grid(cfg, system)
    w0 = initial_state(system, cfg[("initial", "preset")])
    homogeneous = cfg[("forcing", "preset")] == "implicit-from-initial-error"
    want_err = (
        homogeneous
        or cfg[("diagnostics", "oracle_error")]
        or cfg[("diagnostics", "eigen_coefficients")]
    )
    oracle = None
    eigen = None
    if want_err:
        oracle = (
            np.zeros(system.m_total, dtype=complex)
            if homogeneous
            else direct_helmholtz_solve(system)
        )
    if cfg[("diagnostics", "eigen_coefficients")] or cfg[("diagnostics", "spectrum")]:
        eigen = eigendecompose(system, dof_cap=cfg[("diagnostics", "dof_cap")])
    return system, tgrid, w0, oracle, eigen


def _write_iteration_artifacts(out, omega, report, eigen=None):
    eps_star = None
    if eigen is not None:
        from .spectra import epsilon_star

        eps_star = epsilon_star(eigen.values, omega).eps_star
    outputs = []
    nres = report.residuals.size
    rows = []
    n_err = 0 if report.err_e is None else len(report.err_e)
    for n in range(max(nres + 1, n_err)):
        res = report.residuals[n - 1] if 1 <= n <= nres else None
        ee = report.err_e[n] if report.err_e is not None and n < n_err else None
        emu = report.err_mu[n] if report.err_mu is not None and n < len(report.err_mu) else None
        rows.append((n, res, ee, emu))
    outputs.append(write_csv(out / "residuals.csv", ["n", "res", "err_e", "err_mu"], rows))
    outputs.append(
        write_csv(
            out / "stats.csv",
            ["omega", "n_iterations", "iterations_to_tol", "converged_at_start",
             "first_iteration_rate", "avg_rate_e", "avg_rate_mu", "eps_star", "kappa"],
            [(
                omega,
                report.n_iterations,
                report.iterations_to_tol,
                int(report.converged_at_start),
                report.first_iteration_rate,
                report.avg_rate_e,
                report.avg_rate_mu,
                eps_star,
                None if eigen is None else eigen.kappa,
            )],
        )
    )
    if nres:
        series = [Series(name="res", x=np.arange(1, nres + 1), y=report.residuals)]
        if report.err_e is not None and report.err_e[0] > 0:
            series.append(
                Series(name="err_e_rel", x=np.arange(len(report.err_e)),
                       y=report.err_e / report.err_e[0])
            )
        if report.err_mu is not None and report.err_mu[0] > 0:
            series.append(
                Series(name="err_mu_rel", x=np.arange(len(report.err_mu)),
                       y=report.err_mu / report.err_mu[0])
            )
        outputs.append(
            render_chart(out / "residuals.svg", series, title=f"convergence, omega={omega:.6g}",
                         x_label="iteration", y_label="relative size", y_log=True)
        )
    return outputs


def run_iterate(cfg: ExperimentConfig, out_dir, seed: int = 0, workers: int = 1) -> dict:
    if cfg.is_sweep:
        raise ConfigurationError("iterate runs a single frequency; use the sweep command")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    omega = cfg.omegas()[0]
    system, tgrid, w0, oracle, eigen = _prepare_run(cfg, omega)
    report = waveholtz_iterate(
        system, w0, tgrid,
        tol=cfg[("experiment", "tol")],
        max_iters=cfg[("experiment", "max_iters")],
        oracle=oracle,
        eigen=eigen if cfg[("diagnostics", "eigen_coefficients")] else None,
    )
    outputs = _write_iteration_artifacts(out, omega, report, eigen)
    outputs.append(
        write_manifest(out, "iterate", cfg, seed, workers, outputs,
                       extras={"n_steps_per_period": tgrid.n_steps}))
    return {
        "omega": omega,
        "iterations_to_tol": report.iterations_to_tol,
        "converged_at_start": report.converged_at_start,
        "n_iterations": report.n_iterations,
    }


# sweep -----------------------------------------------------------------------


def _sweep_point(args):
    cfg, omega, point_dir = args
    try:
        system, tgrid, w0, oracle, eigen = _prepare_run(cfg, omega)
        report = waveholtz_iterate(
            system, w0, tgrid,
            tol=cfg[("experiment", "tol")],
            max_iters=cfg[("experiment", "max_iters")],
            oracle=oracle,
            eigen=eigen if cfg[("diagnostics", "eigen_coefficients")] else None,
        )
        out = Path(point_dir)
        out.mkdir(parents=True, exist_ok=True)
        _write_iteration_artifacts(out, omega, report, eigen)
        row = {
            "omega": omega,
            "N": report.iterations_to_tol,
            "rate_first": report.first_iteration_rate,
            "rate_avg_e": report.avg_rate_e,
            "rate_avg_mu": report.avg_rate_mu,
            "eps_star": None,
            "kappa": None,
        }
        if cfg[("diagnostics", "spectrum")] and eigen is not None:
            from .spectra import epsilon_star

            row["eps_star"] = epsilon_star(eigen.values, omega).eps_star
            row["kappa"] = eigen.kappa
        return row
    except WaveHoltzError as exc:
        return {"omega": omega, "error": f"{type(exc).__name__}: {exc}"}


def run_sweep(cfg: ExperimentConfig, out_dir, seed: int = 0, workers: int = 1) -> dict:
    if not cfg.is_sweep:
        raise ConfigurationError("sweep needs frequency.sweep_start/sweep_stop")
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    omegas = cfg.omegas()
    jobs = [(cfg, om, out / f"point_{i:02d}") for i, om in enumerate(omegas)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_sweep_point, jobs))
    else:
        rows = [_sweep_point(j) for j in jobs]

    good = [r for r in rows if "error" not in r]
    failed = [r for r in rows if "error" in r]
    columns = ["omega", "N", "rate_first", "rate_avg_e", "rate_avg_mu", "eps_star", "kappa"]
    outputs = [
        write_csv(out / "sweep.csv", columns, [tuple(r[c] for c in columns) for r in good])
    ]
    if failed:
        outputs.append(
            write_csv(out / "failures.csv", ["omega", "error"],
                      [(r["omega"], r["error"]) for r in failed])
        )

    fit_rows = []
    fits = {}
    om = np.array([r["omega"] for r in good])
    candidates = {
        "N": np.array([float(r["N"]) if r["N"] else np.nan for r in good]),
        "eps_star": np.array([r["eps_star"] if r["eps_star"] is not None else np.nan
                              for r in good]),
        "kappa": np.array([r["kappa"] if r["kappa"] is not None else np.nan for r in good]),
        "one_minus_rate_first": np.array(
            [1.0 - r["rate_first"] if r["rate_first"] is not None else np.nan for r in good]
        ),
        "one_minus_rate_avg_e": np.array(
            [1.0 - r["rate_avg_e"] if r["rate_avg_e"] is not None else np.nan for r in good]
        ),
        "one_minus_rate_avg_mu": np.array(
            [1.0 - r["rate_avg_mu"] if r["rate_avg_mu"] is not None else np.nan for r in good]
        ),
    }
    for name, vals in candidates.items():
        ok = np.isfinite(vals) & (vals > 0.0)
        if np.count_nonzero(ok) >= 3:
            f = fit_power_law(om[ok], vals[ok])
            fits[name] = f
            fit_rows.append((name, f.slope, f.intercept))
    outputs.append(write_csv(out / "fits.csv", ["quantity", "slope", "intercept"], fit_rows))

    if "N" in fits:
        nvals = candidates["N"]
        ok = np.isfinite(nvals)
        outputs.append(
            render_chart(
                out / "sweep.svg",
                [
                    Series(name="N", x=om[ok], y=nvals[ok], kind="scatter"),
                    Series(name=f"fit slope {fits['N'].slope:.3f}", x=om[ok],
                           y=fits["N"].predict(om[ok]), kind="dashed"),
                ],
                title="iterations to tolerance vs omega",
                x_label="omega", y_label="N", x_log=True, y_log=True,
            )
        )
    outputs.append(write_manifest(out, "sweep", cfg, seed, workers, outputs))
    return {
        "rows": rows,
        "fits": {k: f.slope for k, f in fits.items()},
        "failures": len(failed),
    }
