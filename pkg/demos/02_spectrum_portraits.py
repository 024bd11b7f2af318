"""Compare the scaled spectra of the FD and DG semi-discretizations.

Both discretizations of the half-open 1D problem place every eigenvalue in
the closed left half-plane; what controls the iteration is how closely the
scaled spectrum approaches +-i.  The DG impedance closure is exact, so its
nearest mode sits farther out than the second-order FD one, and the
predicted contraction rho = max |beta_hat(lambda/omega)| is visibly better.

Run:  python3 demos/02_spectrum_portraits.py   (about half a minute)
"""

import math
import pathlib

import numpy as np

from waveholtz import (
    BoundarySpec,
    CENTRAL,
    build_dg,
    build_fd_1d,
    dg_resolution,
    fd_resolution,
    spectral_report,
)
from waveholtz.svg import Series, render_chart

OUT = pathlib.Path(__file__).parent / "out" / "spectra"
OMEGA = 10 * math.pi


def portrait(name, system):
    rep = spectral_report(system)
    z = rep.eigenvalues / OMEGA
    print(
        f"{name:10s} dofs={system.m_total:5d}  eps*={rep.eps_star:.5f}  "
        f"kappa={rep.kappa:.3e}  rho={rep.rho_filtered:.5f}  "
        f"max Re = {rep.max_real_part:+.2e}"
    )
    upper = z[z.imag >= 0]
    render_chart(
        OUT / f"{name}.svg",
        [
            Series(name="spectrum", x=upper.real, y=upper.imag, kind="scatter"),
            Series(
                name="closest mode",
                x=np.array([rep.lambda_star.real / OMEGA]),
                y=np.array([abs(rep.lambda_star.imag) / OMEGA]),
                kind="scatter",
            ),
        ],
        title=f"{name}: scaled spectrum (upper half)",
        x_label="Re(lambda/omega)", y_label="Im(lambda/omega)",
    )
    return rep


def main():
    OUT.mkdir(parents=True, exist_ok=True)
    bc = BoundarySpec.half_open(1)
    fd_rep = portrait("fd", build_fd_1d(OMEGA, fd_resolution(OMEGA), bc))
    dg1_rep = portrait("dg-p1", build_dg(OMEGA, dg_resolution(OMEGA, 1), CENTRAL, bc))
    dg2_rep = portrait("dg-p2", build_dg(OMEGA, dg_resolution(OMEGA, 2), CENTRAL, bc))
    print(
        f"\nseparation ordering: eps*_dg(P=2) = {dg2_rep.eps_star:.4f} > "
        f"eps*_dg(P=1) = {dg1_rep.eps_star:.4f} > eps*_fd = {fd_rep.eps_star:.4f}"
    )
    print(f"charts in {OUT}")


if __name__ == "__main__":
    main()
