"""Walk through the time-filter transfer function and its contraction geometry.

One filtered period multiplies a mode e^{lambda t} by beta_hat(lambda/omega).
This script evaluates beta_hat along the imaginary axis and over the left
half-plane, checks the three-case axis bound and the parabolic contraction
ceiling max(3/4, 1 - eps), and writes charts with the exact data embedded.

Run:  python3 demos/01_filter_transfer_function.py
"""

import pathlib

import numpy as np

from waveholtz import beta_hat, check_axis_bounds, contraction_bound, parabolic_distance
from waveholtz.svg import Series, render_chart

OUT = pathlib.Path(__file__).parent / "out" / "filter"


def main():
    OUT.mkdir(parents=True, exist_ok=True)

    # 1. the axis response: |beta_hat(iy)| peaks at exactly 1 when y = +-1
    y = np.linspace(-3.0, 3.0, 1201)
    mag = np.abs(beta_hat(1j * y))
    bounds = check_axis_bounds(y)
    print(f"|beta_hat(i)|  = {abs(beta_hat(1j)):.15f}")
    print(f"beta_hat(0)    = {beta_hat(0.0).real:+.15f}")
    print(f"axis bound satisfied on {y.size} points: {bool(np.all(bounds.satisfied))}")
    render_chart(
        OUT / "axis_response.svg",
        [
            Series(name="|beta_hat(iy)|", x=y, y=mag),
            Series(name="bound", x=y, y=np.asarray(bounds.bound), kind="dashed"),
        ],
        title="filter response along the imaginary axis",
        x_label="y", y_label="magnitude",
    )

    # 2. how fast modes are damped as they move away from +-i: sample the
    # left half-plane and compare against the contraction ceiling
    rng = np.random.default_rng(7)
    z = rng.uniform(-4.0, 0.0, 4000) + 1j * rng.uniform(-4.0, 4.0, 4000)
    eps = parabolic_distance(z)
    gain = np.abs(beta_hat(z))
    order = np.argsort(eps)
    print("max |beta_hat| minus ceiling over samples: "
          f"{np.max(gain - contraction_bound(eps)):.2e} (must be <= 0)")
    render_chart(
        OUT / "contraction_vs_distance.svg",
        [
            Series(name="samples", x=eps[order], y=gain[order], kind="scatter"),
            Series(name="ceiling", x=eps[order], y=contraction_bound(eps[order]), kind="dashed"),
        ],
        title="mode gain vs parabolic distance from +-i",
        x_label="parabolic distance", y_label="|beta_hat|",
    )
    print(f"charts in {OUT}")


if __name__ == "__main__":
    main()
