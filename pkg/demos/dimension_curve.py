"""Bracket the box dimension of the sublevel sets K_t across a grid of thresholds."""

import math

from spectra.dimension import covering_table, estimate_from_table, moran_dimension
from spectra.geometry import ContinuedFractionGeometry, measure_constants
from spectra.potentials import ClassicalCFPotential
from spectra.symbolic import TransitionSystem

R_MAX = 18


def main():
    ts = TransitionSystem.full_shift(2)
    gm = ContinuedFractionGeometry()
    pot = ClassicalCFPotential(ts)
    k = measure_constants(ts, gm, 8)

    print(f"{'t':>6}  {'lower':>7}  {'estimate':>8}  {'upper':>7}")
    for t in [2.2, 2.5, 2.9, 3.0, 3.05, 3.1, 3.2, 3.3, 3.4, 3.5, math.inf]:
        est = estimate_from_table(covering_table(t, R_MAX, ts, gm, pot), 1, R_MAX, 2, k)
        print(f"{t:>6}  {est.lower:7.4f}  {est.value:8.4f}  {est.upper:7.4f}")

    moran = moran_dimension([(1,), (2,)], gm, depth=12, ts=ts)
    print(f"\nAt t = inf the set is all of E_2; the Moran root at depth 12 gives {moran.value:.4f}")
    print("(published rigorous value about 0.5313).")


if __name__ == "__main__":
    main()
