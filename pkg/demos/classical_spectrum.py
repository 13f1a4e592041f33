"""Walk through the bottom of the classical Markov spectrum.

Prints the first Markov values as periodic continued-fraction orbits, then
shows how the covering counts behave on either side of 3: they saturate
below it and keep growing at and above it.
"""

import math

from spectra.dimension import covering_table
from spectra.geometry import ContinuedFractionGeometry
from spectra.potentials import ClassicalCFPotential, markov_value
from spectra.symbolic import PeriodicPoint, TransitionSystem


def main():
    ts = TransitionSystem.full_shift(2)
    pot = ClassicalCFPotential(ts)
    gm = ContinuedFractionGeometry()

    print("Markov values of short periodic orbits")
    for period, name in [((1,), "sqrt 5"), ((2,), "2 sqrt 2"), ((2, 2, 1, 1), "sqrt 221 / 5")]:
        print(f"  {period!s:14} {markov_value(PeriodicPoint(period), pot):.15f}   ({name})")
    print(f"  (1, 2)         {markov_value(PeriodicPoint((1, 2)), pot):.15f}   (2 sqrt 3 = {2 * math.sqrt(3):.15f})")

    print("\nUpper covering counts N(t, r) for r = 4, 8, ..., 20")
    for t in (2.5, 2.95, 2.999, 3.0, 3.01, 3.1):
        table = covering_table(t, 20, ts, gm, pot)
        print(f"  t = {t:<6} " + " ".join(f"{table.upper(r):6d}" for r in range(4, 21, 4)))
    print("\nBelow 3 only finitely many orbits survive, so the counts stop growing.")
    print("At t = 3 they still grow, but only polynomially: the limit dimension is 0")
    print("even though log N / r at these scales is around 0.25.")


if __name__ == "__main__":
    main()
