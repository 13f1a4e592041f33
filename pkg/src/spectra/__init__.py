"""Certified dimension estimates for sublevel sets of dynamical Markov and Lagrange spectra.

The package models a horseshoe through a subshift of finite type with a
cylinder geometry and a potential, and provides:

* covering counts and the submultiplicative dimension estimator (`dimension`),
* extraction of complete subshifts inside a sublevel set (`extraction`),
* symbolic realization of Lagrange values (`realizer`),
* a command-line front end (`cli`).
"""

__version__ = "0.1.0"

from .dimension import (  # noqa: E402
    CoveringTable,
    DimensionEstimate,
    box_dimension_oracle,
    check_submultiplicative,
    covering_count,
    covering_table,
    estimate_Du,
    moran_dimension,
    stable_covering_table,
)
from .errors import (  # noqa: E402
    CertificationFailed,
    ConfigError,
    ExtractionImpossible,
    InconclusiveError,
    RealizationError,
    SpectraError,
)
from .extraction import ExtractionParams, ExtractionResult, certify_containment, extract  # noqa: E402
from .geometry import AffineGeometry, ContinuedFractionGeometry, measure_constants  # noqa: E402
from .potentials import (  # noqa: E402
    AffineCoordinatePotential,
    BiSequence,
    ClassicalCFPotential,
    WindowPotential,
    markov_value,
    markov_value_exact,
    sup_over_concatenations,
)
from .realizer import find_maximizers, lagrange_samples, realize  # noqa: E402
from .sublevel import Verdict, cylinder_meets_sublevel  # noqa: E402
from .symbolic import PeriodicPoint, TransitionSystem, WordAlphabet, check_complete_subshift  # noqa: E402

__all__ = [
    "AffineCoordinatePotential",
    "AffineGeometry",
    "BiSequence",
    "CertificationFailed",
    "ClassicalCFPotential",
    "ConfigError",
    "ContinuedFractionGeometry",
    "CoveringTable",
    "DimensionEstimate",
    "ExtractionImpossible",
    "ExtractionParams",
    "ExtractionResult",
    "InconclusiveError",
    "PeriodicPoint",
    "RealizationError",
    "SpectraError",
    "TransitionSystem",
    "Verdict",
    "WindowPotential",
    "WordAlphabet",
    "box_dimension_oracle",
    "certify_containment",
    "check_complete_subshift",
    "check_submultiplicative",
    "covering_count",
    "covering_table",
    "cylinder_meets_sublevel",
    "estimate_Du",
    "extract",
    "find_maximizers",
    "lagrange_samples",
    "markov_value",
    "markov_value_exact",
    "measure_constants",
    "moran_dimension",
    "realize",
    "stable_covering_table",
    "sup_over_concatenations",
]
