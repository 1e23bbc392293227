"""Allen-Cahn interface flow on constant-curvature surfaces.

Finite-difference solvers for the scalar Allen-Cahn equation on the flat
torus, the round sphere, and a hyperbolic disk, together with the diagnostic
machinery needed to check sharp-interface estimates numerically: transition
profiles, discrepancy measures, weighted monotonicity fits, density ratios,
and mean-curvature-flow comparisons.
"""

__version__ = "0.1.0"

from .geometry import (
    GridChart,
    ScalarField,
    SpaceForm,
    flat_torus,
    hyperbolic_disk,
    make_chart,
    unit_sphere,
)

__all__ = [
    "__version__",
    "SpaceForm",
    "GridChart",
    "ScalarField",
    "flat_torus",
    "unit_sphere",
    "hyperbolic_disk",
    "make_chart",
]
