"""Circumconics, inconics and invariants of 3-periodic orbits in the
elliptic billiard."""
from .billiard import A4, BilliardShape, Orbit, caustic_axes, family_constants, orbit_at, right_orbit_vertex
from .conics import ConicAxes, ImplicitConic, axes, circumconic_with_center, classify_by_medial, inconic_with_center
from .errors import BilliardError
from .invariants import CLAIMS, LocusFit, SweepReport, locus, sweep
from .triangles import Triangle

__all__ = [
    "A4", "BilliardShape", "Orbit", "caustic_axes", "family_constants", "orbit_at", "right_orbit_vertex",
    "ConicAxes", "ImplicitConic", "axes", "circumconic_with_center", "classify_by_medial",
    "inconic_with_center", "BilliardError", "CLAIMS", "LocusFit", "SweepReport", "locus", "sweep",
    "Triangle",
]
__version__ = "0.1.0"
