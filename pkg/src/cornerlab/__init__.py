"""Corner scattering lab: penetrable-scatterer forward solver and corner experiments."""

from .geometry import Ball, Box, ConvexPolygon, SectorGeometry, TruncatedSector, corner_sector
from .incident import FourierBesselMode, IncidentWave, plane_wave, point_source
from .lsolver import (
    ContrastSpec,
    FarFieldPattern,
    LippmannSchwingerSolver,
    build_contrast,
    far_field,
    solve_total_field,
)
from .mie import MieScene, mie_far_field

__version__ = "0.1.0"

__all__ = [
    "Ball",
    "Box",
    "ConvexPolygon",
    "ContrastSpec",
    "FarFieldPattern",
    "FourierBesselMode",
    "IncidentWave",
    "LippmannSchwingerSolver",
    "MieScene",
    "SectorGeometry",
    "TruncatedSector",
    "build_contrast",
    "corner_sector",
    "far_field",
    "mie_far_field",
    "plane_wave",
    "point_source",
    "solve_total_field",
]
