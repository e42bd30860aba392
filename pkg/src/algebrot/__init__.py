"""Escape-time dynamics of u^2 + c over finite-dimensional real
nonassociative algebras given by multiplication tables.

The package computes norm constants (the product bound M and the square
floor q with |u^2| >= q |u|^2), certified escape radii, orbit
classifications, and escape-time rasters of generalized filled Julia and
Mandelbrot sets; a built-in checklist re-verifies every reference fact.
"""

from .algebra import (
    Element,
    StructureConstants,
    Table2D,
    TableFamily,
    cayley_dickson,
    detect_family,
    make_algebra,
    mul,
    norm,
    product_bound,
    table2d,
)
from .analysis import (
    Canonicalization,
    ClassificationReport,
    FloorMethod,
    NilpotentLine,
    NoSquareFloor,
    NotNormalizable,
    SquareFloor,
    canonicalize,
    classify,
    find_idempotents_2d,
    find_nilpotents_2d,
    square_floor_2d,
    square_floor_sampled,
    square_property_check,
)
from .catalog import builtin_algebra, load_algebra_file, parse_algebra_text, resolve_source
from .dynamics import (
    EscapeRadius,
    OrbitMode,
    OrbitOutcome,
    OutcomeKind,
    classify_orbit,
    escape_radius,
    orbit_trace,
    uncertified_radius,
)
from .raster import EscapeGrid, RasterJob, SliceSpec, pixel_to_element, render, write_pgm

__version__ = "0.1.0"

__all__ = [
    "Element",
    "StructureConstants",
    "Table2D",
    "TableFamily",
    "cayley_dickson",
    "detect_family",
    "make_algebra",
    "mul",
    "norm",
    "product_bound",
    "table2d",
    "Canonicalization",
    "ClassificationReport",
    "FloorMethod",
    "NilpotentLine",
    "NoSquareFloor",
    "NotNormalizable",
    "SquareFloor",
    "canonicalize",
    "classify",
    "find_idempotents_2d",
    "find_nilpotents_2d",
    "square_floor_2d",
    "square_floor_sampled",
    "square_property_check",
    "builtin_algebra",
    "load_algebra_file",
    "parse_algebra_text",
    "resolve_source",
    "EscapeRadius",
    "OrbitMode",
    "OrbitOutcome",
    "OutcomeKind",
    "classify_orbit",
    "escape_radius",
    "orbit_trace",
    "uncertified_radius",
    "EscapeGrid",
    "RasterJob",
    "SliceSpec",
    "pixel_to_element",
    "render",
    "write_pgm",
]
