"""Orbit machinery for the quadratic map f_c(u) = u^2 + c.

With a positive square floor q (so |u^2| >= q |u|^2 everywhere) the map
admits a certified escape radius: once an orbit norm strictly exceeds
lambda = max(2/q, |c|) the orbit provably diverges, and for the orbit of 0
the smaller threshold 2/q suffices.  ESCAPED outcomes are therefore
certificates; BOUNDED_UP_TO is only "no escape within the iteration
budget".  Algebras without a positive floor can still be explored with an
explicitly uncertified bailout.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .algebra import Element, StructureConstants, mul, norm
from .analysis import NoSquareFloor, SquareFloor
from .errors import DimensionMismatch, OrbitOverflow, SquareInequalityUnavailable

UNCERTIFIED_BAILOUT = 1.0e6


class OrbitMode(Enum):
    JULIA = "julia"
    MANDELBROT = "mandelbrot"


class OutcomeKind(Enum):
    ESCAPED = "escaped"
    BOUNDED_UP_TO = "bounded_up_to"
    DEGENERATE_FIXED = "degenerate_fixed"


@dataclass(frozen=True, eq=False)
class EscapeRadius:
    """Escape thresholds derived from a square-floor certificate.

    ``julia`` is max(2/q, |c|) and applies to arbitrary starting points;
    ``mandelbrot`` is 2/q and applies to the orbit of 0.  ``certified`` is
    False for heuristic bailout radii on floor-zero algebras.
    """

    julia: float
    mandelbrot: float
    floor: SquareFloor | None
    certified: bool = True


@dataclass(frozen=True, eq=False)
class OrbitOutcome:
    kind: OutcomeKind
    threshold_used: float
    certified: bool
    n: int | None = None
    norm_at_escape: float | None = None
    max_iter: int | None = None
    max_norm: float | None = None
    witness: str | None = None
    overflowed: bool = False

    @property
    def escaped(self) -> bool:
        return self.kind is OutcomeKind.ESCAPED


def escape_radius(floor: SquareFloor | NoSquareFloor, c: Element) -> EscapeRadius:
    """Certified thresholds for the parameter c; requires a positive floor."""
    if isinstance(floor, NoSquareFloor) or floor.value <= 0.0:
        raise SquareInequalityUnavailable(
            "square floor is zero: escape cannot be certified"
        )
    mandelbrot = 2.0 / floor.value
    return EscapeRadius(
        julia=max(mandelbrot, norm(c)),
        mandelbrot=mandelbrot,
        floor=floor,
        certified=True,
    )


def uncertified_radius(c: Element, bailout: float = UNCERTIFIED_BAILOUT) -> EscapeRadius:
    """Heuristic bailout thresholds for algebras without a positive floor."""
    return EscapeRadius(
        julia=max(bailout, norm(c)),
        mandelbrot=bailout,
        floor=None,
        certified=False,
    )


def _check_element(algebra: StructureConstants, u, name: str) -> Element:
    u = np.asarray(u, dtype=np.float64)
    if u.shape != (algebra.dim,):
        raise DimensionMismatch(f"{name} has shape {u.shape}, expected ({algebra.dim},)")
    return u


def classify_orbit(
    algebra: StructureConstants,
    c: Element,
    u: Element,
    radius: EscapeRadius,
    max_iter: int,
    mode: OrbitMode,
) -> OrbitOutcome:
    """Iterate u -> u^2 + c and classify against the escape threshold.

    MANDELBROT mode ignores ``u`` and follows the orbit of 0, whose first
    step is c itself.  Escape fires at the first n with |f^n| strictly
    above the threshold (or on floating-point overflow, which can only
    happen past the threshold); exact nilpotent starts with a nilpotent c
    short-circuit to a DEGENERATE_FIXED certificate because the orbit is
    constant at c from step 1 on.
    """
    if max_iter < 1:
        raise ValueError("max_iter must be at least 1")
    c = _check_element(algebra, c, "c")
    threshold = radius.julia if mode is OrbitMode.JULIA else radius.mandelbrot
    if mode is OrbitMode.JULIA:
        x = _check_element(algebra, u, "u")
    else:
        x = np.zeros(algebra.dim)

    with np.errstate(over="ignore", invalid="ignore"):
        start_degenerate = norm(mul(algebra, x, x)) == 0.0
    if start_degenerate and norm(mul(algebra, c, c)) == 0.0:
        c_norm = norm(c)
        if c_norm > threshold:
            return OrbitOutcome(
                kind=OutcomeKind.ESCAPED,
                threshold_used=threshold,
                certified=radius.certified,
                n=1,
                norm_at_escape=c_norm,
            )
        return OrbitOutcome(
            kind=OutcomeKind.DEGENERATE_FIXED,
            threshold_used=threshold,
            certified=radius.certified,
            witness="start squares to zero and c^2 = 0: orbit is constant at c",
        )

    max_norm = 0.0
    with np.errstate(over="ignore", invalid="ignore"):
        last_finite = norm(x)
    for n in range(1, max_iter + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            x = mul(algebra, x, x) + c
            value = norm(x)
        if not np.isfinite(value):
            return OrbitOutcome(
                kind=OutcomeKind.ESCAPED,
                threshold_used=threshold,
                certified=radius.certified,
                n=n,
                norm_at_escape=last_finite,
                overflowed=True,
            )
        if value > threshold:
            return OrbitOutcome(
                kind=OutcomeKind.ESCAPED,
                threshold_used=threshold,
                certified=radius.certified,
                n=n,
                norm_at_escape=value,
            )
        if value > max_norm:
            max_norm = value
        last_finite = value
    return OrbitOutcome(
        kind=OutcomeKind.BOUNDED_UP_TO,
        threshold_used=threshold,
        certified=radius.certified,
        max_iter=max_iter,
        max_norm=max_norm,
    )


def orbit_trace(
    algebra: StructureConstants, c: Element, u: Element, n: int
) -> list[Element]:
    """First n orbit points f^1(u) .. f^n(u), same arithmetic as classify_orbit.

    Raises :class:`OrbitOverflow` (carrying the truncated trace) when
    coordinates become non-finite.
    """
    if n < 1:
        raise ValueError("trace length must be at least 1")
    c = _check_element(algebra, c, "c")
    x = _check_element(algebra, u, "u")
    trace: list[Element] = []
    for step in range(1, n + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            x = mul(algebra, x, x) + c
        if not np.isfinite(x).all():
            raise OrbitOverflow(step=step, trace=trace)
        trace.append(x.copy())
    return trace


def format_trace_line(step: int, point: Element) -> str:
    """One orbit line: ``n= k  coords= a1 ... am  norm= r`` (17 digits)."""
    coords = " ".join(f"{x:.17g}" for x in point)
    with np.errstate(over="ignore", invalid="ignore"):
        value = norm(point)
    return f"n= {step}  coords= {coords}  norm= {value:.17g}"
