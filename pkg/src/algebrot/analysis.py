"""Norm constants and structural features that the dynamics layer needs.

The central quantity is the *square floor* of an algebra: the largest
constant q such that |u^2| >= q |u|^2 for every element u.  By degree-2
homogeneity of squaring it equals the infimum of |u^2| over the unit
sphere.  A positive floor is what makes escape radii certifiable; a zero
floor is always witnessed by a nilpotent direction (a nonzero u with
u^2 = 0) in dimension 2.

For 2-dimensional tables of families II..VI everything is exact: nilpotent
and idempotent directions come from closed-form quadratics, and the floor
is the minimum of |u^2| over the unit circle (dense angle sweep plus
golden-section refinement).  In higher dimensions the floor is estimated
by deterministic sphere sampling and certified through the Lipschitz bound
|u^2 - v^2| <= 2 M |u - v| on the unit sphere, where M is the product
bound of the table.
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from functools import lru_cache

import numpy as np

from .algebra import (
    Element,
    StructureConstants,
    Table2D,
    TableFamily,
    detect_family,
    mul,
    mul_batch,
    norm,
    norm_batch,
    product_bound,
    table2d,
)
from .errors import UnsupportedFamily

GOLDEN_TOL = 1e-12
NILPOTENT_TOL = 1e-12
IDEMPOTENT_TOL = 1e-9


class FloorMethod(Enum):
    CLOSED_FORM_2D = "closed_form_2d"
    SAMPLED = "sampled"
    CERTIFIED_LOWER_BOUND = "certified_lower_bound"


@dataclass(frozen=True, eq=False)
class SquareFloor:
    """A lower bound q on |u^2| / |u|^2 with provenance.

    ``value`` is the bound itself.  For CERTIFIED_LOWER_BOUND certificates
    value = max(0, sampled_min - lipschitz_bound * covering_radius); the
    SAMPLED method records the raw observed minimum without any covering
    guarantee and must not be fed to escape-radius construction.
    """

    value: float
    method: FloorMethod
    sample_count: int
    covering_radius: float
    lipschitz_bound: float
    sampled_min: float
    witness: Element | None = None


@dataclass(frozen=True, eq=False)
class NoSquareFloor:
    """No positive floor exists; ``witness`` is a nonzero direction with u^2 = 0."""

    witness: Element
    lines: tuple = ()


@dataclass(frozen=True, eq=False)
class NilpotentLine:
    """The line {t * direction} of elements squaring to zero."""

    direction: Element
    description: str


@dataclass(frozen=True, eq=False)
class AffineLine:
    """One-parameter family {base + t * direction}."""

    base: Element
    direction: Element
    description: str


@dataclass(frozen=True, eq=False)
class IdempotentSolutions:
    points: tuple
    continuum: tuple = ()


@dataclass(frozen=True, eq=False)
class SquarePropertyVerdict:
    """Sampling verdict (not a proof) on whether |u^2| = |u|^2 throughout."""

    holds: bool
    max_defect: float
    witness: Element
    samples: int


@dataclass(frozen=True, eq=False)
class Canonicalization:
    """Basis change e_2 -> f_2 = alpha e_1 + beta e_2 with f_2^2 = +-e_1."""

    table: Table2D
    alpha: float
    beta: float
    f2: Element


@dataclass(frozen=True, eq=False)
class NotNormalizable:
    reason: str
    witness: Element | None = None


@dataclass(frozen=True, eq=False)
class ClassificationReport:
    dim: int
    product_bound: float
    product_degenerate: bool
    family: TableFamily | None
    table: Table2D | None
    square_property: SquarePropertyVerdict
    floor: SquareFloor | NoSquareFloor
    idempotents: IdempotentSolutions
    nilpotent_lines: tuple
    canonical: Canonicalization | NotNormalizable | None


# ---------------------------------------------------------------------------
# Exact 2-D solvers
# ---------------------------------------------------------------------------

def _require_table(t: Table2D, operation: str) -> None:
    if t.family is TableFamily.GENERAL_I:
        raise UnsupportedFamily(f"{operation} is only defined for families II..VI")


def find_nilpotents_2d(t: Table2D) -> list[NilpotentLine]:
    """All lines of nonzero elements with u^2 = 0, solved exactly.

    Writing u = a e_1 + b e_2 and (P, Q) for the e_2^2 cell,
    u^2 = (a^2 + A a b + P b^2) e_1 + (B a b + Q b^2) e_2.  Nonzero
    solutions necessarily have b != 0 (since e_1^2 = e_1), which reduces
    the system to a quadratic case split on B.
    """
    _require_table(t, "nilpotent search")
    A, B = t.A, t.B
    P, Q = t.e2_cell
    lines: list[NilpotentLine] = []
    if B != 0.0:
        if Q * Q - A * B * Q + P * B * B == 0.0:
            a = -Q / B
            lines.append(_nilpotent_line(a))
    else:
        if Q == 0.0:
            disc = A * A - 4.0 * P
            if disc > 0.0:
                root = math.sqrt(disc)
                lines.append(_nilpotent_line((-A + root) / 2.0))
                lines.append(_nilpotent_line((-A - root) / 2.0))
            elif disc == 0.0:
                lines.append(_nilpotent_line(-A / 2.0))
    return lines


def _nilpotent_line(a: float) -> NilpotentLine:
    a = a + 0.0  # normalize -0.0
    direction = np.array([a, 1.0])
    return NilpotentLine(direction, f"t * ({a!r}, 1.0)")


def find_idempotents_2d(t: Table2D) -> IdempotentSolutions:
    """All nonzero solutions of u^2 = u, solved exactly.

    e_1 itself is always idempotent.  Solutions with b != 0 satisfy the
    linear relation B a + Q b = 1 from the e_2 coordinate, which turns the
    e_1 coordinate into a quadratic; if that quadratic degenerates to
    0 = 0 a whole affine line of idempotents exists and is returned as a
    continuum.
    """
    _require_table(t, "idempotent search")
    A, B = t.A, t.B
    P, Q = t.e2_cell
    points: list[Element] = [np.array([1.0, 0.0])]
    continuum: list[AffineLine] = []

    def add_point(a: float, b: float) -> None:
        points.append(np.array([a, b]))

    if B != 0.0:
        # a = (1 - Q b) / B; B^2 * (e_1 equation) in b:
        c2 = Q * Q - A * B * Q + P * B * B
        c1 = A * B + B * Q - 2.0 * Q
        c0 = 1.0 - B
        if c2 == 0.0 and c1 == 0.0 and c0 == 0.0:
            base = np.array([1.0 / B, 0.0])
            direction = np.array([-Q / B, 1.0])
            continuum.append(
                AffineLine(base, direction, "every point of the line is idempotent")
            )
        else:
            for b in _real_roots(c2, c1, c0):
                if b != 0.0:
                    add_point((1.0 - Q * b) / B, b)
    elif Q != 0.0:
        b = 1.0 / Q
        for a in _real_roots(1.0, A * b - 1.0, P * b * b):
            add_point(a, b)
    return IdempotentSolutions(points=tuple(points), continuum=tuple(continuum))


def _real_roots(c2: float, c1: float, c0: float) -> list[float]:
    """Real roots of c2 x^2 + c1 x + c0 = 0, ordered larger root first."""
    if c2 == 0.0:
        if c1 == 0.0:
            return []
        return [-c0 / c1]
    disc = c1 * c1 - 4.0 * c2 * c0
    if disc < 0.0:
        return []
    if disc == 0.0:
        return [-c1 / (2.0 * c2)]
    root = math.sqrt(disc)
    pair = [(-c1 + root) / (2.0 * c2), (-c1 - root) / (2.0 * c2)]
    pair.sort(reverse=True)
    return pair


# ---------------------------------------------------------------------------
# Square floor: exact 2-D route and sampled general route
# ---------------------------------------------------------------------------

@lru_cache(maxsize=8)
def _half_circle(n: int) -> np.ndarray:
    # (-u)^2 = u^2, so half the circle suffices for the minimum.
    theta = (np.arange(n) + 0.5) * (math.pi / n)
    grid = np.vstack([np.cos(theta), np.sin(theta)])
    grid.setflags(write=False)
    return grid


def _square_norm_at(algebra: StructureConstants, theta: float) -> float:
    u = np.array([math.cos(theta), math.sin(theta)])
    return norm(mul(algebra, u, u))


def _golden_refine(f, lo: float, hi: float, tol: float) -> float:
    """Golden-section minimum of f on [lo, hi] to the given x tolerance."""
    inv_phi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - inv_phi * (b - a)
    x2 = a + inv_phi * (b - a)
    f1, f2 = f(x1), f(x2)
    while (b - a) > tol:
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - inv_phi * (b - a)
            f1 = f(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + inv_phi * (b - a)
            f2 = f(x2)
    return min(f1, f2)


def square_floor_2d(t: Table2D, samples: int = 100_000) -> SquareFloor | NoSquareFloor:
    """Exact dichotomy and optimal floor for a family II..VI table.

    Returns :class:`NoSquareFloor` with an exact nilpotent witness when one
    exists; otherwise minimizes |u^2| over the unit circle with a dense
    angle sweep refined by golden section, which is the optimal constant.
    """
    _require_table(t, "square floor")
    lines = find_nilpotents_2d(t)
    if lines:
        return NoSquareFloor(witness=lines[0].direction, lines=tuple(lines))
    algebra = t.to_structure_constants()
    grid = _half_circle(samples)
    values = norm_batch(mul_batch(algebra, grid, grid))
    best = int(np.argmin(values))
    dense_min = float(values[best])
    spacing = math.pi / samples
    theta_best = (best + 0.5) * spacing
    refined = _golden_refine(
        lambda th: _square_norm_at(algebra, th),
        theta_best - spacing,
        theta_best + spacing,
        GOLDEN_TOL,
    )
    value = min(dense_min, refined)
    return SquareFloor(
        value=value,
        method=FloorMethod.CLOSED_FORM_2D,
        sample_count=samples,
        covering_radius=math.pi / samples,
        lipschitz_bound=2.0 * product_bound(algebra),
        sampled_min=dense_min,
        witness=grid[:, best].copy(),
    )


def _sphere_grid(dim: int, budget: int) -> tuple[np.ndarray, float]:
    """Deterministic angle-grid sphere samples and their covering radius.

    Hyperspherical cell centers: m-2 polar angles with K cells over
    [0, pi] and one azimuthal angle with 2K cells over [0, 2 pi).  The
    angle parameterization is 1-Lipschitz per coordinate, so every unit
    vector lies within (m-1) * pi / (2K) of a sample.
    """
    axes = dim - 1
    K = max(1, int((budget / 2.0) ** (1.0 / axes)))
    counts = [K] * (axes - 1) + [2 * K]
    spans = [math.pi] * (axes - 1) + [2.0 * math.pi]
    grids = [
        (np.arange(count) + 0.5) * (span / count)
        for count, span in zip(counts, spans)
    ]
    mesh = np.meshgrid(*grids, indexing="ij")
    angles = [m.reshape(-1) for m in mesh]
    n = angles[0].size
    U = np.empty((dim, n))
    sin_prod = np.ones(n)
    for axis in range(axes):
        U[axis] = sin_prod * np.cos(angles[axis])
        sin_prod = sin_prod * np.sin(angles[axis])
    U[dim - 1] = sin_prod
    delta = axes * math.pi / (2.0 * K)
    return U, delta


def square_floor_sampled(
    algebra: StructureConstants, budget: int = 100_000, certified: bool = True
) -> SquareFloor:
    """Sphere-sampling floor estimate, certified by default.

    The certified bound subtracts the worst-case variation 2 M delta of
    |u^2| between any unit vector and its nearest sample; it degrades to
    zero when the dimension is too high for the budget.  ``certified=False``
    returns the raw observed minimum (method SAMPLED), suitable only for
    diagnostics.
    """
    if budget < 1_000:
        raise ValueError("sampling budget must be at least 1000")
    U, delta = _sphere_grid(algebra.dim, budget)
    values = norm_batch(mul_batch(algebra, U, U))
    best = int(np.argmin(values))
    sampled_min = float(values[best])
    bound = 2.0 * product_bound(algebra)
    if certified:
        value = max(0.0, sampled_min - bound * delta)
        method = FloorMethod.CERTIFIED_LOWER_BOUND
    else:
        value = sampled_min
        method = FloorMethod.SAMPLED
    return SquareFloor(
        value=value,
        method=method,
        sample_count=U.shape[1],
        covering_radius=delta,
        lipschitz_bound=bound,
        sampled_min=sampled_min,
        witness=U[:, best].copy(),
    )


def square_property_check(
    algebra: StructureConstants, samples: int = 1_000, seed: int = 0xA15EB0
) -> SquarePropertyVerdict:
    """Sampling check of |u^2| = |u|^2 on random elements with |u| <= 10."""
    if samples < 100:
        raise ValueError("square property check needs at least 100 samples")
    rng = np.random.default_rng(seed)
    U = rng.standard_normal((algebra.dim, samples))
    radii = rng.uniform(0.0, 10.0, samples)
    U *= radii / norm_batch(U)
    sq_norms = norm_batch(mul_batch(algebra, U, U))
    norms_sq = norm_batch(U) ** 2
    defects = np.abs(sq_norms - norms_sq) / (1.0 + norms_sq)
    worst = int(np.argmax(defects))
    max_defect = float(defects[worst])
    return SquarePropertyVerdict(
        holds=max_defect <= 1e-9,
        max_defect=max_defect,
        witness=U[:, worst].copy(),
        samples=samples,
    )


def slope_ratio(t: Table2D, s: float) -> float:
    """Ratio |u|^4 / |u^2|^2 along u = s e_1 + e_2, per-family closed form.

    Its supremum over s (together with the complementary chart) equals the
    inverse square of the floor; the ratio tends to 1 as |s| grows.
    Family V has no positive floor and therefore no ratio curve.
    """
    A, B = t.A, t.B
    num = (s * s + 1.0) ** 2
    if t.family is TableFamily.MINUS_III:
        den = (s * s + A * s - 1.0) ** 2 + B * B * s * s
    elif t.family is TableFamily.PLUS_IV:
        den = (s * s + A * s + 1.0) ** 2 + B * B * s * s
    elif t.family is TableFamily.IDEMPOTENT_II:
        den = (s * s + A * s + t.a22) ** 2 + t.b22 * t.b22
    elif t.family is TableFamily.TWO_IDEM_VI:
        den = (s * s + A * s) ** 2 + (B * s + 1.0) ** 2
    else:
        raise UnsupportedFamily(f"no ratio curve for family {t.family.value}")
    return num / den


# ---------------------------------------------------------------------------
# Canonicalization of family II tables
# ---------------------------------------------------------------------------

def canonicalize(t: Table2D) -> Canonicalization | NotNormalizable:
    """Normalize a family II table to III or IV via f_2 = alpha e_1 + beta e_2.

    The new basis must satisfy f_2^2 = +-e_1, which reduces to the system
    alpha^2 + A alpha beta + a22 beta^2 = +-1, B alpha beta + b22 beta^2 = 0.
    With b22 = 0 the choice alpha = 0, beta = 1/sqrt(|a22|) works whenever
    a22 != 0; with b22 != 0 a solution exists iff B != 0 and
    D = 1 - A B / b22 + B^2 a22 / b22^2 != 0, giving alpha = 1/sqrt(|D|)
    and beta = -B alpha / b22.  A table with e_2^2 = 0 is already of
    family V and is returned unchanged.
    """
    if t.family is not TableFamily.IDEMPOTENT_II:
        raise UnsupportedFamily("canonicalization starts from a family II table")
    a22, b22 = t.e2_cell
    A, B = t.A, t.B
    if a22 == 0.0 and b22 == 0.0:
        table = table2d(TableFamily.SOLVABLE_V, t.a12, t.b12, t.a21, t.b21)
        return Canonicalization(table=table, alpha=0.0, beta=1.0, f2=np.array([0.0, 1.0]))
    if b22 == 0.0:
        alpha = 0.0
        beta = 1.0 / math.sqrt(abs(a22))
        family = TableFamily.PLUS_IV if a22 > 0.0 else TableFamily.MINUS_III
    else:
        if B == 0.0:
            return NotNormalizable(
                reason="B = 0 with b22 != 0: the e_2 equation forces beta = 0"
            )
        D = 1.0 - A * B / b22 + B * B * a22 / (b22 * b22)
        if D == 0.0:
            lines = find_nilpotents_2d(t)
            witness = lines[0].direction if lines else None
            return NotNormalizable(
                reason="degenerate table: a nilpotent direction exists", witness=witness
            )
        alpha = 1.0 / math.sqrt(abs(D))
        beta = -B * alpha / b22
        family = TableFamily.PLUS_IV if D > 0.0 else TableFamily.MINUS_III
    return _finish_canonicalization(t, family, alpha, beta)


def _finish_canonicalization(
    t: Table2D, family: TableFamily, alpha: float, beta: float
) -> Canonicalization:
    algebra = t.to_structure_constants()
    f2 = np.array([alpha, beta])
    square = mul(algebra, f2, f2)
    target = np.array([1.0 if family is TableFamily.PLUS_IV else -1.0, 0.0])
    residual = norm(square - target)
    if residual > 1e-12:
        raise ArithmeticError(
            f"basis change verification failed: |f2^2 -+ e1| = {residual:.3e}"
        )
    # New off-diagonal cells in the basis {e_1, f_2}: substituting
    # e_2 = (f_2 - alpha e_1) / beta into e_1 e_2 and e_2 e_1 keeps the
    # e_2-coefficients and shifts the e_1-coefficients.
    new_a12 = alpha + beta * t.a12 - alpha * t.b12
    new_a21 = alpha + beta * t.a21 - alpha * t.b21
    table = table2d(family, new_a12, t.b12, new_a21, t.b21)
    return Canonicalization(table=table, alpha=alpha, beta=beta, f2=f2)


# ---------------------------------------------------------------------------
# Full classification
# ---------------------------------------------------------------------------

def classify(
    algebra: StructureConstants,
    floor_budget: int = 100_000,
    property_samples: int = 1_000,
) -> ClassificationReport:
    """Aggregate report: product bound, floor certificate, idempotents,
    nilpotent lines, family detection and canonical form (2-D only)."""
    bound = product_bound(algebra)
    verdict = square_property_check(algebra, samples=property_samples)
    table = detect_family(algebra)
    family: TableFamily | None = None
    idempotents = IdempotentSolutions(points=())
    nilpotents: tuple = ()
    canonical = None
    if algebra.dim == 2:
        family = table.family if table is not None else TableFamily.GENERAL_I
    if table is not None:
        floor = square_floor_2d(table, samples=floor_budget)
        idempotents = find_idempotents_2d(table)
        nilpotents = tuple(find_nilpotents_2d(table))
        if table.family is TableFamily.IDEMPOTENT_II:
            canonical = canonicalize(table)
    else:
        floor = square_floor_sampled(algebra, budget=floor_budget)
    return ClassificationReport(
        dim=algebra.dim,
        product_bound=bound,
        product_degenerate=bound == 0.0,
        family=family,
        table=table,
        square_property=verdict,
        floor=floor,
        idempotents=idempotents,
        nilpotent_lines=nilpotents,
        canonical=canonical,
    )


def _fmt(x: float) -> str:
    return repr(float(x))


def _fmt_vec(u: Element) -> str:
    return " ".join(_fmt(x) for x in u)


def report_lines(report: ClassificationReport, label: str | None = None) -> list[str]:
    """Machine-readable key = value block for a classification report."""
    lines = []
    if label is not None:
        lines.append(f"algebra = {label}")
    lines.append(f"dim = {report.dim}")
    lines.append(
        f"family = {report.family.value if report.family is not None else 'none'}"
    )
    lines.append(f"product_bound = {_fmt(report.product_bound)}")
    lines.append(f"product_degenerate = {str(report.product_degenerate).lower()}")
    verdict = report.square_property
    lines.append(f"square_property = {str(verdict.holds).lower()}")
    lines.append(f"square_property_max_defect = {_fmt(verdict.max_defect)}")
    floor = report.floor
    if isinstance(floor, SquareFloor):
        lines.append("square_floor_available = true")
        lines.append(f"square_floor = {_fmt(floor.value)}")
        lines.append(f"square_floor_method = {floor.method.value}")
        lines.append(f"square_floor_sampled_min = {_fmt(floor.sampled_min)}")
        lines.append(f"square_floor_samples = {floor.sample_count}")
        lines.append(f"square_floor_covering_radius = {_fmt(floor.covering_radius)}")
    else:
        lines.append("square_floor_available = false")
        lines.append(f"square_floor_witness = {_fmt_vec(floor.witness)}")
    lines.append(f"idempotent_count = {len(report.idempotents.points)}")
    for pos, point in enumerate(report.idempotents.points, start=1):
        lines.append(f"idempotent_{pos} = {_fmt_vec(point)}")
    for pos, line in enumerate(report.idempotents.continuum, start=1):
        lines.append(
            f"idempotent_continuum_{pos} = base {_fmt_vec(line.base)} direction {_fmt_vec(line.direction)}"
        )
    lines.append(f"nilpotent_line_count = {len(report.nilpotent_lines)}")
    for pos, line in enumerate(report.nilpotent_lines, start=1):
        lines.append(f"nilpotent_line_{pos} = {_fmt_vec(line.direction)}")
    if report.canonical is None:
        lines.append("canonical = none")
    elif isinstance(report.canonical, Canonicalization):
        canon = report.canonical
        lines.append(f"canonical_family = {canon.table.family.value}")
        lines.append(f"canonical_alpha = {_fmt(canon.alpha)}")
        lines.append(f"canonical_beta = {_fmt(canon.beta)}")
    else:
        lines.append("canonical = not_normalizable")
        lines.append(f"canonical_reason = {report.canonical.reason}")
    return lines


def report_text(report: ClassificationReport, label: str | None = None) -> str:
    return "\n".join(report_lines(report, label)) + "\n"
