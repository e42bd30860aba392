"""Built-in verification checklist run by the ``verify-paper`` CLI verb.

Every check re-derives a known reference fact of the engine from scratch:
exact product-bound constants, the square property of the doubling tower,
positive square floors exactly where the 2-D families admit them, exactly
constant orbits on nilpotent lines, provably empty filled Julia sets, and
boundedness of rendered sets.  All checks are deterministic; running the
checklist twice produces identical output.
"""

import math
from dataclasses import dataclass

import numpy as np

from . import analysis, dynamics, raster
from .algebra import (
    StructureConstants,
    Table2D,
    TableFamily,
    cayley_dickson,
    mul,
    mul_batch,
    norm,
    norm_batch,
    product_bound,
    table2d,
)
from .analysis import NoSquareFloor, SquareFloor
from .catalog import builtin_algebra
from .dynamics import OrbitMode, OutcomeKind


@dataclass(frozen=True)
class CheckResult:
    name: str
    passed: bool
    detail: str


def _result(name: str, passed: bool, detail: str) -> CheckResult:
    return CheckResult(name=name, passed=bool(passed), detail=detail)


# ---------------------------------------------------------------------------
# Product-bound constants and weak submultiplicativity
# ---------------------------------------------------------------------------

_BOUND_CONSTANTS = (
    ("complex", 2.0),
    ("perplex", 2.0),
    ("dual", math.sqrt(3.0)),
    ("cd:2", 4.0),
)


def _check_bound_constants() -> list[CheckResult]:
    results = []
    for name, expected in _BOUND_CONSTANTS:
        algebra = builtin_algebra(name).algebra
        got = product_bound(algebra)
        ok = abs(got - expected) <= 1e-12
        results.append(
            _result(f"product_bound_{name.replace(':', '')}", ok,
                    f"got {got!r}, expected {expected!r}")
        )
    return results


def _check_bound_samples() -> list[CheckResult]:
    results = []
    for name, _ in _BOUND_CONSTANTS:
        algebra = builtin_algebra(name).algebra
        bound = product_bound(algebra)
        rng = np.random.default_rng(7011)
        U = rng.standard_normal((algebra.dim, 10_000)) * 3.0
        V = rng.standard_normal((algebra.dim, 10_000)) * 3.0
        lhs = norm_batch(mul_batch(algebra, U, V))
        rhs = bound * norm_batch(U) * norm_batch(V) * (1.0 + 1e-12)
        worst = float(np.max(lhs - rhs))
        ok = bool(np.all(lhs <= rhs))
        results.append(
            _result(f"product_bound_samples_{name.replace(':', '')}", ok,
                    f"max excess {worst!r} over 10000 pairs")
        )
    return results


# ---------------------------------------------------------------------------
# Square property of the doubling tower
# ---------------------------------------------------------------------------

def _check_doubling_square_property() -> list[CheckResult]:
    results = []
    for level in (1, 2, 3, 4):
        algebra = cayley_dickson(level)
        verdict = analysis.square_property_check(algebra, samples=1_000)
        results.append(
            _result(f"square_property_cd{level}", verdict.holds,
                    f"max relative defect {verdict.max_defect!r}")
        )
    return results


# ---------------------------------------------------------------------------
# Positive floors exactly on the nilpotent-free families
# ---------------------------------------------------------------------------

_FLOOR_TABLES = (
    ("floor_family_iii_complex", table2d(TableFamily.MINUS_III, 0, 1, 0, 1)),
    ("floor_family_iii_skew", table2d(TableFamily.MINUS_III, 1.0, 0.25, 0.5, 0.25)),
    ("floor_family_iv_perplex", table2d(TableFamily.PLUS_IV, 0, 1, 0, 1)),
    ("floor_family_iv_small_a", table2d(TableFamily.PLUS_IV, 1.0, 0.0, 0.0, 0.0)),
    ("floor_family_ii_offdiag", table2d(TableFamily.IDEMPOTENT_II, 0.5, 0.5, 0.5, -0.5, 2.0, 1.0)),
    ("floor_family_vi_split", table2d(TableFamily.TWO_IDEM_VI, 0, 0, 0, 0)),
    ("floor_family_vi_skew", table2d(TableFamily.TWO_IDEM_VI, 2.0, 2.0, 0.0, 0.0)),
)


def _check_positive_floors() -> list[CheckResult]:
    results = []
    for name, table in _FLOOR_TABLES:
        floor = analysis.square_floor_2d(table, samples=20_000)
        lines = analysis.find_nilpotents_2d(table)
        ok = isinstance(floor, SquareFloor) and floor.value > 0.0 and not lines
        detail = (
            f"floor {floor.value!r}" if isinstance(floor, SquareFloor)
            else "no positive floor"
        )
        results.append(_result(name, ok, detail))
    return results


# ---------------------------------------------------------------------------
# Exactly constant orbits on nilpotent lines
# ---------------------------------------------------------------------------

def _degenerate_cases() -> list[tuple[str, Table2D, np.ndarray, np.ndarray]]:
    return [
        (
            "constant_orbit_family_iii_b0",
            table2d(TableFamily.MINUS_III, 0, 0, 0, 0),
            np.array([1.0, 1.0]),
            np.array([0.5, 0.5]),
        ),
        (
            "constant_orbit_family_iv_a2",
            table2d(TableFamily.PLUS_IV, 1.0, 0.0, 1.0, 0.0),
            np.array([-1.0, 1.0]),
            np.array([-0.5, 0.5]),
        ),
        (
            "constant_orbit_family_ii_degenerate",
            table2d(TableFamily.IDEMPOTENT_II, 1.0, 1.0, 1.0, 1.0, 0.75, 1.0),
            np.array([1.0, -2.0]),
            np.array([0.25, -0.5]),
        ),
        (
            "constant_orbit_family_v_dual",
            table2d(TableFamily.SOLVABLE_V, 0, 1, 0, 1),
            np.array([0.0, 2.0]),
            np.array([0.0, 1.0]),
        ),
        (
            "constant_orbit_family_vi_ab1",
            table2d(TableFamily.TWO_IDEM_VI, 1.0, 1.0, 0.0, 0.0),
            np.array([1.0, -1.0]),
            np.array([0.5, -0.5]),
        ),
    ]


def _check_constant_orbits() -> list[CheckResult]:
    results = []
    for name, table, u, c in _degenerate_cases():
        algebra = table.to_structure_constants()
        square_u = mul(algebra, u, u)
        square_c = mul(algebra, c, c)
        floor = analysis.square_floor_2d(table, samples=4_096)
        trace = dynamics.orbit_trace(algebra, c, u, 50)
        constant = all(np.array_equal(point, c) for point in trace)
        ok = (
            norm(square_u) == 0.0
            and norm(square_c) == 0.0
            and isinstance(floor, NoSquareFloor)
            and constant
        )
        results.append(
            _result(name, ok,
                    f"|u^2| = {norm(square_u)!r}, orbit constant over 50 steps: {constant}")
        )
    return results


# ---------------------------------------------------------------------------
# Empty filled Julia sets
# ---------------------------------------------------------------------------

def _empty_julia_case(name: str, table: Table2D, c: np.ndarray) -> CheckResult:
    algebra = table.to_structure_constants()
    floor = analysis.square_floor_2d(table, samples=20_000)
    radius = dynamics.escape_radius(floor, c)
    rng = np.random.default_rng(40_102)
    U = rng.standard_normal((2, 10_000))
    U *= rng.uniform(0.0, 10.0, 10_000) / norm_batch(U)
    all_escaped = True
    worst_n = 0
    for col in range(U.shape[1]):
        outcome = dynamics.classify_orbit(
            algebra, c, U[:, col], radius, max_iter=60, mode=OrbitMode.JULIA
        )
        if outcome.kind is not OutcomeKind.ESCAPED:
            all_escaped = False
            break
        worst_n = max(worst_n, outcome.n)
    job = raster.RasterJob(
        algebra=algebra,
        mode=OrbitMode.JULIA,
        slice=raster.SliceSpec.default(algebra),
        window=(-2.0, 2.0, -2.0, 2.0),
        width=64,
        height=64,
        max_iter=100,
        floor=floor,
        c=c,
    )
    grid = raster.render(job)
    ok = all_escaped and grid.bounded_count == 0
    return _result(
        name, ok,
        f"10000 random starts escaped (latest at n = {worst_n}), "
        f"render bounded pixels = {grid.bounded_count}",
    )


def _check_empty_julia() -> list[CheckResult]:
    return [
        _empty_julia_case(
            "empty_julia_perplex",
            table2d(TableFamily.PLUS_IV, 0, 1, 0, 1),
            np.array([1.5, 0.3]),
        ),
        _empty_julia_case(
            "empty_julia_family_vi_split",
            table2d(TableFamily.TWO_IDEM_VI, 0, 0, 0, 0),
            np.array([1.5, 0.5]),
        ),
    ]


# ---------------------------------------------------------------------------
# Boundedness of rendered sets
# ---------------------------------------------------------------------------

def _check_bounded_sets() -> list[CheckResult]:
    results = []
    source = builtin_algebra("complex")
    floor = analysis.square_floor_2d(source.table, samples=20_000)

    job = raster.RasterJob(
        algebra=source.algebra,
        mode=OrbitMode.MANDELBROT,
        slice=raster.SliceSpec.default(source.algebra),
        window=(-2.0, 1.0, -1.5, 1.5),
        width=64,
        height=64,
        max_iter=100,
        floor=floor,
    )
    grid = raster.render(job)
    worst = 0.0
    for py in range(job.height):
        for px in range(job.width):
            if not grid.escaped[py, px]:
                worst = max(worst, norm(raster.pixel_to_element(job, px, py)))
    ok = worst <= 2.0 + 1e-9
    results.append(
        _result("bounded_parameter_set_raster", ok,
                f"largest bounded |c| = {worst!r} (limit 2 + 1e-9)")
    )

    c = np.array([-1.0, 0.0])
    radius = dynamics.escape_radius(floor, c)
    julia_job = raster.RasterJob(
        algebra=source.algebra,
        mode=OrbitMode.JULIA,
        slice=raster.SliceSpec.default(source.algebra),
        window=(-2.0, 2.0, -2.0, 2.0),
        width=64,
        height=64,
        max_iter=100,
        floor=floor,
        c=c,
    )
    julia_grid = raster.render(julia_job)
    diag = math.hypot(4.0 / 64, 4.0 / 64)
    worst_u = 0.0
    for py in range(julia_job.height):
        for px in range(julia_job.width):
            if not julia_grid.escaped[py, px]:
                worst_u = max(worst_u, norm(raster.pixel_to_element(julia_job, px, py)))
    ok_u = worst_u <= radius.julia + diag
    results.append(
        _result("bounded_julia_set_raster", ok_u,
                f"largest bounded |u| = {worst_u!r} (limit {radius.julia + diag!r})")
    )
    return results


def run_all() -> list[CheckResult]:
    results: list[CheckResult] = []
    results.extend(_check_bound_constants())
    results.extend(_check_bound_samples())
    results.extend(_check_doubling_square_property())
    results.extend(_check_positive_floors())
    results.extend(_check_constant_orbits())
    results.extend(_check_empty_julia())
    results.extend(_check_bounded_sets())
    return results


def format_results(results: list[CheckResult]) -> list[str]:
    lines = [
        f"{'PASS' if r.passed else 'FAIL'} {r.name}: {r.detail}" for r in results
    ]
    failed = [r.name for r in results if not r.passed]
    lines.append(f"{len(results)} checks, {len(results) - len(failed)} passed")
    if failed:
        lines.append("failed: " + ", ".join(failed))
    return lines
