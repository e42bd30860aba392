import math

import numpy as np
import pytest

from algebrot import (
    Canonicalization,
    FloorMethod,
    NoSquareFloor,
    NotNormalizable,
    SquareFloor,
    TableFamily,
    canonicalize,
    cayley_dickson,
    classify,
    find_idempotents_2d,
    find_nilpotents_2d,
    make_algebra,
    mul,
    norm,
    square_floor_2d,
    square_floor_sampled,
    square_property_check,
    table2d,
)
from algebrot.algebra import mul_batch, norm_batch
from algebrot.analysis import report_lines, slope_ratio
from algebrot.errors import UnsupportedFamily


def collinear(u, v, tol=1e-12):
    return abs(u[0] * v[1] - u[1] * v[0]) <= tol


def grid_values():
    # Exact floats with an exact zero at the middle point.
    return [(-30 + 3 * i) / 10.0 for i in range(21)]


# ---------------------------------------------------------------------------
# Square floor, closed-form 2-D route
# ---------------------------------------------------------------------------

def test_floor_complex_is_one(complex_source):
    floor = square_floor_2d(complex_source.table)
    assert isinstance(floor, SquareFloor)
    assert floor.method is FloorMethod.CLOSED_FORM_2D
    assert abs(floor.value - 1.0) <= 1e-9


def test_floor_perplex_is_one(perplex_source):
    # |u^2|^2 = (a^2+b^2)^2 + 4 a^2 b^2 >= |u|^4 with equality at ab = 0.
    floor = square_floor_2d(perplex_source.table)
    assert abs(floor.value - 1.0) <= 1e-9


def test_floor_two_idempotent_split_value():
    # u^2 = (a^2, b^2); on the unit circle the minimum of sqrt(a^4 + b^4)
    # is attained at a^2 = b^2 = 1/2.
    floor = square_floor_2d(table2d(TableFamily.TWO_IDEM_VI, 0, 0, 0, 0))
    assert abs(floor.value - 1.0 / math.sqrt(2.0)) <= 1e-9


def test_floor_dual_unavailable(dual_source):
    floor = square_floor_2d(dual_source.table)
    assert isinstance(floor, NoSquareFloor)
    assert collinear(floor.witness, np.array([0.0, 1.0]))


def test_floor_vi_ab_one_unavailable():
    floor = square_floor_2d(table2d(TableFamily.TWO_IDEM_VI, 1.0, 1.0, 0, 0))
    assert isinstance(floor, NoSquareFloor)
    assert collinear(floor.witness, np.array([1.0, -1.0]))


def test_floor_rejects_family_i_input():
    with pytest.raises(UnsupportedFamily):
        table2d(TableFamily.GENERAL_I, 0, 0, 0, 0)


def test_floor_soundness_on_random_points(rng):
    tables = [
        table2d(TableFamily.MINUS_III, 0, 1, 0, 1),
        table2d(TableFamily.PLUS_IV, 0, 1, 0, 1),
        table2d(TableFamily.PLUS_IV, 1.0, 0, 0, 0),
        table2d(TableFamily.TWO_IDEM_VI, 0, 0, 0, 0),
        table2d(TableFamily.IDEMPOTENT_II, 0.5, 0.5, 0.5, -0.5, 2.0, 1.0),
    ]
    for table in tables:
        floor = square_floor_2d(table)
        assert isinstance(floor, SquareFloor) and floor.value > 0.0
        algebra = table.to_structure_constants()
        U = rng.standard_normal((2, 100_000)) * 4.0
        lhs = norm_batch(mul_batch(algebra, U, U))
        rhs = floor.value * norm_batch(U) ** 2 * (1.0 - 1e-9)
        assert np.all(lhs >= rhs)


# ---------------------------------------------------------------------------
# Sampled route and its certificate
# ---------------------------------------------------------------------------

def test_sampled_floor_quaternions():
    floor = square_floor_sampled(cayley_dickson(2), budget=100_000)
    assert abs(floor.sampled_min - 1.0) <= 1e-9
    assert floor.method is FloorMethod.CERTIFIED_LOWER_BOUND


def test_sampled_floor_dual_near_zero(dual_source):
    floor = square_floor_sampled(dual_source.algebra, budget=100_000)
    assert floor.sampled_min <= 1e-3
    assert floor.value == 0.0
    assert floor.witness is not None


def test_sampled_floor_complex_certified(complex_source):
    floor = square_floor_sampled(complex_source.algebra, budget=100_000)
    assert floor.value >= 0.9


def test_sampled_certificate_never_violated_by_fresh_points(rng, complex_source, dual_source):
    algebras = [
        complex_source.algebra,
        dual_source.algebra,
        table2d(TableFamily.TWO_IDEM_VI, 0, 0, 0, 0).to_structure_constants(),
        cayley_dickson(2),
    ]
    for algebra in algebras:
        floor = square_floor_sampled(algebra, budget=50_000)
        U = rng.standard_normal((algebra.dim, 1_000_000))
        U /= norm_batch(U)
        fresh_min = float(np.min(norm_batch(mul_batch(algebra, U, U))))
        assert fresh_min >= floor.value


def test_sampled_agrees_with_closed_form(complex_source, perplex_source):
    cases = [
        (complex_source.table, complex_source.algebra),
        (perplex_source.table, perplex_source.algebra),
    ]
    vi = table2d(TableFamily.TWO_IDEM_VI, 0, 0, 0, 0)
    cases.append((vi, vi.to_structure_constants()))
    for table, algebra in cases:
        closed = square_floor_2d(table)
        sampled = square_floor_sampled(algebra, budget=100_000)
        slack = sampled.lipschitz_bound * sampled.covering_radius
        assert abs(closed.value - sampled.value) <= slack + 1e-12


def test_sampled_uncertified_method(complex_source):
    floor = square_floor_sampled(complex_source.algebra, budget=10_000, certified=False)
    assert floor.method is FloorMethod.SAMPLED
    assert floor.value == floor.sampled_min


def test_sampled_budget_guard(complex_source):
    with pytest.raises(ValueError):
        square_floor_sampled(complex_source.algebra, budget=10)


# ---------------------------------------------------------------------------
# Square property verdicts
# ---------------------------------------------------------------------------

def test_square_property_cd3_holds():
    assert square_property_check(cayley_dickson(3)).holds


def test_square_property_perplex_fails(perplex_source):
    # witness u = (1,1): |u^2| = |(2,2)| = 2 sqrt(2) while |u|^2 = 2
    verdict = square_property_check(perplex_source.algebra)
    assert not verdict.holds
    assert verdict.max_defect > 1e-3


def test_square_property_zero_algebra_fails():
    algebra = make_algebra(2, np.zeros((2, 2, 2)))
    assert not square_property_check(algebra).holds


# ---------------------------------------------------------------------------
# Nilpotent lines (exact)
# ---------------------------------------------------------------------------

def test_nilpotents_family_iii_b0():
    lines = find_nilpotents_2d(table2d(TableFamily.MINUS_III, 0, 0, 0, 0))
    dirs = [l.direction for l in lines]
    assert len(dirs) == 2
    assert any(collinear(d, np.array([1.0, 1.0])) for d in dirs)
    assert any(collinear(d, np.array([-1.0, 1.0])) for d in dirs)


def test_nilpotents_family_ii_degenerate():
    table = table2d(TableFamily.IDEMPOTENT_II, 1, 1, 1, 1, 0.75, 1.0)
    lines = find_nilpotents_2d(table)
    assert len(lines) == 1
    assert collinear(lines[0].direction, np.array([1.0, -2.0]))


def test_nilpotents_family_iv_a2():
    lines = find_nilpotents_2d(table2d(TableFamily.PLUS_IV, 1.0, 0, 1.0, 0))
    assert len(lines) == 1
    assert collinear(lines[0].direction, np.array([-1.0, 1.0]))


def test_nilpotents_family_v_any_parameters():
    for a12, b12, a21, b21 in [(0, 1, 0, 1), (2, -1, 1, 3), (0, 0, 0, 0)]:
        lines = find_nilpotents_2d(table2d(TableFamily.SOLVABLE_V, a12, b12, a21, b21))
        assert any(collinear(l.direction, np.array([0.0, 1.0])) for l in lines)


def test_nilpotent_directions_square_to_zero_exactly():
    tables = [
        table2d(TableFamily.MINUS_III, 0, 0, 0, 0),
        table2d(TableFamily.PLUS_IV, 1.0, 0, 1.0, 0),
        table2d(TableFamily.IDEMPOTENT_II, 1, 1, 1, 1, 0.75, 1.0),
        table2d(TableFamily.SOLVABLE_V, 0, 1, 0, 1),
        table2d(TableFamily.TWO_IDEM_VI, 1.0, 1.0, 0, 0),
    ]
    for table in tables:
        algebra = table.to_structure_constants()
        for line in find_nilpotents_2d(table):
            d = line.direction
            assert norm(mul(algebra, d, d)) <= 1e-12 * norm(d) ** 2


# ---------------------------------------------------------------------------
# Idempotents (exact)
# ---------------------------------------------------------------------------

def point_set(points):
    return {tuple(np.round(p, 9)) for p in points}


def test_idempotents_complex(complex_source):
    sols = find_idempotents_2d(complex_source.table)
    assert point_set(sols.points) == {(1.0, 0.0)}
    assert not sols.continuum


def test_idempotents_split_vi():
    sols = find_idempotents_2d(table2d(TableFamily.TWO_IDEM_VI, 0, 0, 0, 0))
    assert point_set(sols.points) == {(1.0, 0.0), (0.0, 1.0), (1.0, 1.0)}


def test_idempotents_dual(dual_source):
    sols = find_idempotents_2d(dual_source.table)
    assert point_set(sols.points) == {(1.0, 0.0)}


def test_idempotents_perplex(perplex_source):
    sols = find_idempotents_2d(perplex_source.table)
    assert point_set(sols.points) == {(1.0, 0.0), (0.5, 0.5), (0.5, -0.5)}


def test_idempotents_continuum_vi_ab1():
    sols = find_idempotents_2d(table2d(TableFamily.TWO_IDEM_VI, 1.0, 1.0, 0, 0))
    assert len(sols.continuum) == 1
    line = sols.continuum[0]
    algebra = table2d(TableFamily.TWO_IDEM_VI, 1.0, 1.0, 0, 0).to_structure_constants()
    for t in (-1.0, 0.25, 2.0):
        p = line.base + t * line.direction
        assert norm(mul(algebra, p, p) - p) <= 1e-12


def test_all_reported_idempotents_satisfy_equation(rng):
    for _ in range(50):
        cells = rng.uniform(-3, 3, 6)
        table = table2d(TableFamily.IDEMPOTENT_II, *cells)
        algebra = table.to_structure_constants()
        for p in find_idempotents_2d(table).points:
            assert norm(mul(algebra, p, p) - p) <= 1e-9 * (1.0 + norm(p) ** 2)


# ---------------------------------------------------------------------------
# Canonicalization
# ---------------------------------------------------------------------------

def test_canonicalize_with_nonzero_b22():
    table = table2d(TableFamily.IDEMPOTENT_II, 1, 1, 0, 0, 1, 1)
    result = canonicalize(table)
    assert isinstance(result, Canonicalization)
    assert result.table.family is TableFamily.PLUS_IV
    assert result.alpha == 1.0 and result.beta == -1.0
    algebra = table.to_structure_constants()
    assert norm(mul(algebra, result.f2, result.f2) - np.array([1.0, 0.0])) <= 1e-12


def test_canonicalize_with_zero_b22():
    table = table2d(TableFamily.IDEMPOTENT_II, 0, 0, 0, 0, -4.0, 0)
    result = canonicalize(table)
    assert isinstance(result, Canonicalization)
    assert result.table.family is TableFamily.MINUS_III
    assert result.alpha == 0.0 and result.beta == 0.5
    algebra = table.to_structure_constants()
    assert norm(mul(algebra, result.f2, result.f2) + np.array([1.0, 0.0])) <= 1e-12


def test_canonicalize_degenerate_not_normalizable():
    table = table2d(TableFamily.IDEMPOTENT_II, 1, 1, 1, 1, 0.75, 1.0)
    result = canonicalize(table)
    assert isinstance(result, NotNormalizable)
    assert result.witness is not None
    # the failure is exactly the nilpotent case
    assert find_nilpotents_2d(table)


def test_canonicalize_zero_cell_passes_through_as_family_v():
    table = table2d(TableFamily.IDEMPOTENT_II, 0, 1, 0, 1, 0, 0)
    result = canonicalize(table)
    assert isinstance(result, Canonicalization)
    assert result.table.family is TableFamily.SOLVABLE_V


def test_canonicalize_b_zero_with_nonzero_b22():
    table = table2d(TableFamily.IDEMPOTENT_II, 0.5, 0.5, 0.5, -0.5, 2.0, 1.0)
    result = canonicalize(table)
    assert isinstance(result, NotNormalizable)
    # not normalizable, yet nilpotent-free (the floor is positive)
    assert not find_nilpotents_2d(table)
    assert isinstance(square_floor_2d(table, samples=10_000), SquareFloor)


def test_canonicalize_preserves_multiplication():
    # the new table must reproduce products in the basis {e1, f2}
    table = table2d(TableFamily.IDEMPOTENT_II, 0.5, 0.25, -0.5, 0.75, 2.0, 0.5)
    result = canonicalize(table)
    assert isinstance(result, Canonicalization)
    algebra = table.to_structure_constants()
    e1 = np.array([1.0, 0.0])
    f2 = result.f2
    new = result.table
    got = mul(algebra, e1, f2)
    want = new.a12 * e1 + new.b12 * f2
    assert norm(got - want) <= 1e-12 * (1.0 + norm(got))
    got = mul(algebra, f2, e1)
    want = new.a21 * e1 + new.b21 * f2
    assert norm(got - want) <= 1e-12 * (1.0 + norm(got))


def test_canonicalize_requires_family_ii(complex_source):
    with pytest.raises(UnsupportedFamily):
        canonicalize(complex_source.table)


# ---------------------------------------------------------------------------
# Dichotomy and ratio curve
# ---------------------------------------------------------------------------

def test_dichotomy_small_grid():
    values = grid_values()[::2]  # exact floats including 0.0
    for family in (TableFamily.MINUS_III, TableFamily.PLUS_IV, TableFamily.TWO_IDEM_VI):
        for A in values:
            for B in values:
                table = table2d(family, A, B, 0.0, 0.0)
                floor = square_floor_2d(table, samples=4_096)
                positive = isinstance(floor, SquareFloor) and floor.value > 0.0
                empty = not find_nilpotents_2d(table)
                assert positive == empty, (family, A, B)


def test_slope_ratio_limits(complex_source, perplex_source):
    tables = [
        complex_source.table,
        perplex_source.table,
        table2d(TableFamily.IDEMPOTENT_II, 0.5, 0.5, 0.5, -0.5, 2.0, 1.0),
        table2d(TableFamily.TWO_IDEM_VI, 0, 0, 0, 0),
    ]
    for table in tables:
        for s in (1e6, -1e6):
            assert abs(slope_ratio(table, s) - 1.0) <= 1e-3


def test_slope_ratio_matches_floor(complex_source):
    # sup of the ratio over both charts equals floor**-2
    table = table2d(TableFamily.TWO_IDEM_VI, 0, 0, 0, 0)
    ts = np.linspace(-50, 50, 200_001)
    sup = max(slope_ratio(table, float(t)) for t in ts)
    floor = square_floor_2d(table)
    assert abs(1.0 / math.sqrt(sup) - floor.value) <= 1e-6


# ---------------------------------------------------------------------------
# classify and report
# ---------------------------------------------------------------------------

def test_classify_complex(complex_source):
    report = classify(complex_source.algebra, floor_budget=20_000)
    assert report.family is TableFamily.MINUS_III
    assert abs(report.product_bound - 2.0) <= 1e-12
    assert report.square_property.holds
    assert isinstance(report.floor, SquareFloor)
    assert abs(report.floor.value - 1.0) <= 1e-9
    assert len(report.idempotents.points) == 1
    assert not report.nilpotent_lines


def test_classify_dual(dual_source):
    report = classify(dual_source.algebra, floor_budget=20_000)
    assert isinstance(report.floor, NoSquareFloor)
    assert len(report.nilpotent_lines) == 1
    assert not report.square_property.holds


def test_classify_quaternions():
    report = classify(cayley_dickson(2), floor_budget=20_000)
    assert report.family is None
    assert report.square_property.holds
    assert abs(report.floor.sampled_min - 1.0) <= 1e-9
    assert abs(report.product_bound - 4.0) <= 1e-12


def test_classify_consistency_floor_vs_nilpotents(rng):
    for _ in range(40):
        cells = np.round(rng.uniform(-2, 2, 6), 3)
        table = table2d(TableFamily.IDEMPOTENT_II, *cells)
        report = classify(table.to_structure_constants(), floor_budget=4_096)
        positive = isinstance(report.floor, SquareFloor) and report.floor.value > 0.0
        assert positive == (len(report.nilpotent_lines) == 0)


def test_report_lines_keys(complex_source):
    report = classify(complex_source.algebra, floor_budget=4_096)
    lines = report_lines(report, label="builtin:complex")
    text = "\n".join(lines)
    for key in (
        "algebra = builtin:complex",
        "dim = 2",
        "family = III",
        "product_bound = 2.0",
        "square_property = true",
        "square_floor_available = true",
        "idempotent_1 = 1.0 0.0",
        "nilpotent_line_count = 0",
    ):
        assert key in text
    assert all(" = " in line for line in lines)
