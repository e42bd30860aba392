"""Finite-dimensional real algebras presented by multiplication tables.

An algebra of dimension m is stored as the dense array of structure
constants alpha[i, j, k]: the basis product e_i * e_j equals
sum_k alpha[i, j, k] e_k, and multiplication of arbitrary elements is the
bilinear extension of the table.  Elements are plain float64 arrays of
length m.  The norm used throughout is the Euclidean norm of the
coordinate vector, i.e. the basis is treated as orthonormal.

Besides raw tables the module provides two builders: the Cayley-Dickson
doubling tower (complex, quaternion, octonion, ... up to dimension 64)
and the catalog of 2-dimensional normal forms used by the analysis layer
(families II..VI of :class:`TableFamily`).
"""

from dataclasses import dataclass
from enum import Enum
from functools import cached_property, lru_cache

import numpy as np

from .errors import (
    DimensionMismatch,
    DimensionTooLarge,
    DimensionTooSmall,
    LevelTooLarge,
    NonFiniteEntry,
    UnsupportedFamily,
)

# Elements are coordinate vectors in the algebra's fixed basis.
Element = np.ndarray

MAX_DIM = 64
MAX_DOUBLING_LEVEL = 6


@dataclass(frozen=True, eq=False)
class StructureConstants:
    """Validated multiplication table of an m-dimensional real algebra.

    Immutable after construction and safe to share between threads; all
    operations on it are pure functions.
    """

    dim: int
    alpha: np.ndarray  # (dim, dim, dim) float64, read-only

    def __post_init__(self):
        self.alpha.setflags(write=False)

    @cached_property
    def _terms(self) -> tuple:
        # Per output coordinate: the nonzero (i, j, coefficient) triples in
        # row-major (i outer, j inner) order.  mul() accumulates them
        # sequentially, so products are reproducible bit for bit; dropped
        # zero terms cannot change a finite IEEE-754 sum.
        terms = []
        for k in range(self.dim):
            ii, jj = np.nonzero(self.alpha[:, :, k])
            vals = self.alpha[ii, jj, k]
            terms.append((ii.tolist(), jj.tolist(), vals.tolist()))
        return tuple(terms)

    def basis(self, i: int) -> Element:
        """Basis vector e_i (0-based index)."""
        if not 0 <= i < self.dim:
            raise DimensionMismatch(f"basis index {i} out of range for dim {self.dim}")
        e = np.zeros(self.dim)
        e[i] = 1.0
        return e

    def element(self, coords) -> Element:
        """Validate and copy a coordinate vector into this algebra."""
        u = np.array(coords, dtype=np.float64).reshape(-1)
        if u.shape != (self.dim,):
            raise DimensionMismatch(
                f"expected {self.dim} coordinates, got {u.shape[0]}"
            )
        if not np.isfinite(u).all():
            raise NonFiniteEntry("element coordinates must be finite")
        return u

    def mul(self, u: Element, v: Element) -> Element:
        return mul(self, u, v)

    def square(self, u: Element) -> Element:
        return mul(self, u, u)


def make_algebra(dim: int, alpha) -> StructureConstants:
    """Build a validated :class:`StructureConstants` from raw table entries.

    ``alpha`` may be an (m, m, m) array or a flat sequence of m**3 reals,
    laid out so that ``alpha[i][j][k]`` is the e_k coefficient of e_i * e_j.
    """
    dim = int(dim)
    if dim < 2:
        raise DimensionTooSmall(f"algebras must be at least 2-dimensional, got {dim}")
    if dim > MAX_DIM:
        raise DimensionTooLarge(f"dimension {dim} exceeds the dense-storage cap {MAX_DIM}")
    arr = np.array(alpha, dtype=np.float64)
    if arr.size != dim**3:
        raise DimensionMismatch(f"expected {dim ** 3} table entries, got {arr.size}")
    arr = arr.reshape(dim, dim, dim)
    if not np.isfinite(arr).all():
        i, j, k = np.argwhere(~np.isfinite(arr))[0]
        raise NonFiniteEntry(f"non-finite structure constant at alpha[{i}][{j}][{k}]")
    return StructureConstants(dim=dim, alpha=arr)


def mul_batch(algebra: StructureConstants, U: np.ndarray, V: np.ndarray) -> np.ndarray:
    """Columnwise products of (m, n) coordinate batches.

    Every column is multiplied independently with a fixed accumulation
    order (i outer, j inner, plain sequential sum), so the result for a
    given column never depends on how the batch was split up.
    """
    m = algebra.dim
    if U.shape[0] != m or V.shape[0] != m or U.shape != V.shape:
        raise DimensionMismatch(
            f"batch shapes {U.shape} x {V.shape} do not fit dimension {m}"
        )
    n = U.shape[1]
    out = np.empty((m, n))
    for k, (ii, jj, vals) in enumerate(algebra._terms):
        acc = np.zeros(n)
        for i, j, a in zip(ii, jj, vals):
            acc += (a * U[i]) * V[j]
        out[k] = acc
    return out


def mul(algebra: StructureConstants, u: Element, v: Element) -> Element:
    """Product of two elements via the structure-constant table."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    if u.shape != (algebra.dim,) or v.shape != (algebra.dim,):
        raise DimensionMismatch(
            f"elements of shape {u.shape} x {v.shape} do not fit dimension {algebra.dim}"
        )
    return mul_batch(algebra, u[:, None], v[:, None])[:, 0]


def norm_batch(U: np.ndarray) -> np.ndarray:
    """Columnwise Euclidean norms of an (m, n) coordinate batch."""
    acc = np.zeros(U.shape[1])
    for i in range(U.shape[0]):
        acc += U[i] * U[i]
    return np.sqrt(acc)


def norm(u: Element) -> float:
    """Euclidean norm of a coordinate vector (basis vectors have norm 1)."""
    u = np.asarray(u, dtype=np.float64)
    return float(norm_batch(u.reshape(-1, 1))[0])


def product_bound(algebra: StructureConstants) -> float:
    """Smallest Cauchy-Schwarz constant M with |u v| <= M |u| |v|.

    Equals sqrt of the sum of all squared structure constants.  A zero
    return value means the product is identically zero; callers that need
    a positive scaling constant must treat that case as degenerate.
    """
    return float(np.sqrt(np.sum(algebra.alpha**2)))


def is_degenerate_product(algebra: StructureConstants) -> bool:
    """True when the multiplication is identically zero."""
    return product_bound(algebra) == 0.0


# ---------------------------------------------------------------------------
# Cayley-Dickson doubling
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def _cd_basis_product(dim: int, i: int, j: int) -> tuple[int, int]:
    """Signed basis product e_i * e_j = sign * e_k at the given dimension.

    Index/sign recursion for the doubling rule
    (x, y)(z, w) = (x z - w conj(y), w x + y conj(z)) with
    conj(x, y) = (conj(x), -y) and the reals as base case.
    """
    if dim == 1:
        return 0, 1
    half = dim // 2
    if i < half and j < half:
        return _cd_basis_product(half, i, j)
    if i < half:  # second factor in the upper half: w x
        k, s = _cd_basis_product(half, j - half, i)
        return k + half, s
    if j < half:  # first factor in the upper half: y conj(z)
        k, s = _cd_basis_product(half, i - half, j)
        return k + half, s if j == 0 else -s
    # both upper: -w conj(y)
    k, s = _cd_basis_product(half, j - half, i - half)
    return k, -s if i - half == 0 else s


def cayley_dickson(level: int) -> StructureConstants:
    """Multiplication table of the level-n Cayley-Dickson algebra (dim 2**n).

    Level 1 is the complex numbers, 2 the quaternions, 3 the octonions.
    Squares obey u^2 = (a_0^2 - sum_k a_k^2) e_0 + sum_k (2 a_0 a_k) e_k,
    so the Euclidean norm satisfies |u^2| = |u|^2 at every level.
    """
    level = int(level)
    if level < 1:
        raise DimensionTooSmall("doubling level must be at least 1 (dimension 2)")
    if level > MAX_DOUBLING_LEVEL:
        raise LevelTooLarge(
            f"doubling level {level} exceeds the cap {MAX_DOUBLING_LEVEL} (dimension 64)"
        )
    dim = 2**level
    alpha = np.zeros((dim, dim, dim))
    for i in range(dim):
        for j in range(dim):
            k, s = _cd_basis_product(dim, i, j)
            alpha[i, j, k] = float(s)
    return StructureConstants(dim=dim, alpha=alpha)


# ---------------------------------------------------------------------------
# 2-dimensional normal forms
# ---------------------------------------------------------------------------

class TableFamily(Enum):
    """Normal forms of a 2-dimensional multiplication table.

    Families II..VI all have e_1 as an idempotent (e_1^2 = e_1) and differ
    in the e_2^2 cell: general (II), -e_1 (III), +e_1 (IV), 0 (V) and e_2
    (VI, a second idempotent).  GENERAL_I labels an arbitrary table with no
    normalized idempotent; it is a detection result only and cannot be
    built through :class:`Table2D`.
    """

    GENERAL_I = "I"
    IDEMPOTENT_II = "II"
    MINUS_III = "III"
    PLUS_IV = "IV"
    SOLVABLE_V = "V"
    TWO_IDEM_VI = "VI"


_FIXED_E2_CELL = {
    TableFamily.MINUS_III: (-1.0, 0.0),
    TableFamily.PLUS_IV: (1.0, 0.0),
    TableFamily.SOLVABLE_V: (0.0, 0.0),
    TableFamily.TWO_IDEM_VI: (0.0, 1.0),
}


@dataclass(frozen=True)
class Table2D:
    """A 2-dimensional table of family II..VI.

    Cells: e_1^2 = e_1, e_1 e_2 = a12 e_1 + b12 e_2,
    e_2 e_1 = a21 e_1 + b21 e_2 and e_2^2 fixed per family (III..VI) or
    given by (a22, b22) for family II.  The derived sums A = a12 + a21 and
    B = b12 + b21 control squares: (a e_1 + b e_2)^2 =
    (a^2 + A a b + a22 b^2) e_1 + (B a b + b22 b^2) e_2.
    """

    family: TableFamily
    a12: float
    b12: float
    a21: float
    b21: float
    a22: float = 0.0
    b22: float = 0.0

    def __post_init__(self):
        if self.family is TableFamily.GENERAL_I:
            raise UnsupportedFamily(
                "family I has no fixed idempotent cell; build it with make_algebra"
            )
        cell = _FIXED_E2_CELL.get(self.family)
        if cell is not None:
            object.__setattr__(self, "a22", cell[0])
            object.__setattr__(self, "b22", cell[1])
        for name in ("a12", "b12", "a21", "b21", "a22", "b22"):
            value = float(getattr(self, name))
            if not np.isfinite(value):
                raise NonFiniteEntry(f"table cell {name} must be finite")
            object.__setattr__(self, name, value)

    @property
    def A(self) -> float:
        return self.a12 + self.a21

    @property
    def B(self) -> float:
        return self.b12 + self.b21

    @property
    def e2_cell(self) -> tuple[float, float]:
        """Coefficients (on e_1, e_2) of the square e_2^2."""
        return self.a22, self.b22

    def to_structure_constants(self) -> StructureConstants:
        alpha = np.zeros((2, 2, 2))
        alpha[0, 0] = (1.0, 0.0)
        alpha[0, 1] = (self.a12, self.b12)
        alpha[1, 0] = (self.a21, self.b21)
        alpha[1, 1] = (self.a22, self.b22)
        return StructureConstants(dim=2, alpha=alpha)


def table2d(
    family: TableFamily,
    a12: float,
    b12: float,
    a21: float,
    b21: float,
    a22: float = 0.0,
    b22: float = 0.0,
) -> Table2D:
    """Construct a family II..VI table; fixed-cell families ignore a22/b22."""
    return Table2D(family=family, a12=a12, b12=b12, a21=a21, b21=b21, a22=a22, b22=b22)


def detect_family(algebra: StructureConstants) -> Table2D | None:
    """Recover the Table2D view of a 2-dimensional algebra with e_1^2 = e_1.

    Returns None when the algebra is not 2-dimensional or e_1 is not an
    idempotent basis vector (a "family I" table); the most specific family
    wins when the e_2^2 cell matches one of the fixed forms.
    """
    if algebra.dim != 2:
        return None
    a = algebra.alpha
    if not (a[0, 0, 0] == 1.0 and a[0, 0, 1] == 0.0):
        return None
    cell = (a[1, 1, 0], a[1, 1, 1])
    family = TableFamily.IDEMPOTENT_II
    for fam, fixed in _FIXED_E2_CELL.items():
        if cell == fixed:
            family = fam
            break
    return Table2D(
        family=family,
        a12=a[0, 1, 0],
        b12=a[0, 1, 1],
        a21=a[1, 0, 0],
        b21=a[1, 0, 1],
        a22=cell[0],
        b22=cell[1],
    )
