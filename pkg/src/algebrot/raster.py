"""Deterministic tile-parallel escape-time rasters with bit-exact PGM output.

Pixels are classified independently with exactly the same arithmetic as
:func:`algebrot.dynamics.classify_orbit`, vectorized over pixels only, so
the grid is identical regardless of tile shape or worker count.  Escaped
pixels record the first iteration whose norm strictly exceeds the
threshold; bounded pixels record the iteration budget.
"""

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .algebra import Element, StructureConstants, mul_batch, norm, norm_batch
from .analysis import SquareFloor
from .catalog import algebra_hash
from .dynamics import UNCERTIFIED_BAILOUT, OrbitMode
from .errors import (
    DegenerateSlice,
    DimensionMismatch,
    OutOfRange,
    RasterTooLarge,
    SquareInequalityUnavailable,
)

MAX_PIXELS = 100_000_000
TILE = 32


@dataclass(frozen=True, eq=False)
class SliceSpec:
    """Affine plane origin + x * axis1 + y * axis2 inside the algebra."""

    origin: Element
    axis1: Element
    axis2: Element

    def __post_init__(self):
        g11 = float(np.dot(self.axis1, self.axis1))
        g12 = float(np.dot(self.axis1, self.axis2))
        g22 = float(np.dot(self.axis2, self.axis2))
        if g11 * g22 - g12 * g12 <= 1e-12:
            raise DegenerateSlice("slice axes are linearly dependent")

    @classmethod
    def default(cls, algebra: StructureConstants) -> "SliceSpec":
        return cls(
            origin=np.zeros(algebra.dim),
            axis1=algebra.basis(0),
            axis2=algebra.basis(1),
        )


@dataclass(frozen=True, eq=False)
class RasterJob:
    algebra: StructureConstants
    mode: OrbitMode
    slice: SliceSpec
    window: tuple[float, float, float, float]  # xmin, xmax, ymin, ymax
    width: int
    height: int
    max_iter: int
    floor: SquareFloor | None
    c: Element | None = None
    uncertified: bool = False
    bailout: float = UNCERTIFIED_BAILOUT

    def __post_init__(self):
        xmin, xmax, ymin, ymax = self.window
        if not (xmin < xmax and ymin < ymax):
            raise ValueError("window must satisfy xmin < xmax and ymin < ymax")
        if self.width < 1 or self.height < 1:
            raise ValueError("raster dimensions must be positive")
        if self.width * self.height > MAX_PIXELS:
            raise RasterTooLarge(f"{self.width}x{self.height} exceeds {MAX_PIXELS} pixels")
        if self.max_iter < 1:
            raise ValueError("max_iter must be at least 1")
        for axis in (self.slice.origin, self.slice.axis1, self.slice.axis2):
            if axis.shape != (self.algebra.dim,):
                raise DimensionMismatch("slice vectors must match the algebra dimension")
        if self.mode is OrbitMode.JULIA:
            if self.c is None or self.c.shape != (self.algebra.dim,):
                raise DimensionMismatch("julia mode needs a parameter c in the algebra")


@dataclass(frozen=True, eq=False)
class EscapeGrid:
    width: int
    height: int
    escaped: np.ndarray  # (height, width) bool
    iterations: np.ndarray  # (height, width) int32, first exceedance or max_iter
    max_iter: int

    @property
    def bounded_count(self) -> int:
        return int(self.escaped.size - np.count_nonzero(self.escaped))


def pixel_to_element(job: RasterJob, px: int, py: int) -> Element:
    """Algebra element at the center of pixel (px, py); y runs downward."""
    if not (0 <= px < job.width and 0 <= py < job.height):
        raise OutOfRange(f"pixel ({px}, {py}) outside {job.width}x{job.height}")
    xmin, xmax, ymin, ymax = job.window
    x = xmin + (px + 0.5) * (xmax - xmin) / job.width
    y = ymax - (py + 0.5) * (ymax - ymin) / job.height
    return job.slice.origin + x * job.slice.axis1 + y * job.slice.axis2


def _threshold(job: RasterJob) -> tuple[float, bool]:
    if job.floor is not None and job.floor.value > 0.0:
        base = 2.0 / job.floor.value
        if job.mode is OrbitMode.JULIA:
            return max(base, norm(job.c)), True
        return base, True
    if not job.uncertified:
        raise SquareInequalityUnavailable(
            "square floor is zero; pass uncertified=True to render with a heuristic bailout"
        )
    if job.mode is OrbitMode.JULIA:
        return max(job.bailout, norm(job.c)), False
    return job.bailout, False


def _tile_elements(job: RasterJob, x0: int, x1: int, y0: int, y1: int) -> np.ndarray:
    xmin, xmax, ymin, ymax = job.window
    xs = xmin + (np.arange(x0, x1) + 0.5) * (xmax - xmin) / job.width
    ys = ymax - (np.arange(y0, y1) + 0.5) * (ymax - ymin) / job.height
    XX = np.tile(xs, y1 - y0)
    YY = np.repeat(ys, x1 - x0)
    s = job.slice
    return s.origin[:, None] + s.axis1[:, None] * XX[None, :] + s.axis2[:, None] * YY[None, :]


def _escape_counts(
    algebra: StructureConstants,
    start: np.ndarray,
    params: np.ndarray,
    threshold: float,
    max_iter: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Batched orbit classification; params may be (m, 1) for a shared c."""
    n_pixels = start.shape[1]
    iterations = np.full(n_pixels, max_iter, dtype=np.int32)
    escaped = np.zeros(n_pixels, dtype=bool)
    active = np.arange(n_pixels)
    shared_c = params.shape[1] == 1
    x = start
    c = params
    for step in range(1, max_iter + 1):
        with np.errstate(over="ignore", invalid="ignore"):
            x = mul_batch(algebra, x, x)
            x += c
            values = norm_batch(x)
        hit = (values > threshold) | ~np.isfinite(values)
        if hit.any():
            done = active[hit]
            escaped[done] = True
            iterations[done] = step
            keep = ~hit
            active = active[keep]
            if active.size == 0:
                break
            x = x[:, keep]
            if not shared_c:
                c = c[:, keep]
    return escaped, iterations


def _render_tile(job, threshold, rect):
    x0, x1, y0, y1 = rect
    elements = _tile_elements(job, x0, x1, y0, y1)
    if job.mode is OrbitMode.JULIA:
        start = elements
        params = job.c[:, None]
    else:
        start = np.zeros_like(elements)
        params = elements
    escaped, iterations = _escape_counts(job.algebra, start, params, threshold, job.max_iter)
    shape = (y1 - y0, x1 - x0)
    return rect, escaped.reshape(shape), iterations.reshape(shape)


def render(job: RasterJob, workers: int = 1) -> EscapeGrid:
    """Render the escape grid; the result is independent of ``workers``."""
    threshold, _certified = _threshold(job)
    escaped = np.zeros((job.height, job.width), dtype=bool)
    iterations = np.full((job.height, job.width), job.max_iter, dtype=np.int32)
    rects = [
        (x0, min(x0 + TILE, job.width), y0, min(y0 + TILE, job.height))
        for y0 in range(0, job.height, TILE)
        for x0 in range(0, job.width, TILE)
    ]
    if workers <= 1:
        results = [_render_tile(job, threshold, rect) for rect in rects]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(lambda rect: _render_tile(job, threshold, rect), rects))
    for (x0, x1, y0, y1), esc, its in results:
        escaped[y0:y1, x0:x1] = esc
        iterations[y0:y1, x0:x1] = its
    return EscapeGrid(
        width=job.width,
        height=job.height,
        escaped=escaped,
        iterations=iterations,
        max_iter=job.max_iter,
    )


def pgm_bytes(grid: EscapeGrid) -> bytes:
    """Binary PGM (P5, maxval 255): bounded pixels are black, escaped pixels
    shade from 55 (instant escape) to 255 (escape at the iteration budget).

    The shading uses integer arithmetic only, so output is byte-exact
    across platforms and worker counts.
    """
    header = f"P5\n{grid.width} {grid.height}\n255\n".encode("ascii")
    div = max(1, grid.max_iter - 1)
    shade = 55 + (200 * (grid.iterations.astype(np.int64) - 1)) // div
    payload = np.where(grid.escaped, shade, 0).astype(np.uint8)
    return header + payload.tobytes()


def write_pgm(grid: EscapeGrid, path) -> None:
    Path(path).write_bytes(pgm_bytes(grid))


def meta_lines(job: RasterJob, grid: EscapeGrid) -> list[str]:
    threshold, certified = _threshold(job)
    lines = [
        f"algebra_hash = {algebra_hash(job.algebra)}",
        f"mode = {job.mode.value}",
        f"window = {job.window[0]!r} {job.window[1]!r} {job.window[2]!r} {job.window[3]!r}",
        f"width = {job.width}",
        f"height = {job.height}",
        f"max_iter = {job.max_iter}",
        f"square_floor = {(job.floor.value if job.floor is not None else 0.0)!r}",
        f"threshold = {threshold!r}",
        f"certified = {str(certified).lower()}",
        f"bounded_pixels = {grid.bounded_count}",
    ]
    if job.mode is OrbitMode.JULIA:
        lines.insert(2, "c = " + " ".join(repr(float(x)) for x in job.c))
    if job.algebra.dim > 2:
        lines.append("note = image is a 2-D affine slice of the full set")
    return lines


def write_meta(job: RasterJob, grid: EscapeGrid, path) -> None:
    """Sidecar description next to the PGM (same basename, .meta suffix)."""
    Path(path).write_text("\n".join(meta_lines(job, grid)) + "\n", encoding="utf-8")
