"""Cell-centered uniform grid on a truncated box, with the stencil and all
quadratures and norms used by the energy functional.

The box is [-L, L]^N with n cells per axis, cell centers at
-L + (i + 1/2)h for h = 2L/n. Centers never coincide with lattice points
or half-integer planes, and when 2L and n/(2L) are integers a shift by a
lattice vector is an exact whole-cell shift of the sample array.

The discrete H1 inner product puts the gradient quadrature on interior
faces (forward differences) and the value quadrature on cells:

    <f, g> = sum_faces (df)(dg) h^(N-2) + sum_cells f g h^N

Faces between a boundary cell and the exterior are not included, so
<f, g> equals sum f * (applied stencil + g) * h^N exactly whenever g
vanishes on the outermost cell layer (summation by parts).
"""

import math
from dataclasses import dataclass, field as dataclass_field

import numpy as np

from . import kernels

__all__ = [
    "Grid", "Field", "BallRegion", "BoxRegion",
    "laplacian_apply", "inner_h1", "integrate_weighted_power",
    "norm_h1", "norm_l2", "norm_lp", "restrict_integrals",
    "boundary_layer_max", "interior_min",
]


@dataclass(frozen=True)
class Grid:
    """Uniform cell-centered grid on [-L, L]^dim with n cells per axis."""

    dim: int
    half_width: float
    n: int

    def __post_init__(self):
        if self.dim < 1:
            raise ValueError("dim must be >= 1")
        if self.half_width <= 0:
            raise ValueError("half_width must be positive")
        if self.n < 4:
            raise ValueError("need at least 4 cells per axis")

    @property
    def spacing(self) -> float:
        return 2.0 * self.half_width / self.n

    @property
    def shape(self) -> tuple:
        return (self.n,) * self.dim

    @property
    def size(self) -> int:
        return self.n ** self.dim

    @property
    def cells_per_unit(self):
        """Cells per unit length when 2L and n/(2L) are integers, else None.
        Required for exact whole-cell lattice translations."""
        two_l = 2.0 * self.half_width
        if abs(two_l - round(two_l)) > 1e-12:
            return None
        cpu = self.n / two_l
        if abs(cpu - round(cpu)) > 1e-9:
            return None
        return int(round(cpu))

    def axis_coords(self) -> np.ndarray:
        """Cell-center coordinates along one axis (all axes are identical)."""
        h = self.spacing
        return -self.half_width + (np.arange(self.n) + 0.5) * h

    @staticmethod
    def from_cells_per_unit(dim: int, half_width: float, cells_per_unit: int) -> "Grid":
        two_l = 2.0 * half_width
        if abs(two_l - round(two_l)) > 1e-12:
            raise ValueError("2L must be an integer to use cells_per_unit")
        n = int(round(two_l)) * int(cells_per_unit)
        return Grid(dim, half_width, n)


@dataclass(frozen=True)
class Field:
    """Real-valued samples on a grid. Values are finite, row-major, and are
    frozen (read-only) after construction."""

    grid: Grid
    values: np.ndarray = dataclass_field(repr=False)

    def __post_init__(self):
        v = np.ascontiguousarray(self.values, dtype=np.float64)
        if v.shape != self.grid.shape:
            raise ValueError(f"values shape {v.shape} != grid shape {self.grid.shape}")
        if not np.isfinite(v).all():
            raise ValueError("field contains non-finite values")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def __eq__(self, other):
        return (isinstance(other, Field) and self.grid == other.grid
                and np.array_equal(self.values, other.values))


def _check_same_grid(f: Field, g: Field):
    if f.grid != g.grid:
        raise ValueError("fields live on different grids")


def laplacian_apply(f: Field) -> Field:
    """Discrete negative Laplacian, zero values assumed outside the box."""
    h = f.grid.spacing
    return Field(f.grid, kernels.neg_laplacian(f.values, 1.0 / (h * h)))


def inner_h1(f: Field, g: Field) -> float:
    """Discrete H1 inner product (interior-face gradient + cell values)."""
    _check_same_grid(f, g)
    h = f.grid.spacing
    dim = f.grid.dim
    return (kernels.face_grad_sum(f.values, g.values) * h ** (dim - 2)
            + kernels.dot_sum(f.values, g.values) * h ** dim)


def integrate_weighted_power(f: Field, q: Field, p: float) -> float:
    """sum_cells q_i |f_i|^p h^N."""
    _check_same_grid(f, q)
    h = f.grid.spacing
    return kernels.weighted_power_sum(f.values, q.values, p) * h ** f.grid.dim


def norm_h1(f: Field) -> float:
    return math.sqrt(inner_h1(f, f))


def norm_l2(f: Field) -> float:
    h = f.grid.spacing
    return math.sqrt(kernels.sq_sum(f.values) * h ** f.grid.dim)


def norm_lp(f: Field, p: float) -> float:
    h = f.grid.spacing
    return (kernels.abs_power_sum(f.values, p) * h ** f.grid.dim) ** (1.0 / p)


# ---------------------------------------------------------------------------
# restriction of the H1-form and p-mass to sub-regions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BallRegion:
    """Open ball; cells belong iff their center is strictly inside."""
    center: tuple
    radius: float


@dataclass(frozen=True)
class BoxRegion:
    """Open axis-aligned box (lo, hi); strict center membership."""
    lo: tuple
    hi: tuple

    @staticmethod
    def centered(center, half_width: float) -> "BoxRegion":
        c = tuple(float(v) for v in center)
        return BoxRegion(tuple(v - half_width for v in c),
                         tuple(v + half_width for v in c))


def region_mask(grid: Grid, region) -> np.ndarray:
    """Boolean cell-membership mask decided by cell centers."""
    axis = grid.axis_coords()
    dim = grid.dim
    if isinstance(region, BallRegion):
        if len(region.center) != dim:
            raise ValueError("region dimension mismatch")
        d2 = np.zeros(grid.shape)
        for a in range(dim):
            off = axis - region.center[a]
            sh = [1] * dim
            sh[a] = grid.n
            d2 += (off * off).reshape(sh)
        return d2 < region.radius ** 2
    if isinstance(region, BoxRegion):
        if len(region.lo) != dim:
            raise ValueError("region dimension mismatch")
        mask = np.ones(grid.shape, dtype=bool)
        for a in range(dim):
            inside = (axis > region.lo[a]) & (axis < region.hi[a])
            sh = [1] * dim
            sh[a] = grid.n
            mask &= inside.reshape(sh)
        return mask
    raise TypeError(f"unsupported region type {type(region).__name__}")


def restrict_integrals(f: Field, region, p: float):
    """H1-form and |f|^p integrals restricted to a region.

    Cell terms are kept iff the cell center lies in the region; a face term
    is kept iff both adjacent cell centers lie in it. Returns
    (h1_part, lp_part).
    """
    mask = region if isinstance(region, np.ndarray) else region_mask(f.grid, region)
    if mask.shape != f.grid.shape:
        raise ValueError("mask shape mismatch")
    h = f.grid.spacing
    dim = f.grid.dim
    v = f.values
    mf = mask.astype(np.float64)
    face_total = 0.0
    for a in range(dim):
        df = np.diff(v, axis=a)
        lo = [slice(None)] * dim
        hi = [slice(None)] * dim
        lo[a] = slice(None, -1)
        hi[a] = slice(1, None)
        fm = mf[tuple(lo)] * mf[tuple(hi)]
        face_total += float(np.sum(df * df * fm))
    h1_part = face_total * h ** (dim - 2) + float(np.sum(v * v * mf)) * h ** dim
    if p == 4.0:
        v2 = v * v
        lp_part = float(np.sum(v2 * v2 * mf)) * h ** dim
    else:
        lp_part = float(np.sum(np.abs(v) ** p * mf)) * h ** dim
    return h1_part, lp_part


def boundary_layer_max(f: Field) -> float:
    """max |f| over the outermost cell layer."""
    v = np.abs(f.values)
    worst = 0.0
    for a in range(f.grid.dim):
        first = [slice(None)] * f.grid.dim
        last = [slice(None)] * f.grid.dim
        first[a] = 0
        last[a] = -1
        worst = max(worst, float(v[tuple(first)].max()), float(v[tuple(last)].max()))
    return worst


def interior_min(f: Field, margin: float = 1.0) -> float:
    """min of f over cells whose center is at least `margin` away from the
    box boundary."""
    axis = f.grid.axis_coords()
    keep = np.abs(axis) <= f.grid.half_width - margin
    if not keep.any():
        raise ValueError("margin leaves no interior cells")
    sl = np.ix_(*([np.nonzero(keep)[0]] * f.grid.dim))
    return float(f.values[sl].min())
