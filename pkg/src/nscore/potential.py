"""The sign-indefinite coefficient: +1 inside focusing balls, -1 elsewhere.

Four variants of ball geometry are supported: balls of radius eps centered
at every integer lattice point, a single such ball at the origin, the
stretched lattice with unit balls at lattice points divided by eps, and a
single unit ball with no eps dependence. Points exactly on a ball boundary
evaluate to -1 (open-ball convention, a deterministic measure-zero choice).
"""

import itertools
import math
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import DimensionUnsupported

__all__ = [
    "Variant", "ProblemSpec", "critical_exponent",
    "nearest_lattice_point", "potential_at", "potential_field",
]


class Variant(str, Enum):
    LATTICE_BALLS = "lattice_balls"
    SINGLE_BALL = "single_ball"
    RESCALED_LATTICE = "rescaled_lattice"
    LIMIT_SINGLE_BALL = "limit_single_ball"


def critical_exponent(dim: int) -> float:
    """Upper bound of the admissible nonlinearity exponent: 2N/(N-2) for
    N >= 3, infinity for N = 2."""
    if dim == 2:
        return math.inf
    return 2.0 * dim / (dim - 2.0)


def _expected_mass(variant: Variant, epsilon: float) -> float:
    if variant in (Variant.LATTICE_BALLS, Variant.SINGLE_BALL):
        return 1.0
    if variant is Variant.RESCALED_LATTICE:
        return epsilon * epsilon
    return 0.0


@dataclass(frozen=True)
class ProblemSpec:
    """Which equation is solved: -lap(u) + mass*u = Q(x)|u|^(p-2)u.

    mass is 1 for the ball variants at scale eps, eps^2 for the stretched
    lattice, and 0 for the single unit ball (where epsilon is unused and
    stored as 0).
    """

    dim: int
    p: float
    epsilon: float
    variant: Variant
    mass: float

    def __post_init__(self):
        if self.dim < 2 or int(self.dim) != self.dim:
            raise ValueError(f"dim must be an integer >= 2, got {self.dim}")
        two_star = critical_exponent(self.dim)
        if not (2.0 < self.p < two_star):
            raise ValueError(
                f"p={self.p:g} outside the open interval (2, 2*)="
                f"(2, {two_star:g}) for N={self.dim}")
        if self.variant is Variant.LIMIT_SINGLE_BALL:
            if self.dim < 3:
                raise DimensionUnsupported(
                    "the limit problem (mass 0, unit ball) requires N >= 3")
            if self.epsilon != 0.0:
                raise ValueError("epsilon is unused for limit_single_ball; pass 0")
        else:
            if not (0.0 < self.epsilon < 0.5):
                raise ValueError(
                    f"epsilon={self.epsilon:g} must lie in (0, 1/2) for "
                    f"variant {self.variant.value}")
        expected = _expected_mass(self.variant, self.epsilon)
        if abs(self.mass - expected) > 1e-15 * max(1.0, abs(expected)):
            raise ValueError(
                f"mass={self.mass!r} inconsistent with variant "
                f"{self.variant.value} (expected {expected!r})")

    @staticmethod
    def make(dim: int, p: float, variant: Variant, epsilon: float = 0.0) -> "ProblemSpec":
        """Build a spec with the mass coefficient implied by the variant."""
        variant = Variant(variant)
        if variant is Variant.LIMIT_SINGLE_BALL:
            epsilon = 0.0
        return ProblemSpec(dim=dim, p=p, epsilon=epsilon, variant=variant,
                           mass=_expected_mass(variant, epsilon))

    @property
    def ball_radius(self) -> float:
        """Radius of the focusing balls in the coordinates of this variant."""
        if self.variant in (Variant.LATTICE_BALLS, Variant.SINGLE_BALL):
            return self.epsilon
        return 1.0


def nearest_lattice_point(x) -> tuple:
    """Nearest integer lattice point, rounding half-coordinates toward +inf."""
    return tuple(int(math.floor(c + 0.5)) for c in x)


def potential_at(spec: ProblemSpec, x) -> float:
    """Coefficient value (+1 or -1) at a single point."""
    x = tuple(float(c) for c in x)
    v = spec.variant
    if v is Variant.LATTICE_BALLS:
        y = nearest_lattice_point(x)
        d2 = sum((c - yc) ** 2 for c, yc in zip(x, y))
        return 1.0 if d2 < spec.epsilon ** 2 else -1.0
    if v is Variant.SINGLE_BALL:
        d2 = sum(c * c for c in x)
        return 1.0 if d2 < spec.epsilon ** 2 else -1.0
    if v is Variant.RESCALED_LATTICE:
        z = tuple(spec.epsilon * c for c in x)
        y = nearest_lattice_point(z)
        d2 = sum((c - yc) ** 2 for c, yc in zip(z, y))
        return 1.0 if d2 < spec.epsilon ** 2 else -1.0
    d2 = sum(c * c for c in x)
    return 1.0 if d2 < 1.0 else -1.0


def _axis_offsets_sq(spec: ProblemSpec, coords: np.ndarray) -> tuple[np.ndarray, float]:
    """Per-axis squared offset to the relevant ball center set, and the
    squared radius threshold, such that a point is inside a ball iff the
    sum of its per-axis offsets is below the threshold."""
    v = spec.variant
    if v is Variant.LATTICE_BALLS:
        off = coords - np.floor(coords + 0.5)
        return off * off, spec.epsilon ** 2
    if v is Variant.SINGLE_BALL:
        return coords * coords, spec.epsilon ** 2
    if v is Variant.RESCALED_LATTICE:
        z = spec.epsilon * coords
        off = z - np.floor(z + 0.5)
        return off * off, spec.epsilon ** 2
    return coords * coords, 1.0


def potential_field(spec: ProblemSpec, grid, subsamples: int = 1):
    """Sample the coefficient on a grid.

    With subsamples=1 each cell takes the sign at its center. With s > 1
    the cell value is the average of the sign over the s^N-point uniform
    subgrid of the cell, giving partial-volume weights in [-1, 1] for
    cells straddling a ball boundary.
    """
    from .grid import Field

    s = int(subsamples)
    if s < 1:
        raise ValueError("subsamples must be >= 1")
    n = grid.n
    dim = grid.dim
    axis = grid.axis_coords()

    if s == 1:
        off2, r2 = _axis_offsets_sq(spec, axis)
        d2 = np.zeros(grid.shape)
        for a in range(dim):
            sh = [1] * dim
            sh[a] = n
            d2 += off2.reshape(sh)
        values = np.where(d2 < r2, 1.0, -1.0)
        return Field(grid, values)

    h = grid.spacing
    sub_rel = (np.arange(s) + 0.5) / s * h - 0.5 * h
    # off2_sub[k] is the per-axis squared offset array for sub-offset k
    off2_sub = []
    r2 = None
    for k in range(s):
        o2, r2 = _axis_offsets_sq(spec, axis + sub_rel[k])
        off2_sub.append(o2)
    inside = np.zeros(grid.shape)
    d2 = np.empty(grid.shape)
    for combo in itertools.product(range(s), repeat=dim):
        d2[...] = 0.0
        for a, k in enumerate(combo):
            sh = [1] * dim
            sh[a] = n
            d2 += off2_sub[k].reshape(sh)
        inside += (d2 < r2)
    values = (2.0 * inside - s ** dim) / s ** dim
    return Field(grid, values)
