"""Rectangular lattices, lattice fields and second-order difference operators.

Every difference operator in the package is assembled from the sparse stencil
matrices defined here, so discrete identities such as ``curl2d(gradient(f)) == 0``
hold to roundoff rather than to truncation error.

Sites are flattened row-major with axis order (x, y): site ``(i, j)`` of a 2D
grid has flat index ``i * ny + j``.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from functools import lru_cache
from typing import Union

import numpy as np
import scipy.sparse as sp

from .errors import DimensionUnsupported, GridMismatch


class Boundary(str, enum.Enum):
    PERIODIC = "periodic"
    DIRICHLET = "dirichlet"


@dataclass(frozen=True)
class Grid:
    """Uniform lattice in one or two dimensions.

    ``origin`` is the coordinate of site 0 on each axis. Dirichlet grids hold
    interior points only; the wall sits one spacing beyond the first and last
    site and values outside the domain are zero.
    """

    points: tuple
    spacing: tuple
    boundary: Boundary = Boundary.PERIODIC
    origin: tuple = None

    def __post_init__(self):
        points = tuple(int(n) for n in np.atleast_1d(self.points))
        spacing = tuple(float(h) for h in np.atleast_1d(self.spacing))
        if len(spacing) == 1 and len(points) > 1:
            spacing = spacing * len(points)
        if len(points) not in (1, 2):
            raise DimensionUnsupported(f"grids must be 1D or 2D, got dim={len(points)}")
        if len(spacing) != len(points):
            raise ValueError("spacing must have one entry per axis")
        if any(n < 8 for n in points):
            raise ValueError(f"every axis needs at least 8 points, got {points}")
        if any(not h > 0 for h in spacing):
            raise ValueError(f"spacing must be positive, got {spacing}")
        origin = self.origin
        if origin is None:
            origin = tuple(-0.5 * n * h for n, h in zip(points, spacing))
        origin = tuple(float(o) for o in np.atleast_1d(origin))
        if len(origin) != len(points):
            raise ValueError("origin must have one entry per axis")
        object.__setattr__(self, "points", points)
        object.__setattr__(self, "spacing", spacing)
        object.__setattr__(self, "boundary", Boundary(self.boundary))
        object.__setattr__(self, "origin", origin)

    @classmethod
    def box(cls, points, length, boundary=Boundary.PERIODIC):
        """Grid centred on the origin covering ``[-L/2, L/2]`` on every axis.

        Periodic axes carry ``N`` sites with period ``L``; Dirichlet axes carry
        ``N`` interior sites between walls at ``-L/2`` and ``L/2``.
        """
        points = tuple(int(n) for n in np.atleast_1d(points))
        lengths = np.broadcast_to(np.asarray(length, dtype=float), (len(points),))
        boundary = Boundary(boundary)
        if boundary is Boundary.PERIODIC:
            spacing = tuple(float(L / n) for L, n in zip(lengths, points))
            origin = tuple(-0.5 * float(L) for L in lengths)
        else:
            spacing = tuple(float(L / (n + 1)) for L, n in zip(lengths, points))
            origin = tuple(-0.5 * float(L) + h for L, h in zip(lengths, spacing))
        return cls(points, spacing, boundary, origin)

    @property
    def dim(self) -> int:
        return len(self.points)

    @property
    def shape(self) -> tuple:
        return self.points

    @property
    def size(self) -> int:
        return int(np.prod(self.points))

    @property
    def periodic(self) -> bool:
        return self.boundary is Boundary.PERIODIC

    @property
    def cell_volume(self) -> float:
        return float(np.prod(self.spacing))

    @property
    def periods(self) -> tuple:
        """Translation period per axis (``N * h``); meaningful on periodic grids."""
        return tuple(n * h for n, h in zip(self.points, self.spacing))

    def axis_coordinates(self, axis: int) -> np.ndarray:
        n, h, o = self.points[axis], self.spacing[axis], self.origin[axis]
        return o + h * np.arange(n)

    @property
    def coords(self) -> tuple:
        """Site coordinates as a tuple of grid-shaped arrays (``indexing='ij'``)."""
        return _coords(self)

    def shifted_coords(self, offsets) -> tuple:
        """Coordinates displaced by ``offsets`` (one real per axis)."""
        return tuple(c + float(o) for c, o in zip(self.coords, offsets))

    def neighbour_coords(self, axis: int) -> tuple:
        """Coordinates of the site one step up ``axis`` from every site, unwrapped."""
        offsets = [0.0] * self.dim
        offsets[axis] = self.spacing[axis]
        return self.shifted_coords(offsets)


@lru_cache(maxsize=64)
def _coords(grid: Grid) -> tuple:
    axes = [grid.axis_coordinates(a) for a in range(grid.dim)]
    mesh = np.meshgrid(*axes, indexing="ij")
    for m in mesh:
        m.setflags(write=False)
    return tuple(mesh)


def _freeze(values: np.ndarray) -> np.ndarray:
    values = np.array(values, copy=True)
    values.setflags(write=False)
    return values


@dataclass(frozen=True, eq=False)
class ScalarField:
    """Complex (or real) samples on a grid, stored flat in row-major order."""

    grid: Grid
    values: np.ndarray
    real: bool = False

    def __post_init__(self):
        values = np.asarray(self.values)
        if values.size != self.grid.size:
            raise ValueError(f"field has {values.size} values, grid has {self.grid.size} sites")
        values = values.reshape(-1)
        if self.real:
            if np.iscomplexobj(values):
                if np.any(values.imag != 0):
                    raise ValueError("field tagged real has nonzero imaginary parts")
                values = values.real
            values = values.astype(float)
        else:
            values = values.astype(complex)
        object.__setattr__(self, "values", _freeze(values))

    @classmethod
    def zeros(cls, grid, real=False):
        return cls(grid, np.zeros(grid.size), real=real)

    @property
    def array(self) -> np.ndarray:
        return self.values.reshape(self.grid.shape)

    def __add__(self, other):
        _check_same_grid(self, other)
        return ScalarField(self.grid, self.values + other.values, self.real and other.real)

    def __sub__(self, other):
        _check_same_grid(self, other)
        return ScalarField(self.grid, self.values - other.values, self.real and other.real)

    def __mul__(self, scalar):
        real = self.real and np.isrealobj(scalar)
        return ScalarField(self.grid, self.values * scalar, real)

    __rmul__ = __mul__

    def __neg__(self):
        return ScalarField(self.grid, -self.values, self.real)


@dataclass(frozen=True, eq=False)
class VectorField:
    grid: Grid
    components: tuple

    def __post_init__(self):
        comps = tuple(self.components)
        if len(comps) != self.grid.dim:
            raise ValueError(f"need {self.grid.dim} components, got {len(comps)}")
        for c in comps:
            if c.grid != self.grid:
                raise GridMismatch("vector components must share the field's grid")
        object.__setattr__(self, "components", comps)

    @classmethod
    def from_arrays(cls, grid, arrays, real=True):
        return cls(grid, tuple(ScalarField(grid, np.asarray(a), real=real) for a in arrays))

    @classmethod
    def zeros(cls, grid):
        return cls(grid, tuple(ScalarField.zeros(grid, real=True) for _ in range(grid.dim)))

    def __getitem__(self, axis):
        return self.components[axis]

    def __add__(self, other):
        _check_same_grid(self, other)
        return VectorField(self.grid, tuple(a + b for a, b in zip(self.components, other.components)))

    def __sub__(self, other):
        _check_same_grid(self, other)
        return VectorField(self.grid, tuple(a - b for a, b in zip(self.components, other.components)))

    def __mul__(self, scalar):
        return VectorField(self.grid, tuple(c * scalar for c in self.components))

    __rmul__ = __mul__

    def max_abs(self) -> float:
        return max(float(np.max(np.abs(c.values))) for c in self.components)


@dataclass(frozen=True, eq=False)
class SpinorField:
    """Two-component field on a 1D grid; flattened as ``[upper, lower]``."""

    grid: Grid
    upper: ScalarField
    lower: ScalarField

    def __post_init__(self):
        if self.grid.dim != 1:
            raise DimensionUnsupported("spinor fields live on 1D grids only")
        if self.upper.grid != self.grid or self.lower.grid != self.grid:
            raise GridMismatch("spinor components must share the field's grid")

    @classmethod
    def from_values(cls, grid, values):
        values = np.asarray(values)
        n = grid.size
        if values.size != 2 * n:
            raise ValueError(f"spinor needs {2 * n} values, got {values.size}")
        return cls(grid, ScalarField(grid, values[:n]), ScalarField(grid, values[n:]))

    @property
    def values(self) -> np.ndarray:
        return np.concatenate([self.upper.values, self.lower.values])


Field = Union[ScalarField, SpinorField]


def _check_same_grid(f, g):
    if f.grid != g.grid:
        raise GridMismatch(f"grid mismatch: {f.grid} vs {g.grid}")


def field_like(template: Field, values: np.ndarray) -> Field:
    """Wrap flat ``values`` in a field of the same kind and grid as ``template``."""
    if isinstance(template, SpinorField):
        return SpinorField.from_values(template.grid, values)
    return ScalarField(template.grid, values)


def inner_product(f: Field, g: Field) -> complex:
    """``sum(conj(f) * g) * cell_volume``; spinors sum over both components."""
    if type(f) is not type(g):
        raise TypeError("inner product needs two fields of the same kind")
    _check_same_grid(f, g)
    return complex(np.vdot(f.values, g.values) * f.grid.cell_volume)


def norm(f: Field) -> float:
    return float(np.sqrt(inner_product(f, f).real))


# --- stencil matrices -------------------------------------------------------


def _shift_1d(n: int, offset: int, periodic: bool) -> sp.csr_matrix:
    """Matrix mapping f -> f[i + offset] (zero outside the domain if not periodic)."""
    rows = np.arange(n)
    cols = rows + offset
    if periodic:
        cols = cols % n
        keep = np.ones(n, dtype=bool)
    else:
        keep = (cols >= 0) & (cols < n)
    return sp.csr_matrix((np.ones(keep.sum()), (rows[keep], cols[keep])), shape=(n, n))


def _embed(grid: Grid, axis: int, op_1d) -> sp.csr_matrix:
    mats = [sp.identity(n, format="csr") for n in grid.points]
    mats[axis] = op_1d
    out = mats[0]
    for m in mats[1:]:
        out = sp.kron(out, m, format="csr")
    return sp.csr_matrix(out)


@lru_cache(maxsize=128)
def shift_matrix(grid: Grid, axis: int, offset: int) -> sp.csr_matrix:
    return _embed(grid, axis, _shift_1d(grid.points[axis], offset, grid.periodic))


@lru_cache(maxsize=128)
def derivative_matrix(grid: Grid, axis: int) -> sp.csr_matrix:
    """Central difference ``(f[i+1] - f[i-1]) / 2h`` along ``axis``."""
    h = grid.spacing[axis]
    return sp.csr_matrix((shift_matrix(grid, axis, 1) - shift_matrix(grid, axis, -1)) / (2 * h))


@lru_cache(maxsize=128)
def second_derivative_matrix(grid: Grid, axis: int, wide: bool = False) -> sp.csr_matrix:
    """Three-point second difference; ``wide`` uses neighbours two sites away (spacing 2h)."""
    h = grid.spacing[axis]
    s = 2 if wide else 1
    eye = sp.identity(grid.size, format="csr")
    m = shift_matrix(grid, axis, s) - 2 * eye + shift_matrix(grid, axis, -s)
    return sp.csr_matrix(m / (s * h) ** 2)


@lru_cache(maxsize=64)
def laplacian_matrix(grid: Grid, wide: bool = False) -> sp.csr_matrix:
    out = second_derivative_matrix(grid, 0, wide)
    for axis in range(1, grid.dim):
        out = out + second_derivative_matrix(grid, axis, wide)
    return sp.csr_matrix(out)


# --- difference operators on fields ------------------------------------------


def _apply(matrix, f: ScalarField) -> ScalarField:
    return ScalarField(f.grid, matrix @ f.values, real=f.real)


def gradient(f: ScalarField) -> VectorField:
    comps = tuple(_apply(derivative_matrix(f.grid, a), f) for a in range(f.grid.dim))
    return VectorField(f.grid, comps)


def divergence(v: VectorField) -> ScalarField:
    out = _apply(derivative_matrix(v.grid, 0), v[0])
    for axis in range(1, v.grid.dim):
        out = out + _apply(derivative_matrix(v.grid, axis), v[axis])
    return out


def curl2d(v: VectorField) -> ScalarField:
    """Scalar curl ``d_x v_y - d_y v_x``."""
    if v.grid.dim != 2:
        raise DimensionUnsupported("curl2d needs a 2D grid")
    return _apply(derivative_matrix(v.grid, 0), v[1]) - _apply(derivative_matrix(v.grid, 1), v[0])


def laplacian(f: ScalarField) -> ScalarField:
    return _apply(laplacian_matrix(f.grid), f)


def wide_laplacian(f: ScalarField) -> ScalarField:
    """Laplacian with the 2h-spaced stencil; equals ``divergence(gradient(f))`` on periodic grids."""
    return _apply(laplacian_matrix(f.grid, wide=True), f)


def sample(grid: Grid, func, *args, real=True) -> ScalarField:
    """Evaluate ``func(coords, *args)`` on the grid."""
    values = np.broadcast_to(func(grid.coords, *args), grid.shape)
    return ScalarField(grid, values, real=real)
