"""Electromagnetic potentials, gauge functions and gauge transformations.

Potentials and gauge functions are bound to a grid and described by samplers:
plain functions of ``(coords, t)`` returning grid-shaped arrays (tuples of
arrays for vector quantities). Analytic derivatives are optional; when they are
missing the finite-difference fallbacks below are used and reports say so.

Besides site samples, a set of potentials carries the line integrals of **A**
along every lattice link. The Hamiltonian builders use them as hopping phases,
and a gauge transformation shifts each link integral by the exact increment
``chi(next site) - chi(site)``, so lattice operators transform covariantly to
roundoff for any gauge function.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from typing import Callable, Optional

import numpy as np

from .errors import GridMismatch, NotNormalized, NotPeriodic
from .grid import (
    Grid,
    ScalarField,
    SpinorField,
    VectorField,
    curl2d,
    derivative_matrix,
    gradient,
    inner_product,
    norm,
)

Sampler = Callable  # (coords, t) -> array, or tuple of arrays for vectors

DEFAULT_FD_STEP = 1e-4
_STATIC_PROBE_TIMES = (0.0, 0.731, 1.913)


def _as_tuple(values, grid):
    return tuple(np.broadcast_to(np.asarray(v, dtype=float), grid.shape) for v in values)


def _zero_scalar(coords, t):
    return np.zeros_like(coords[0])


def _zero_vector(coords, t):
    return tuple(np.zeros_like(c) for c in coords)


def _neighbour_difference(grid: Grid, values: np.ndarray, axis: int) -> np.ndarray:
    """``v[i + 1] - v[i]`` along ``axis``; wraps on periodic grids, zero into the wall."""
    diff = np.roll(values, -1, axis=axis) - values
    if not grid.periodic:
        index = [slice(None)] * grid.dim
        index[axis] = -1
        diff[tuple(index)] = 0.0
    return diff


def _trapezoid_links(grid: Grid, a_values: tuple) -> tuple:
    links = []
    for axis, comp in enumerate(a_values):
        link = 0.5 * grid.spacing[axis] * (comp + np.roll(comp, -1, axis=axis))
        if not grid.periodic:
            index = [slice(None)] * grid.dim
            index[axis] = -1
            link[tuple(index)] = 0.0
        links.append(link)
    return tuple(links)


@dataclass(frozen=True, eq=False)
class GaugeFunction:
    """A gauge function chi(r, t) on a grid.

    ``grad``, ``dchi_dt`` and ``grad_dchi_dt`` are optional analytic samplers.
    On periodic grids chi must be single-valued; this is checked at
    construction by comparing samples at positions displaced by one period.
    """

    grid: Grid
    chi: Sampler
    grad: Optional[Sampler] = None
    dchi_dt: Optional[Sampler] = None
    grad_dchi_dt: Optional[Sampler] = None
    static: bool = False
    name: str = "chi"
    fd_step: float = DEFAULT_FD_STEP
    periodic_tol: float = 1e-9

    def __post_init__(self):
        if self.grid.periodic:
            self._check_single_valued()

    def _check_single_valued(self):
        base = self.grid.coords
        for t in _STATIC_PROBE_TIMES:
            ref = np.asarray(self.chi(base, t), dtype=float)
            scale = max(1.0, float(np.max(np.abs(ref))))
            for axis in range(self.grid.dim):
                offsets = [0.0] * self.grid.dim
                offsets[axis] = self.grid.periods[axis]
                moved = np.asarray(self.chi(self.grid.shifted_coords(offsets), t), dtype=float)
                gap = float(np.max(np.abs(moved - ref)))
                if gap > self.periodic_tol * scale:
                    raise NotPeriodic(
                        f"gauge function {self.name!r} is not periodic along axis {axis} "
                        f"(mismatch {gap:.3e} at t={t})"
                    )

    @property
    def analytic(self) -> bool:
        return self.grad is not None and self.dchi_dt is not None

    def values(self, t: float) -> np.ndarray:
        return np.broadcast_to(np.asarray(self.chi(self.grid.coords, t), dtype=float), self.grid.shape)

    def field(self, t: float) -> ScalarField:
        return ScalarField(self.grid, self.values(t), real=True)

    def gradient(self, t: float) -> VectorField:
        if self.grad is not None:
            return VectorField.from_arrays(self.grid, _as_tuple(self.grad(self.grid.coords, t), self.grid))
        return gradient(self.field(t))

    def time_derivative(self, t: float) -> ScalarField:
        if self.dchi_dt is not None:
            values = self.dchi_dt(self.grid.coords, t)
        elif self.static:
            values = np.zeros(self.grid.shape)
        else:
            s = self.fd_step
            values = (self.values(t + s) - self.values(t - s)) / (2 * s)
        return ScalarField(self.grid, np.broadcast_to(values, self.grid.shape), real=True)

    def gradient_time_derivative(self, t: float) -> VectorField:
        if self.grad_dchi_dt is not None:
            arrays = _as_tuple(self.grad_dchi_dt(self.grid.coords, t), self.grid)
            return VectorField.from_arrays(self.grid, arrays)
        if self.static:
            return VectorField.zeros(self.grid)
        if self.grad is not None:
            s = self.fd_step
            return (self.gradient(t + s) - self.gradient(t - s)) * (0.5 / s)
        return gradient(self.time_derivative(t))

    def link_increments(self, t: float) -> tuple:
        """``chi(next site) - chi(site)`` for every link, one array per axis."""
        values = np.array(self.values(t))
        return tuple(_neighbour_difference(self.grid, values, a) for a in range(self.grid.dim))

    def __neg__(self):
        return _combine(self, None, -1.0)

    def __add__(self, other):
        return _combine(self, other, 1.0)

    def __sub__(self, other):
        return _combine(self, other, -1.0)


def _combine(f: GaugeFunction, g: Optional[GaugeFunction], sign: float) -> GaugeFunction:
    """``f + sign * g``, or ``sign * f`` when ``g`` is None."""
    if g is not None and g.grid != f.grid:
        raise GridMismatch("gauge functions live on different grids")

    def lift(a, b, vector):
        if a is None or (g is not None and b is None):
            return None
        if g is None:
            if vector:
                return lambda c, t: tuple(sign * x for x in a(c, t))
            return lambda c, t: sign * np.asarray(a(c, t))
        if vector:
            return lambda c, t: tuple(x + sign * y for x, y in zip(a(c, t), b(c, t)))
        return lambda c, t: np.asarray(a(c, t)) + sign * np.asarray(b(c, t))

    other = g if g is not None else f
    static = f.static and (g is None or g.static)
    name = f"-{f.name}" if g is None else f"{f.name}{'+' if sign > 0 else '-'}{g.name}"
    return GaugeFunction(
        grid=f.grid,
        chi=lift(f.chi, other.chi, False),
        grad=lift(f.grad, other.grad, True),
        dchi_dt=lift(f.dchi_dt, other.dchi_dt, False),
        grad_dchi_dt=lift(f.grad_dchi_dt, other.grad_dchi_dt, True),
        static=static,
        name=name,
        fd_step=f.fd_step,
    )


@dataclass(frozen=True, eq=False)
class Potentials:
    """Scalar potential A0 and vector potential A on a grid.

    ``links`` (callable of ``t``) returns the line integral of A over every
    link from a site to its neighbour up each axis; by default it is the
    trapezoid rule on site samples, which is exact for potentials linear
    along the link direction.
    """

    grid: Grid
    a0: Sampler = _zero_scalar
    a: Sampler = _zero_vector
    grad_a0: Optional[Sampler] = None
    da_dt: Optional[Sampler] = None
    curl_a: Optional[Sampler] = None
    links: Optional[Callable] = None
    rho: Optional[np.ndarray] = None
    static: bool = True
    name: str = "potentials"

    def scalar(self, t: float = 0.0) -> ScalarField:
        values = np.broadcast_to(np.asarray(self.a0(self.grid.coords, t), dtype=float), self.grid.shape)
        return ScalarField(self.grid, values, real=True)

    def vector(self, t: float = 0.0) -> VectorField:
        return VectorField.from_arrays(self.grid, _as_tuple(self.a(self.grid.coords, t), self.grid))

    def link_integrals(self, t: float = 0.0) -> tuple:
        if self.links is not None:
            return tuple(np.asarray(x, dtype=float) for x in self.links(t))
        a_values = _as_tuple(self.a(self.grid.coords, t), self.grid)
        return _trapezoid_links(self.grid, a_values)

    def scalar_gradient(self, t: float = 0.0) -> VectorField:
        if self.grad_a0 is not None:
            return VectorField.from_arrays(self.grid, _as_tuple(self.grad_a0(self.grid.coords, t), self.grid))
        return gradient(self.scalar(t))

    def vector_time_derivative(self, t: float = 0.0, dt: Optional[float] = None) -> VectorField:
        """dA/dt: analytic when available and ``dt`` is None, else a symmetric difference."""
        if dt is None:
            if self.static:
                return VectorField.zeros(self.grid)
            if self.da_dt is not None:
                return VectorField.from_arrays(self.grid, _as_tuple(self.da_dt(self.grid.coords, t), self.grid))
            dt = DEFAULT_FD_STEP
        return (self.vector(t + dt) - self.vector(t - dt)) * (0.5 / dt)

    def magnetic(self, t: float = 0.0) -> Optional[ScalarField]:
        if self.grid.dim != 2:
            return None
        if self.curl_a is not None:
            values = np.broadcast_to(np.asarray(self.curl_a(self.grid.coords, t), dtype=float), self.grid.shape)
            return ScalarField(self.grid, values, real=True)
        return curl2d(self.vector(t))


def transform_potentials(p: Potentials, chi: GaugeFunction) -> Potentials:
    """``A -> A + grad chi``, ``A0 -> A0 - d chi/dt``; link integrals shift by chi increments."""
    if p.grid != chi.grid:
        raise GridMismatch("potentials and gauge function live on different grids")
    grid = p.grid

    def a0(coords, t):
        return np.asarray(p.a0(coords, t)) - chi.time_derivative(t).array

    def a(coords, t):
        base = _as_tuple(p.a(coords, t), grid)
        return tuple(x + g.array for x, g in zip(base, chi.gradient(t).components))

    def links(t):
        return tuple(x + d for x, d in zip(p.link_integrals(t), chi.link_increments(t)))

    def grad_a0(coords, t):
        base = _as_tuple(p.grad_a0(coords, t), grid)
        return tuple(x - g.array for x, g in zip(base, chi.gradient_time_derivative(t).components))

    def da_dt(coords, t):
        base = p.vector_time_derivative(t).components
        return tuple(x.array + g.array for x, g in zip(base, chi.gradient_time_derivative(t).components))

    out = Potentials(
        grid=grid,
        a0=a0,
        a=a,
        grad_a0=grad_a0 if p.grad_a0 is not None else None,
        da_dt=da_dt if (p.static or p.da_dt is not None) else None,
        curl_a=p.curl_a,
        links=links,
        rho=p.rho,
        static=False,
        name=f"{p.name}|{chi.name}",
    )
    if p.static:
        out = replace(out, static=_is_static(out))
    return out


def _is_static(p: Potentials) -> bool:
    t0, t1 = _STATIC_PROBE_TIMES[1], _STATIC_PROBE_TIMES[2]
    if not np.array_equal(p.scalar(t0).values, p.scalar(t1).values):
        return False
    return all(
        np.array_equal(x.values, y.values) for x, y in zip(p.vector(t0).components, p.vector(t1).components)
    )


def transform_state(psi, chi: GaugeFunction, t: float, q: float):
    """Multiply by ``exp(i q chi(r, t))`` (hbar = 1); spinors get the phase on both components."""
    if psi.grid != chi.grid:
        raise GridMismatch("state and gauge function live on different grids")
    phase = np.exp(1j * q * chi.values(t).reshape(-1))
    if isinstance(psi, SpinorField):
        return SpinorField(psi.grid, ScalarField(psi.grid, phase * psi.upper.values),
                           ScalarField(psi.grid, phase * psi.lower.values))
    return ScalarField(psi.grid, phase * psi.values)


@dataclass(frozen=True, eq=False)
class FieldStrength:
    e: VectorField
    b: Optional[ScalarField] = None


def fields_from_potentials(p: Potentials, t: float = 0.0, dt: Optional[float] = None) -> FieldStrength:
    """``E = -grad A0 - dA/dt`` and, in 2D, ``B = curl A``.

    Analytic gradients, curls and time derivatives are used when the potentials
    carry them; passing ``dt`` forces a symmetric difference in time.
    """
    e = p.scalar_gradient(t) * -1.0 - p.vector_time_derivative(t, dt)
    return FieldStrength(e=e, b=p.magnetic(t))


@dataclass
class InvarianceReport:
    max_e_deviation: float
    max_b_deviation: float
    analytic: bool
    t_samples: list


def gauge_invariance_check(p: Potentials, chi: GaugeFunction, t_samples, dt: Optional[float] = None) -> InvarianceReport:
    """Largest sup-norm change of E and B under the gauge transformation."""
    transformed = transform_potentials(p, chi)
    de = db = 0.0
    for t in t_samples:
        f1 = fields_from_potentials(p, t, dt)
        f2 = fields_from_potentials(transformed, t, dt)
        de = max(de, (f2.e - f1.e).max_abs())
        if f1.b is not None:
            db = max(db, float(np.max(np.abs(f2.b.values - f1.b.values))))
    analytic = chi.analytic and dt is None
    return InvarianceReport(de, db, analytic, list(t_samples))


@dataclass
class ExpectationShiftReport:
    momentum_shift: np.ndarray  # <psi'|p|psi'> - <psi|p|psi>, per axis
    predicted_shift: np.ndarray  # q <psi|grad chi|psi>, per axis
    deviation: float


def expectation_shift_check(psi: ScalarField, chi: GaugeFunction, t: float, q: float) -> ExpectationShiftReport:
    """Compare the canonical-momentum expectation shift with ``q <grad chi>``.

    Both sides use the central-difference stencil: p = -i D and grad chi = D chi.
    """
    if abs(norm(psi) - 1.0) > 1e-8:
        raise NotNormalized(f"state norm is {norm(psi):.12f}")
    grid = psi.grid
    moved = transform_state(psi, chi, t, q)
    chi_values = chi.field(t)
    shift, predicted = [], []
    for axis in range(grid.dim):
        d = derivative_matrix(grid, axis)
        before = inner_product(psi, ScalarField(grid, -1j * (d @ psi.values)))
        after = inner_product(moved, ScalarField(grid, -1j * (d @ moved.values)))
        grad_chi = ScalarField(grid, d @ chi_values.values)
        weighted = ScalarField(grid, grad_chi.values * psi.values)
        shift.append((after - before).real)
        predicted.append(q * inner_product(psi, weighted).real)
    shift, predicted = np.array(shift), np.array(predicted)
    return ExpectationShiftReport(shift, predicted, float(np.max(np.abs(shift - predicted))))
