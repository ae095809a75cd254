"""Pure-gauge / physical split of the potentials on periodic grids.

All derivatives here are spectral (exact for band-limited fields), unlike the
stencils in :mod:`gaugelab.grid`. Conventions for the zero Fourier mode:

* the spatial mean of A belongs to ``a_phys``;
* the inverse Laplacian maps the mean to zero;
* ``a0_phys`` has zero spatial mean, so a spatially uniform shift of A0
  (including the one produced by ``chi = c t``) is pure gauge.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Optional

import numpy as np

from .errors import BoundaryUnsupported, IncompatibleSource
from .gauge import Potentials
from .grid import Grid, ScalarField, VectorField

RHO_MEAN_TOL = 1e-10


def _require_periodic(grid: Grid):
    if not grid.periodic:
        raise BoundaryUnsupported("the Helmholtz split is only offered on periodic grids")


@lru_cache(maxsize=32)
def wavenumbers(grid: Grid) -> tuple:
    """Angular wavenumbers per axis, broadcast to the grid shape."""
    axes = [2 * np.pi * np.fft.fftfreq(n, d=h) for n, h in zip(grid.points, grid.spacing)]
    mesh = np.meshgrid(*axes, indexing="ij")
    for m in mesh:
        m.setflags(write=False)
    return tuple(mesh)


def _k2(grid):
    return sum(k * k for k in wavenumbers(grid))


def _fft(values, grid):
    return np.fft.fftn(np.asarray(values).reshape(grid.shape))


def _ifft(values, real):
    out = np.fft.ifftn(values)
    return out.real if real else out


def spectral_gradient(f: ScalarField) -> VectorField:
    grid = f.grid
    fh = _fft(f.values, grid)
    comps = [_ifft(1j * k * fh, f.real) for k in wavenumbers(grid)]
    return VectorField(grid, tuple(ScalarField(grid, c, real=f.real) for c in comps))


def spectral_divergence(v: VectorField) -> ScalarField:
    grid = v.grid
    real = all(c.real for c in v.components)
    total = sum(1j * k * _fft(c.values, grid) for k, c in zip(wavenumbers(grid), v.components))
    return ScalarField(grid, _ifft(total, real), real=real)


def spectral_curl(v: VectorField) -> ScalarField:
    """Scalar curl in 2D; identically zero in 1D."""
    grid = v.grid
    real = all(c.real for c in v.components)
    if grid.dim == 1:
        return ScalarField(grid, np.zeros(grid.size), real=real)
    kx, ky = wavenumbers(grid)
    total = 1j * kx * _fft(v[1].values, grid) - 1j * ky * _fft(v[0].values, grid)
    return ScalarField(grid, _ifft(total, real), real=real)


def spectral_laplacian(f: ScalarField) -> ScalarField:
    grid = f.grid
    return ScalarField(grid, _ifft(-_k2(grid) * _fft(f.values, grid), f.real), real=f.real)


def inverse_laplacian(f: ScalarField) -> ScalarField:
    """Zero-mean solution of ``lap u = f``; the mean of ``f`` is ignored."""
    grid = f.grid
    k2 = _k2(grid)
    fh = _fft(f.values, grid)
    uh = np.zeros_like(fh)
    nonzero = k2 > 0
    uh[nonzero] = -fh[nonzero] / k2[nonzero]
    return ScalarField(grid, _ifft(uh, f.real), real=f.real)


def decompose_vector(a: VectorField) -> tuple:
    """Split ``a`` into a curl-free part and a divergence-free part.

    Returns ``(a_pure, a_phys)`` with ``a_pure(k) = k (k . a(k)) / |k|^2``
    for k != 0 and ``a_phys = a - a_pure``.
    """
    grid = a.grid
    _require_periodic(grid)
    real = all(c.real for c in a.components)
    if grid.dim == 1:
        mean = a[0].values.mean()
        pure = ScalarField(grid, a[0].values - mean, real=real)
        phys = ScalarField(grid, np.full(grid.size, mean), real=real)
        return VectorField(grid, (pure,)), VectorField(grid, (phys,))
    ks = wavenumbers(grid)
    k2 = _k2(grid)
    hats = [_fft(c.values, grid) for c in a.components]
    k_dot_a = sum(k * h for k, h in zip(ks, hats))
    with np.errstate(divide="ignore", invalid="ignore"):
        scale = np.where(k2 > 0, k_dot_a / np.where(k2 > 0, k2, 1.0), 0.0)
    pure = tuple(ScalarField(grid, _ifft(k * scale, real), real=real) for k in ks)
    phys = tuple(c - p for c, p in zip(a.components, pure))
    return VectorField(grid, pure), VectorField(grid, phys)


def phys_scalar_from_rho(rho: ScalarField, tol: float = RHO_MEAN_TOL) -> ScalarField:
    """Zero-mean solution of ``lap A0_phys = -rho`` (units with epsilon_0 = 1)."""
    _require_periodic(rho.grid)
    mean = float(np.mean(rho.values).real)
    if abs(mean) > tol * max(1.0, float(np.max(np.abs(rho.values)))):
        raise IncompatibleSource(f"charge density has nonzero mean {mean:.3e} on a periodic grid")
    return -inverse_laplacian(rho)


def phys_scalar_from_potentials(p: Potentials, t: float = 0.0, dt: Optional[float] = None) -> ScalarField:
    """``A0 + d/dt [lap^-1 div A]``, projected to zero spatial mean.

    The time derivative is analytic when the potentials carry one (and ``dt``
    is None), otherwise a symmetric difference with step ``dt``.
    """
    _require_periodic(p.grid)
    da = p.vector_time_derivative(t, dt)
    correction = inverse_laplacian(spectral_divergence(da))
    out = p.scalar(t).values + correction.values
    return ScalarField(p.grid, out - out.mean(), real=True)


def chen_potentials(p: Potentials, t: float = 0.0, use_rho: bool = True, dt: Optional[float] = None) -> tuple:
    """``(A0_phys, A)`` at time ``t``; A0_phys from the charge density when one is attached."""
    _require_periodic(p.grid)
    if use_rho and p.rho is not None:
        a0_phys = phys_scalar_from_rho(ScalarField(p.grid, p.rho, real=True))
    else:
        a0_phys = phys_scalar_from_potentials(p, t, dt)
    return a0_phys, p.vector(t)


@dataclass(frozen=True, eq=False)
class Decomposition:
    a_pure: VectorField
    a_phys: VectorField
    a0_pure: ScalarField
    a0_phys: ScalarField
    residual_div: float
    residual_curl: float


def decompose(p: Potentials, t: float = 0.0, use_rho: bool = True, dt: Optional[float] = None) -> Decomposition:
    a = p.vector(t)
    a_pure, a_phys = decompose_vector(a)
    a0_phys, _ = chen_potentials(p, t, use_rho, dt)
    a0_pure = p.scalar(t) - a0_phys
    residual_div = float(np.max(np.abs(spectral_divergence(a_phys).values)))
    residual_curl = float(np.max(np.abs(spectral_curl(a_pure).values)))
    return Decomposition(a_pure, a_phys, a0_pure, a0_phys, residual_div, residual_curl)
