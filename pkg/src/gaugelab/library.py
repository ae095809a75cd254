"""Named potentials and gauge functions usable from scenario config files.

Each factory takes the grid plus keyword parameters and returns a
:class:`~gaugelab.gauge.Potentials` or :class:`~gaugelab.gauge.GaugeFunction`
carrying analytic derivatives. ``POTENTIALS`` and ``GAUGES`` map config names
to factories.
"""

from __future__ import annotations

import numpy as np

from .gauge import GaugeFunction, Potentials
from .grid import Grid


def _displacement(grid: Grid, coords, axis: int, centre: float = 0.0):
    """Offset from ``centre``; minimum-image on periodic grids so samplers stay periodic."""
    d = coords[axis] - centre
    if grid.periodic:
        period = grid.periods[axis]
        d = d - period * np.floor(d / period + 0.5)
    return d


def _zeros(coords, t):
    return np.zeros_like(coords[0])


def _zero_vec(coords, t):
    return tuple(np.zeros_like(c) for c in coords)


# --- potentials ----------------------------------------------------------------


def vacuum(grid: Grid) -> Potentials:
    return Potentials(grid, name="vacuum", grad_a0=_zero_vec, curl_a=_zeros if grid.dim == 2 else None)


def soft_coulomb(grid: Grid, kappa: float = 1.0, soft: float = 0.5, centre=None) -> Potentials:
    """``A0 = -kappa / sqrt(r^2 + soft^2)``, A = 0."""
    centre = np.zeros(grid.dim) if centre is None else np.broadcast_to(centre, (grid.dim,))

    def disp(coords):
        return [_displacement(grid, coords, a, centre[a]) for a in range(grid.dim)]

    def a0(coords, t):
        r2 = sum(d * d for d in disp(coords))
        return -kappa / np.sqrt(r2 + soft**2)

    def grad_a0(coords, t):
        ds = disp(coords)
        r2 = sum(d * d for d in ds)
        w = kappa / (r2 + soft**2) ** 1.5
        return tuple(w * d for d in ds)

    return Potentials(grid, a0=a0, grad_a0=grad_a0, curl_a=_zeros if grid.dim == 2 else None,
                      name="soft_coulomb")


def harmonic(grid: Grid, stiffness: float = 1.0) -> Potentials:
    """``A0 = stiffness * r^2 / 2`` (an oscillator for q = m = 1)."""

    def a0(coords, t):
        return 0.5 * stiffness * sum(c * c for c in coords)

    def grad_a0(coords, t):
        return tuple(stiffness * c for c in coords)

    return Potentials(grid, a0=a0, grad_a0=grad_a0, curl_a=_zeros if grid.dim == 2 else None,
                      name="harmonic")


def uniform_b_symmetric(grid: Grid, b: float = 1.0) -> Potentials:
    """``A = B (-y, x) / 2``."""
    _need_2d(grid)
    return Potentials(
        grid,
        a=lambda c, t: (-0.5 * b * c[1], 0.5 * b * c[0]),
        grad_a0=_zero_vec,
        curl_a=lambda c, t: np.full_like(c[0], b),
        name="uniform_b_symmetric",
    )


def uniform_b_landau(grid: Grid, b: float = 1.0) -> Potentials:
    """``A = (0, B x)``."""
    _need_2d(grid)
    return Potentials(
        grid,
        a=lambda c, t: (np.zeros_like(c[0]), b * c[0]),
        grad_a0=_zero_vec,
        curl_a=lambda c, t: np.full_like(c[0], b),
        name="uniform_b_landau",
    )


def periodic_transverse(grid: Grid, b: float = 1.0) -> Potentials:
    """Divergence-free periodic A whose curl is ``b`` at the centre of the cell.

    ``A = (-sin(k y), sin(k x)) * b / (2k)`` per axis period, so
    ``curl A = b (cos(k x) + cos(k y)) / 2``.
    """
    _need_2d(grid)
    kx, ky = (2 * np.pi / p for p in grid.periods)

    def a(c, t):
        return (-np.sin(ky * c[1]) * b / (2 * ky), np.sin(kx * c[0]) * b / (2 * kx))

    def curl(c, t):
        return 0.5 * b * (np.cos(kx * c[0]) + np.cos(ky * c[1]))

    return Potentials(grid, a=a, grad_a0=_zero_vec, curl_a=curl, name="periodic_transverse")


def gaussian_dipole_density(grid: Grid, charge: float = 1.0, width: float = 0.6, separation: float = 2.0):
    """Zero-mean charge density: a positive and a negative Gaussian blob on the x axis."""
    coords = grid.coords

    def blob(x0):
        d = [_displacement(grid, coords, 0, x0)] + [_displacement(grid, coords, a) for a in range(1, grid.dim)]
        return np.exp(-sum(x * x for x in d) / (2 * width**2))

    rho = charge * (blob(-0.5 * separation) - blob(0.5 * separation))
    return rho - rho.mean()


def _need_2d(grid):
    if grid.dim != 2:
        from .errors import DimensionUnsupported

        raise DimensionUnsupported("this potential needs a 2D grid")


POTENTIALS = {
    "vacuum": vacuum,
    "soft_coulomb": soft_coulomb,
    "harmonic": harmonic,
    "uniform_b_symmetric": uniform_b_symmetric,
    "uniform_b_landau": uniform_b_landau,
    "periodic_transverse": periodic_transverse,
}


# --- gauge functions -----------------------------------------------------------


def zero_gauge(grid: Grid) -> GaugeFunction:
    return GaugeFunction(grid, chi=_zeros, grad=_zero_vec, dchi_dt=_zeros, grad_dchi_dt=_zero_vec,
                         static=True, name="zero")


def constant_rate(grid: Grid, rate: float = 1.0) -> GaugeFunction:
    """``chi = rate * t``: uniform in space, shifts A0 by ``-rate``."""
    return GaugeFunction(
        grid,
        chi=lambda c, t: np.full_like(c[0], rate * t),
        grad=_zero_vec,
        dchi_dt=lambda c, t: np.full_like(c[0], rate),
        grad_dchi_dt=_zero_vec,
        name="constant_rate",
    )


def linear_gauge(grid: Grid, k=1.0) -> GaugeFunction:
    """Static ``chi = k . r`` (rejected on periodic grids)."""
    k = np.broadcast_to(np.asarray(k, dtype=float), (grid.dim,))
    return GaugeFunction(
        grid,
        chi=lambda c, t: sum(ki * ci for ki, ci in zip(k, c)),
        grad=lambda c, t: tuple(np.full_like(c[0], ki) for ki in k),
        dchi_dt=_zeros,
        grad_dchi_dt=_zero_vec,
        static=True,
        name="linear",
    )


def bilinear_gauge(grid: Grid, c: float = 0.5) -> GaugeFunction:
    """Static ``chi = c x y``; with ``c = B/2`` it maps the symmetric gauge to the Landau gauge."""
    _need_2d(grid)
    return GaugeFunction(
        grid,
        chi=lambda r, t: c * r[0] * r[1],
        grad=lambda r, t: (c * r[1], c * r[0]),
        dchi_dt=_zeros,
        grad_dchi_dt=_zero_vec,
        static=True,
        name="bilinear",
    )


def temporal_gauge(p: Potentials) -> GaugeFunction:
    """``chi = A0(r) t`` for static potentials; removes the scalar potential entirely."""
    grid = p.grid

    def grad_a0(c, t):
        if p.grad_a0 is not None:
            return p.grad_a0(c, t)
        return tuple(x.array for x in p.scalar_gradient(0.0).components)

    return GaugeFunction(
        grid,
        chi=lambda c, t: np.asarray(p.a0(c, 0.0)) * t,
        grad=lambda c, t: tuple(g * t for g in grad_a0(c, t)),
        dchi_dt=lambda c, t: np.asarray(p.a0(c, 0.0)),
        grad_dchi_dt=lambda c, t: grad_a0(c, t),
        name="temporal",
    )


def random_smooth(grid: Grid, seed: int = 0, modes: int = 4, kmax: int = 2, amplitude: float = 0.5,
                  omega: float = 2.0, static: bool = False) -> GaugeFunction:
    """Seeded, band-limited periodic gauge function with zero spatial mean.

    ``chi = sum_j c_j cos(k_j . r + phi_j) * (1 + sin(w_j t + theta_j))`` with
    nonzero integer wave vectors ``|k_j| <= kmax`` (in units of 2 pi / period).
    Draws come from ``numpy.random.default_rng(seed)`` (PCG64).
    """
    rng = np.random.default_rng(seed)
    base = np.array([2 * np.pi / p for p in grid.periods]) if grid.periodic else \
        np.array([2 * np.pi / (n * h) for n, h in zip(grid.points, grid.spacing)])
    ks, cs, phis, ws, thetas = [], [], [], [], []
    for _ in range(modes):
        while True:
            n = rng.integers(-kmax, kmax + 1, size=grid.dim)
            if np.any(n != 0):
                break
        ks.append(n * base)
        cs.append(amplitude * rng.uniform(0.5, 1.0))
        phis.append(rng.uniform(0, 2 * np.pi))
        ws.append(0.0 if static else omega * rng.uniform(0.5, 1.0))
        thetas.append(rng.uniform(0, 2 * np.pi))

    def phase(c, j):
        return sum(ks[j][a] * c[a] for a in range(grid.dim)) + phis[j]

    def envelope(t, j):
        return 1.0 if static else 1.0 + np.sin(ws[j] * t + thetas[j])

    def denvelope(t, j):
        return 0.0 if static else ws[j] * np.cos(ws[j] * t + thetas[j])

    def chi(c, t):
        return sum(cs[j] * np.cos(phase(c, j)) * envelope(t, j) for j in range(modes))

    def grad(c, t):
        return tuple(sum(-cs[j] * ks[j][a] * np.sin(phase(c, j)) * envelope(t, j) for j in range(modes))
                     for a in range(grid.dim))

    def dchi(c, t):
        return sum(cs[j] * np.cos(phase(c, j)) * denvelope(t, j) for j in range(modes)) + np.zeros_like(c[0])

    def grad_dchi(c, t):
        return tuple(sum(-cs[j] * ks[j][a] * np.sin(phase(c, j)) * denvelope(t, j) for j in range(modes))
                     + np.zeros_like(c[0]) for a in range(grid.dim))

    return GaugeFunction(grid, chi=chi, grad=grad, dchi_dt=dchi, grad_dchi_dt=grad_dchi,
                         static=static, name=f"random_smooth[{seed}]")


GAUGES = {
    "zero": zero_gauge,
    "constant_rate": constant_rate,
    "linear": linear_gauge,
    "bilinear": bilinear_gauge,
    "random_smooth": random_smooth,
}
