"""Crank-Nicolson propagation and the gauge-covariance / stationarity checks built on it."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

import numpy as np
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import NotNormalized, NotStationary, PropagationFailure
from .gauge import GaugeFunction, Potentials, transform_potentials, transform_state
from .grid import field_like, norm
from .operators import EYE_2, HermitianOperator, hamiltonian
from .spectra import Spectrum, lowest_k

SOLVE_TOL = 1e-12
NORM_TOL = 1e-8


@dataclass
class PropagationResult:
    times: np.ndarray
    states: list
    norms: np.ndarray
    dt: float
    steps: int

    @property
    def norm_drift(self) -> float:
        return float(np.max(np.abs(self.norms - 1.0)))


class _CNStepper:
    """Caches the LU factorisation of ``1 + i dt/2 H`` while H stays the same object."""

    def __init__(self, dt: float):
        self.dt = dt
        self._op = None

    def _factor(self, op: HermitianOperator):
        eye = sp.identity(op.n, dtype=complex, format="csc")
        half = 0.5j * self.dt * sp.csc_matrix(op.matrix)
        self._lhs = eye + half
        self._rhs = eye - half
        self._lu = spla.splu(self._lhs)
        self._op = op

    def step(self, op: HermitianOperator, psi: np.ndarray) -> np.ndarray:
        if op is not self._op:
            self._factor(op)
        b = self._rhs @ psi
        x = self._lu.solve(b)
        scale = max(np.linalg.norm(b), 1e-300)
        for _ in range(3):
            r = b - self._lhs @ x
            if np.linalg.norm(r) <= SOLVE_TOL * scale:
                return x
            x = x + self._lu.solve(r)
        raise PropagationFailure(f"linear solve residual {np.linalg.norm(r) / scale:.3e} above {SOLVE_TOL}")


def evolve(psi0, hamiltonian_at: Callable[[float], HermitianOperator], t0: float, dt: float, steps: int,
           sample_every: int = 1) -> PropagationResult:
    """Crank-Nicolson steps with H evaluated at each step midpoint.

    ``(1 + i dt/2 H(t + dt/2)) psi_{n+1} = (1 - i dt/2 H(t + dt/2)) psi_n``.
    ``hamiltonian_at`` may return the same operator object every call for a
    static H, in which case the factorisation is reused.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    if abs(norm(psi0) - 1.0) > NORM_TOL:
        raise NotNormalized(f"initial state norm is {norm(psi0):.12f}")
    stepper = _CNStepper(dt)
    psi = np.array(psi0.values, dtype=complex)
    times, states, norms = [t0], [psi0], [norm(psi0)]
    for n in range(steps):
        t = t0 + n * dt
        psi = stepper.step(hamiltonian_at(t + 0.5 * dt), psi)
        if (n + 1) % sample_every == 0 or n + 1 == steps:
            state = field_like(psi0, psi)
            times.append(t0 + (n + 1) * dt)
            states.append(state)
            norms.append(norm(state))
    return PropagationResult(np.array(times), states, np.array(norms), dt, steps)


def _builder(p: Potentials, q: float, m: float, kind: str, wilson: float):
    if p.static:
        op = hamiltonian(p.grid, p, 0.0, q, m, kind, wilson)
        return lambda t: op
    return lambda t: hamiltonian(p.grid, p, t, q, m, kind, wilson)


@dataclass
class CovarianceReport:
    max_deviation: float
    times: np.ndarray
    deviations: np.ndarray
    max_density_deviation: float
    norm_drift: float


def gauge_covariance_check(psi0, p: Potentials, chi: GaugeFunction, q: float, m: float, kind: str,
                           dt: float, steps: int, t0: float = 0.0, sample_every: int = 1,
                           wilson: float = 0.0) -> CovarianceReport:
    """Propagate in both gauges and measure ``|| psi'(t) - U(t) psi(t) ||``."""
    transformed = transform_potentials(p, chi)
    original = evolve(psi0, _builder(p, q, m, kind, wilson), t0, dt, steps, sample_every)
    moved0 = transform_state(psi0, chi, t0, q)
    other = evolve(moved0, _builder(transformed, q, m, kind, wilson), t0, dt, steps, sample_every)
    devs, dens = [], []
    for t, a, b in zip(original.times, original.states, other.states):
        mapped = transform_state(a, chi, t, q)
        devs.append(norm(field_like(a, b.values - mapped.values)))
        dens.append(float(np.max(np.abs(np.abs(b.values) ** 2 - np.abs(a.values) ** 2))))
    devs = np.array(devs)
    drift = max(original.norm_drift, other.norm_drift)
    return CovarianceReport(float(devs.max()), original.times, devs, float(max(dens)), drift)


def dt_halving_order(psi0, p: Potentials, chi: GaugeFunction, q: float, m: float, kind: str, dt: float,
                     steps: int, wilson: float = 0.0) -> tuple:
    """Covariance deviation at the final time for ``dt`` and ``dt/2``, and the observed order."""
    coarse = gauge_covariance_check(psi0, p, chi, q, m, kind, dt, steps, sample_every=steps, wilson=wilson)
    fine = gauge_covariance_check(psi0, p, chi, q, m, kind, dt / 2, 2 * steps, sample_every=2 * steps,
                                  wilson=wilson)
    d1, d2 = coarse.deviations[-1], fine.deviations[-1]
    return float(d1), float(d2), float(np.log2(d1 / d2))


def cn_phase_rate(alpha: float, dt: float) -> float:
    """Phase advance per unit time of a CN-evolved eigenstate: ``-(2/dt) arctan(alpha dt / 2)``."""
    return -2.0 / dt * np.arctan(0.5 * alpha * dt)


@dataclass
class StationaryReport:
    max_modulus_deviation: float
    fitted_rate: float
    expected_rate: float
    rate_deviation: float


def stationary_phase_check(psi_k, alpha_k: float, h_static: HermitianOperator, dt: float, steps: int,
                           tol: float = 1e-9) -> StationaryReport:
    """Evolve an eigenstate and compare the overlap phase with the closed-form CN rate.

    The rate is a least-squares slope of the unwrapped phase of
    ``<psi(0)|psi(t)>``; ``dt`` must keep the per-step phase below pi.
    """
    v = np.asarray(psi_k.values)
    residual = np.linalg.norm(h_static @ v - alpha_k * v) / np.linalg.norm(v)
    if residual > tol * max(1.0, h_static.norm_inf()):
        raise NotStationary(f"eigen-residual {residual:.3e} too large")
    result = evolve(psi_k, lambda t: h_static, 0.0, dt, steps)
    overlaps = np.array([np.vdot(v, s.values) for s in result.states]) / np.vdot(v, v)
    phase = np.unwrap(np.angle(overlaps))
    slope = float(np.polyfit(result.times, phase, 1)[0])
    expected = cn_phase_rate(alpha_k, dt)
    return StationaryReport(float(np.max(np.abs(np.abs(overlaps) - 1.0))), slope, float(expected),
                            abs(slope - expected))


def stationary_modulus_check(psi_k, p: Potentials, chi: GaugeFunction, q: float, m: float, kind: str,
                             dt: float, steps: int, t0: float = 0.0, wilson: float = 0.0) -> float:
    """Evolve ``U(chi) psi_k`` under the transformed Hamiltonian; largest pointwise change of ``|psi|``."""
    transformed = transform_potentials(p, chi)
    start = transform_state(psi_k, chi, t0, q)
    result = evolve(start, _builder(transformed, q, m, kind, wilson), t0, dt, steps)
    ref = np.abs(start.values)
    return float(max(np.max(np.abs(np.abs(s.values) - ref)) for s in result.states))


def separation_operator(p_transformed: Potentials, chi: GaugeFunction, q: float, m: float, kind: str,
                        t: float = 0.0, wilson: float = 0.0) -> HermitianOperator:
    """``H(A0', A') + q d chi/dt`` at time ``t``."""
    grid = p_transformed.grid
    h = hamiltonian(grid, p_transformed, t, q, m, kind, wilson)
    shift = sp.diags(q * chi.time_derivative(t).values)
    if kind == "dirac":
        shift = sp.kron(EYE_2, shift)
    return HermitianOperator.build(h.matrix + shift, "H_sep")


def energy_via_separation(p_transformed: Potentials, chi: GaugeFunction, q: float, m: float, kind: str, k: int,
                          t: float = 0.0, wilson: float = 0.0) -> Spectrum:
    """Lowest ``k`` eigenvalues of the separated operator: the energies in the transformed gauge."""
    return lowest_k(separation_operator(p_transformed, chi, q, m, kind, t, wilson), k)
