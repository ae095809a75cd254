"""Sparse Hermitian lattice operators: momenta, Hamiltonians and energy operators.

Minimal coupling in the Hamiltonians uses link phases ``exp(-i q theta)`` with
``theta`` the line integral of A along each link (see ``gauge.Potentials``).
Under a gauge transformation the link integrals shift by exact chi
increments, so ``H(A0 - d chi/dt, A + grad chi) = U H U^dagger - q d chi/dt``
holds to roundoff on the lattice, with ``U = diag(exp(i q chi))``.

The canonical and kinetic momenta are the plain central-difference operators
``-i D`` and ``-i D - q A``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.sparse as sp

from .errors import DimensionUnsupported, GridMismatch
from .gauge import Potentials
from .grid import Grid, ScalarField, VectorField, curl2d, derivative_matrix, shift_matrix

HERMITICITY_TOL = 1e-12

SIGMA_X = sp.csr_matrix(np.array([[0, 1], [1, 0]], dtype=complex))
SIGMA_Z = sp.csr_matrix(np.array([[1, 0], [0, -1]], dtype=complex))
EYE_2 = sp.identity(2, dtype=complex, format="csr")


@dataclass(frozen=True, eq=False)
class HermitianOperator:
    matrix: sp.csr_matrix
    hermiticity_defect: float
    label: str = ""

    @classmethod
    def build(cls, matrix, label=""):
        matrix = sp.csr_matrix(matrix, dtype=complex)
        matrix.sort_indices()
        diff = matrix - matrix.conj().T
        defect = float(np.max(np.abs(diff.data))) if diff.nnz else 0.0
        if defect > HERMITICITY_TOL:
            raise ValueError(f"operator {label!r} is not Hermitian (defect {defect:.3e})")
        return cls(matrix, defect, label)

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    def __matmul__(self, vector):
        return self.matrix @ vector

    def matvec(self, vector):
        return self.matrix @ vector

    def toarray(self) -> np.ndarray:
        return self.matrix.toarray()

    def norm_inf(self) -> float:
        return float(np.max(np.asarray(abs(self.matrix).sum(axis=1)))) if self.matrix.nnz else 0.0


def _check_grid(grid: Grid, p: Potentials):
    if p.grid != grid:
        raise GridMismatch("potentials live on a different grid")


# --- momenta -------------------------------------------------------------------


def canonical_momentum(grid: Grid, axis: int) -> HermitianOperator:
    if not 0 <= axis < grid.dim:
        raise ValueError(f"axis {axis} out of range for a {grid.dim}D grid")
    return HermitianOperator.build(-1j * derivative_matrix(grid, axis), f"p[{axis}]")


def kinetic_momentum(grid: Grid, axis: int, a: VectorField, q: float) -> HermitianOperator:
    """``P = p - q A`` along ``axis``."""
    if a.grid != grid:
        raise GridMismatch("vector potential lives on a different grid")
    p = canonical_momentum(grid, axis).matrix
    return HermitianOperator.build(p - q * sp.diags(a[axis].values), f"P[{axis}]")


@dataclass
class CommutatorReport:
    residual: float
    commutator_norm: float
    sites: int


def commutator_field_check(grid: Grid, a: VectorField, q: float, psi: ScalarField,
                           exclude_layers: int = 0) -> CommutatorReport:
    """Relative residual of ``[Px, Py] psi = -i q F^{xy} psi``.

    With contravariant indices ``F^{xy} = -(d_x A_y - d_y A_x)``, so the
    expected right-hand side is ``+i q curl2d(A) psi``. ``exclude_layers``
    drops that many sites at both ends of every axis from the residual, for
    potentials that jump across the periodic seam.
    """
    if grid.dim != 2:
        raise DimensionUnsupported("the commutator check needs a 2D grid")
    px = kinetic_momentum(grid, 0, a, q).matrix
    py = kinetic_momentum(grid, 1, a, q).matrix
    v = psi.values
    comm = px @ (py @ v) - py @ (px @ v)
    expected = 1j * q * curl2d(a).values * v
    mask = np.ones(grid.shape, dtype=bool)
    if exclude_layers:
        k = exclude_layers
        mask[:k, :] = mask[-k:, :] = False
        mask[:, :k] = mask[:, -k:] = False
    mask = mask.reshape(-1)
    denom = np.linalg.norm(v[mask])
    residual = float(np.linalg.norm((comm - expected)[mask]) / denom)
    return CommutatorReport(residual, float(np.linalg.norm(comm[mask]) / denom), int(mask.sum()))


# --- Hamiltonians ----------------------------------------------------------------


def covariant_shift(grid: Grid, axis: int, link: np.ndarray, q: float) -> sp.csr_matrix:
    """``(T psi)_i = exp(-i q theta_i) psi_{i+1}`` along ``axis``."""
    phases = np.exp(-1j * q * np.asarray(link).reshape(-1))
    return sp.csr_matrix(sp.diags(phases) @ shift_matrix(grid, axis, 1))


def _kinetic(grid: Grid, links, q: float, m: float) -> sp.csr_matrix:
    out = sp.csr_matrix((grid.size, grid.size), dtype=complex)
    eye = sp.identity(grid.size, dtype=complex, format="csr")
    for axis in range(grid.dim):
        t = covariant_shift(grid, axis, links[axis], q)
        h = grid.spacing[axis]
        out = out + (2 * eye - t - t.conj().T) / (2 * m * h * h)
    return out


def _dirac(grid: Grid, links, q: float, m: float, wilson: float) -> sp.csr_matrix:
    h = grid.spacing[0]
    t = covariant_shift(grid, 0, links[0], q)
    momentum = -1j * (t - t.conj().T) / (2 * h)
    mass = m * sp.identity(grid.size, dtype=complex, format="csr")
    if wilson:
        eye = sp.identity(grid.size, dtype=complex, format="csr")
        mass = mass + (wilson / (2 * h)) * (2 * eye - t - t.conj().T)
    return sp.kron(SIGMA_X, momentum, format="csr") + sp.kron(SIGMA_Z, mass, format="csr")


def _assemble(grid, links, scalar: Optional[np.ndarray], q, m, kind, wilson=0.0, label=""):
    if m <= 0:
        raise ValueError("mass must be positive")
    if kind == "schrodinger":
        matrix = _kinetic(grid, links, q, m)
        if scalar is not None:
            matrix = matrix + sp.diags(q * np.asarray(scalar).reshape(-1))
    elif kind == "dirac":
        if grid.dim != 1:
            raise DimensionUnsupported("the Dirac Hamiltonian is implemented in 1+1 dimensions")
        matrix = _dirac(grid, links, q, m, wilson)
        if scalar is not None:
            matrix = matrix + sp.kron(EYE_2, sp.diags(q * np.asarray(scalar).reshape(-1)), format="csr")
    else:
        raise ValueError(f"unknown Hamiltonian kind {kind!r}")
    return HermitianOperator.build(matrix, label)


def schrodinger_hamiltonian(grid: Grid, p: Potentials, t: float, q: float, m: float) -> HermitianOperator:
    """``(p - q A)^2 / 2m + q A0`` with three-point covariant kinetic stencil."""
    _check_grid(grid, p)
    return _assemble(grid, p.link_integrals(t), p.scalar(t).values, q, m, "schrodinger", label="H_S")


def dirac_hamiltonian_1p1(grid: Grid, p: Potentials, t: float, q: float, m: float,
                          wilson: float = 0.0) -> HermitianOperator:
    """``sigma_x (p - q A) + sigma_z m + q A0`` on the 2N spinor space.

    Naive central differences (doublers present) unless ``wilson`` > 0, which
    adds ``wilson / 2h * sigma_z * (2 - T - T^dagger)``.
    """
    _check_grid(grid, p)
    return _assemble(grid, p.link_integrals(t), p.scalar(t).values, q, m, "dirac", wilson, label="H_D")


def hamiltonian(grid: Grid, p: Potentials, t: float, q: float, m: float, kind: str = "schrodinger",
                wilson: float = 0.0) -> HermitianOperator:
    if kind == "schrodinger":
        return schrodinger_hamiltonian(grid, p, t, q, m)
    return dirac_hamiltonian_1p1(grid, p, t, q, m, wilson)


def hamiltonian_with_scalar(grid: Grid, p: Potentials, scalar: Optional[np.ndarray], t: float, q: float,
                            m: float, kind: str = "schrodinger", wilson: float = 0.0,
                            label: str = "") -> HermitianOperator:
    """Hamiltonian with A taken from ``p`` and the scalar potential replaced by ``scalar``."""
    _check_grid(grid, p)
    return _assemble(grid, p.link_integrals(t), scalar, q, m, kind, wilson, label)


def free_hamiltonian(grid: Grid, m: float, kind: str = "schrodinger", wilson: float = 0.0) -> HermitianOperator:
    links = tuple(np.zeros(grid.shape) for _ in range(grid.dim))
    return _assemble(grid, links, None, 0.0, m, kind, wilson, label="free")


def yang_operator(grid: Grid, p: Potentials, t: float, q: float, m: float, kind: str = "schrodinger",
                  wilson: float = 0.0) -> HermitianOperator:
    """``H - q A0``: assembled without the scalar-potential term, so no cancellation roundoff."""
    _check_grid(grid, p)
    return _assemble(grid, p.link_integrals(t), None, q, m, kind, wilson, label="Y")


def chen_energy_operator(grid: Grid, p: Potentials, t: float, q: float, m: float, kind: str = "schrodinger",
                         wilson: float = 0.0, use_rho: bool = True, dt: Optional[float] = None) -> HermitianOperator:
    """``H(A0_phys, A)``: the full vector potential with the physical scalar potential."""
    from .helmholtz import chen_potentials

    a0_phys, _ = chen_potentials(p, t, use_rho=use_rho, dt=dt)
    return _assemble(grid, p.link_integrals(t), a0_phys.values, q, m, kind, wilson, label="H_chen")


def phase_operator(grid: Grid, chi_values: np.ndarray, q: float, spinor: bool = False) -> sp.csr_matrix:
    """``U = diag(exp(i q chi))``, block-diagonal on spinors."""
    u = sp.diags(np.exp(1j * q * np.asarray(chi_values).reshape(-1)))
    return sp.kron(EYE_2, u, format="csr") if spinor else sp.csr_matrix(u)


# --- triplet export --------------------------------------------------------------

TRIPLET_HEADER = "# gaugelab-operator v1"


def write_triplets(op: HermitianOperator, path) -> None:
    """Write nonzeros as ``row col re im`` lines (0-based) after a two-line header."""
    coo = op.matrix.tocoo()
    order = np.lexsort((coo.col, coo.row))
    with open(path, "w") as fh:
        fh.write(f"{TRIPLET_HEADER}\n")
        fh.write(f"n {op.n} nnz {coo.nnz} label {op.label or '-'}\n")
        for k in order:
            v = coo.data[k]
            fh.write(f"{coo.row[k]} {coo.col[k]} {float(v.real)!r} {float(v.imag)!r}\n")


def read_triplets(path) -> HermitianOperator:
    with open(path) as fh:
        header = fh.readline().strip()
        if header != TRIPLET_HEADER:
            raise ValueError(f"not a gaugelab operator file: {header!r}")
        meta = fh.readline().split()
        n = int(meta[1])
        label = meta[5] if len(meta) > 5 and meta[5] != "-" else ""
        data = np.loadtxt(fh, ndmin=2) if n else np.zeros((0, 4))
    if data.size == 0:
        matrix = sp.csr_matrix((n, n), dtype=complex)
    else:
        matrix = sp.csr_matrix((data[:, 2] + 1j * data[:, 3], (data[:, 0].astype(int), data[:, 1].astype(int))),
                               shape=(n, n))
    return HermitianOperator.build(matrix, label)
