"""Eigenvalue computation and spectrum comparison."""

from __future__ import annotations

import csv
import enum
from dataclasses import dataclass, field
from typing import Optional

import numpy as np
import scipy.linalg
import scipy.sparse as sp
import scipy.sparse.linalg as spla

from .errors import InsufficientData, NoConvergence, SizeExceeded
from .operators import HermitianOperator

DENSE_CAP = 4096
RESIDUAL_TOL = 1e-9
DEGENERACY_TOL = 1e-10
ARPACK_TOL = 1e-12


class Method(str, enum.Enum):
    DENSE = "dense"
    ITERATIVE_LOW_K = "iterative_low_k"


@dataclass(frozen=True, eq=False)
class Spectrum:
    eigenvalues: np.ndarray
    residuals: np.ndarray
    method: Method
    eigenvectors: Optional[np.ndarray] = None

    def __len__(self):
        return len(self.eigenvalues)

    def lowest(self, k: int) -> "Spectrum":
        vecs = None if self.eigenvectors is None else self.eigenvectors[:, :k]
        return Spectrum(self.eigenvalues[:k], self.residuals[:k], self.method, vecs)


def _residuals(matrix, values, vectors) -> np.ndarray:
    r = matrix @ vectors - vectors * values[np.newaxis, :]
    return np.linalg.norm(r, axis=0) / np.linalg.norm(vectors, axis=0)


def _certify(op: HermitianOperator, residuals: np.ndarray, tol: float, partial):
    bound = tol * max(op.norm_inf(), 1.0)
    worst = float(np.max(residuals)) if residuals.size else 0.0
    if worst > bound:
        raise NoConvergence(f"eigenpair residual {worst:.3e} exceeds {bound:.3e}", partial=partial)


def dense_spectrum(op: HermitianOperator, cap: int = DENSE_CAP, vectors: bool = True,
                   tol: float = RESIDUAL_TOL) -> Spectrum:
    """Full Hermitian eigendecomposition (LAPACK) with per-pair residuals."""
    if op.n > cap:
        raise SizeExceeded(f"operator size {op.n} exceeds the dense cap {cap}")
    values, vecs = scipy.linalg.eigh(op.toarray())
    residuals = _residuals(op.matrix, values, vecs)
    spectrum = Spectrum(values, residuals, Method.DENSE, vecs if vectors else None)
    _certify(op, residuals, tol, spectrum)
    return spectrum


def gershgorin_lower_bound(op: HermitianOperator) -> float:
    m = op.matrix
    diag = m.diagonal().real
    off = np.asarray(abs(m).sum(axis=1)).ravel() - np.abs(diag)
    return float(np.min(diag - off))


def lowest_k(op: HermitianOperator, k: int, tol: float = RESIDUAL_TOL, sigma: Optional[float] = None,
             extra: Optional[int] = None, vectors: bool = True) -> Spectrum:
    """The ``k`` smallest eigenpairs by shift-invert Lanczos (ARPACK) with a sparse LU.

    The shift defaults to just below the Gershgorin lower bound. A few extra
    pairs are requested so degenerate multiplets at the cut are resolved;
    eigenvalues are reported as Rayleigh quotients of the returned vectors.
    The Krylov space is widened once if ARPACK stalls (tight clusters need
    room); operators within the dense cap then fall back to LAPACK, larger
    ones raise NoConvergence carrying whatever Ritz pairs were found.
    """
    n = op.n
    if not 0 < k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    extra = max(4, k // 2) if extra is None else extra
    want = min(k + extra, n - 2)
    if want < k or n < 20:
        return dense_spectrum(op, vectors=vectors, tol=tol).lowest(k)
    if sigma is None:
        bound = gershgorin_lower_bound(op)
        sigma = bound - 1e-3 * max(1.0, abs(bound))
    v0 = np.ones(n, dtype=complex) / np.sqrt(n)
    matrix = sp.csc_matrix(op.matrix)
    vecs = None
    for ncv in (max(2 * want + 1, 60), max(4 * want, 120)):
        try:
            _, vecs = spla.eigsh(matrix, k=want, sigma=sigma, which="LM", v0=v0, ncv=min(ncv, n),
                                 tol=ARPACK_TOL, maxiter=50 * want)
            break
        except spla.ArpackNoConvergence as exc:
            failure = exc
    if vecs is None:
        if n <= DENSE_CAP:
            return dense_spectrum(op, vectors=vectors, tol=tol).lowest(k)
        partial = None
        if failure.eigenvectors is not None and failure.eigenvectors.size:
            v = failure.eigenvectors
            ritz = np.real(np.einsum("ij,ij->j", v.conj(), op.matrix @ v))
            order = np.argsort(ritz)
            partial = Spectrum(ritz[order], _residuals(op.matrix, ritz[order], v[:, order]),
                               Method.ITERATIVE_LOW_K, v[:, order])
        raise NoConvergence(f"ARPACK did not converge for k={k}", partial=partial) from failure
    vecs = vecs / np.linalg.norm(vecs, axis=0)
    values = np.real(np.einsum("ij,ij->j", vecs.conj(), op.matrix @ vecs))
    order = np.argsort(values)[:k]
    values, vecs = values[order], vecs[:, order]
    residuals = _residuals(op.matrix, values, vecs)
    spectrum = Spectrum(values, residuals, Method.ITERATIVE_LOW_K, vecs if vectors else None)
    _certify(op, residuals, tol, spectrum)
    return spectrum


@dataclass
class ComparisonReport:
    max_deviation: float
    tolerance: float
    within_tolerance: bool
    deviations: np.ndarray = field(repr=False)


def spectrum_compare(s1: Spectrum, s2: Spectrum, k: int, tol: float = 1e-9) -> ComparisonReport:
    """Compare the ``k`` lowest values of two spectra by sorted position."""
    if len(s1) < k or len(s2) < k:
        raise InsufficientData(f"need {k} eigenvalues, have {len(s1)} and {len(s2)}")
    a = np.sort(np.asarray(s1.eigenvalues))[:k]
    b = np.sort(np.asarray(s2.eigenvalues))[:k]
    dev = np.abs(a - b)
    worst = float(np.max(dev)) if k else 0.0
    return ComparisonReport(worst, tol, worst <= tol, dev)


def clusters(values, tol: float = DEGENERACY_TOL) -> list:
    """Sizes of runs of sorted values whose consecutive gaps are at most ``tol``."""
    values = np.sort(np.asarray(values))
    if values.size == 0:
        return []
    sizes = [1]
    for gap in np.diff(values):
        if gap <= tol:
            sizes[-1] += 1
        else:
            sizes.append(1)
    return sizes


def write_spectrum_csv(spectrum: Spectrum, path) -> None:
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["index", "eigenvalue", "residual"])
        for i, (value, res) in enumerate(zip(spectrum.eigenvalues, spectrum.residuals)):
            writer.writerow([i, repr(float(value)), repr(float(res))])


def read_spectrum_csv(path) -> Spectrum:
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    values = np.array([float(r["eigenvalue"]) for r in rows])
    residuals = np.array([float(r["residual"]) for r in rows])
    return Spectrum(values, residuals, Method.DENSE)
