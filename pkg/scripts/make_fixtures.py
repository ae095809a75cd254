"""Regenerate the committed oracle fixtures in src/gaugelab/data/fixtures.json.

The matrices are built here directly with numpy, independently of the
package's operator builders, and diagonalised densely with LAPACK. Run only
when a fixture definition changes:

    python scripts/make_fixtures.py
"""

import json
import pathlib

import numpy as np

OUT = pathlib.Path(__file__).resolve().parents[1] / "src" / "gaugelab" / "data" / "fixtures.json"


def dirichlet_axis(n, length):
    h = length / (n + 1)
    return -0.5 * length + h * np.arange(1, n + 1), h


def chain_hamiltonian(n, length, potential, m=1.0):
    x, h = dirichlet_axis(n, length)
    t = 1.0 / (2 * m * h * h)
    return np.diag(2 * t + potential(x)) - t * np.eye(n, k=1) - t * np.eye(n, k=-1)


def lowest(matrix, k):
    return np.linalg.eigvalsh(matrix)[:k].tolist()


def soft_coulomb_fixture(kappa=1.0, soft=0.5, length=40.0, sizes=(512, 1024, 2048), k=3):
    values = {}
    for n in sizes:
        h = chain_hamiltonian(n, length, lambda x: -kappa / np.sqrt(x * x + soft * soft))
        values[str(n)] = lowest(h, k)
    return {"kappa": kappa, "soft": soft, "length": length, "q": 1.0, "m": 1.0, "boundary": "dirichlet",
            "k": k, "eigenvalues": values}


def harmonic_fixture(length=20.0, sizes=(512, 1024), k=3):
    values = {str(n): lowest(chain_hamiltonian(n, length, lambda x: 0.5 * x * x), k) for n in sizes}
    return {"stiffness": 1.0, "length": length, "q": 1.0, "m": 1.0, "boundary": "dirichlet", "k": k,
            "eigenvalues": values}


def symmetric_gauge_fixture(n=40, length=12.0, b=2.0, k=6):
    """Uniform field in the symmetric gauge on a Dirichlet box, link phases exp(-i q int A.dl)."""
    x, h = dirichlet_axis(n, length)
    X, Y = np.meshgrid(x, x, indexing="ij")
    size = n * n
    idx = np.arange(size).reshape(n, n)
    H = np.zeros((size, size), dtype=complex)
    t = 1.0 / (2 * h * h)
    H[np.diag_indices(size)] = 4 * t
    # x links: A_x = -B y / 2 is constant along the link; y links: A_y = B x / 2.
    for i in range(n - 1):
        for j in range(n):
            theta = -0.5 * b * Y[i, j] * h
            a, c = idx[i, j], idx[i + 1, j]
            H[a, c] = -t * np.exp(-1j * theta)
            H[c, a] = np.conj(H[a, c])
    for i in range(n):
        for j in range(n - 1):
            theta = 0.5 * b * X[i, j] * h
            a, c = idx[i, j], idx[i, j + 1]
            H[a, c] = -t * np.exp(-1j * theta)
            H[c, a] = np.conj(H[a, c])
    return {"n": n, "length": length, "b": b, "q": 1.0, "m": 1.0, "boundary": "dirichlet", "k": k,
            "eigenvalues": lowest(H, k)}


def main():
    fixtures = {
        "generated_by": "scripts/make_fixtures.py",
        "method": "numpy.linalg.eigvalsh on independently assembled dense matrices",
        "soft_coulomb": soft_coulomb_fixture(),
        "harmonic": harmonic_fixture(),
        "symmetric_gauge": symmetric_gauge_fixture(),
    }
    OUT.write_text(json.dumps(fixtures, indent=2, sort_keys=True) + "\n")
    print(f"wrote {OUT}")


if __name__ == "__main__":
    main()
