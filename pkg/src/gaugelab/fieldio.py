"""Plain-text field files.

Layout (one header entry per line, then one value per line)::

    # gaugelab-field v1
    kind scalar            # scalar | vector | spinor
    dim 2
    points 64 64
    spacing 0.15625 0.15625
    origin -5.0 -5.0
    boundary periodic      # periodic | dirichlet
    dtype complex          # real | complex
    components 1           # 1 for scalar, dim for vector, 2 for spinor
    data
    <re> [<im>]            # component-major, row-major (x then y) within a component

Floats are written with ``repr`` so a round trip is exact.
"""

from __future__ import annotations

import io

import numpy as np

from .grid import Grid, ScalarField, SpinorField, VectorField

MAGIC = "# gaugelab-field v1"


def dumps(field) -> str:
    if isinstance(field, SpinorField):
        kind, comps = "spinor", [field.upper, field.lower]
    elif isinstance(field, VectorField):
        kind, comps = "vector", list(field.components)
    elif isinstance(field, ScalarField):
        kind, comps = "scalar", [field]
    else:
        raise TypeError(f"cannot serialise {type(field).__name__}")
    grid = field.grid
    real = all(getattr(c, "real", False) for c in comps)
    out = io.StringIO()
    out.write(f"{MAGIC}\n")
    out.write(f"kind {kind}\n")
    out.write(f"dim {grid.dim}\n")
    out.write("points " + " ".join(str(n) for n in grid.points) + "\n")
    out.write("spacing " + " ".join(repr(h) for h in grid.spacing) + "\n")
    out.write("origin " + " ".join(repr(o) for o in grid.origin) + "\n")
    out.write(f"boundary {grid.boundary.value}\n")
    out.write(f"dtype {'real' if real else 'complex'}\n")
    out.write(f"components {len(comps)}\n")
    out.write("data\n")
    for comp in comps:
        if real:
            out.writelines(f"{float(v)!r}\n" for v in comp.values)
        else:
            values = np.asarray(comp.values, dtype=complex)
            out.writelines(f"{float(v.real)!r} {float(v.imag)!r}\n" for v in values)
    return out.getvalue()


def loads(text: str):
    lines = text.splitlines()
    if not lines or lines[0].strip() != MAGIC:
        raise ValueError("not a gaugelab field file")
    header = {}
    i = 1
    while lines[i].strip() != "data":
        key, _, value = lines[i].partition(" ")
        header[key] = value.split()
        i += 1
    grid = Grid(
        points=tuple(int(n) for n in header["points"]),
        spacing=tuple(float(h) for h in header["spacing"]),
        boundary=header["boundary"][0],
        origin=tuple(float(o) for o in header["origin"]),
    )
    kind = header["kind"][0]
    real = header["dtype"][0] == "real"
    ncomp = int(header["components"][0])
    if int(header["dim"][0]) != grid.dim:
        raise ValueError("dim does not match points")
    data = np.loadtxt(io.StringIO("\n".join(lines[i + 1:])), ndmin=2)
    values = data[:, 0] if real else data[:, 0] + 1j * data[:, 1]
    if values.size != ncomp * grid.size:
        raise ValueError(f"expected {ncomp * grid.size} values, found {values.size}")
    parts = [ScalarField(grid, v, real=real) for v in values.reshape(ncomp, grid.size)]
    if kind == "scalar":
        return parts[0]
    if kind == "vector":
        return VectorField(grid, tuple(parts))
    if kind == "spinor":
        return SpinorField(grid, parts[0], parts[1])
    raise ValueError(f"unknown field kind {kind!r}")


def write_field(field, path) -> None:
    with open(path, "w") as fh:
        fh.write(dumps(field))


def read_field(path):
    with open(path) as fh:
        return loads(fh.read())
