import numpy as np
import pytest

from gaugelab.fieldio import dumps, loads, read_field, write_field
from gaugelab.grid import Grid, ScalarField, SpinorField, VectorField


def _same(a, b):
    assert type(a) is type(b)
    assert a.grid == b.grid
    np.testing.assert_array_equal(a.values if not isinstance(a, VectorField) else
                                  np.concatenate([c.values for c in a.components]),
                                  b.values if not isinstance(b, VectorField) else
                                  np.concatenate([c.values for c in b.components]))


class TestRoundTrip:
    def test_complex_scalar(self, tmp_path, rng):
        g = Grid.box((8, 12), 3.0, "dirichlet")
        f = ScalarField(g, rng.standard_normal(g.size) + 1j * rng.standard_normal(g.size))
        write_field(f, tmp_path / "f.txt")
        _same(f, read_field(tmp_path / "f.txt"))

    def test_real_vector(self, rng):
        g = Grid.box((10, 10), 2.0)
        v = VectorField.from_arrays(g, [rng.standard_normal(g.shape), rng.standard_normal(g.shape)])
        back = loads(dumps(v))
        _same(v, back)
        assert "dtype real" in dumps(v)

    def test_spinor(self, rng):
        g = Grid.box(16, 4.0)
        s = SpinorField.from_values(g, rng.standard_normal(32) + 0.5j)
        _same(s, loads(dumps(s)))

    def test_rejects_foreign_file(self):
        with pytest.raises(ValueError):
            loads("hello\n")

    def test_rejects_truncated_data(self):
        g = Grid.box(8, 1.0)
        text = dumps(ScalarField(g, np.arange(8.0), real=True))
        with pytest.raises(ValueError):
            loads("\n".join(text.splitlines()[:-2]))
