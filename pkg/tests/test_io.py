import numpy as np
import pytest

from shallowlin.io import (
    MAGIC,
    pointset_csv,
    read_matrix,
    read_pointset_csv,
    read_spectrum_csv,
    write_matrix,
    write_matrix_csv,
    write_spectrum_csv,
)
from shallowlin.pointsets import fibonacci_sphere


@pytest.mark.parametrize("a", [np.arange(12.0).reshape(3, 4), np.array([1.5, -2.0, np.pi])])
def test_matrix_roundtrip(tmp_path, a):
    p = tmp_path / "m.bin"
    write_matrix(p, a)
    assert p.read_bytes()[:8] == MAGIC
    assert np.array_equal(read_matrix(p), a)


def test_matrix_corrupt(tmp_path):
    p = tmp_path / "m.bin"
    write_matrix(p, np.eye(3))
    p.write_bytes(p.read_bytes()[:-8])
    with pytest.raises(ValueError):
        read_matrix(p)
    p.write_bytes(b"garbage!" + bytes(20))
    with pytest.raises(ValueError):
        read_matrix(p)


def test_matrix_csv(tmp_path):
    a = np.random.default_rng(0).standard_normal((4, 3))
    write_matrix_csv(tmp_path / "m.csv", a)
    assert np.array_equal(np.loadtxt(tmp_path / "m.csv", delimiter=","), a)
    with pytest.raises(ValueError):
        write_matrix_csv(tmp_path / "big.csv", np.zeros((600, 2)))


def test_spectrum_roundtrip(tmp_path):
    s = np.array([3.0, 1.0, 1e-17])
    write_spectrum_csv(tmp_path / "s.csv", s)
    assert np.array_equal(read_spectrum_csv(tmp_path / "s.csv"), s)


def test_pointset_roundtrip(tmp_path):
    hp = fibonacci_sphere(20)
    (tmp_path / "p.csv").write_text(pointset_csv(hp))
    back = read_pointset_csv(tmp_path / "p.csv")
    assert np.array_equal(back.stacked, hp.stacked) and back.provenance == hp.provenance
