"""File formats: binary matrix container, small-matrix CSV, spectra, point sets.

The binary container is::

    magic   8 bytes  b"SHLNMAT1"
    ndim    uint32   (1 or 2)
    dims    ndim x uint64
    data    float64, row-major

all little-endian.
"""

from __future__ import annotations

import struct

import numpy as np

from .pointsets import HiddenParams

__all__ = [
    "MAGIC",
    "write_matrix",
    "read_matrix",
    "write_matrix_csv",
    "write_spectrum_csv",
    "read_spectrum_csv",
    "pointset_csv",
    "read_pointset_csv",
]

MAGIC = b"SHLNMAT1"


def write_matrix(path, array) -> None:
    a = np.ascontiguousarray(array, dtype="<f8")
    if a.ndim not in (1, 2):
        raise ValueError("only vectors and matrices can be written")
    with open(path, "wb") as fh:
        fh.write(MAGIC)
        fh.write(struct.pack("<I", a.ndim))
        fh.write(struct.pack(f"<{a.ndim}Q", *a.shape))
        fh.write(a.tobytes(order="C"))


def read_matrix(path) -> np.ndarray:
    with open(path, "rb") as fh:
        if fh.read(len(MAGIC)) != MAGIC:
            raise ValueError(f"{path}: not a matrix container")
        (ndim,) = struct.unpack("<I", fh.read(4))
        if ndim not in (1, 2):
            raise ValueError(f"{path}: unsupported ndim {ndim}")
        shape = struct.unpack(f"<{ndim}Q", fh.read(8 * ndim))
        data = fh.read()
    count = int(np.prod(shape))
    if len(data) != 8 * count:
        raise ValueError(f"{path}: expected {count} values, found {len(data) // 8}")
    return np.frombuffer(data, dtype="<f8").reshape(shape).copy()


def write_matrix_csv(path, array, max_size: int = 512) -> None:
    a = np.atleast_2d(np.asarray(array, dtype=np.float64))
    if max(a.shape) > max_size:
        raise ValueError(f"CSV export is limited to {max_size} rows/columns; use write_matrix")
    np.savetxt(path, a, delimiter=",", fmt="%.17g")


def write_spectrum_csv(path_or_file, sigma, comment: str = "singular values, descending") -> None:
    lines = [f"# {comment}"]
    lines += [f"{i},{s:.17g}" for i, s in enumerate(np.asarray(sigma, dtype=np.float64))]
    text = "\n".join(lines) + "\n"
    if hasattr(path_or_file, "write"):
        path_or_file.write(text)
    else:
        with open(path_or_file, "w", encoding="utf-8") as fh:
            fh.write(text)


def read_spectrum_csv(path) -> np.ndarray:
    data = np.loadtxt(path, delimiter=",", comments="#", ndmin=2)
    return data[:, 1]


def pointset_csv(params: HiddenParams) -> str:
    """One row per neuron: weight coordinates then bias."""
    cols = [f"w{a + 1}" for a in range(params.d)] + ["b"]
    head = f"# provenance={params.provenance.value} radius={params.radius} n={params.n} d={params.d}"
    rows = [",".join(f"{v:.17g}" for v in row) for row in params.stacked]
    return "\n".join([head, ",".join(cols)] + rows) + "\n"


def read_pointset_csv(path) -> HiddenParams:
    with open(path, encoding="utf-8") as fh:
        head = fh.readline()
    meta = dict(tok.split("=", 1) for tok in head.lstrip("# ").split())
    data = np.loadtxt(path, delimiter=",", comments="#", skiprows=2, ndmin=2)
    radius = None if meta.get("radius") == "None" else float(meta["radius"])
    return HiddenParams.from_stacked(data, meta["provenance"], radius)
