"""File formats: QF4 binary fields, CSV tables, PGM heatmaps and JSON reports.

A QF4 file starts with one ASCII header line::

    QF4 Ns Nt s0 t0 ds dt

followed by ``Ns * Nt * 4`` little-endian float64 values in row-major order
(``s`` slowest, quaternion component fastest).  Spectra use the tag ``QS4``
with the header fields of the originating spatial grid and values in FFT
order.
"""

import csv
import json

import numpy as np

from .fourier import QSpectrum2D
from .quaternion import QField2D

__all__ = [
    "write_qf4",
    "read_qf4",
    "write_field_csv",
    "write_spectrum_csv",
    "read_field_csv",
    "write_pgm",
    "write_matrix_csv",
    "write_table_csv",
    "read_table_csv",
    "write_json",
]


def _header(tag, shape, origin, step):
    nums = [repr(float(x)) for x in (*origin, *step)]
    return f"{tag} {shape[0]} {shape[1]} {' '.join(nums)}\n".encode("ascii")


def write_qf4(path, obj):
    """Write a :class:`QField2D` (tag ``QF4``) or :class:`QSpectrum2D` (tag ``QS4``)."""
    if isinstance(obj, QSpectrum2D):
        head = _header("QS4", obj.shape, obj.origin, obj.spatial_step)
    else:
        head = _header("QF4", obj.shape, obj.origin, obj.step)
    with open(path, "wb") as fh:
        fh.write(head)
        fh.write(np.ascontiguousarray(obj.values, dtype="<f8").tobytes())


def read_qf4(path):
    """Read a file written by :func:`write_qf4`."""
    with open(path, "rb") as fh:
        head = fh.readline().decode("ascii").split()
        payload = fh.read()
    if len(head) != 7 or head[0] not in ("QF4", "QS4"):
        raise ValueError(f"{path}: not a QF4/QS4 file")
    ns, nt = int(head[1]), int(head[2])
    s0, t0, ds, dt = (float(x) for x in head[3:])
    values = np.frombuffer(payload, dtype="<f8")
    if values.size != ns * nt * 4:
        raise ValueError(f"{path}: expected {ns * nt * 4} values, found {values.size}")
    values = values.reshape(ns, nt, 4).astype(float)
    if head[0] == "QS4":
        return QSpectrum2D(values, (s0, t0), (ds, dt))
    return QField2D(values, (s0, t0), (ds, dt))


def _write_rows(path, header, coords, values):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(header)
        X, Y = coords
        for x, y, q in zip(X.ravel(), Y.ravel(), values.reshape(-1, 4)):
            w.writerow([repr(float(x)), repr(float(y))] + [repr(float(v)) for v in q])


def write_field_csv(path, F):
    """CSV with columns ``s,t,a,b,c,d``."""
    _write_rows(path, ["s", "t", "a", "b", "c", "d"], F.meshgrid(), F.values)


def write_spectrum_csv(path, S):
    """CSV with columns ``w1,w2,a,b,c,d`` in FFT order."""
    _write_rows(path, ["w1", "w2", "a", "b", "c", "d"], S.meshgrid(), S.values)


def read_field_csv(path, shape):
    """Read the value columns of a field CSV back into an ``(Ns, Nt, 4)`` array."""
    data = np.loadtxt(path, delimiter=",", skiprows=1)
    return data[:, 2:].reshape(shape[0], shape[1], 4)


def write_pgm(path, image):
    """8-bit binary greymap of ``image`` scaled linearly from its min to its max."""
    img = np.asarray(image, dtype=float)
    lo, hi = float(img.min()), float(img.max())
    scaled = np.zeros(img.shape) if hi == lo else (img - lo) / (hi - lo)
    data = np.round(scaled * 255).astype(np.uint8)
    with open(path, "wb") as fh:
        fh.write(f"P5\n{img.shape[1]} {img.shape[0]}\n255\n".encode("ascii"))
        fh.write(data.tobytes())


def write_matrix_csv(path, matrix):
    np.savetxt(path, np.asarray(matrix, dtype=float), delimiter=",", fmt="%.17g")


def write_table_csv(path, rows, columns):
    """Write a list of dicts; floats keep 17 significant digits."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(columns)
        for row in rows:
            w.writerow([repr(row[c]) if isinstance(row[c], float) else row[c] for c in columns])


def read_table_csv(path):
    """Read a table written by :func:`write_table_csv`; numeric cells become floats."""
    out = []
    with open(path, newline="") as fh:
        for row in csv.DictReader(fh):
            parsed = {}
            for k, v in row.items():
                try:
                    parsed[k] = float(v)
                except ValueError:
                    parsed[k] = v
            out.append(parsed)
    return out


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    if isinstance(obj, np.bool_):
        return bool(obj)
    if isinstance(obj, np.integer):
        return int(obj)
    if isinstance(obj, np.floating):
        return float(obj)
    return obj


def write_json(path, obj):
    with open(path, "w") as fh:
        json.dump(_jsonable(obj), fh, indent=2)
