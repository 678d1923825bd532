"""Plain-text artifacts: moment CSVs, reconstructions, histograms, reports.

All writers emit ``\\n`` line endings and locale-independent decimal text
with 17 significant digits, so binary64 values round-trip exactly. Files
are written to a temporary sibling and renamed into place.
"""

import csv
import io
import os
import tempfile

import numpy as np

from .basis import BasisKind, MomentVector
from .errors import DomainError

SWEEP_HEADER = (
    "function", "M", "n_g", "delta1", "delta2", "entropy", "d_kl", "d_v", "kl_bound", "gap_width",
)


class ArtifactError(DomainError):
    """A file could not be read, parsed or written."""


def fmt(value):
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    return "%.17g" % float(value)


def write_atomic(path, text):
    directory = os.path.dirname(os.path.abspath(path))
    try:
        fd, tmp = tempfile.mkstemp(prefix=".tmp-", dir=directory)
    except OSError as exc:
        raise ArtifactError(f"cannot write to directory {directory}: {exc.strerror}") from None
    try:
        with os.fdopen(fd, "w", newline="\n", encoding="ascii") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except OSError as exc:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise ArtifactError(f"cannot write {path}: {exc.strerror}") from None


def _table(header, rows):
    buf = io.StringIO()
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(fmt(v) if not isinstance(v, str) else v for v in row) + "\n")
    return buf.getvalue()


def _read_rows(path, expected_header):
    try:
        with open(path, newline="", encoding="ascii") as fh:
            rows = list(csv.reader(fh))
    except OSError as exc:
        raise ArtifactError(f"cannot read {path}: {exc.strerror}") from None
    except UnicodeDecodeError:
        raise ArtifactError(f"malformed CSV {path}: not ASCII text") from None
    if not rows:
        raise ArtifactError(f"malformed CSV {path}: empty file")
    header = [h.strip() for h in rows[0]]
    if expected_header is not None and header not in expected_header:
        raise ArtifactError(
            f"malformed CSV {path}: header {','.join(header)!r}, "
            f"expected {' or '.join(','.join(h) for h in expected_header)!r}"
        )
    body = [r for r in rows[1:] if r]
    return header, body


def _floats(path, lineno, cells):
    try:
        return [float(c) for c in cells]
    except ValueError:
        raise ArtifactError(f"malformed CSV {path}: non-numeric value on line {lineno}") from None


# --- moments ---------------------------------------------------------------

def moments_text(mu):
    return _table(("i", "mu"), ((i, float(m)) for i, m in enumerate(mu.values)))


def write_moments(path, mu):
    write_atomic(path, moments_text(mu))


def read_moments(path, kind=BasisKind.CHEBYSHEV):
    """Parse an ``i,mu`` CSV; indices must run 0, 1, ..., M in order."""
    _, body = _read_rows(path, [["i", "mu"]])
    if not body:
        raise ArtifactError(f"malformed CSV {path}: no moment rows")
    values = []
    for k, row in enumerate(body):
        if len(row) != 2:
            raise ArtifactError(f"malformed CSV {path}: line {k + 2} has {len(row)} fields")
        try:
            i = int(row[0])
        except ValueError:
            raise ArtifactError(f"malformed CSV {path}: bad index on line {k + 2}") from None
        if i != k:
            raise ArtifactError(f"malformed CSV {path}: expected index {k}, found {i}")
        (mu,) = _floats(path, k + 2, row[1:])
        values.append(mu)
    return MomentVector(np.array(values), BasisKind.parse(kind))


# --- reconstructions -------------------------------------------------------

def reconstruction_text(nodes, rho, f_exact=None):
    if f_exact is None:
        return _table(("x", "rho"), zip(nodes, rho))
    return _table(("x", "f_exact", "rho"), zip(nodes, f_exact, rho))


def write_reconstruction(path, nodes, rho, f_exact=None):
    write_atomic(path, reconstruction_text(nodes, rho, f_exact))


def read_reconstruction(path):
    """Returns (x, rho, f_exact or None)."""
    header, body = _read_rows(path, [["x", "rho"], ["x", "f_exact", "rho"]])
    data = np.array([_floats(path, k + 2, r) for k, r in enumerate(body)])
    if data.ndim != 2 or data.shape[1] != len(header):
        raise ArtifactError(f"malformed CSV {path}: ragged rows")
    if len(header) == 2:
        return data[:, 0], data[:, 1], None
    return data[:, 0], data[:, 2], data[:, 1]


# --- histograms ------------------------------------------------------------

def write_histogram(path, hist):
    write_atomic(path, _table(("x_center", "density"), zip(hist.centers, hist.densities)))


def read_histogram(path):
    from .logistic import HistogramDensity

    _, body = _read_rows(path, [["x_center", "density"]])
    data = np.array([_floats(path, k + 2, r) for k, r in enumerate(body)])
    if data.ndim != 2 or data.shape[0] < 2:
        raise ArtifactError(f"malformed CSV {path}: need at least two bins")
    centers = data[:, 0]
    width = (centers[-1] - centers[0]) / (centers.size - 1)
    edges = np.concatenate([[centers[0] - width / 2], centers + width / 2])
    return HistogramDensity(bin_edges=edges, densities=data[:, 1])


# --- reports ---------------------------------------------------------------

def report_text(items):
    return "".join(f"{k}={fmt(v)}\n" for k, v in items)


def write_report(path, items):
    write_atomic(path, report_text(items))


def read_report(path):
    try:
        with open(path, encoding="ascii") as fh:
            lines = fh.read().splitlines()
    except OSError as exc:
        raise ArtifactError(f"cannot read {path}: {exc.strerror}") from None
    out = {}
    for line in lines:
        if not line.strip():
            continue
        key, sep, value = line.partition("=")
        if not sep:
            raise ArtifactError(f"malformed report {path}: {line!r}")
        out[key.strip()] = value.strip()
    return out


def sweep_text(rows):
    return _table(SWEEP_HEADER, rows)
