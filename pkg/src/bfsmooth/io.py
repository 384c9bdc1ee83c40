"""CSV ingestion and plain-text model persistence.

Data files are delimited ASCII with d+1 numeric columns per row (the
last column is the dependent value).  Model files are a versioned text
format with every float written to 17 significant digits, which is
enough for an exact float64 round trip.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import ParseError
from .interpolant import FittedModel
from .kernels import KernelSpec
from .polyspace import PolyFrame

MODEL_FORMAT_VERSION = 1


@dataclass(frozen=True)
class DataTable:
    """Numeric scattered-data table: N points in R^d plus N values."""

    d: int
    X: np.ndarray
    y: np.ndarray
    source: str


def _split_line(line: str, delimiter: str | None) -> list[str]:
    if delimiter is None or delimiter == "whitespace":
        return line.split()
    return [f.strip() for f in line.split(delimiter)]


def _detect_delimiter(line: str) -> str | None:
    if "," in line:
        return ","
    if "\t" in line:
        return "\t"
    return None  # whitespace


def read_csv(path, delimiter: str | None = None, columns=None) -> DataTable:
    """Read a delimited numeric file into a DataTable.

    The delimiter (comma, tab or whitespace) is auto-detected unless
    forced.  A single non-numeric leading row is treated as a header.
    `columns` optionally selects field indices (0-based); the last
    selected column becomes y.
    """
    path = Path(path)
    lines = [
        (i + 1, stripped)
        for i, raw in enumerate(path.read_text().splitlines())
        if (stripped := raw.strip())
    ]
    if not lines:
        raise ParseError(f"{path}: no data rows")
    if delimiter is None:
        delimiter = _detect_delimiter(lines[0][1])
    rows = []
    arity = None
    for pos, (lineno, text) in enumerate(lines):
        fields = _split_line(text, delimiter)
        if columns is not None:
            try:
                fields = [fields[c] for c in columns]
            except IndexError:
                raise ParseError(
                    f"{path}: requested column out of range", line=lineno
                ) from None
        try:
            row = [float(f) for f in fields]
        except ValueError:
            if pos == 0:  # header row
                continue
            raise ParseError(f"{path}: non-numeric field", line=lineno) from None
        if not all(np.isfinite(row)):
            raise ParseError(f"{path}: non-finite value", line=lineno)
        if arity is None:
            arity = len(row)
            if arity < 2:
                raise ParseError(f"{path}: need at least 2 columns", line=lineno)
        elif len(row) != arity:
            raise ParseError(
                f"{path}: expected {arity} fields, got {len(row)}", line=lineno
            )
        rows.append(row)
    if not rows:
        raise ParseError(f"{path}: no numeric rows")
    data = np.array(rows)
    return DataTable(d=arity - 1, X=data[:, :-1], y=data[:, -1], source=str(path))


def read_points(path, d: int) -> np.ndarray:
    """Read a delimited file of bare coordinates (d columns per row)."""
    path = Path(path)
    rows = []
    for lineno, raw in enumerate(path.read_text().splitlines(), start=1):
        text = raw.strip()
        if not text:
            continue
        fields = _split_line(text, _detect_delimiter(text))
        try:
            row = [float(f) for f in fields]
        except ValueError:
            if not rows and lineno == 1:  # header row
                continue
            raise ParseError(f"{path}: non-numeric field", line=lineno) from None
        if len(row) != d:
            raise ParseError(
                f"{path}: expected {d} coordinates, got {len(row)}", line=lineno
            )
        rows.append(row)
    if not rows:
        raise ParseError(f"{path}: no numeric rows")
    return np.array(rows)


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def save_model(model: FittedModel, path) -> None:
    """Write a model to the versioned plain-text format."""
    spec = model.spec
    lines = [
        f"version {MODEL_FORMAT_VERSION}",
        f"kind {model.kind}",
        f"family {spec.family}",
        f"s {'-' if spec.s is None else _fmt(spec.s)}",
        f"a {'-' if spec.a is None else _fmt(spec.a)}",
        f"theta {spec.theta}",
        f"d {spec.d}",
        f"rho {_fmt(model.rho)}",
        f"centers {len(model.centers)}",
    ]
    lines.extend(" ".join(_fmt(c) for c in point) for point in model.centers)
    lines.append(f"v {len(model.v)}")
    lines.extend(_fmt(c) for c in model.v)
    lines.append(f"beta {len(model.beta)}")
    lines.extend(_fmt(c) for c in model.beta)
    Path(path).write_text("\n".join(lines) + "\n")


class _ModelReader:
    def __init__(self, path):
        self.path = Path(path)
        self.lines = self.path.read_text().splitlines()
        self.pos = 0

    def next(self) -> str:
        if self.pos >= len(self.lines):
            raise ParseError(f"{self.path}: truncated model file")
        line = self.lines[self.pos]
        self.pos += 1
        return line

    def keyed(self, key: str) -> str:
        line = self.next()
        head, _, value = line.partition(" ")
        if head != key:
            raise ParseError(
                f"{self.path}: expected field {key!r}, found {head!r}", line=self.pos
            )
        return value.strip()


def load_model(path) -> FittedModel:
    """Read a model written by save_model."""
    r = _ModelReader(path)
    version = r.keyed("version")
    if version != str(MODEL_FORMAT_VERSION):
        raise ParseError(f"{path}: unsupported model version {version!r}")
    kind = r.keyed("kind")
    family = r.keyed("family")

    def opt_float(text: str) -> float | None:
        return None if text == "-" else float(text)

    s = opt_float(r.keyed("s"))
    a = opt_float(r.keyed("a"))
    theta = int(r.keyed("theta"))
    d = int(r.keyed("d"))
    rho = float(r.keyed("rho"))
    n_centers = int(r.keyed("centers"))
    centers = np.array(
        [[float(f) for f in r.next().split()] for _ in range(n_centers)]
    ).reshape(n_centers, d)
    n_v = int(r.keyed("v"))
    v = np.array([float(r.next()) for _ in range(n_v)])
    n_beta = int(r.keyed("beta"))
    beta = np.array([float(r.next()) for _ in range(n_beta)])
    spec = KernelSpec(family=family, theta=theta, d=d, s=s, a=a)
    frame = PolyFrame(d=d, theta=theta)
    return FittedModel(
        spec=spec, frame=frame, centers=centers, v=v, beta=beta, kind=kind, rho=rho
    )
