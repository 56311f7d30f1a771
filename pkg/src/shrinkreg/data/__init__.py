"""Dataset representation, CSV ingestion and column transforms."""

from __future__ import annotations

import csv
import hashlib
import math
from dataclasses import dataclass, field
from enum import Enum
from importlib import resources
from pathlib import Path

import numpy as np

from ..errors import DataError, DegenerateColumnError

__all__ = [
    "Dataset",
    "TransformMode",
    "load_dataset",
    "load_us_credit",
    "bundled_path",
    "transform_columns",
    "US_CREDIT_SHA256",
]

US_CREDIT_SHA256 = "b07668d55adb0033cd12538c77c977f7f92b6bf4786d260c7d03c22b4475c88d"

INTERCEPT = "(Intercept)"


@dataclass(frozen=True, eq=False)
class Dataset:
    """Dependent vector plus a design matrix whose first column is the intercept.

    Arrays are copied and marked read-only on construction.
    """

    y: np.ndarray
    X: np.ndarray
    names: tuple[str, ...]
    dependent: str = "y"
    source: str = field(default="", compare=False)

    def __post_init__(self):
        y = np.array(self.y, dtype=float)
        X = np.array(self.X, dtype=float)
        if y.ndim != 1 or X.ndim != 2:
            raise DataError("y must be a vector and X a matrix")
        n, p = X.shape
        if y.shape[0] != n:
            raise DataError(f"y has {y.shape[0]} rows but X has {n}")
        if p < 2:
            raise DataError("X needs the intercept and at least one regressor")
        if n <= p:
            raise DataError(f"need more observations than columns (n={n}, p={p})")
        if not (np.all(np.isfinite(X)) and np.all(np.isfinite(y))):
            raise DataError("non-finite values in data")
        if not np.all(X[:, 0] == 1.0):
            raise DataError("first column of X must be the intercept column of ones")
        names = tuple(self.names)
        if len(names) != p:
            raise DataError(f"expected {p} column names, got {len(names)}")
        if len(set(names)) != p:
            raise DataError("column names must be unique")
        y.setflags(write=False)
        X.setflags(write=False)
        object.__setattr__(self, "y", y)
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "names", names)

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (
            self.names == other.names
            and self.dependent == other.dependent
            and np.array_equal(self.y, other.y)
            and np.array_equal(self.X, other.X)
        )

    __hash__ = None

    @property
    def n(self) -> int:
        return self.X.shape[0]

    @property
    def p(self) -> int:
        return self.X.shape[1]

    @property
    def regressors(self) -> np.ndarray:
        """The design matrix without the intercept column."""
        return self.X[:, 1:]

    @classmethod
    def from_arrays(cls, y, regressors, names=None, dependent="y", source=""):
        """Build a dataset from raw regressors, prepending the intercept."""
        Z = np.asarray(regressors, dtype=float)
        if Z.ndim == 1:
            Z = Z[:, None]
        if names is None:
            names = [f"X{j + 2}" for j in range(Z.shape[1])]
        X = np.column_stack([np.ones(Z.shape[0]), Z])
        return cls(y=y, X=X, names=(INTERCEPT, *names), dependent=dependent, source=source)

    def with_rows(self, idx) -> "Dataset":
        """Row subset (indices may repeat), used by resampling."""
        return Dataset(self.y[idx], self.X[idx], self.names, self.dependent, self.source)

    def to_dict(self) -> dict:
        return {
            "source": self.source,
            "dependent": self.dependent,
            "n": self.n,
            "p": self.p,
            "names": list(self.names),
            "y": self.y.tolist(),
            "X": self.X.tolist(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Dataset":
        return cls(
            y=np.asarray(d["y"], dtype=float),
            X=np.asarray(d["X"], dtype=float),
            names=tuple(d["names"]),
            dependent=d.get("dependent", "y"),
            source=d.get("source", ""),
        )


class TransformMode(str, Enum):
    CENTER = "center"
    STANDARDIZE = "standardize"
    UNIT_LENGTH = "unit-length"


def transform_columns(X, mode, skip_intercept=True) -> np.ndarray:
    """Column-wise transform of a design matrix.

    Parameters
    ----------
    X : ndarray of shape (n, p)
    mode : TransformMode or str
        ``center`` subtracts the column mean; ``standardize`` centres and then
        divides by ``sd * sqrt(n)`` (population sd) so each column has unit sum
        of squares; ``unit-length`` divides by the column's Euclidean norm.
    skip_intercept : bool
        Leave column 0 untouched.

    Returns
    -------
    ndarray of shape (n, p)
    """
    mode = TransformMode(mode)
    X = np.asarray(X, dtype=float)
    out = X.copy()
    n = X.shape[0]
    start = 1 if skip_intercept else 0
    for j in range(start, X.shape[1]):
        col = X[:, j]
        if mode is TransformMode.CENTER:
            out[:, j] = col - col.mean()
        elif mode is TransformMode.STANDARDIZE:
            centred = col - col.mean()
            sd = math.sqrt(centred @ centred / n)
            if sd == 0.0 or sd <= 1e-14 * max(1.0, abs(col.mean())):
                raise DegenerateColumnError(f"column {j} is constant; cannot standardize")
            out[:, j] = centred / (sd * math.sqrt(n))
        else:
            norm = math.sqrt(col @ col)
            if norm == 0.0:
                raise DegenerateColumnError(f"column {j} is identically zero")
            out[:, j] = col / norm
    return out


def _parse_float(cell, row, col, path):
    try:
        v = float(cell)
    except ValueError:
        raise DataError(f"{path}: non-numeric cell {cell!r} at row {row}, column {col!r}") from None
    if not math.isfinite(v):
        raise DataError(f"{path}: non-finite cell {cell!r} at row {row}, column {col!r}")
    return v


def load_dataset(path, dependent: str) -> Dataset:
    """Read a header-row CSV of numerics into a :class:`Dataset`.

    The intercept is synthesised; every non-dependent column becomes a
    regressor in file order. Constant regressors are rejected.
    """
    path = Path(path)
    if not path.is_file():
        raise DataError(f"no such file: {path}")
    with path.open(newline="", encoding="utf-8-sig") as fh:
        reader = csv.reader(fh)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        rows = [r for r in reader if any(c.strip() for c in r)]
    if dependent not in header:
        raise DataError(f"{path}: dependent column {dependent!r} not in {header}")
    if len(set(header)) != len(header):
        raise DataError(f"{path}: duplicate column labels")
    values = np.empty((len(rows), len(header)))
    for i, r in enumerate(rows, start=2):
        if len(r) != len(header):
            raise DataError(f"{path}: row {i} has {len(r)} cells, expected {len(header)}")
        for j, cell in enumerate(r):
            values[i - 2, j] = _parse_float(cell.strip(), i, header[j], path)

    dep = header.index(dependent)
    reg_idx = [j for j in range(len(header)) if j != dep]
    if not reg_idx:
        raise DataError(f"{path}: no regressor columns")
    n, p = len(rows), len(reg_idx) + 1
    if n <= p:
        raise DataError(f"{path}: need more rows than columns (n={n}, p={p})")
    for j in reg_idx:
        col = values[:, j]
        if np.all(col == col[0]):
            raise DegenerateColumnError(f"{path}: regressor {header[j]!r} is constant")
    return Dataset.from_arrays(
        values[:, dep],
        values[:, reg_idx],
        names=[header[j] for j in reg_idx],
        dependent=dependent,
        source=str(path),
    )


def bundled_path(name: str = "us_credit.csv") -> Path:
    return Path(str(resources.files(__name__).joinpath(name)))


def load_us_credit(verify: bool = True) -> Dataset:
    """US mortgage-debt data, 1996-2012: D on consumption C, income I and consumer credit CP."""
    path = bundled_path()
    if verify:
        digest = hashlib.sha256(path.read_bytes()).hexdigest()
        if digest != US_CREDIT_SHA256:
            raise DataError(f"bundled dataset checksum mismatch: {digest}")
    ds = load_dataset(path, "D")
    return Dataset(ds.y, ds.X, ds.names, ds.dependent, source="us_credit")
