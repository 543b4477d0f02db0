"""Dataset ingestion and normalization for the benchmark harness.

CSV tables are read into :class:`Dataset` objects, standardized column-wise
(population moments), and reduced to correlation matrices for the PCA
front end.  The 13-variable pitprops correlation matrix — the classic
sparse-PCA benchmark table — ships embedded so that at least one real
instance works offline.
"""

from __future__ import annotations

import csv
import logging
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple

import numpy as np

from .exceptions import InputError

logger = logging.getLogger(__name__)

# Variance within this of 1 (and means within this of 0) after standardize.
MOMENT_ATOL = 1e-12


@dataclass(frozen=True)
class Dataset:
    """A rectangular numeric table, optionally with a held-out response.

    ``x`` is samples-by-features.  ``dropped_rows`` counts rows removed
    during ingestion because of missing or non-finite cells.
    """

    name: str
    x: np.ndarray
    response: Optional[np.ndarray] = None
    feature_names: Optional[Tuple[str, ...]] = None
    note: str = ""
    dropped_rows: int = 0

    @property
    def n_samples(self) -> int:
        return int(self.x.shape[0])

    @property
    def n_features(self) -> int:
        return int(self.x.shape[1])


def _try_float(cell: str) -> Optional[float]:
    try:
        return float(cell)
    except ValueError:
        return None


def ingest_csv(path: str, response_column: Optional[str] = None) -> Dataset:
    """Read a numeric CSV into a :class:`Dataset`.

    A header row is auto-detected: if any cell of the first row fails to
    parse as a number, the row is treated as column names.  Rows containing
    missing or non-finite cells are dropped (counted, logged).  A
    ``response_column`` — a header name or an integer index as a string —
    is split off into ``response``.

    Raises :class:`InputError` for unreadable files, non-numeric cells
    below the header, an empty table, or an unknown response column.
    """
    try:
        with open(path, newline="") as fh:
            rows = [row for row in csv.reader(fh) if row and any(c.strip() for c in row)]
    except OSError as exc:
        raise InputError(f"cannot read {path!r}: {exc}") from exc
    if not rows:
        raise InputError(f"{path!r} contains no data")

    header: Optional[Tuple[str, ...]] = None
    first = [_try_float(c.strip()) for c in rows[0]]
    if any(v is None for v in first):
        header = tuple(c.strip() for c in rows[0])
        rows = rows[1:]
    if not rows:
        raise InputError(f"{path!r} has a header but no data rows")

    width = len(rows[0])
    parsed = []
    dropped = 0
    for lineno, row in enumerate(rows, start=2 if header else 1):
        if len(row) != width:
            raise InputError(f"{path!r} line {lineno}: expected {width} cells, got {len(row)}")
        vals = [_try_float(c.strip()) for c in row]
        bad = [i for i, v in enumerate(vals) if v is None]
        if bad:
            raise InputError(
                f"{path!r} line {lineno}: non-numeric cell {row[bad[0]]!r} in column {bad[0]}"
            )
        if not all(np.isfinite(v) for v in vals):
            dropped += 1
            continue
        parsed.append(vals)
    if dropped:
        logger.warning("%s: dropped %d row(s) with missing entries", path, dropped)
    if not parsed:
        raise InputError(f"{path!r}: no complete rows remain after dropping missing values")

    table = np.asarray(parsed, dtype=float)
    name = path.rsplit("/", 1)[-1]
    response = None
    if response_column is not None:
        if header is not None and response_column in header:
            col = header.index(response_column)
        else:
            try:
                col = int(response_column)
            except ValueError:
                raise InputError(f"unknown response column {response_column!r}") from None
            if not -table.shape[1] <= col < table.shape[1]:
                raise InputError(f"response column index {col} out of range")
            col %= table.shape[1]
        response = table[:, col].copy()
        table = np.delete(table, col, axis=1)
        if header is not None:
            header = tuple(h for i, h in enumerate(header) if i != col)
        if table.shape[1] == 0:
            raise InputError("response column leaves no feature columns")

    return Dataset(
        name=name,
        x=table,
        response=response,
        feature_names=header,
        note=f"ingested from {path}",
        dropped_rows=dropped,
    )


def standardize(dataset: Dataset) -> Dataset:
    """Center and scale every column to mean 0, population variance 1.

    Constant columns carry no signal and are dropped with a log message;
    an all-constant table is an :class:`InputError`.
    """
    x = np.asarray(dataset.x, dtype=float)
    mu = x.mean(axis=0)
    sigma = x.std(axis=0)  # population: divisor n
    keep = sigma > 0.0
    if not np.any(keep):
        raise InputError("every column is constant; nothing to standardize")
    if not np.all(keep):
        names = dataset.feature_names
        gone = (
            [names[i] for i in np.flatnonzero(~keep)]
            if names is not None
            else list(np.flatnonzero(~keep))
        )
        logger.warning("%s: dropped constant column(s) %s", dataset.name, gone)
    z = (x[:, keep] - mu[keep]) / sigma[keep]
    names = dataset.feature_names
    if names is not None:
        names = tuple(n for n, k in zip(names, keep) if k)
    return replace(
        dataset,
        x=z,
        feature_names=names,
        note=dataset.note + "; standardized (population variance)",
    )


def correlation_matrix(x: np.ndarray) -> np.ndarray:
    """Correlation matrix of the columns of ``x`` (population moments)."""
    x = np.asarray(x, dtype=float)
    if x.ndim != 2 or x.shape[0] < 2:
        raise InputError("need a 2-d table with at least two rows")
    mu = x.mean(axis=0)
    sigma = x.std(axis=0)
    if np.any(sigma == 0.0):
        raise InputError("constant column has undefined correlation; standardize first")
    z = (x - mu) / sigma
    c = (z.T @ z) / x.shape[0]
    return 0.5 * (c + c.T)


PITPROPS_VARIABLES: Tuple[str, ...] = (
    "topdiam", "length", "moist", "testsg", "ovensg", "ringtop", "ringbut",
    "bowmax", "bowdist", "whorls", "clear", "knots", "diaknot",
)

# Upper triangle of the pitprops correlation matrix: 13 physical properties
# of 180 pitprops, from J. N. R. Jeffers, "Two case studies in the
# application of principal component analysis", Applied Statistics 16 (1967).
_PITPROPS_UPPER: Sequence[Sequence[float]] = (
    (0.954, 0.364, 0.342, -0.129, 0.313, 0.496, 0.424, 0.592, 0.545, 0.084, -0.019, 0.134),
    (0.297, 0.284, -0.118, 0.291, 0.503, 0.419, 0.648, 0.569, 0.076, -0.036, 0.144),
    (0.882, -0.148, 0.153, -0.029, -0.054, 0.125, -0.081, 0.162, 0.220, 0.126),
    (0.220, 0.381, 0.174, -0.059, 0.137, -0.014, 0.097, 0.169, 0.015),
    (0.364, 0.296, 0.004, -0.039, 0.037, -0.091, -0.145, -0.208),
    (0.813, 0.090, 0.211, 0.274, -0.036, 0.024, -0.329),
    (0.372, 0.465, 0.679, -0.113, -0.232, -0.424),
    (0.482, 0.557, 0.061, -0.357, -0.202),
    (0.526, 0.085, -0.127, -0.076),
    (-0.319, -0.368, -0.291),
    (0.029, 0.007),
    (0.184,),
)


def pitprops_correlation() -> np.ndarray:
    """The embedded 13x13 pitprops correlation matrix (Jeffers, 1967)."""
    n = len(PITPROPS_VARIABLES)
    c = np.eye(n)
    for i, row in enumerate(_PITPROPS_UPPER):
        c[i, i + 1 : i + 1 + len(row)] = row
    return c + c.T - np.eye(n)
