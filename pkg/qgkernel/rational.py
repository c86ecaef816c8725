# Exact rational matrices: numpy object arrays of Fraction with row reduction,
# inverse and Moore-Penrose pseudo-inverse. No floating point anywhere in this module.
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import ArgumentError


def _as_fraction_array(rows: Iterable[Iterable[object]]) -> np.ndarray:
    data = [[Fraction(x) for x in row] for row in rows]
    if not data:
        return np.empty((0, 0), dtype=object)
    width = len(data[0])
    if any(len(row) != width for row in data):
        raise ArgumentError("ragged matrix rows")
    arr = np.empty((len(data), width), dtype=object)
    for i, row in enumerate(data):
        for j, x in enumerate(row):
            arr[i, j] = x
    return arr


def zeros(rows: int, cols: int) -> np.ndarray:
    arr = np.empty((rows, cols), dtype=object)
    arr.fill(Fraction(0))
    return arr


def identity(n: int) -> np.ndarray:
    arr = zeros(n, n)
    for i in range(n):
        arr[i, i] = Fraction(1)
    return arr


@dataclass(frozen=True, eq=False)
class RationalMatrix:
    """Immutable exact matrix. Entries are reduced Fractions (Fraction normalizes on construction)."""

    entries: np.ndarray

    @classmethod
    def from_rows(cls, rows: Iterable[Iterable[object]]) -> "RationalMatrix":
        return cls(_as_fraction_array(rows))

    @property
    def rows(self) -> int:
        return int(self.entries.shape[0])

    @property
    def cols(self) -> int:
        return int(self.entries.shape[1]) if self.entries.ndim == 2 else 0

    @property
    def shape(self) -> tuple[int, int]:
        return (self.rows, self.cols)

    def __getitem__(self, key: tuple[int, int]) -> Fraction:
        return self.entries[key]

    def __matmul__(self, other: "RationalMatrix") -> "RationalMatrix":
        if self.cols != other.rows:
            raise ArgumentError("dimension mismatch", {"left": self.shape, "right": other.shape})
        if self.rows == 0 or other.cols == 0:
            return RationalMatrix(zeros(self.rows, other.cols))
        if self.cols == 0:
            return RationalMatrix(zeros(self.rows, other.cols))
        return RationalMatrix(self.entries.dot(other.entries))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, RationalMatrix):
            return NotImplemented
        return self.shape == other.shape and bool(np.all(self.entries == other.entries))

    def __hash__(self) -> int:
        return hash((self.shape, tuple(self.entries.flatten().tolist())))

    def transpose(self) -> "RationalMatrix":
        return RationalMatrix(self.entries.T.copy())

    def tolist(self) -> list[list[Fraction]]:
        return self.entries.tolist()

    def __repr__(self) -> str:
        body = "; ".join(", ".join(str(x) for x in row) for row in self.tolist())
        return f"RationalMatrix[{body}]"


def rref(a: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """
    Reduced row echelon form over Q.

    Returns (R, pivots) where R keeps only the nonzero rows and pivots lists the
    pivot column of each kept row.
    """
    x = a.copy()
    rows, cols = x.shape
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        if r >= rows:
            break
        pivot = next((i for i in range(r, rows) if x[i, c] != 0), None)
        if pivot is None:
            continue
        if pivot != r:
            x[[r, pivot]] = x[[pivot, r]]
        inv = 1 / x[r, c]
        x[r, :] = x[r, :] * inv
        for i in range(rows):
            if i != r and x[i, c] != 0:
                x[i, :] = x[i, :] - x[i, c] * x[r, :]
        pivots.append(c)
        r += 1
    return x[:r, :].copy(), pivots


def rank(m: RationalMatrix) -> int:
    if m.rows == 0 or m.cols == 0:
        return 0
    return len(rref(m.entries)[1])


def inverse(a: np.ndarray) -> np.ndarray:
    """Exact inverse by Gauss-Jordan on [A | I]."""
    n = a.shape[0]
    if a.shape != (n, n):
        raise ArgumentError("inverse of a non-square matrix", {"shape": a.shape})
    if n == 0:
        return zeros(0, 0)
    augmented = np.concatenate([a, identity(n)], axis=1)
    reduced, pivots = rref(augmented)
    if pivots[:n] != list(range(n)) or len(pivots) < n:
        raise ArgumentError("matrix is not invertible")
    return reduced[:, n:].copy()


def pseudo_inverse(m: RationalMatrix) -> RationalMatrix:
    """
    Moore-Penrose inverse over Q.

    Uses the full-rank factorization G = C R, with R the nonzero rows of the
    row echelon form and C the pivot columns of G:

        G+ = R^T (R R^T)^-1 (C^T C)^-1 C^T

    For invertible input this is the ordinary inverse.
    """
    if m.rows == 0 or m.cols == 0:
        return RationalMatrix(zeros(m.cols, m.rows))
    g = m.entries
    r, pivots = rref(g)
    if not pivots:
        return RationalMatrix(zeros(m.cols, m.rows))
    if len(pivots) == m.rows == m.cols:
        return RationalMatrix(inverse(g))
    c = g[:, pivots]
    rrt_inv = inverse(r.dot(r.T))
    ctc_inv = inverse(c.T.dot(c))
    return RationalMatrix(r.T.dot(rrt_inv).dot(ctc_inv).dot(c.T))


def penrose_holds(g: RationalMatrix, w: RationalMatrix) -> bool:
    """The four Penrose identities, checked exactly."""
    gw = g @ w
    wg = w @ g
    return (
        gw @ g == g
        and wg @ w == w
        and gw.transpose() == gw
        and wg.transpose() == wg
    )


def leading_minors(m: RationalMatrix) -> Sequence[Fraction]:
    """Leading principal minors, computed by exact elimination (used as a PSD witness on small matrices)."""
    out: list[Fraction] = []
    for k in range(1, m.rows + 1):
        block = m.entries[:k, :k].copy()
        det = Fraction(1)
        for c in range(k):
            pivot = next((i for i in range(c, k) if block[i, c] != 0), None)
            if pivot is None:
                det = Fraction(0)
                break
            if pivot != c:
                block[[c, pivot]] = block[[pivot, c]]
                det = -det
            det *= block[c, c]
            for i in range(c + 1, k):
                if block[i, c] != 0:
                    block[i, :] = block[i, :] - (block[i, c] / block[c, c]) * block[c, :]
        out.append(det)
    return out
