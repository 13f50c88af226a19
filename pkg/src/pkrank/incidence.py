"""Lazy row streams for the four point-hyperplane incidence matrices.

The column order over R^n is fixed globally by ``ring.point_index`` (first
coordinate most significant).  Rows are produced one at a time, either as
dense 0/1 arrays or as sorted arrays of support column indices; no matrix is
ever materialized for rank computation.
"""

from __future__ import annotations

import enum
from typing import IO, Iterator

import numpy as np

from .ring import RingSpec, Vector, ensure_indexable, enumerate_projective


class MatrixKind(enum.Enum):
    """Which incidence matrix a stream produces.

    A      rows (b, lambda) for b projective, lambda in R
    Astar  rows (b, a) for b projective, a in R^n; the row equals the
           hyperplane through a with normal b
    W      rows b for all b in R^n, lambda = 0 (hyperplanes through 0)
    Wstar  rows b for b projective, lambda = 0
    """

    A = "A"
    ASTAR = "Astar"
    W = "W"
    WSTAR = "Wstar"

    @classmethod
    def parse(cls, name: str) -> "MatrixKind":
        for kind in cls:
            if kind.value == name:
                return kind
        raise ValueError(f"unknown matrix kind {name!r}")


def _coordinate_arrays(ring: RingSpec, n: int, size: int) -> list[np.ndarray]:
    """coords[j][idx] = j-th coordinate of the idx-th column vector."""
    q = ring.q
    idx = np.arange(size, dtype=np.int64)
    return [(idx // q ** (n - 1 - j)) % q for j in range(n)]


def _value_vector(b: Vector, coords: list[np.ndarray], q: int) -> np.ndarray:
    """val[idx] = <b, v_idx> mod q over all columns."""
    val = np.zeros(len(coords[0]), dtype=np.int64)
    for bj, cj in zip(b, coords):
        if bj:
            val += bj * cj
    return val % q


def hyperplane_support(b: Vector, lam: int, ring: RingSpec, n: int) -> np.ndarray:
    """Sorted column indices of {v : <b, v> = lam}."""
    if len(b) != n:
        raise ValueError(f"direction has length {len(b)}, expected {n}")
    size = ensure_indexable(ring, n)
    coords = _coordinate_arrays(ring, n, size)
    val = _value_vector(b, coords, ring.q)
    return np.nonzero(val == lam % ring.q)[0]


def hyperplane_row(b: Vector, lam: int, ring: RingSpec, n: int) -> np.ndarray:
    """Dense 0/1 indicator row of the hyperplane {v : <b, v> = lam}.

    b = 0 is allowed: the row is all-ones when lam = 0 and all-zeros otherwise.
    """
    size = ensure_indexable(ring, n)
    row = np.zeros(size, dtype=np.uint8)
    row[hyperplane_support(b, lam, ring, n)] = 1
    return row


class RowStream:
    """Ordered lazy sequence of 0/1 rows for one matrix kind.

    Row order: directions in projective enumeration order, then lambda (for A)
    or the translation point a (for Astar) ascending by index.  W iterates all
    b in R^n by point_index; Wstar iterates projective b.  Single-consumer:
    each call to iter_supports() restarts the stream from the beginning.
    """

    def __init__(
        self,
        kind: MatrixKind,
        ring: RingSpec,
        n: int,
        include_zero_b: bool = True,
    ):
        self.kind = kind
        self.ring = ring
        self.n = n
        self.include_zero_b = include_zero_b
        self.col_count = ensure_indexable(ring, n)
        q = ring.q
        if kind in (MatrixKind.A, MatrixKind.ASTAR, MatrixKind.WSTAR):
            self._directions = enumerate_projective(ring, n)
            npts = len(self._directions)
            if kind is MatrixKind.A:
                self.row_count = npts * q
            elif kind is MatrixKind.ASTAR:
                self.row_count = npts * self.col_count
            else:
                self.row_count = npts
        else:
            self._directions = None
            self.row_count = self.col_count if include_zero_b else self.col_count - 1

    def _grouped_supports(self, val: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        # stable argsort keeps ascending column order within each lambda class
        order = np.argsort(val, kind="stable")
        starts = np.searchsorted(val[order], np.arange(self.ring.q + 1))
        return order, starts

    def iter_supports(self) -> Iterator[np.ndarray]:
        """Yield each row as a sorted int64 array of nonzero column indices."""
        ring, n, q = self.ring, self.n, self.ring.q
        size = self.col_count
        coords = _coordinate_arrays(ring, n, size)
        if self.kind is MatrixKind.A:
            for b in self._directions:
                order, starts = self._grouped_supports(_value_vector(b, coords, q))
                for lam in range(q):
                    yield order[starts[lam] : starts[lam + 1]]
        elif self.kind is MatrixKind.ASTAR:
            for b in self._directions:
                val = _value_vector(b, coords, q)
                order, starts = self._grouped_supports(val)
                for a_idx in range(size):
                    lam = int(val[a_idx])
                    yield order[starts[lam] : starts[lam + 1]]
        elif self.kind is MatrixKind.WSTAR:
            for b in self._directions:
                val = _value_vector(b, coords, q)
                yield np.nonzero(val == 0)[0]
        else:
            q_pows = [q ** (n - 1 - j) for j in range(n)]
            for b_idx in range(size):
                if b_idx == 0 and not self.include_zero_b:
                    continue
                b = tuple((b_idx // w) % q for w in q_pows)
                val = _value_vector(b, coords, q)
                yield np.nonzero(val == 0)[0]

    def __iter__(self) -> Iterator[np.ndarray]:
        """Yield each row as a dense uint8 0/1 array of length col_count."""
        for supp in self.iter_supports():
            row = np.zeros(self.col_count, dtype=np.uint8)
            row[supp] = 1
            yield row


def stream_matrix(
    kind: MatrixKind, ring: RingSpec, n: int, include_zero_b: bool = True
) -> RowStream:
    """Build the row stream for one matrix kind over the fixed column order."""
    return RowStream(kind, ring, n, include_zero_b=include_zero_b)


def dense_matrix(stream: RowStream) -> np.ndarray:
    """Materialize a stream as a dense uint8 matrix (small instances only)."""
    rows = list(stream)
    if not rows:
        return np.zeros((0, stream.col_count), dtype=np.uint8)
    return np.stack(rows)


def export_matrix(stream: RowStream, sink: IO[str], fmt: str) -> None:
    """Write the stream to a text sink.

    coordinate: header "rows cols M", one "i j 1" line per nonzero (1-based,
    row-major order), terminated by "0 0 0".  dense01: one 0/1 character row
    per line.  Newlines are "\\n" with no trailing spaces.
    """
    if fmt == "coordinate":
        sink.write(f"{stream.row_count} {stream.col_count} M\n")
        for i, supp in enumerate(stream.iter_supports(), start=1):
            for j in supp:
                sink.write(f"{i} {j + 1} 1\n")
        sink.write("0 0 0\n")
    elif fmt == "dense01":
        zeros = np.zeros(stream.col_count, dtype=np.uint8)
        digits = np.array(["0", "1"])
        for supp in stream.iter_supports():
            row = zeros.copy()
            row[supp] = 1
            sink.write("".join(digits[row]) + "\n")
    else:
        raise ValueError(f"unknown export format {fmt!r}")


def distinct_rows(stream: RowStream) -> set[bytes]:
    """Set of distinct dense rows, as bytes, for cross-matrix comparisons."""
    return {row.tobytes() for row in stream}
