"""Streaming exact rank over F_p, plus a naive dense oracle for cross-checks.

The streaming eliminator keeps an incrementally grown echelon basis.  Incoming
rows are forward-reduced against existing pivots only; stored rows are never
back-substituted (rank needs echelon form, not reduced echelon form).  The
first row to claim a free pivot column keeps it, so the result is a
deterministic function of the stream order -- and the rank itself is
order-independent.

p = 2 rows are packed into arbitrary-precision ints, column 0 at the most
significant bit, so reduction is word-wise XOR and the pivot column is read
off bit_length().  Odd p rows are int64 vectors reduced modulo p after every
update; stored pivot rows are scaled so the pivot entry is 1.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import Sequence

import numpy as np

DEFAULT_MEM_LIMIT = 2 * 1024**3  # bytes of stored basis payload


class MemoryLimitError(RuntimeError):
    """Basis storage would exceed the configured memory cap."""


@dataclass(frozen=True)
class RankReport:
    rank: int
    rows_consumed: int
    cols: int
    prime: int
    elapsed_s: float


class EchelonBasis:
    """Incrementally maintained row-echelon basis over F_p."""

    def __init__(self, p: int, ncols: int, max_mem_bytes: int = DEFAULT_MEM_LIMIT):
        if p < 2:
            raise ValueError(f"p must be a prime >= 2, got {p}")
        if ncols < 0:
            raise ValueError("ncols must be nonnegative")
        self.p = p
        self.ncols = ncols
        self.rank = 0
        self.max_mem_bytes = max_mem_bytes
        self._mem_bytes = 0
        if p == 2:
            self._nbytes = (ncols + 7) // 8
            self._nbits = self._nbytes * 8
            # indexed by bit_length of the packed row; 0 = no pivot stored
            self._packed_pivots: list[int] = [0] * (self._nbits + 1)
            self._bitbuf = np.zeros(self._nbits, dtype=bool)
        else:
            self._pivots: dict[int, np.ndarray] = {}

    @property
    def is_full(self) -> bool:
        return self.rank >= self.ncols

    def _charge(self, nbytes: int) -> None:
        self._mem_bytes += nbytes
        if self._mem_bytes > self.max_mem_bytes:
            raise MemoryLimitError(
                f"echelon basis would exceed {self.max_mem_bytes} bytes"
            )

    def _insert_packed(self, r: int) -> bool:
        pivots = self._packed_pivots
        while r:
            length = r.bit_length()
            piv = pivots[length]
            if piv:
                r ^= piv
            else:
                self._charge(self._nbytes)
                pivots[length] = r
                self.rank += 1
                return True
        return False

    def insert_support(self, support: np.ndarray) -> bool:
        """Insert a 0/1 row given by its nonzero column indices."""
        if self.p == 2:
            buf = self._bitbuf
            buf[:] = False
            buf[support] = True
            return self._insert_packed(
                int.from_bytes(np.packbits(buf).tobytes(), "big")
            )
        row = np.zeros(self.ncols, dtype=np.int64)
        row[support] = 1
        return self._insert_vector(row)

    def insert(self, row: Sequence[int] | np.ndarray) -> bool:
        """Insert a general residue row; returns True if it added a pivot."""
        vec = np.asarray(row, dtype=np.int64) % self.p
        if vec.shape != (self.ncols,):
            raise ValueError(f"row has {vec.shape[0]} entries, expected {self.ncols}")
        if self.p == 2:
            buf = self._bitbuf
            buf[:] = False
            buf[np.nonzero(vec)[0]] = True
            return self._insert_packed(
                int.from_bytes(np.packbits(buf).tobytes(), "big")
            )
        return self._insert_vector(vec)

    def _insert_vector(self, row: np.ndarray) -> bool:
        p = self.p
        while True:
            nz = np.nonzero(row)[0]
            if len(nz) == 0:
                return False
            col = int(nz[0])
            piv = self._pivots.get(col)
            if piv is None:
                inv = pow(int(row[col]), -1, p)
                self._charge(8 * self.ncols)
                self._pivots[col] = (row * inv) % p
                self.rank += 1
                return True
            row = (row - row[col] * piv) % p

    def pivot_columns(self) -> list[int]:
        """Pivot columns claimed so far, in column order."""
        if self.p == 2:
            return [
                self._nbits - length
                for length in range(self._nbits, 0, -1)
                if self._packed_pivots[length]
            ]
        return sorted(self._pivots)


def rank_streaming(
    rows,
    p: int,
    ncols: int | None = None,
    max_mem_bytes: int = DEFAULT_MEM_LIMIT,
) -> RankReport:
    """Exact F_p-rank of a row stream.

    ``rows`` is either a RowStream (its support iterator is used directly) or
    an iterable of residue rows.  Stops consuming as soon as the rank reaches
    the column count.
    """
    start = time.perf_counter()
    consumed = 0
    if hasattr(rows, "iter_supports") and hasattr(rows, "col_count"):
        basis = EchelonBasis(p, rows.col_count, max_mem_bytes=max_mem_bytes)
        for supp in rows.iter_supports():
            basis.insert_support(supp)
            consumed += 1
            if basis.is_full:
                break
    else:
        iterator = iter(rows)
        first = next(iterator, None)
        if first is None:
            if ncols is None:
                raise ValueError("cannot infer column count from an empty iterable")
            basis = EchelonBasis(p, ncols, max_mem_bytes=max_mem_bytes)
        else:
            width = len(first) if ncols is None else ncols
            basis = EchelonBasis(p, width, max_mem_bytes=max_mem_bytes)
            basis.insert(first)
            consumed = 1
            for row in iterator:
                if basis.is_full:
                    break
                basis.insert(row)
                consumed += 1
    return RankReport(
        rank=basis.rank,
        rows_consumed=consumed,
        cols=basis.ncols,
        prime=p,
        elapsed_s=time.perf_counter() - start,
    )


def rank_dense_oracle(matrix: Sequence[Sequence[int]], p: int) -> int:
    """Textbook Gaussian elimination rank over F_p.

    Reference implementation: plain Python lists, no packing, no early exit.
    Kept independent of EchelonBasis so the two can cross-validate.
    """
    work = [[int(x) % p for x in row] for row in matrix]
    if not work:
        return 0
    nrows, ncols = len(work), len(work[0])
    for row in work:
        if len(row) != ncols:
            raise ValueError("ragged matrix")
    rank = 0
    for col in range(ncols):
        pivot = None
        for i in range(rank, nrows):
            if work[i][col]:
                pivot = i
                break
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        inv = pow(work[rank][col], -1, p)
        work[rank] = [(x * inv) % p for x in work[rank]]
        lead = work[rank]
        for i in range(nrows):
            if i != rank and work[i][col]:
                f = work[i][col]
                work[i] = [(x - f * y) % p for x, y in zip(work[i], lead)]
        rank += 1
    return rank
