"""Exact arithmetic in Q(gamma), gamma a primitive p^k-th root of unity, and
the constructive rank-reduction pipeline built on it.

Elements are rational coefficient vectors of length phi(p^k) = p^(k-1)(p-1),
reduced modulo the cyclotomic polynomial Phi(x) = sum_{j<p} x^(j*p^(k-1)).
Reducing modulo Phi rather than x^(p^k) - 1 is essential: the character sum
sum_t gamma^(tc) vanishes for c != 0 only in the quotient by Phi.

The pipeline assembles, for a Kakeya witness with point set S:

  F   rows S, columns R^n, entries gamma^<x, y>
  B   rows (b, lambda), columns S, entries (1/q) gamma^(-lambda t) on the
      assigned line (x = u_b + t b) and 0 off it
  M = B * F, which collapses entrywise to gamma^<u_b, y> times the
      hyperplane indicator, hence specializes at gamma = 1 to the full
      incidence matrix.

All arithmetic uses Fractions; nothing is floated anywhere.
"""

from __future__ import annotations

import functools
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from .gf_rank import rank_streaming
from .incidence import MatrixKind, dense_matrix, stream_matrix
from .kakeya import KakeyaWitness, line_points
from .ring import (
    RingSpec,
    Vector,
    ensure_indexable,
    enumerate_projective,
    index_point,
    inner_product,
    point_index,
)

DEFAULT_RANK_CELL_LIMIT = 1_000_000  # rows * cols * phi guard for field elimination
DEFAULT_PIPELINE_CELL_LIMIT = 4_000_000  # (|P| q + |S|) * q^n guard for B, F, M


class SizeGuardExceeded(RuntimeError):
    """Requested exact computation exceeds the configured size guard."""


class SpecializationError(ValueError):
    """Matrix entry is neither 0 nor a power of gamma."""


def phi_degree(ring: RingSpec) -> int:
    """Degree of Q(gamma) over Q: phi(p^k) = p^(k-1)(p-1)."""
    return ring.p ** (ring.k - 1) * (ring.p - 1)


@dataclass(frozen=True)
class Cyclotomic:
    """Element of Q(gamma) as a length-phi(p^k) rational coefficient vector."""

    ring: RingSpec
    coeffs: tuple[Fraction, ...]

    def __post_init__(self):
        if len(self.coeffs) != phi_degree(self.ring):
            raise ValueError(
                f"coefficient vector must have length {phi_degree(self.ring)}"
            )

    def is_zero(self) -> bool:
        return all(c == 0 for c in self.coeffs)

    def _require_same_ring(self, other: "Cyclotomic") -> None:
        if self.ring != other.ring:
            raise ValueError("mixed cyclotomic rings")

    def __add__(self, other: "Cyclotomic") -> "Cyclotomic":
        self._require_same_ring(other)
        return Cyclotomic(
            self.ring, tuple(a + b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __sub__(self, other: "Cyclotomic") -> "Cyclotomic":
        self._require_same_ring(other)
        return Cyclotomic(
            self.ring, tuple(a - b for a, b in zip(self.coeffs, other.coeffs))
        )

    def __neg__(self) -> "Cyclotomic":
        return Cyclotomic(self.ring, tuple(-a for a in self.coeffs))

    def __mul__(self, other) -> "Cyclotomic":
        if isinstance(other, (int, Fraction)):
            return Cyclotomic(self.ring, tuple(a * other for a in self.coeffs))
        self._require_same_ring(other)
        phi = len(self.coeffs)
        prod = [Fraction(0)] * (2 * phi - 1)
        for i, a in enumerate(self.coeffs):
            if a:
                for j, b in enumerate(other.coeffs):
                    if b:
                        prod[i + j] += a * b
        return Cyclotomic(self.ring, _reduce_mod_phi(prod, self.ring))

    __rmul__ = __mul__

    def inverse(self) -> "Cyclotomic":
        """Multiplicative inverse via extended polynomial gcd with Phi."""
        if self.is_zero():
            raise ZeroDivisionError("cyclotomic division by zero")
        # r0, r1 track remainders; s0, s1 the Bezout coefficients of self
        r0, s0 = _phi_poly(self.ring), [Fraction(0)]
        r1, s1 = list(self.coeffs), [Fraction(1)]
        while any(c != 0 for c in r1):
            quot, rem = _poly_divmod(r0, r1)
            r0, r1 = r1, rem
            s0, s1 = s1, _poly_sub(s0, _poly_mul(quot, s1))
        g = _poly_trim(r0)
        if len(g) != 1:
            raise ArithmeticError("gcd with the cyclotomic polynomial is not constant")
        inv_lead = 1 / g[0]
        return Cyclotomic(
            self.ring, _reduce_mod_phi([c * inv_lead for c in s0], self.ring)
        )


def _reduce_mod_phi(coeffs: Sequence[Fraction], ring: RingSpec) -> tuple[Fraction, ...]:
    """Long division by Phi(x) = sum_{j<p} x^(j m), m = p^(k-1); returns length phi."""
    p = ring.p
    m = ring.p ** (ring.k - 1)
    phi = m * (p - 1)
    work = list(coeffs)
    if len(work) < phi:
        work.extend([Fraction(0)] * (phi - len(work)))
    for d in range(len(work) - 1, phi - 1, -1):
        c = work[d]
        if c:
            work[d] = Fraction(0)
            base = d - phi  # x^d = -sum_{j<p-1} x^(base + j m)
            for j in range(p - 1):
                work[base + j * m] -= c
    return tuple(work[:phi])


def _phi_poly(ring: RingSpec) -> list[Fraction]:
    p = ring.p
    m = ring.p ** (ring.k - 1)
    poly = [Fraction(0)] * (m * (p - 1) + 1)
    for j in range(p):
        poly[j * m] = Fraction(1)
    return poly


def _poly_trim(a: list[Fraction]) -> list[Fraction]:
    i = len(a)
    while i > 0 and a[i - 1] == 0:
        i -= 1
    return a[:i] if i else [Fraction(0)]


def _poly_sub(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = list(a) + [Fraction(0)] * max(0, len(b) - len(a))
    for i, c in enumerate(b):
        out[i] -= c
    return out


def _poly_mul(a: list[Fraction], b: list[Fraction]) -> list[Fraction]:
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] += x * y
    return out


def _poly_divmod(a: list[Fraction], b: list[Fraction]) -> tuple[list[Fraction], list[Fraction]]:
    b = _poly_trim(list(b))
    if b == [Fraction(0)]:
        raise ZeroDivisionError("polynomial division by zero")
    rem = _poly_trim(list(a))
    quot = [Fraction(0)] * max(1, len(rem) - len(b) + 1)
    while len(rem) >= len(b) and rem != [Fraction(0)]:
        shift = len(rem) - len(b)
        factor = rem[-1] / b[-1]
        quot[shift] += factor
        for i, c in enumerate(b):
            rem[shift + i] -= factor * c
        rem = _poly_trim(rem)
    return quot, rem


def cyclo_zero(ring: RingSpec) -> Cyclotomic:
    return Cyclotomic(ring, tuple([Fraction(0)] * phi_degree(ring)))


def cyclo_rational(ring: RingSpec, value) -> Cyclotomic:
    coeffs = [Fraction(0)] * phi_degree(ring)
    coeffs[0] = Fraction(value)
    return Cyclotomic(ring, tuple(coeffs))


def cyclo_one(ring: RingSpec) -> Cyclotomic:
    return cyclo_rational(ring, 1)


@functools.lru_cache(maxsize=None)
def _root_power_cached(ring: RingSpec, e: int) -> Cyclotomic:
    phi = phi_degree(ring)
    coeffs = [Fraction(0)] * (e + 1 if e >= phi else phi)
    coeffs[e] = Fraction(1)
    return Cyclotomic(ring, _reduce_mod_phi(coeffs, ring))


def root_power(ring: RingSpec, e: int) -> Cyclotomic:
    """gamma^e, with the exponent reduced modulo p^k."""
    return _root_power_cached(ring, e % ring.q)


@functools.lru_cache(maxsize=None)
def _power_table(ring: RingSpec) -> dict[tuple[Fraction, ...], int]:
    return {root_power(ring, e).coeffs: e for e in range(ring.q)}


@dataclass
class CycloMatrix:
    """Dense matrix of Cyclotomic entries sharing one RingSpec."""

    ring: RingSpec
    entries: list[list[Cyclotomic]]

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.entries[0]) if self.entries else 0


def ordered_points(witness: KakeyaWitness) -> list[Vector]:
    """The witness point set S as a list, sorted by point_index."""
    return sorted(witness.points, key=lambda v: point_index(v, witness.ring))


def build_F(points: Sequence[Vector], ring: RingSpec, n: int) -> CycloMatrix:
    """F with rows indexed by the given points, columns by R^n, entries gamma^<x,y>.

    Exponents are inner products computed in R, read as integers in [0, q).
    """
    if len(set(points)) != len(points):
        raise ValueError("points must be distinct")
    size = ensure_indexable(ring, n)
    columns = [index_point(i, ring, n) for i in range(size)]
    entries = [
        [root_power(ring, inner_product(x, y, ring)) for y in columns]
        for x in points
    ]
    return CycloMatrix(ring=ring, entries=entries)


def build_B(witness: KakeyaWitness) -> CycloMatrix:
    """B with rows (b, lambda) over all directions and lambda, columns S.

    The (b, lambda) row is supported on the assigned line L_b: at the point
    x = u_b + t b the entry is (1/q) gamma^(-lambda t); t is recovered from
    the first unit coordinate of b (where b has entry 1), and the claimed
    line membership is re-checked against all coordinates.
    """
    ring, n = witness.ring, witness.n
    q = ring.q
    points = ordered_points(witness)
    col_of = {x: j for j, x in enumerate(points)}
    inv_q = Fraction(1, q)
    zero = cyclo_zero(ring)
    entries: list[list[Cyclotomic]] = []
    for b in enumerate_projective(ring, n):
        u = witness.assignment[b]
        unit_pos = next(i for i, x in enumerate(b) if x % ring.p != 0)
        line_cols: dict[int, int] = {}
        for x in line_points(u, b, ring):
            t = (x[unit_pos] - u[unit_pos]) % q  # b[unit_pos] == 1 by canonicality
            if tuple((ui + t * bi) % q for ui, bi in zip(u, b)) != x:
                raise ValueError(
                    f"witness inconsistency: {x} not recoverable on line ({u}, {b})"
                )
            if x not in col_of:
                raise ValueError(f"witness inconsistency: line point {x} not in S")
            line_cols[col_of[x]] = t
        for lam in range(q):
            row = [zero] * len(points)
            for j, t in line_cols.items():
                row[j] = root_power(ring, -lam * t) * inv_q
            entries.append(row)
    return CycloMatrix(ring=ring, entries=entries)


def mat_mul(left: CycloMatrix, right: CycloMatrix) -> CycloMatrix:
    if left.ncols != right.nrows:
        raise ValueError("dimension mismatch")
    zero = cyclo_zero(left.ring)
    out: list[list[Cyclotomic]] = []
    for lrow in left.entries:
        nz = [(j, c) for j, c in enumerate(lrow) if not c.is_zero()]
        row = []
        for col in range(right.ncols):
            acc = zero
            for j, c in nz:
                acc = acc + c * right.entries[j][col]
            row.append(acc)
        out.append(row)
    return CycloMatrix(ring=left.ring, entries=out)


@dataclass(frozen=True)
class ProductIdentityReport:
    ok: bool
    entries_checked: int
    first_violation: tuple[int, int] | None
    product: CycloMatrix


def verify_product_identity(
    B: CycloMatrix, F: CycloMatrix, witness: KakeyaWitness
) -> ProductIdentityReport:
    """Compute M = B*F exactly and check the proved entrywise collapse.

    Expected: M[(b,lambda), y] = gamma^<u_b, y> when <b, y> = lambda, else 0.
    A violation can only mean an implementation bug, so the first offending
    position is reported.
    """
    ring, n = witness.ring, witness.n
    q = ring.q
    M = mat_mul(B, F)
    columns = [index_point(i, ring, n) for i in range(M.ncols)]
    zero = cyclo_zero(ring)
    checked = 0
    first_violation = None
    row_idx = 0
    row_iter = iter(M.entries)
    for b in enumerate_projective(ring, n):
        u = witness.assignment[b]
        for lam in range(q):
            row = next(row_iter)
            for col, y in enumerate(columns):
                expected = (
                    root_power(ring, inner_product(u, y, ring))
                    if inner_product(b, y, ring) == lam
                    else zero
                )
                checked += 1
                if row[col] != expected and first_violation is None:
                    first_violation = (row_idx, col)
            row_idx += 1
    return ProductIdentityReport(
        ok=first_violation is None,
        entries_checked=checked,
        first_violation=first_violation,
        product=M,
    )


def specialize_at_one(M: CycloMatrix) -> np.ndarray:
    """Entrywise map 0 -> 0, gamma^j -> 1; any other entry is an error."""
    table = _power_table(M.ring)
    out = np.zeros((M.nrows, M.ncols), dtype=np.uint8)
    for i, row in enumerate(M.entries):
        for j, entry in enumerate(row):
            if entry.is_zero():
                continue
            if entry.coeffs in table:
                out[i, j] = 1
            else:
                raise SpecializationError(
                    f"entry at ({i}, {j}) is neither 0 nor a power of gamma"
                )
    return out


def cyclo_rank(M: CycloMatrix, max_cells: int = DEFAULT_RANK_CELL_LIMIT) -> int:
    """Exact rank over Q(gamma) by Gaussian elimination.

    Pivoting takes the first nonzero entry in column order; arithmetic is
    exact, so no magnitude pivoting is needed.  Guarded by
    rows * cols * phi(p^k) <= max_cells.
    """
    cost = M.nrows * M.ncols * phi_degree(M.ring)
    if cost > max_cells:
        raise SizeGuardExceeded(
            f"cyclotomic elimination cost {cost} exceeds guard {max_cells}"
        )
    work = [list(row) for row in M.entries]
    rank = 0
    for col in range(M.ncols):
        pivot = None
        for i in range(rank, len(work)):
            if not work[i][col].is_zero():
                pivot = i
                break
        if pivot is None:
            continue
        work[rank], work[pivot] = work[pivot], work[rank]
        inv = work[rank][col].inverse()
        work[rank] = [inv * c for c in work[rank]]
        lead = work[rank]
        for i in range(rank + 1, len(work)):
            f = work[i][col]
            if not f.is_zero():
                work[i] = [c - f * d for c, d in zip(work[i], lead)]
        rank += 1
        if rank == len(work):
            break
    return rank


@dataclass(frozen=True)
class RankChainReport:
    identity_ok: bool
    entries_checked: int
    specialization_matches: bool
    rank_p_a: int
    cyclo_rank_m: int | None
    cyclo_skipped: str | None
    size_s: int
    chain_ok: bool

    @property
    def ok(self) -> bool:
        return self.identity_ok and self.specialization_matches and self.chain_ok


def verify_rank_chain(
    witness: KakeyaWitness,
    skip_cyclo_rank: bool = False,
    rank_cell_limit: int = DEFAULT_RANK_CELL_LIMIT,
    pipeline_cell_limit: int = DEFAULT_PIPELINE_CELL_LIMIT,
) -> RankChainReport:
    """Run the full reduction pipeline and check every link.

    Checks, in order: the entrywise product identity, that the specialization
    of M = B*F equals the streamed incidence matrix exactly, and the chain
    rank_p(A) <= rank_{Q(gamma)}(M) <= |S|.  The middle link is skipped on
    request or when the elimination guard trips, leaving rank_p(A) <= |S|.
    """
    ring, n = witness.ring, witness.n
    size = ensure_indexable(ring, n)
    n_rows = len(witness.assignment) * ring.q
    cells = (n_rows + len(witness.points)) * size
    if cells > pipeline_cell_limit:
        raise SizeGuardExceeded(
            f"pipeline size {cells} exceeds guard {pipeline_cell_limit}"
        )
    points = ordered_points(witness)
    F = build_F(points, ring, n)
    B = build_B(witness)
    identity = verify_product_identity(B, F, witness)
    specialized = specialize_at_one(identity.product)
    streamed = dense_matrix(stream_matrix(MatrixKind.A, ring, n))
    matches = specialized.shape == streamed.shape and bool(
        np.array_equal(specialized, streamed)
    )
    rank_a = rank_streaming(stream_matrix(MatrixKind.A, ring, n), ring.p).rank
    cyclo_rank_m: int | None = None
    skipped: str | None = None
    if skip_cyclo_rank:
        skipped = "disabled by flag"
    else:
        try:
            cyclo_rank_m = cyclo_rank(identity.product, max_cells=rank_cell_limit)
        except SizeGuardExceeded as exc:
            skipped = str(exc)
    size_s = len(witness.points)
    if cyclo_rank_m is None:
        chain_ok = rank_a <= size_s
    else:
        # rank over Q(gamma) cannot exceed the inner dimension |S|
        assert cyclo_rank_m <= size_s
        chain_ok = rank_a <= cyclo_rank_m <= size_s
    return RankChainReport(
        identity_ok=identity.ok,
        entries_checked=identity.entries_checked,
        specialization_matches=matches,
        rank_p_a=rank_a,
        cyclo_rank_m=cyclo_rank_m,
        cyclo_skipped=skipped,
        size_s=size_s,
        chain_ok=chain_ok,
    )
