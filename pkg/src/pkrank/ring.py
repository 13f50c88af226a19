"""Exact arithmetic in Z/p^k Z and canonical enumeration of projective directions."""

from __future__ import annotations

import sys
from dataclasses import dataclass

#: A vector over Z/p^k Z is a tuple of canonical residues in [0, q).
Vector = tuple[int, ...]

#: A projective point is the canonical representative of its scaling class:
#: the unique member whose first unit coordinate equals 1.
ProjectivePoint = Vector

MAX_PRIME = 1 << 16


class NoUnitCoordinateError(ValueError):
    """The vector has no unit coordinate, so it has no projective class."""


@dataclass(frozen=True)
class RingSpec:
    """Modulus descriptor for Z/p^k Z with q = p^k cached."""

    p: int
    k: int
    q: int


def _is_prime(p: int) -> bool:
    if p < 2:
        return False
    d = 2
    while d * d <= p:
        if p % d == 0:
            return False
        d += 1
    return True


def make_ring(p: int, k: int) -> RingSpec:
    """Validate (p, k) and return the ring descriptor for Z/p^k Z."""
    if not isinstance(p, int) or not isinstance(k, int):
        raise TypeError("p and k must be integers")
    if p >= MAX_PRIME:
        raise ValueError(f"p = {p} exceeds the supported bound 2^16")
    if not _is_prime(p):
        raise ValueError(f"p = {p} is not prime")
    if k < 1:
        raise ValueError(f"k must be >= 1, got {k}")
    q = p**k
    if q > sys.maxsize:
        raise ValueError(f"q = p^k = {q} exceeds the platform index range")
    return RingSpec(p=p, k=k, q=q)


def ensure_indexable(ring: RingSpec, n: int) -> int:
    """Return q^n after checking it fits the platform index range."""
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    size = ring.q**n
    if size > sys.maxsize:
        raise ValueError(f"q^n = {size} exceeds the platform index range")
    return size


def _check_residue(x: int, ring: RingSpec) -> None:
    if not 0 <= x < ring.q:
        raise ValueError(f"residue {x} out of range [0, {ring.q})")


def is_unit(x: int, ring: RingSpec) -> bool:
    """True iff x is invertible in Z/p^k Z, i.e. not divisible by p."""
    _check_residue(x, ring)
    return x % ring.p != 0


def valuation(x: int, ring: RingSpec) -> int:
    """Largest e <= k with p^e dividing x; valuation(0) = k by convention."""
    _check_residue(x, ring)
    if x == 0:
        return ring.k
    e = 0
    while x % ring.p == 0:
        x //= ring.p
        e += 1
    return e


def unit_inverse(x: int, ring: RingSpec) -> int:
    """Inverse of a unit modulo q."""
    if not is_unit(x, ring):
        raise ValueError(f"{x} is not a unit modulo {ring.q}")
    return pow(x, -1, ring.q)


def inner_product(u: Vector, v: Vector, ring: RingSpec) -> int:
    """Sum of coordinatewise products, reduced modulo q."""
    if len(u) != len(v):
        raise ValueError(f"length mismatch: {len(u)} vs {len(v)}")
    return sum(a * b for a, b in zip(u, v)) % ring.q


def canonicalize(v: Vector, ring: RingSpec) -> ProjectivePoint:
    """Scale v by the inverse of its first unit coordinate.

    Raises NoUnitCoordinateError when every coordinate is divisible by p.
    """
    p, q = ring.p, ring.q
    for x in v:
        _check_residue(x, ring)
        if x % p != 0:
            if x == 1:
                return tuple(v)
            inv = pow(x, -1, q)
            return tuple((c * inv) % q for c in v)
    raise NoUnitCoordinateError(f"{v} has no unit coordinate modulo {ring.p}")


def is_canonical(v: Vector, ring: RingSpec) -> bool:
    """True iff v is the canonical representative of its projective class."""
    for x in v:
        if x % ring.p != 0:
            return x == 1
    return False


def point_index(v: Vector, ring: RingSpec) -> int:
    """Lexicographic index of v in R^n with the first coordinate most significant."""
    q = ring.q
    idx = 0
    for x in v:
        _check_residue(x, ring)
        idx = idx * q + x
    return idx


def index_point(idx: int, ring: RingSpec, n: int) -> Vector:
    """Inverse of point_index for vectors of length n."""
    size = ensure_indexable(ring, n)
    if not 0 <= idx < size:
        raise ValueError(f"index {idx} out of range [0, {size})")
    q = ring.q
    coords = []
    for _ in range(n):
        idx, r = divmod(idx, q)
        coords.append(r)
    return tuple(reversed(coords))


def projective_count(ring: RingSpec, n: int) -> int:
    """Number of projective classes of R^n: p^((k-1)(n-1)) * (p^n - 1)/(p - 1).

    Derived by counting vectors with a unit coordinate (q^n - (q/p)^n) and
    dividing by the order of the unit group, which acts freely on them.
    """
    if n < 1:
        raise ValueError(f"n must be >= 1, got {n}")
    p, k = ring.p, ring.k
    return p ** ((k - 1) * (n - 1)) * (p**n - 1) // (p - 1)


def enumerate_projective(ring: RingSpec, n: int) -> list[ProjectivePoint]:
    """All canonical projective representatives, ordered by point_index."""
    size = ensure_indexable(ring, n)
    q = ring.q
    out = []
    for idx in range(size):
        coords = []
        rest = idx
        for _ in range(n):
            rest, r = divmod(rest, q)
            coords.append(r)
        coords.reverse()
        if is_canonical(tuple(coords), ring):
            out.append(tuple(coords))
    return out
