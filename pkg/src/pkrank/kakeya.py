"""Kakeya sets in (Z/p^k Z)^n with explicit per-direction line witnesses.

A witness pairs a point set with one base point u_b per projective direction
b such that the whole line {u_b + t*b : t in R} lies inside the set.  The
module builds witnesses greedily, finds exact minima by exhaustive search
over one-line-per-direction unions, verifies arbitrary point sets, and
round-trips witnesses through JSON.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .ring import (
    RingSpec,
    Vector,
    ensure_indexable,
    enumerate_projective,
    index_point,
    is_canonical,
    make_ring,
    point_index,
)

DEFAULT_SEARCH_BUDGET = 4_000_000


class BudgetExceededError(RuntimeError):
    """The exhaustive search space exceeds the configured budget."""


class WitnessVerificationError(ValueError):
    """A persisted witness fails re-verification."""

    def __init__(self, message: str, direction: Vector | None = None):
        super().__init__(message)
        self.direction = direction


@dataclass
class KakeyaWitness:
    ring: RingSpec
    n: int
    points: frozenset[Vector]
    #: direction (canonical rep) -> base point, in enumeration order
    assignment: dict[Vector, Vector]

    @property
    def size(self) -> int:
        return len(self.points)

    def assigned_lines(self) -> dict[Vector, list[Vector]]:
        return {
            b: line_points(u, b, self.ring) for b, u in self.assignment.items()
        }

    def extra_points(self) -> list[Vector]:
        """Points not on any assigned line, sorted by point_index."""
        covered: set[Vector] = set()
        for b, u in self.assignment.items():
            covered.update(line_points(u, b, self.ring))
        extras = self.points - covered
        return sorted(extras, key=lambda v: point_index(v, self.ring))


@dataclass(frozen=True)
class UncoveredDirection:
    """Verification failure value: the first direction with no line inside."""

    direction: Vector


def line_points(u: Vector, b: Vector, ring: RingSpec) -> list[Vector]:
    """[u + t*b for t = 0..q-1]; distinct points when b has a unit coordinate."""
    if len(u) != len(b):
        raise ValueError(f"length mismatch: {len(u)} vs {len(b)}")
    q = ring.q
    return [tuple((ui + t * bi) % q for ui, bi in zip(u, b)) for t in range(q)]


def _validate_witness(witness: KakeyaWitness) -> None:
    """Check the witness invariant: every direction covered by a contained line."""
    directions = enumerate_projective(witness.ring, witness.n)
    for b in directions:
        u = witness.assignment.get(b)
        if u is None:
            raise WitnessVerificationError(
                f"direction {b} has no assigned line", direction=b
            )
        missing = [x for x in line_points(u, b, witness.ring) if x not in witness.points]
        if missing:
            raise WitnessVerificationError(
                f"line for direction {b} leaves the point set at {missing[0]}",
                direction=b,
            )


def verify_kakeya(
    points, ring: RingSpec, n: int
) -> KakeyaWitness | UncoveredDirection:
    """Search for a contained line in every direction.

    For each direction (in enumeration order) the base points are tried in
    point_index order over the given set; the first direction with no fully
    contained line is returned as an UncoveredDirection value.
    """
    pts = {tuple(v) for v in points}
    ordered = sorted(pts, key=lambda v: point_index(v, ring))
    assignment: dict[Vector, Vector] = {}
    for b in enumerate_projective(ring, n):
        found = None
        for u in ordered:
            if all(x in pts for x in line_points(u, b, ring)):
                found = u
                break
        if found is None:
            return UncoveredDirection(direction=b)
        assignment[b] = found
    return KakeyaWitness(ring=ring, n=n, points=frozenset(pts), assignment=assignment)


def _distinct_lines(b: Vector, ring: RingSpec, n: int) -> list[list[Vector]]:
    """All distinct lines in direction b, ordered by their sorted index tuples."""
    size = ensure_indexable(ring, n)
    seen: dict[frozenset[Vector], list[Vector]] = {}
    for idx in range(size):
        u = index_point(idx, ring, n)
        pts = line_points(u, b, ring)
        key = frozenset(pts)
        if key not in seen:
            seen[key] = pts
    def index_tuple(line: list[Vector]) -> tuple[int, ...]:
        return tuple(sorted(point_index(x, ring) for x in line))
    return sorted(seen.values(), key=index_tuple)


def _line_base(line: list[Vector], ring: RingSpec) -> Vector:
    return min(line, key=lambda v: point_index(v, ring))


def greedy_kakeya(ring: RingSpec, n: int) -> KakeyaWitness:
    """Deterministic greedy construction.

    Directions are processed in enumeration order; for each, the candidate
    line maximizing overlap with the points collected so far wins, ties going
    to the line whose minimal element has the smallest point_index.  The
    assigned base point is that minimal element.
    """
    points: set[Vector] = set()
    assignment: dict[Vector, Vector] = {}
    for b in enumerate_projective(ring, n):
        best_line = None
        best_key = None
        for line in _distinct_lines(b, ring, n):
            overlap = sum(1 for x in line if x in points)
            min_idx = min(point_index(x, ring) for x in line)
            key = (-overlap, min_idx)
            if best_key is None or key < best_key:
                best_key, best_line = key, line
        points.update(best_line)
        assignment[b] = _line_base(best_line, ring)
    return KakeyaWitness(ring=ring, n=n, points=frozenset(points), assignment=assignment)


@dataclass(frozen=True)
class ExactMinResult:
    witness: KakeyaWitness
    size: int
    optimal: bool


def exact_min_kakeya(
    ring: RingSpec, n: int, budget: int = DEFAULT_SEARCH_BUDGET
) -> ExactMinResult:
    """Minimum-cardinality union of one line per direction, by exhaustive search.

    Any Kakeya set contains such a union, so the minimum over unions is the
    true minimum Kakeya size.  Branch-and-bound pruning (a partial union at
    least as large as the best complete one cannot improve) preserves
    exhaustiveness, so the result is always optimal when the search runs.
    """
    directions = enumerate_projective(ring, n)
    candidates = [_distinct_lines(b, ring, n) for b in directions]
    space = 1
    for cand in candidates:
        space *= len(cand)
        if space > budget:
            raise BudgetExceededError(
                f"assignment space exceeds budget of {budget} (needs {space} or more)"
            )

    best_lines: list[list[Vector]] | None = None
    best_size = ensure_indexable(ring, n) + 1
    chosen: list[list[Vector]] = []

    def dfs(i: int, union: set[Vector]) -> None:
        nonlocal best_lines, best_size
        if len(union) >= best_size:
            return
        if i == len(directions):
            best_size = len(union)
            best_lines = list(chosen)
            return
        for line in candidates[i]:
            added = [x for x in line if x not in union]
            union.update(added)
            chosen.append(line)
            dfs(i + 1, union)
            chosen.pop()
            union.difference_update(added)

    dfs(0, set())
    assert best_lines is not None
    points: set[Vector] = set()
    assignment: dict[Vector, Vector] = {}
    for b, line in zip(directions, best_lines):
        points.update(line)
        assignment[b] = _line_base(line, ring)
    witness = KakeyaWitness(
        ring=ring, n=n, points=frozenset(points), assignment=assignment
    )
    return ExactMinResult(witness=witness, size=len(points), optimal=True)


def witness_to_dict(witness: KakeyaWitness) -> dict:
    ring = witness.ring
    return {
        "p": ring.p,
        "k": ring.k,
        "n": witness.n,
        "lines": [
            {"b": list(b), "u": list(u)} for b, u in witness.assignment.items()
        ],
        "extra_points": [list(v) for v in witness.extra_points()],
    }


def save_witness(witness: KakeyaWitness, path: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fp:
        json.dump(witness_to_dict(witness), fp, indent=2, sort_keys=True)
        fp.write("\n")


def parse_witness_dict(data: dict) -> KakeyaWitness:
    """Schema-check a witness dict and rebuild it without verification."""
    try:
        ring = make_ring(int(data["p"]), int(data["k"]))
        n = int(data["n"])
        ensure_indexable(ring, n)
        lines = data["lines"]
        extra = data.get("extra_points", [])
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed witness file: {exc!r}") from exc
    q = ring.q
    points: set[Vector] = set()
    assignment: dict[Vector, Vector] = {}

    def check_vec(raw, what: str) -> Vector:
        vec = tuple(int(x) for x in raw)
        if len(vec) != n or any(not 0 <= x < q for x in vec):
            raise ValueError(f"malformed witness file: bad {what} {raw}")
        return vec

    for entry in lines:
        b = check_vec(entry["b"], "direction")
        u = check_vec(entry["u"], "base point")
        if not is_canonical(b, ring):
            raise ValueError(
                f"malformed witness file: direction {b} is not canonical"
            )
        if b in assignment:
            raise ValueError(f"malformed witness file: duplicate direction {b}")
        assignment[b] = u
        points.update(line_points(u, b, ring))
    points.update(check_vec(v, "extra point") for v in extra)
    ordered = sorted(assignment, key=lambda b: point_index(b, ring))
    return KakeyaWitness(
        ring=ring,
        n=n,
        points=frozenset(points),
        assignment={b: assignment[b] for b in ordered},
    )


def load_witness(path: str) -> KakeyaWitness:
    """Load a witness and re-verify its stored line assignment.

    Raises ValueError for malformed files and WitnessVerificationError when
    the stored lines do not cover every direction.
    """
    with open(path, encoding="utf-8") as fp:
        data = json.load(fp)
    witness = parse_witness_dict(data)
    _validate_witness(witness)
    return witness
