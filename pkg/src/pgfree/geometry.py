"""Vectors, subspaces, flats, and hyperplanes of the binary projective geometry.

Words are plain integers: coordinate i of GF(2)^r is bit i, so vector
addition is XOR and the dot product is the parity of the bitwise AND.
A flat of the geometry is the set of nonzero words of a subspace; it is
stored through the unique reduced-echelon basis of that subspace (pivot =
lowest set bit of a row, rows mutually reduced, sorted by pivot).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Sequence

from .errors import GeometryError
from .pointset import PointSet, check_rank


def dot(a: int, b: int) -> int:
    """Standard dot product of two words: parity of the shared bits."""
    return (a & b).bit_count() & 1


def _reduce_insert(rows: dict[int, int], v: int) -> bool:
    """Insert v into a pivot->row reduced basis; return False if dependent.

    Keeps the full reduced invariant: every pivot bit appears in exactly
    one row, so the basis read off in pivot order is the unique reduced
    echelon form of the span.
    """
    for q, row in rows.items():
        if (v >> q) & 1:
            v ^= row
    if v == 0:
        return False
    p = (v & -v).bit_length() - 1
    for q, other in rows.items():
        if (other >> p) & 1:
            rows[q] = other ^ v
    rows[p] = v
    return True


def echelon_basis(vectors: Iterable[int]) -> tuple[int, ...]:
    """The canonical reduced-echelon basis of the span of the given words."""
    rows: dict[int, int] = {}
    for v in vectors:
        _reduce_insert(rows, v)
    return tuple(rows[p] for p in sorted(rows))


def rank_of(vectors: Iterable[int]) -> int:
    """GF(2) rank of a collection of words; 0 for the empty collection."""
    rows: dict[int, int] = {}
    n = 0
    for v in vectors:
        if _reduce_insert(rows, v):
            n += 1
    return n


def in_span(basis: Sequence[int], v: int) -> bool:
    """Whether v lies in the span of a reduced-echelon basis."""
    for row in basis:
        p = (row & -row).bit_length() - 1
        if (v >> p) & 1:
            v ^= row
    return v == 0


@dataclass(frozen=True)
class Flat:
    """A flat of the rank-r geometry: the nonzero part of a subspace."""

    ambient_rank: int
    basis: tuple[int, ...] = field(default=())

    def __post_init__(self):
        check_rank(self.ambient_rank)
        top = 1 << self.ambient_rank
        for v in self.basis:
            if not 0 < v < top:
                raise GeometryError(f"basis word {v} is outside the rank-{self.ambient_rank} ambient")
        if tuple(echelon_basis(self.basis)) != tuple(self.basis):
            raise GeometryError("basis is not in canonical reduced-echelon form")

    @property
    def rank(self) -> int:
        return len(self.basis)

    @property
    def corank(self) -> int:
        return self.ambient_rank - self.rank

    @cached_property
    def pivots(self) -> tuple[int, ...]:
        return tuple((v & -v).bit_length() - 1 for v in self.basis)

    def contains(self, word: int) -> bool:
        """Membership of a nonzero word in the flat."""
        return word != 0 and in_span(self.basis, word)

    def to_json_obj(self) -> dict:
        return {"ambient_rank": self.ambient_rank, "basis": list(self.basis)}

    @classmethod
    def from_json_obj(cls, obj) -> "Flat":
        return cls(int(obj["ambient_rank"]), tuple(int(v) for v in obj["basis"]))


def closure(ambient_rank: int, points: Iterable[int]) -> Flat:
    """The flat spanned by the given points; the rank-0 flat for none."""
    check_rank(ambient_rank)
    top = 1 << ambient_rank
    pts = list(points)
    for w in pts:
        if not 0 < w < top:
            raise GeometryError(f"{w} is not a point of a rank-{ambient_rank} geometry")
    return Flat(ambient_rank, echelon_basis(pts))


def flat_points(f: Flat) -> PointSet:
    """All 2^k - 1 nonzero words in the span of the flat's basis."""
    words = [0]
    for b in f.basis:
        words += [w ^ b for w in words]
    bits = 0
    for w in words[1:]:
        bits |= 1 << w
    return PointSet(f.ambient_rank, bits)


def hyperplane_of(ambient_rank: int, gamma: int) -> Flat:
    """The corank-1 flat of words orthogonal to the nonzero normal gamma."""
    check_rank(ambient_rank)
    if gamma == 0:
        raise GeometryError("gamma = 0 does not define a hyperplane")
    if not gamma < (1 << ambient_rank):
        raise GeometryError(f"normal {gamma} is outside the rank-{ambient_rank} ambient")
    return Flat(ambient_rank, kernel_basis(ambient_rank, (gamma,)))


def kernel_basis(ambient_rank: int, dual_rows: Sequence[int]) -> tuple[int, ...]:
    """Canonical basis of the common kernel of reduced-echelon dual rows."""
    rows = echelon_basis(dual_rows)
    pivots = [(v & -v).bit_length() - 1 for v in rows]
    pivot_set = set(pivots)
    out = []
    for f_bit in range(ambient_rank):
        if f_bit in pivot_set:
            continue
        v = 1 << f_bit
        for p, row in zip(pivots, rows):
            if (row >> f_bit) & 1:
                v ^= 1 << p
        out.append(v)
    return echelon_basis(out)


def gaussian_binomial(n: int, k: int) -> int:
    """Number of k-dimensional subspaces of GF(2)^n (product formula)."""
    if k < 0 or k > n:
        return 0
    num = 1
    den = 1
    for i in range(k):
        num *= (1 << (n - i)) - 1
        den *= (1 << (i + 1)) - 1
    assert num % den == 0
    return num // den


def _echelon_dual_bases(ambient_rank: int, c: int) -> Iterator[tuple[int, ...]]:
    """All reduced-echelon bases of c-dimensional subspaces, unordered."""
    from itertools import combinations, product

    for pivots in combinations(range(ambient_rank), c):
        pivot_set = set(pivots)
        free = [[j for j in range(p + 1, ambient_rank) if j not in pivot_set] for p in pivots]
        choices = [range(1 << len(fr)) for fr in free]
        for combo in product(*choices):
            rows = []
            for i, p in enumerate(pivots):
                v = 1 << p
                for bit_idx, j in enumerate(free[i]):
                    if (combo[i] >> bit_idx) & 1:
                        v ^= 1 << j
                rows.append(v)
            yield tuple(rows)


def enumerate_flats(ambient_rank: int, corank: int) -> Iterator[Flat]:
    """Every corank-c flat exactly once, ordered by its canonical dual basis.

    The order is lexicographic on the reduced-echelon basis of the dual
    (normal) space; for corank 1 this is simply gamma = 1, 2, 3, ...
    """
    check_rank(ambient_rank)
    if not 0 <= corank <= ambient_rank:
        raise GeometryError(f"corank must be in 0..{ambient_rank}, got {corank}")
    if corank == 0:
        yield Flat(ambient_rank, echelon_basis(1 << i for i in range(ambient_rank)))
        return
    if corank == 1:
        for gamma in range(1, 1 << ambient_rank):
            yield hyperplane_of(ambient_rank, gamma)
        return
    bases = sorted(_echelon_dual_bases(ambient_rank, corank))
    for rows in bases:
        yield Flat(ambient_rank, kernel_basis(ambient_rank, rows))
