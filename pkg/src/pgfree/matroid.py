"""Point-set representations and the matroid they induce.

A set E inside the rank-r geometry represents the simple binary matroid
obtained by restricting the geometry to E.  This module measures that
matroid: its rank, whether it contains a projective subgeometry of a given
rank (with a witness), its triangle count by direct pair enumeration, and
its critical number (the least corank of a flat of the ambient geometry
disjoint from E).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import GeometryError, HypothesisError
from .geometry import Flat, closure, echelon_basis, kernel_basis
from .pointset import PointSet, pointset_from_mask


def matroid_rank(E: PointSet) -> int:
    """Rank of the represented matroid: GF(2) rank of the points of E."""
    from .geometry import _reduce_insert

    rows: dict[int, int] = {}
    n = 0
    for v in E:
        if _reduce_insert(rows, v):
            n += 1
            if n == E.rank:
                break
    return n


@dataclass(frozen=True)
class FreenessWitness:
    """Outcome of a subgeometry search: found=True means E contains a copy."""

    found: bool
    subspace: Optional[Flat]

    def to_json_obj(self) -> dict:
        return {
            "found": self.found,
            "witness_basis": list(self.subspace.basis) if self.subspace else None,
        }


def is_pg_free(E: PointSet, n: int) -> FreenessWitness:
    """Search E for a rank-n subspace all of whose points lie in E.

    found=False iff no such subspace exists, i.e. E is PG(n-1,2)-free.
    The DFS extends a partial independent generating set in ascending word
    order and prunes as soon as one span point falls outside E, so the
    first witness found is the canonically least generating tuple.
    """
    if n < 1:
        raise GeometryError("subgeometry rank must be >= 1")
    if n > E.rank or E.size < (1 << n) - 1:
        return FreenessWitness(False, None)
    bits = E.bits
    pts = E.points
    gens: list[int] = []

    def dfs(span_pts: list[int], span_set: frozenset[int], start: int) -> bool:
        if len(gens) == n:
            return True
        for i in range(start, len(pts)):
            p = pts[i]
            if p in span_set:
                continue
            for s in span_pts:
                if not (bits >> (s ^ p)) & 1:
                    break
            else:
                gens.append(p)
                layer = [p] + [s ^ p for s in span_pts]
                if dfs(span_pts + layer, span_set | frozenset(layer), i + 1):
                    return True
                gens.pop()
        return False

    if dfs([], frozenset(), 0):
        return FreenessWitness(True, closure(E.rank, gens))
    return FreenessWitness(False, None)


_NAIVE_PYTHON_CUTOFF = 96


def triangle_count_naive(E: PointSet) -> int:
    """Ordered triples (x, y, z) in E^3 with x ^ y ^ z = 0, by the pair loop.

    For every ordered pair of points the third point is forced, so the
    count is the number of ordered pairs (x, y) with x ^ y in E; the x = y
    diagonal contributes nothing since 0 is never a point.
    """
    pts = E.points
    m = len(pts)
    if m < 3:
        return 0
    if m <= _NAIVE_PYTHON_CUTOFF:
        bits = E.bits
        t = 0
        for i in range(m):
            x = pts[i]
            for j in range(i + 1, m):
                if (bits >> (x ^ pts[j])) & 1:
                    t += 1
        return 2 * t
    arr = E.points_array
    mem = E.membership
    total = 0
    for x in arr:
        total += int(np.count_nonzero(mem[arr ^ x]))
    return total


def _parity(words: np.ndarray, gamma: int) -> np.ndarray:
    return (np.bitwise_count(words & np.int64(gamma)) & 1).astype(np.int64)


def _quotient_by_support(E: PointSet, support_basis: tuple[int, ...]) -> PointSet:
    """Re-coordinatize E along independent dual functionals.

    When the Fourier support of the indicator spans only d < r dimensions,
    E is a union of cosets of the orthogonal (r-d)-dimensional stabilizer
    subspace; the image of E under the functionals is a rank-d set with
    the same critical number.
    """
    d = len(support_basis)
    arr = E.points_array
    new = np.zeros(arr.shape, dtype=np.int64)
    for i, g in enumerate(support_basis):
        new |= _parity(arr, g) << i
    mask = np.zeros(1 << d, dtype=np.uint8)
    mask[new] = 1
    return pointset_from_mask(d, mask)


def max_flat_rank_inside(C: PointSet) -> int:
    """Largest rank of a flat all of whose points lie in C.

    Depth-first search over canonical basis towers: each flat is reached
    exactly once by always extending with the minimum point of the new
    coset layer.  A branch is cut when the remaining candidate pool cannot
    supply enough coset minima to beat the incumbent.
    """
    if C.size == 0:
        return 0
    mem = C.membership
    best = 0

    def dfs(span_pts: list[int], cands: np.ndarray, depth: int) -> None:
        nonlocal best
        if depth > best:
            best = depth
        while cands.size:
            if depth + (int(cands.size) + 1).bit_length() - 1 <= best:
                return
            q = int(cands[0])
            cands = cands[1:]
            layer = [q] + [q ^ s for s in span_pts]
            child = cands
            for t in layer:
                if child.size == 0:
                    break
                x = child ^ np.int64(t)
                child = child[mem[x] & (x > child)]
            dfs(span_pts + layer, child, depth + 1)

    dfs([], C.points_array, 0)
    return best


def critical_number(E: PointSet) -> int:
    """Least corank of a flat of the ambient geometry disjoint from E.

    Computed as r minus the maximum rank of a flat inside the complement,
    after first quotienting out the stabilizer subspace of E (read off the
    Fourier support) so that structured sets collapse to a small ambient.
    """
    if E.size == 0:
        return 0
    from .spectral import walsh_hadamard

    spec = walsh_hadamard(E)
    support = (np.nonzero(spec.coeffs[1:])[0] + 1).tolist()
    support_basis = echelon_basis(int(g) for g in support)
    if len(support_basis) < E.rank:
        E = _quotient_by_support(E, support_basis)
    return E.rank - max_flat_rank_inside(E.complement())


def check_corollary_1_3(E: PointSet, n: int) -> bool:
    """For PG(n-1,2)-free E denser than (1 - 3/2^n) 2^r: is chi in {n-1, n}?

    Raises HypothesisError naming the failing hypothesis otherwise.
    """
    if n < 2 or E.rank < n:
        raise HypothesisError(f"requires r >= n >= 2, got r={E.rank}, n={n}")
    witness = is_pg_free(E, n)
    if witness.found:
        raise HypothesisError(f"E is not PG({n - 1},2)-free", witness=witness.subspace)
    threshold = (1 - Fraction(3, 1 << n)) * (1 << E.rank)
    if Fraction(E.size) <= threshold:
        raise HypothesisError(f"|E| = {E.size} is not above the density threshold {threshold}")
    return critical_number(E) in (n - 1, n)


@dataclass(frozen=True)
class CoordinateMap:
    """Invertible re-coordinatization of a flat onto a fresh small ambient.

    Coordinates in the subspace are the coefficients over the flat's
    canonical basis; since that basis is reduced-echelon, coefficient i of
    a member word is simply its bit at the i-th pivot.
    """

    flat: Flat

    def project(self, word: int) -> int:
        """Parent word (must lie in the flat) -> subspace word."""
        sub = 0
        for i, p in enumerate(self.flat.pivots):
            if (word >> p) & 1:
                sub |= 1 << i
        return sub

    def lift(self, sub_word: int) -> int:
        """Subspace word -> parent word."""
        w = 0
        for i, b in enumerate(self.flat.basis):
            if (sub_word >> i) & 1:
                w ^= b
        return w

    def lift_flat(self, sub_flat: Flat) -> Flat:
        if sub_flat.ambient_rank != self.flat.rank:
            raise GeometryError("flat does not live in the restricted ambient")
        return closure(self.flat.ambient_rank, [self.lift(v) for v in sub_flat.basis])

    def lift_points(self, sub: PointSet) -> PointSet:
        if sub.rank != self.flat.rank:
            raise GeometryError("point set does not live in the restricted ambient")
        return PointSet.from_points(self.flat.ambient_rank, [self.lift(w) for w in sub])


def restrict_to_flat(E: PointSet, f: Flat) -> tuple[PointSet, CoordinateMap]:
    """Re-coordinatize E ∩ f into an ambient of rank f.rank.

    Returns the restricted set together with the map that lifts witnesses
    back to the original ambient.
    """
    if f.rank < 1:
        raise GeometryError("restriction requires a flat of rank >= 1")
    if f.ambient_rank != E.rank:
        raise GeometryError("flat and point set live in different ambients")
    arr = E.points_array
    keep = np.ones(arr.shape, dtype=bool)
    for g in kernel_basis(f.ambient_rank, f.basis):
        keep &= _parity(arr, g) == 0
    members = arr[keep]
    sub = np.zeros(members.shape, dtype=np.int64)
    for i, p in enumerate(f.pivots):
        sub |= ((members >> np.int64(p)) & 1) << i
    mask = np.zeros(1 << f.rank, dtype=np.uint8)
    mask[sub] = 1
    return pointset_from_mask(f.rank, mask), CoordinateMap(f)


@dataclass(frozen=True)
class AnalysisReport:
    """One-stop exact summary of a point set."""

    size: int
    matroid_rank: int
    density: Fraction
    pg_freeness: dict[int, FreenessWitness]
    critical_number: int
    triangle_count_ordered: int
    epsilon_min: Fraction
    flat_search: Optional[object]  # (level, StructureResult) when computed
    degenerate: bool

    def to_json_obj(self) -> dict:
        from . import FORMAT_VERSION, __version__

        flat_search = None
        if self.flat_search is not None:
            level, result = self.flat_search
            flat_search = {"level": level, **result.to_json_obj()}
        return {
            "format_version": FORMAT_VERSION,
            "library_version": __version__,
            "size": self.size,
            "matroid_rank": self.matroid_rank,
            "density": {"num": self.density.numerator, "den": self.density.denominator},
            "pg_freeness": {str(n): w.to_json_obj() for n, w in sorted(self.pg_freeness.items())},
            "critical_number": self.critical_number,
            "triangle_count_ordered": self.triangle_count_ordered,
            "epsilon_min": {
                "num": self.epsilon_min.numerator,
                "den": self.epsilon_min.denominator,
            },
            "flat_search": flat_search,
            "degenerate": self.degenerate,
        }
