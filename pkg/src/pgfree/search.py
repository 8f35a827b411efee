"""Structural searches: cones, hyperplane bounds, and triangle-free flats.

The headline operation finds a triangle-free corank-(n-2) flat inside a
dense PG(n-1,2)-free set, either by descending one hyperplane at a time
(each step keeping the intersection free of one smaller subgeometry) or by
exhaustively scanning all flats of the target corank.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional

import numpy as np

from .errors import GeometryError, HypothesisError, InternalInconsistencyError
from .geometry import Flat, closure, enumerate_flats, flat_points, hyperplane_of
from .matroid import (
    CoordinateMap,
    is_pg_free,
    matroid_rank,
    restrict_to_flat,
    triangle_count_naive,
)
from .pointset import PointSet, pointset_from_mask


def _parity(words: np.ndarray, gamma: int) -> np.ndarray:
    return np.bitwise_count(words & np.int64(gamma)) & 1


def _subset_from_words(rank: int, words: np.ndarray) -> PointSet:
    mask = np.zeros(1 << rank, dtype=np.uint8)
    mask[words] = 1
    return pointset_from_mask(rank, mask)


def cone(E: PointSet, p: int) -> PointSet:
    """Points of E - {p} lying on a line of E through p: x with x^p in E."""
    if p not in E:
        raise GeometryError(f"{p} is not a point of the set")
    if E.size <= 64:
        bits = E.bits
        return PointSet.from_points(
            E.rank, [x for x in E.points if x != p and (bits >> (x ^ p)) & 1]
        )
    arr = E.points_array
    return _subset_from_words(E.rank, arr[E.membership[arr ^ np.int64(p)]])


def hyperplane_intersection(E: PointSet, gamma: int) -> PointSet:
    """E ∩ W_gamma in the parent coordinates."""
    if gamma == 0:
        raise GeometryError("gamma = 0 does not define a hyperplane")
    arr = E.points_array
    return _subset_from_words(E.rank, arr[_parity(arr, gamma) == 0])


@dataclass(frozen=True)
class ConeLemmaReport:
    """Measured conclusions of the cone lemma at one apex."""

    point: int
    cone_size: int
    size_bound: int  # 2|E| - 2^r, possibly non-positive
    size_slack: int
    freeness_level: int  # the cone was verified PG(freeness_level-1,2)-free


def check_cone_lemma(E: PointSet, p: int, n: int) -> ConeLemmaReport:
    """Verify both cone-lemma conclusions for a PG(n-1,2)-free set.

    The cone must be PG(n-2,2)-free and at least 2|E| - 2^r large; since
    both are proven consequences, a failure raises an internal
    inconsistency rather than returning.
    """
    if n < 3:
        raise HypothesisError("cone lemma needs n >= 3")
    if p not in E:
        raise HypothesisError(f"apex {p} is not a point of the set")
    witness = is_pg_free(E, n)
    if witness.found:
        raise HypothesisError(f"E is not PG({n - 1},2)-free", witness=witness.subspace)
    ep = cone(E, p)
    bound = 2 * E.size - (1 << E.rank)
    if ep.size < bound:
        raise InternalInconsistencyError(
            f"cone at {p} has {ep.size} points, below the bound {bound}"
        )
    if is_pg_free(ep, n - 1).found:
        raise InternalInconsistencyError(
            f"cone at {p} contains a PG({n - 2},2) despite the freeness hypothesis"
        )
    return ConeLemmaReport(
        point=p,
        cone_size=ep.size,
        size_bound=bound,
        size_slack=ep.size - bound,
        freeness_level=n - 1,
    )


@dataclass(frozen=True)
class HyperplaneBoundReport:
    """Measured conclusions of the hyperplane-size bounds."""

    outside_size: int
    outside_bound: Fraction  # (1 - 1/2^(n-1)) 2^(r-1)
    outside_slack: Fraction
    dense_hypothesis: bool  # |E| > (1 - 3/2^n) 2^r
    inside_size: int
    inside_bound: Fraction  # (1 - 2/2^(n-1)) 2^(r-1), strict lower bound
    inside_slack: Optional[Fraction]


def check_lemma_hsize(E: PointSet, H: Flat, n: int) -> HyperplaneBoundReport:
    """Bounds on |E \\ H| and |E ∩ H| when E ∩ H holds a PG(n-2,2).

    Hypotheses (all checked): H is a hyperplane, E is PG(n-1,2)-free, and
    E ∩ H is NOT PG(n-2,2)-free.  The first bound always follows; the
    second additionally needs the density hypothesis.
    """
    if n < 3 or E.rank < n:
        raise HypothesisError(f"requires r >= n >= 3, got r={E.rank}, n={n}")
    if H.ambient_rank != E.rank or H.corank != 1:
        raise HypothesisError("H must be a hyperplane of the same ambient")
    witness = is_pg_free(E, n)
    if witness.found:
        raise HypothesisError(f"E is not PG({n - 1},2)-free", witness=witness.subspace)
    inside = E.intersection(flat_points(H))
    if not is_pg_free(inside, n - 1).found:
        raise HypothesisError(f"E ∩ H is PG({n - 2},2)-free: the lemma does not apply")
    outside = E.size - inside.size
    half = 1 << (E.rank - 1)
    outside_bound = (1 - Fraction(1, 1 << (n - 1))) * half
    if Fraction(outside) > outside_bound:
        raise InternalInconsistencyError(
            f"|E \\ H| = {outside} exceeds the proven bound {outside_bound}"
        )
    dense = Fraction(E.size) > (1 - Fraction(3, 1 << n)) * (1 << E.rank)
    inside_bound = (1 - Fraction(2, 1 << (n - 1))) * half
    inside_slack = None
    if dense:
        if Fraction(inside.size) <= inside_bound:
            raise InternalInconsistencyError(
                f"|E ∩ H| = {inside.size} is not above the proven bound {inside_bound}"
            )
        inside_slack = Fraction(inside.size) - inside_bound
    return HyperplaneBoundReport(
        outside_size=outside,
        outside_bound=outside_bound,
        outside_slack=outside_bound - outside,
        dense_hypothesis=dense,
        inside_size=inside.size,
        inside_bound=inside_bound,
        inside_slack=inside_slack,
    )


def _members_have_triangle(members: np.ndarray, rank: int) -> bool:
    """Early-exit probe for a triangle among the given words; equivalent to
    is_pg_free(set, 2).found but without building the point set."""
    if members.size < 3:
        return False
    mem = np.zeros(1 << rank, dtype=bool)
    mem[members] = True
    for x in members:
        if mem[members ^ x].any():
            return True
    return False


def _triangle_free_gammas(E: PointSet) -> Optional[np.ndarray]:
    """Normals of all hyperplanes with triangle-free intersection, ascending,
    or None when the int64 spectral route is unavailable."""
    from .spectral import hyperplane_counts_fit_int64, triangle_counts_per_hyperplane

    if not hyperplane_counts_fit_int64(E):
        return None
    per = triangle_counts_per_hyperplane(E)
    return np.nonzero(per[1:] == 0)[0] + 1


def find_pg_free_hyperplane(
    E: PointSet, n: int
) -> Optional[tuple[int, tuple[PointSet, CoordinateMap]]]:
    """First hyperplane (normals scanned ascending) whose intersection with
    E is PG(n-2,2)-free, together with the rank-(r-1) restriction.

    Absence is a legitimate outcome below the density threshold, so None is
    returned rather than raising.
    """
    if n < 3:
        raise GeometryError("hyperplane descent needs n >= 3")
    if E.rank < n:
        raise GeometryError(f"ambient rank {E.rank} is below n = {n}")
    if n == 3:
        gammas = _triangle_free_gammas(E)
        if gammas is not None:
            if gammas.size == 0:
                return None
            gamma = int(gammas[0])
            return gamma, restrict_to_flat(E, hyperplane_of(E.rank, gamma))
    arr = E.points_array
    for gamma in range(1, 1 << E.rank):
        members = arr[_parity(arr, gamma) == 0]
        if n == 3:
            free = not _members_have_triangle(members, E.rank)
        else:
            free = not is_pg_free(_subset_from_words(E.rank, members), n - 1).found
        if free:
            restriction = restrict_to_flat(E, hyperplane_of(E.rank, gamma))
            return gamma, restriction
    return None


@dataclass(frozen=True)
class StructureResult:
    """Outcome of a triangle-free corank-(n-2) flat search."""

    found: bool
    flat: Optional[Flat]
    intersection_size: int
    density_claim_holds: bool  # |E ∩ K| > 2^rank(K) / 4

    def to_json_obj(self) -> dict:
        return {
            "found": self.found,
            "flat_basis": list(self.flat.basis) if self.flat else None,
            "intersection_size": self.intersection_size,
            "density_claim_holds": self.density_claim_holds,
        }


@dataclass(frozen=True)
class DescentStep:
    """One level of the hyperplane descent."""

    level: int
    normal: int  # in the coordinates of the ambient at this level
    ambient_rank: int
    size_before: int
    size_after: int
    hypothesis_ok: bool  # density and freeness held at this level

    def to_json_obj(self) -> dict:
        return {
            "level": self.level,
            "normal": self.normal,
            "ambient_rank": self.ambient_rank,
            "size_before": self.size_before,
            "size_after": self.size_after,
            "hypothesis_ok": self.hypothesis_ok,
        }


@dataclass(frozen=True)
class DescentTrace:
    """Record of the descent: one step per level, plus the lifted flat."""

    steps: tuple[DescentStep, ...]
    final_flat: Optional[Flat]
    final_restriction_size: int
    fallback_level: Optional[int] = field(default=None)

    def to_json_obj(self) -> dict:
        return {
            "steps": [s.to_json_obj() for s in self.steps],
            "final_flat_basis": list(self.final_flat.basis) if self.final_flat else None,
            "final_restriction_size": self.final_restriction_size,
            "fallback_level": self.fallback_level,
        }


def _result_for(E: PointSet, flat: Optional[Flat], intersection_size: int) -> StructureResult:
    if flat is None:
        return StructureResult(False, None, 0, False)
    return StructureResult(
        found=True,
        flat=flat,
        intersection_size=intersection_size,
        density_claim_holds=4 * intersection_size > (1 << flat.rank),
    )


def _exhaustive_flat_search(E: PointSet, n: int) -> StructureResult:
    """Scan every corank-(n-2) flat for a triangle-free intersection,
    keeping the one of maximum |E ∩ K| (first in canonical order on ties)."""
    best_flat = None
    best_size = -1
    if n == 3:
        # corank-1 scan: intersection sizes come straight off the spectrum
        best_gamma = None
        gammas = _triangle_free_gammas(E)
        if gammas is not None:
            if gammas.size:
                from .spectral import walsh_hadamard

                coeffs = walsh_hadamard(E).coeffs
                sizes = (E.size + coeffs[gammas]) >> 1
                at = int(np.argmax(sizes))  # first index on ties: least gamma
                best_gamma = int(gammas[at])
                best_size = int(sizes[at])
        else:
            arr = E.points_array
            for gamma in range(1, 1 << E.rank):
                members = arr[_parity(arr, gamma) == 0]
                if members.size > best_size and not _members_have_triangle(members, E.rank):
                    best_gamma = gamma
                    best_size = int(members.size)
        if best_gamma is not None:
            best_flat = hyperplane_of(E.rank, best_gamma)
    else:
        for f in enumerate_flats(E.rank, n - 2):
            inter = E.intersection(flat_points(f))
            if inter.size > best_size and not is_pg_free(inter, 2).found:
                best_flat = f
                best_size = inter.size
    if best_flat is None:
        return _result_for(E, None, 0)
    return _result_for(E, best_flat, best_size)


def _level_hypotheses_hold(E: PointSet, level: int) -> bool:
    dense = Fraction(E.size) > (1 - Fraction(3, 1 << level)) * (1 << E.rank)
    return dense and not is_pg_free(E, level).found


def find_triangle_free_flat(
    E: PointSet, n: int, strategy: str = "descent"
) -> tuple[StructureResult, Optional[DescentTrace]]:
    """Search for a triangle-free corank-(n-2) flat meeting E densely.

    descent: iterate the PG-free hyperplane step at levels n, n-1, ..., 3,
    re-validating the density/freeness hypotheses at each level and falling
    back to an exhaustive scan at the level where the step fails.
    exhaustive: scan all corank-(n-2) flats, maximizing |E ∩ K|.
    """
    if n < 2:
        raise GeometryError("level n must be >= 2")
    if E.rank < n:
        raise GeometryError(f"ambient rank {E.rank} is below n = {n}")
    if strategy == "exhaustive":
        return _exhaustive_flat_search(E, n), None
    if strategy != "descent":
        raise GeometryError(f"unknown strategy {strategy!r}")

    full = closure(E.rank, [1 << i for i in range(E.rank)])
    if n == 2:
        if is_pg_free(E, 2).found:
            return _result_for(E, None, 0), None
        return (
            _result_for(E, full, E.size),
            DescentTrace(steps=(), final_flat=full, final_restriction_size=E.size),
        )

    current = E
    maps: list[CoordinateMap] = []
    steps: list[DescentStep] = []

    def lift_flat_chain(sub_flat: Flat) -> Flat:
        f = sub_flat
        for cmap in reversed(maps):
            f = cmap.lift_flat(f)
        return f

    for level in range(n, 2, -1):
        hyp_ok = _level_hypotheses_hold(current, level)
        step = find_pg_free_hyperplane(current, level)
        if step is None:
            # The guaranteed step failed here; fall back to scanning the
            # current restriction exhaustively.  At level 3 the hyperplane
            # scan already was that corank-1 scan, so nothing can be found.
            if level == 3:
                return _result_for(E, None, 0), DescentTrace(
                    steps=tuple(steps),
                    final_flat=None,
                    final_restriction_size=0,
                    fallback_level=level,
                )
            fallback = _exhaustive_flat_search(current, level)
            if not fallback.found:
                return _result_for(E, None, 0), DescentTrace(
                    steps=tuple(steps),
                    final_flat=None,
                    final_restriction_size=0,
                    fallback_level=level,
                )
            lifted = lift_flat_chain(fallback.flat)
            trace = DescentTrace(
                steps=tuple(steps),
                final_flat=lifted,
                final_restriction_size=fallback.intersection_size,
                fallback_level=level,
            )
            return _result_for(E, lifted, fallback.intersection_size), trace
        gamma, (sub, cmap) = step
        steps.append(
            DescentStep(
                level=level,
                normal=gamma,
                ambient_rank=current.rank,
                size_before=current.size,
                size_after=sub.size,
                hypothesis_ok=hyp_ok,
            )
        )
        current = sub
        maps.append(cmap)

    final_local = closure(current.rank, [1 << i for i in range(current.rank)])
    lifted = lift_flat_chain(final_local)
    trace = DescentTrace(
        steps=tuple(steps),
        final_flat=lifted,
        final_restriction_size=current.size,
    )
    return _result_for(E, lifted, current.size), trace


@dataclass(frozen=True)
class ReconcileReport:
    """Geometry/matroid agreement for one hyperplane."""

    condition: Optional[str]  # "size", "free-dense", or None (report only)
    matroid_rank_full: int
    matroid_rank_intersection: int
    asserted: bool


def reconcile_hyperplane(E: PointSet, H: Flat, n: int) -> ReconcileReport:
    """Check that E spans the ambient and E ∩ H drops rank by exactly one.

    Asserted when |E| >= (3/4) 2^r, or when E is PG(n-1,2)-free with
    |E| > (1 - 3/2^n) 2^r and n >= 3; outside both conditions the measured
    ranks are reported without asserting.
    """
    if H.ambient_rank != E.rank or H.corank != 1:
        raise GeometryError("H must be a hyperplane of the same ambient")
    r = E.rank
    size_cond = 4 * E.size >= 3 * (1 << r)
    free_dense_cond = (
        n >= 3
        and r >= n
        and Fraction(E.size) > (1 - Fraction(3, 1 << n)) * (1 << r)
        and not is_pg_free(E, n).found
    )
    rank_full = matroid_rank(E)
    rank_inter = matroid_rank(E.intersection(flat_points(H)))
    condition = "size" if size_cond else ("free-dense" if free_dense_cond else None)
    asserted = condition is not None
    if asserted and not (rank_full == r and rank_inter == r - 1):
        raise InternalInconsistencyError(
            f"rank reconciliation failed on {E.to_compact()}: "
            f"r(M)={rank_full}, r(E∩H)={rank_inter}"
        )
    return ReconcileReport(
        condition=condition,
        matroid_rank_full=rank_full,
        matroid_rank_intersection=rank_inter,
        asserted=asserted,
    )


def cone_identity_holds(E: PointSet) -> bool:
    """Sum of all cone sizes equals the ordered triangle count."""
    total = sum(cone(E, p).size for p in E)
    return total == triangle_count_naive(E)
