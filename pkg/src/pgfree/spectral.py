"""Exact integer Fourier analysis over GF(2)^r.

The transform of the indicator of a point set E is
coeff(gamma) = sum over words y in E of (-1)^(y . gamma), computed for all
2^r characters at once by the in-place size-doubling butterfly.  All
arithmetic is integer-exact: coefficients fit comfortably in int64 (they
are bounded by |E| <= 2^24) and cube sums are accumulated in Python
integers whenever int64 could overflow.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .errors import HypothesisError, InternalInconsistencyError
from .pointset import PointSet


def fwht_inplace(a: np.ndarray) -> np.ndarray:
    """Size-doubling butterfly; a.size must be a power of two.

    Applying it twice multiplies the input by a.size.
    """
    n = a.size
    h = 1
    while h < n:
        b = a.reshape(-1, 2, h)
        x = b[:, 0, :].copy()
        y = b[:, 1, :]
        b[:, 0, :] = x + y
        b[:, 1, :] = x - y
        h *= 2
    return a


@dataclass(frozen=True)
class Spectrum:
    """All 2^r Fourier coefficients of an indicator, plus the set size."""

    ambient_rank: int
    coeffs: np.ndarray
    set_size: int

    def __post_init__(self):
        c = self.coeffs
        n = 1 << self.ambient_rank
        if c.shape != (n,):
            raise InternalInconsistencyError("coefficient table has the wrong length")
        if int(c[0]) != self.set_size:
            raise InternalInconsistencyError("coeff at 0 must equal the set size")
        if int(np.abs(c).max()) > self.set_size:
            raise InternalInconsistencyError("coefficient exceeds the set size in magnitude")
        # Parseval, exactly: sum of squares == 2^r * |E|.  Squares fit int64
        # since the true total is at most 2^48 at the rank cap.
        if int(np.dot(c, c)) != self.set_size << self.ambient_rank:
            raise InternalInconsistencyError("Parseval identity failed")
        c.flags.writeable = False

    def __getitem__(self, gamma: int) -> int:
        return int(self.coeffs[gamma])


def walsh_hadamard(E: PointSet) -> Spectrum:
    """Exact transform of the indicator of E over all 2^r characters."""
    a = E.indicator().astype(np.int64)
    fwht_inplace(a)
    return Spectrum(E.rank, a, E.size)


def triangle_count_spectral(E: PointSet) -> int:
    """Number of ordered triples in E^3 summing to zero, via the spectrum.

    The triple-convolution identity gives 2^r * T = sum of cubed
    coefficients.
    """
    spec = walsh_hadamard(E)
    c = spec.coeffs
    if E.rank <= 20:
        # |coeff| < 2^20 so cubes stay below 2^60 and the running sum is
        # bounded by max|c| * sum(c^2) <= 2^(3r) <= 2^60: int64-safe.
        total = int(np.sum(c * c * c))
    else:
        total = sum(v * v * v for v in c.tolist())
    if total % (1 << E.rank):
        raise InternalInconsistencyError("cube sum is not divisible by 2^r")
    return total >> E.rank


def triangle_counts_per_hyperplane(E: PointSet) -> np.ndarray:
    """T(E ∩ W_gamma) for every gamma at once, exactly.

    The restricted indicator's coefficient at delta is the average of the
    parent coefficients at delta and delta^gamma, so the restricted cube
    sum expands into the full cube sum plus an XOR-correlation of the
    squared spectrum with the spectrum; the correlation is three more
    butterflies.  Entry 0 is T of E itself.  Only valid when the int64
    bound 4^r |E|^2 < 2^63 holds; callers guard with
    hyperplane_counts_fit_int64.
    """
    r = E.rank
    ind = E.indicator().astype(np.int64)
    c = ind.copy()
    fwht_inplace(c)
    csq = c * c
    fwht_inplace(csq)  # bounded by sum(c^2) = 2^r |E|
    p = (csq * ind) << r  # spectrum of the correlation: WHT(c)=2^r * indicator
    fwht_inplace(p)
    if (p & ((1 << r) - 1)).any():
        raise InternalInconsistencyError("hyperplane correlation is not divisible by 2^r")
    corr = p >> r
    # the int64 guard bounds |c|*sum(c^2) = 2^r |E|^2, so this sum is exact
    s3 = 2 * np.sum(c * c * c, dtype=np.int64)
    scaled = s3 + 6 * corr
    if (scaled & ((1 << (r + 3)) - 1)).any():
        raise InternalInconsistencyError("restricted cube sums are not divisible by 2^(r+3)")
    return scaled >> (r + 3)


def hyperplane_counts_fit_int64(E: PointSet) -> bool:
    return (E.size * E.size) << (2 * E.rank) < (1 << 63)


@dataclass(frozen=True)
class UniformityReport:
    """Least uniformity bound of a set: how evenly hyperplanes split it."""

    alpha: Fraction
    epsilon_min: Fraction
    worst_gamma: int


def uniformity(E: PointSet) -> UniformityReport:
    """epsilon_min = (max nontrivial |coeff|) / 2^r, with its witness.

    Equivalently the least epsilon such that every hyperplane H satisfies
    (|E| - eps*2^r)/2 <= |E ∩ H| <= (|E| + eps*2^r)/2.
    """
    spec = walsh_hadamard(E)
    mags = np.abs(spec.coeffs[1:])
    worst = int(np.argmax(mags)) + 1
    return UniformityReport(
        alpha=E.density,
        epsilon_min=Fraction(int(mags[worst - 1]), 1 << E.rank),
        worst_gamma=worst,
    )


def counting_bound_check(E: PointSet, epsilon: Fraction):
    """Exact check of |T - a^3 4^r| <= eps (a - a^2) 4^r for eps-uniform E.

    Returns (holds, lhs, rhs) as exact rationals.  The inequality is a
    theorem for every eps-uniform set, so a failure is raised as an
    internal inconsistency rather than returned.
    """
    epsilon = Fraction(epsilon)
    rep = uniformity(E)
    if epsilon < rep.epsilon_min:
        raise HypothesisError(
            f"E is not {epsilon}-uniform (needs at least {rep.epsilon_min})",
            witness=rep.worst_gamma,
        )
    t = triangle_count_spectral(E)
    two_2r = 1 << (2 * E.rank)
    alpha = E.density
    lhs = abs(Fraction(t) - alpha**3 * two_2r)
    rhs = epsilon * (alpha - alpha**2) * two_2r
    if lhs > rhs:
        raise InternalInconsistencyError(
            f"counting bound failed on {E.to_compact()}: {lhs} > {rhs}"
        )
    return True, lhs, rhs


@dataclass(frozen=True)
class ClaimQuantities:
    """The cone-size bookkeeping behind the fano-free hyperplane argument."""

    triangle_count: int
    cone_sizes: dict[int, int]
    lower_threshold: Fraction  # 55/256 * 4^r, compared against T
    upper_threshold: Fraction  # 5/16 * 2^r, compared against each |E_p|
    lower_holds: bool  # T > lower_threshold
    upper_holds: bool  # every cone size <= upper_threshold


def claim_quantities(E: PointSet) -> ClaimQuantities:
    """T, all per-point cone sizes, and the two density thresholds.

    Verifies the exact identity sum_p |E_p| = T: each unordered triangle
    contributes a pair of points to exactly three cones.
    """
    t = triangle_count_spectral(E)
    mem = E.membership
    pts = E.points_array
    sizes: dict[int, int] = {}
    for p in pts:
        sizes[int(p)] = int(np.count_nonzero(mem[pts ^ p]))
    if sum(sizes.values()) != t:
        raise InternalInconsistencyError("cone sizes do not sum to the triangle count")
    lower = Fraction(55, 256) * (1 << (2 * E.rank))
    upper = Fraction(5, 16) * (1 << E.rank)
    return ClaimQuantities(
        triangle_count=t,
        cone_sizes=sizes,
        lower_threshold=lower,
        upper_threshold=upper,
        lower_holds=Fraction(t) > lower,
        upper_holds=all(v <= upper for v in sizes.values()),
    )
