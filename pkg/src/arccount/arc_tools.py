"""Arc predicates, collinear-triple counting, and the supersaturation bound.

The central quantitative fact: once a point set P in AG(2, q) has
|P| >= k(q+1) + x + 1 points (0 <= x < q+1), every point of P sits on at
least C(k,2)(q+1) + kx collinear triples inside P.  ``supersat_bound``
computes that threshold, ``triples_through_point`` the exact count, and
``supersat_check`` sweeps subsets looking for violations (there are none;
the sweep exists to say so with a machine-checkable zero).
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb

import numpy as np

from .plane_geometry import PlaneIndex, Point


@dataclass(frozen=True)
class PointSet:
    """An immutable subset of the q^2 plane points, stored as a bitset."""

    bits: int
    size: int = -1

    def __post_init__(self) -> None:
        if self.bits < 0:
            raise ValueError("negative bitset")
        object.__setattr__(self, "size", self.bits.bit_count())

    @classmethod
    def from_indices(cls, indices) -> "PointSet":
        bits = 0
        for i in indices:
            bits |= 1 << i
        return cls(bits)

    @classmethod
    def empty(cls) -> "PointSet":
        return cls(0)

    @classmethod
    def full(cls, n_points: int) -> "PointSet":
        return cls((1 << n_points) - 1)

    def indices(self) -> tuple[int, ...]:
        out = []
        bits = self.bits
        while bits:
            low = bits & -bits
            out.append(low.bit_length() - 1)
            bits ^= low
        return tuple(out)

    def __contains__(self, index: int) -> bool:
        return index >= 0 and (self.bits >> index) & 1 == 1

    def __len__(self) -> int:
        return self.size

    def __or__(self, other: "PointSet") -> "PointSet":
        return PointSet(self.bits | other.bits)

    def __and__(self, other: "PointSet") -> "PointSet":
        return PointSet(self.bits & other.bits)

    def __sub__(self, other: "PointSet") -> "PointSet":
        return PointSet(self.bits & ~other.bits)

    def with_point(self, index: int) -> "PointSet":
        return PointSet(self.bits | (1 << index))

    def isdisjoint(self, other: "PointSet") -> bool:
        return self.bits & other.bits == 0


@dataclass(frozen=True)
class SupersatDecomposition:
    """A size n written as n = k(q+1) + x + 1 with 0 <= x < q+1.

    Carries q so the arithmetic identity is self-checkable.
    """

    q: int
    k: int
    x: int
    n: int

    def __post_init__(self) -> None:
        if self.k < 0 or not 0 <= self.x < self.q + 1:
            raise ValueError(f"invalid decomposition k={self.k}, x={self.x}")
        if self.n < self.k * (self.q + 1) + self.x + 1:
            raise ValueError(f"n={self.n} too small for k={self.k}, x={self.x}")


def _check_universe(P: PointSet, idx: PlaneIndex) -> None:
    if P.bits >> idx.n_points:
        raise ValueError("point set has bits outside the plane")


def is_arc(P: PointSet, idx: PlaneIndex) -> bool:
    """True iff no line meets P in three or more points."""
    _check_universe(P, idx)
    if P.size <= 2:
        return True
    bits = P.bits
    seen = 0
    rest = bits
    while rest:
        low = rest & -rest
        rest ^= low
        for lid in idx.lines_through_point[low.bit_length() - 1]:
            mask = 1 << lid
            if seen & mask:
                continue
            seen |= mask
            if (idx.points_on_line[lid] & bits).bit_count() >= 3:
                return False
    return True


def count_collinear_triples(P: PointSet, idx: PlaneIndex) -> int:
    """Sum over all lines L of C(|L intersect P|, 3)."""
    _check_universe(P, idx)
    bits = P.bits
    total = 0
    for line_bits in idx.points_on_line:
        lam = (line_bits & bits).bit_count()
        if lam >= 3:
            total += comb(lam, 3)
    return total


def triples_through_point(P: PointSet, v: Point | int, idx: PlaneIndex) -> int:
    """Collinear triples inside P that contain the point v.

    Equals the number of pairs {x, y} of P minus v with v, x, y collinear,
    computed as the sum over the q+1 lines through v of C(lambda - 1, 2)
    with lambda the line's intersection size with P.
    """
    _check_universe(P, idx)
    v_index = v if isinstance(v, int) else v.index
    if v_index not in P:
        raise ValueError("point not in the set")
    bits = P.bits
    total = 0
    for lid in idx.lines_through_point[v_index]:
        lam = (idx.points_on_line[lid] & bits).bit_count()
        if lam >= 3:
            total += comb(lam - 1, 2)
    return total


def supersat_bound(
    q: int, n: int, k: int | None = None, x: int | None = None
) -> tuple[SupersatDecomposition, int]:
    """Lower bound C(k,2)(q+1) + kx on triples through each point.

    Defaults to the maximal decomposition k = (n-1) // (q+1), which gives
    the strongest bound; an explicit valid (k, x) may be supplied instead.
    """
    if not 1 <= n <= q * q:
        raise ValueError(f"set size {n} out of range for q={q}")
    if (k is None) != (x is None):
        raise ValueError("k and x must be supplied together")
    if k is None:
        k = (n - 1) // (q + 1)
        x = n - 1 - k * (q + 1)
    decomp = SupersatDecomposition(q=q, k=k, x=x, n=n)
    return decomp, comb(k, 2) * (q + 1) + k * x


def parabola_arc(idx: PlaneIndex) -> PointSet:
    """The arc {(x, x^2)} of size q, the standard explicit witness."""
    spec = idx.spec
    bits = 0
    for a in range(idx.q):
        bits |= 1 << idx.point_index(a, spec.mul_i(a, a))
    return PointSet(bits)


# -- batch supersaturation verification ---------------------------------------


def _incidence_matrix(idx: PlaneIndex) -> np.ndarray:
    m = np.zeros((idx.n_lines, idx.n_points), dtype=np.float64)
    for lid, bits in enumerate(idx.points_on_line):
        while bits:
            low = bits & -bits
            m[lid, low.bit_length() - 1] = 1.0
            bits ^= low
    return m


def _check_subsets_batch(inc: np.ndarray, subsets: np.ndarray, bound: int) -> tuple[int, int]:
    """(violations, min_slack) for a batch of same-size subsets.

    ``subsets`` is a 0/1 indicator matrix, one subset per row.  Per-line
    occupancies come from one matmul against the incidence matrix; the
    per-point triple counts from a second.  All values stay far below
    2^53, so float64 matmuls are exact.
    """
    lam = subsets @ inc.T
    shifted = lam - 1.0
    pair_counts = np.where(shifted >= 2.0, shifted * (shifted - 1.0) / 2.0, 0.0)
    per_point = pair_counts @ inc
    member = subsets > 0.5
    slack = per_point[member].astype(np.int64) - bound
    if slack.size == 0:
        return 0, 0
    return int((slack < 0).sum()), int(slack.min())


def supersat_check(
    idx: PlaneIndex,
    trials: int,
    seed: int,
    exhaustive: bool | None = None,
) -> dict:
    """Sweep subsets of the plane for supersaturation violations.

    Exhaustive mode (default for q^2 <= 9 points... i.e. q <= 3) walks
    every nonempty subset; otherwise each size 1..q^2 gets ``trials``
    random subsets.  Returns {"violations", "min_slack", "trials"};
    min_slack is the worst observed margin (actual minus bound), so a
    nonnegative min_slack certifies zero violations.
    """
    n_points = idx.n_points
    if exhaustive is None:
        exhaustive = n_points <= 12
    q = idx.q
    violations = 0
    min_slack: int | None = None
    checked = 0
    if exhaustive:
        for bits in range(1, 1 << n_points):
            pset = PointSet(bits)
            _, bound = supersat_bound(q, pset.size)
            checked += 1
            for v_index in pset.indices():
                slack = triples_through_point(pset, v_index, idx) - bound
                if slack < 0:
                    violations += 1
                if min_slack is None or slack < min_slack:
                    min_slack = slack
    else:
        inc = _incidence_matrix(idx)
        for n in range(1, n_points + 1):
            nprng = np.random.default_rng((seed, q, n))
            scores = nprng.random((trials, n_points))
            chosen = np.argpartition(scores, n - 1, axis=1)[:, :n]
            rows = np.zeros((trials, n_points), dtype=np.float64)
            np.put_along_axis(rows, chosen, 1.0, axis=1)
            _, bound = supersat_bound(q, n)
            vio, slack = _check_subsets_batch(inc, rows, bound)
            violations += vio
            checked += trials
            if min_slack is None or slack < min_slack:
                min_slack = slack
    return {
        "violations": violations,
        "min_slack": 0 if min_slack is None else min_slack,
        "trials": checked,
    }
