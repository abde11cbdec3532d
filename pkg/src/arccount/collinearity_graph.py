"""The collinearity graph induced on P by an arc F, with density checks.

Vertices are the points of P; {x, y} is an edge exactly when some z in F
is collinear with x and y.  Because F is an arc, a pair {x, y} can see at
most two such z (three would put collinear points inside F), which caps
the edge multiplicity at 2 and is what turns per-z pair counts into the
edge lower bound e(G) >= (eps*|F| / 8q) * C(|P|, 2).

The Graph type is deliberately generic (plain bitset adjacency rows) so
the container engine can run on synthetic random graphs as well.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil, comb
from typing import Iterator, Sequence

from .arc_tools import PointSet, is_arc
from .parallel import map_ordered
from .plane_geometry import PlaneIndex, plane_for_order
from .rng import CounterRng


class Graph:
    """Simple undirected graph; row v is the neighbor bitset of vertex v.

    ``labels`` carries plane point indices when the graph is geometric;
    synthetic graphs leave it None.  Construction validates symmetry and
    the absence of self-loops, after which instances are immutable.
    """

    __slots__ = ("n", "rows", "labels", "edge_count")

    def __init__(self, rows: Sequence[int], labels: Sequence[int] | None = None):
        rows = tuple(rows)
        n = len(rows)
        if labels is not None:
            labels = tuple(labels)
            if len(labels) != n:
                raise ValueError("label count differs from vertex count")
        degree_sum = 0
        for v, row in enumerate(rows):
            if row >> n:
                raise ValueError(f"row {v} has neighbor bits out of range")
            if (row >> v) & 1:
                raise ValueError(f"self-loop at vertex {v}")
            bits = row
            while bits:
                low = bits & -bits
                bits ^= low
                if not (rows[low.bit_length() - 1] >> v) & 1:
                    raise ValueError("adjacency not symmetric")
            degree_sum += row.bit_count()
        self.n = n
        self.rows = rows
        self.labels = labels
        self.edge_count = degree_sum // 2

    @classmethod
    def from_edges(
        cls, n: int, edges: Sequence[tuple[int, int]], labels: Sequence[int] | None = None
    ) -> "Graph":
        rows = [0] * n
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            rows[u] |= 1 << v
            rows[v] |= 1 << u
        return cls(rows, labels)

    def edges(self) -> Iterator[tuple[int, int]]:
        for v in range(self.n):
            bits = self.rows[v] >> (v + 1)
            while bits:
                low = bits & -bits
                yield v, v + 1 + low.bit_length() - 1
                bits ^= low

    def degree_in(self, v: int, mask: int) -> int:
        """Degree of v inside the vertex subset given as a bitset."""
        return (self.rows[v] & mask).bit_count()

    def edges_in(self, mask: int) -> int:
        """Edge count of the induced subgraph on the bitset mask."""
        total = 0
        bits = mask
        while bits:
            low = bits & -bits
            bits ^= low
            total += (self.rows[low.bit_length() - 1] & mask).bit_count()
        return total // 2

    def is_independent(self, mask: int) -> bool:
        bits = mask
        while bits:
            low = bits & -bits
            bits ^= low
            if self.rows[low.bit_length() - 1] & mask:
                return False
        return True


@dataclass(frozen=True)
class DensityWitness:
    """One (F, P) density trial: required edge count versus the actual one."""

    epsilon: Fraction
    f_size: int
    p_size: int
    required: Fraction
    actual: int

    @property
    def ok(self) -> bool:
        return self.actual >= self.required

    @property
    def ratio(self) -> Fraction | None:
        if self.required == 0:
            return None
        return Fraction(self.actual) / self.required


def _validate_pair(F: PointSet, P: PointSet, idx: PlaneIndex) -> None:
    if not F.isdisjoint(P):
        raise ValueError("F and P must be disjoint")
    if not is_arc(F, idx):
        raise ValueError("F must be an arc")


def build_collinearity_graph(F: PointSet, P: PointSet, idx: PlaneIndex) -> Graph:
    """Graph on P with {x, y} an edge iff some z in F is collinear with both.

    Sweeps the q+1 lines through each z: the P-points on one such line are
    pairwise joined.  O(|F| * q^2) instead of all-pairs-times-F.
    """
    _validate_pair(F, P, idx)
    labels = P.indices()
    pos = {label: i for i, label in enumerate(labels)}
    rows = [0] * len(labels)
    for z in F.indices():
        for lid in idx.lines_through_point[z]:
            members = idx.points_on_line[lid] & P.bits
            if members.bit_count() < 2:
                continue
            clique = 0
            positions = []
            while members:
                low = members & -members
                members ^= low
                i = pos[low.bit_length() - 1]
                clique |= 1 << i
                positions.append(i)
            for i in positions:
                rows[i] |= clique & ~(1 << i)
    return Graph(rows, labels)


def edge_multiplicity_histogram(F: PointSet, P: PointSet, idx: PlaneIndex) -> dict[int, int]:
    """For each graph edge, how many z in F witness it; histogram over edges.

    F being an arc forces every multiplicity to be 1 or 2: three witnesses
    on the common line would be a collinear triple inside F.
    """
    graph = build_collinearity_graph(F, P, idx)
    labels = graph.labels or tuple(range(graph.n))
    hist: dict[int, int] = {}
    for u, v in graph.edges():
        lid = idx.line_of_pair(labels[u], labels[v])
        mult = (idx.points_on_line[lid] & F.bits).bit_count()
        hist[mult] = hist.get(mult, 0) + 1
    return dict(sorted(hist.items()))


def density_required(q: int, epsilon: Fraction, f_size: int, p_size: int) -> Fraction:
    """The exact rational edge threshold (eps * f_size / 8q) * C(p_size, 2)."""
    epsilon = Fraction(epsilon)
    if p_size < (1 + epsilon) * q:
        raise ValueError(f"|P| = {p_size} below the (1+eps)q = {(1 + epsilon) * q} threshold")
    return epsilon * f_size * comb(p_size, 2) / (8 * q)


# -- randomized density trials -------------------------------------------------


def random_arc(idx: PlaneIndex, target_size: int, rng: CounterRng) -> PointSet:
    """Greedy arc from a random point order; stops at target_size or when stuck.

    Always returns a nonempty arc for target_size >= 1 (the first point is
    unconditionally addable).
    """
    order = list(range(idx.n_points))
    rng.shuffle(order)
    bits = 0
    size = 0
    for cand in order:
        if size >= target_size:
            break
        ok = True
        for lid in idx.lines_through_point[cand]:
            if (idx.points_on_line[lid] & bits).bit_count() >= 2:
                ok = False
                break
        if ok:
            bits |= 1 << cand
            size += 1
    return PointSet(bits)


def sample_density_pair(
    idx: PlaneIndex, epsilon: Fraction, rng: CounterRng
) -> tuple[PointSet, PointSet]:
    """A random (F, P): F a random arc of size in [1, q], P a disjoint random
    set of size uniform in [ceil((1+eps)q), q^2 - |F|].  The size of F is
    capped so that at least ceil((1+eps)q) points remain for P."""
    q = idx.q
    low = ceil((1 + Fraction(epsilon)) * q)
    f_limit = min(q, idx.n_points - low)
    if f_limit < 1:
        raise ValueError(f"no room for a nonempty F with |P| >= {low} at q = {q}")
    F = random_arc(idx, 1 + rng.below(f_limit), rng)
    high = idx.n_points - F.size
    p_size = low + rng.below(high - low + 1)
    complement = [i for i in range(idx.n_points) if i not in F]
    chosen = rng.sample_indices(len(complement), p_size)
    P = PointSet.from_indices(complement[i] for i in chosen)
    return F, P


def density_trial(q: int, epsilon: Fraction, seed: int, trial: int) -> DensityWitness:
    idx = plane_for_order(q)
    rng = CounterRng(seed, q, trial)
    F, P = sample_density_pair(idx, epsilon, rng)
    graph = build_collinearity_graph(F, P, idx)
    required = density_required(q, epsilon, F.size, P.size)
    return DensityWitness(
        epsilon=Fraction(epsilon),
        f_size=F.size,
        p_size=P.size,
        required=required,
        actual=graph.edge_count,
    )


def _density_trial_args(args: tuple[int, str, int, int]) -> tuple[bool, int, int]:
    q, eps_str, seed, trial = args
    witness = density_trial(q, Fraction(eps_str), seed, trial)
    ratio = witness.ratio
    assert ratio is not None
    return witness.ok, ratio.numerator, ratio.denominator


def density_sweep(
    q: int, epsilon: Fraction, trials: int, seed: int, threads: int = 1
) -> tuple[int, Fraction | None]:
    """(violation count, min actual/required ratio) over random trials at q."""
    eps_str = str(Fraction(epsilon))
    results = map_ordered(
        _density_trial_args, [(q, eps_str, seed, t) for t in range(trials)], threads
    )
    violations = sum(1 for ok, _, _ in results if not ok)
    ratios = [Fraction(num, den) for _, num, den in results]
    return violations, min(ratios) if ratios else None


def density_check(
    q: int, epsilon: Fraction, trials: int, seed: int, threads: int = 1
) -> dict:
    """Scan prime powers up to q; report the stable violation-free suffix.

    ``min_q_clean`` is the smallest prime power q0 <= q such that every
    prime power in [q0, q] had zero violations, or None if even q itself
    violated (the lemma holds only for q sufficiently large, so small
    orders are expected to fail).
    """
    from .finite_field import factor_prime_power

    orders = []
    for cand in range(2, q + 1):
        try:
            factor_prime_power(cand)
        except ValueError:
            continue
        orders.append(cand)
    per_q: dict[int, int] = {}
    min_ratio_at_q: Fraction | None = None
    for cand in orders:
        violations, min_ratio = density_sweep(cand, epsilon, trials, seed, threads)
        per_q[cand] = violations
        if cand == q:
            min_ratio_at_q = min_ratio
    min_q_clean: int | None = None
    for cand in reversed(orders):
        if per_q[cand] == 0:
            min_q_clean = cand
        else:
            break
    return {
        "violations": per_q.get(q, 0),
        "min_ratio": None if min_ratio_at_q is None else float(min_ratio_at_q),
        "min_q_clean": min_q_clean,
    }
