"""Kleitman-Winston fingerprints and containers, with brute-force oracles.

The algorithm ("the run"): start from A = V(G), S = (); while |A| > R and
|S| < f, query the maximum-degree vertex v of G[A] (ties to the smallest
index); if v belongs to the independent set, append it to S and delete v
and its neighbors from A, otherwise delete v alone.  The fingerprint is S;
the container is S together with the final A, reconstructible from S alone
because the replay queries exactly the same vertices.

Two facts get verified empirically here.  Unconditionally, I minus S lands
inside the container.  Under local density (e(U) >= beta*C(|U|,2) for all
|U| >= R) plus R >= e^(-beta*f)*N, each selection shrinks A by the factor
(1-beta), so the final A has at most R vertices and the number of
independent f+r sets is at most C(N,f)*C(R,r).  Note |S u A| itself may
exceed R (up to f + R): the counting argument only ever pays C(R, r) for
the part of I inside the final A, so the useful size guarantee is on A,
and that is what gets asserted; the combined size is reported alongside.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from itertools import combinations
from math import comb

from mpmath import iv

from .collinearity_graph import Graph
from .intervals import certainly_ge
from .parallel import map_ordered
from .rng import CounterRng


@dataclass(frozen=True)
class ContainerParams:
    """Lemma parameters: graph order N, density beta, budgets f, r, cutoff R."""

    n_vertices: int
    beta: Fraction
    f: int
    r: int
    R: int

    def __post_init__(self) -> None:
        if not 0 <= self.beta <= 1:
            raise ValueError(f"beta = {self.beta} outside [0, 1]")
        if self.f < 0 or self.r < 0 or self.R < 1 or self.n_vertices < 0:
            raise ValueError("negative parameter")

    def admissible_rational(self) -> bool:
        """Sufficient integer-exact form of R >= e^(-beta*f)*N, via
        (1-beta)^f * N <= R and (1-x) <= e^(-x)."""
        return (1 - self.beta) ** self.f * self.n_vertices <= self.R

    def admissible_analytic(self) -> bool:
        """R >= e^(-beta*f)*N certified with directed rounding (interval
        upper bound), so True is trustworthy and False may be conservative."""
        return certainly_ge(
            self.R,
            lambda: iv.exp(iv.mpf(-self.beta.numerator * self.f) / self.beta.denominator)
            * self.n_vertices,
        )


@dataclass(frozen=True)
class Fingerprint:
    """Selected vertices in selection order, plus total queries made."""

    vertices: tuple[int, ...]
    steps_taken: int


@dataclass(frozen=True)
class Container:
    vertices: tuple[int, ...]
    mask: int


def max_degree_vertex(G: Graph, A: int) -> int:
    """Vertex of maximum degree within G[A]; ties to the smallest index."""
    if A == 0:
        raise ValueError("empty active set")
    best_v = -1
    best_deg = -1
    bits = A
    while bits:
        low = bits & -bits
        bits ^= low
        v = low.bit_length() - 1
        deg = (G.rows[v] & A).bit_count()
        if deg > best_deg:
            best_deg = deg
            best_v = v
    return best_v


def _mask_of(vertices) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def _kw_run(G: Graph, oracle_mask: int, f: int, R: int) -> tuple[list[int], int, tuple[int, ...]]:
    """Shared loop: returns (selections, final A mask, queried vertices)."""
    A = (1 << G.n) - 1
    S: list[int] = []
    queries: list[int] = []
    while A.bit_count() > R and len(S) < f:
        v = max_degree_vertex(G, A)
        queries.append(v)
        if (oracle_mask >> v) & 1:
            S.append(v)
            A &= ~((1 << v) | G.rows[v])
        else:
            A &= ~(1 << v)
    return S, A, tuple(queries)


def kw_fingerprint(G: Graph, I, params: ContainerParams) -> Fingerprint:
    """Run the algorithm against an independent set I."""
    I_mask = I if isinstance(I, int) else _mask_of(I)
    if not G.is_independent(I_mask):
        raise ValueError("I is not independent")
    S, _, queries = _kw_run(G, I_mask, params.f, params.R)
    return Fingerprint(tuple(S), len(queries))


def kw_container(G: Graph, S, params: ContainerParams) -> Container:
    """Replay the run with membership in S as the oracle; container = S u A."""
    vertices = S.vertices if isinstance(S, Fingerprint) else tuple(S)
    S_mask = _mask_of(vertices)
    if not G.is_independent(S_mask):
        raise ValueError("fingerprint is not independent")
    _, A_final, _ = _kw_run(G, S_mask, params.f, params.R)
    mask = S_mask | A_final
    out = []
    bits = mask
    while bits:
        low = bits & -bits
        bits ^= low
        out.append(low.bit_length() - 1)
    return Container(tuple(out), mask)


def check_local_density(
    G: Graph, R: int, beta: Fraction, subset_budget: int = 1 << 21, rng: CounterRng | None = None
) -> tuple[bool, int | None]:
    """Does every U with |U| >= R satisfy e(U) >= beta*C(|U|,2)?

    Exhaustive when the number of candidate subsets fits the budget,
    otherwise a randomized search; returns (verdict, worst witness mask).
    A False verdict always carries a genuine violating witness; a True
    verdict from the randomized path is only a failure to find one.
    """
    beta = Fraction(beta)
    lo = max(R, 2)
    worst_mask: int | None = None
    worst_gap: Fraction | None = None
    total = sum(comb(G.n, k) for k in range(lo, G.n + 1))
    if total <= subset_budget:
        universe = range(G.n)
        for k in range(lo, G.n + 1):
            for combo in combinations(universe, k):
                mask = _mask_of(combo)
                gap = Fraction(G.edges_in(mask)) - beta * comb(k, 2)
                if worst_gap is None or gap < worst_gap:
                    worst_gap = gap
                    worst_mask = mask
    else:
        rng = rng or CounterRng(0, G.n, R)
        for _ in range(subset_budget // max(G.n, 1)):
            k = lo + rng.below(G.n - lo + 1)
            mask = _mask_of(rng.sample_indices(G.n, k))
            gap = Fraction(G.edges_in(mask)) - beta * comb(k, 2)
            if worst_gap is None or gap < worst_gap:
                worst_gap = gap
                worst_mask = mask
    ok = worst_gap is None or worst_gap >= 0
    return ok, (None if ok else worst_mask)


def measure_local_density(G: Graph, R: int, subset_budget: int = 1 << 21) -> Fraction:
    """The largest beta for which check_local_density holds: the exact
    minimum of e(U)/C(|U|,2) over |U| >= max(R, 2) (exhaustive only)."""
    lo = max(R, 2)
    total = sum(comb(G.n, k) for k in range(lo, G.n + 1))
    if total > subset_budget:
        raise ValueError(f"{total} subsets exceed the exhaustive budget")
    best: Fraction | None = None
    for k in range(lo, G.n + 1):
        for combo in combinations(range(G.n), k):
            ratio = Fraction(G.edges_in(_mask_of(combo)), comb(k, 2))
            if best is None or ratio < best:
                best = ratio
                if best == 0:
                    return best
    if best is None:
        raise ValueError(f"no subsets of size >= {lo} in a graph on {G.n} vertices")
    return best


def count_independent_sets_bruteforce(G: Graph, s: int, max_n: int = 26) -> int:
    """Exact count of independent s-subsets by pruned DFS."""
    if G.n > max_n:
        raise ValueError(f"graph order {G.n} exceeds brute-force limit {max_n}")
    if s < 0:
        return 0
    if s == 0:
        return 1
    if G.edge_count == 0:
        return comb(G.n, s)

    rows = G.rows

    def rec(allowed: int, need: int) -> int:
        if need == 0:
            return 1
        if allowed.bit_count() < need:
            return 0
        low = allowed & -allowed
        v = low.bit_length() - 1
        without = allowed ^ low
        return rec(without & ~rows[v], need - 1) + rec(without, need)

    return rec((1 << G.n) - 1, s)


def enumerate_independent_sets(G: Graph, s: int | None = None):
    """Yield masks of independent sets, all sizes or exactly size s."""

    def rec(mask: int, allowed: int, count: int):
        if s is None or count == s:
            yield mask
            if s is not None:
                return
        bits = allowed
        while bits:
            low = bits & -bits
            bits ^= low
            v = low.bit_length() - 1
            yield from rec(mask | low, bits & ~G.rows[v], count + 1)

    yield from rec(0, (1 << G.n) - 1, 0)


def verify_container_bound(G: Graph, params: ContainerParams) -> dict:
    """Check every testable claim of the container lemma on one graph.

    Returns a report; ``assumptions_met`` False means the density or the
    R >= e^(-beta*f)*N precondition failed and nothing else was judged.
    ``violations`` counts failed asserted claims (count bound, fingerprint
    size, final-A size, soundness, replay consistency).  The combined
    |S u A| is reported as ``container_size_max`` but not asserted
    against R, since only the final A carries that guarantee.
    """
    density_ok, witness = check_local_density(G, params.R, params.beta)
    rational_ok = params.admissible_rational()
    analytic_ok = params.admissible_analytic()
    report: dict = {
        "n": G.n,
        "beta": str(params.beta),
        "f": params.f,
        "r": params.r,
        "R": params.R,
        "density_ok": density_ok,
        "admissible_rational": rational_ok,
        "admissible_analytic": analytic_ok,
        "assumptions_met": bool(density_ok and rational_ok),
    }
    if not report["assumptions_met"]:
        report["density_witness"] = witness
        report["violations"] = 0
        return report

    size = params.f + params.r
    lhs = count_independent_sets_bruteforce(G, size)
    rhs = comb(G.n, params.f) * comb(params.R, params.r)
    violations = 0 if lhs <= rhs else 1

    fingerprint_ok = True
    soundness_ok = True
    a_final_ok = True
    replay_ok = True
    container_size_max = 0
    for I_mask in enumerate_independent_sets(G, size):
        S, A_final, queries = _kw_run(G, I_mask, params.f, params.R)
        S_mask = _mask_of(S)
        replay_S, replay_A, replay_queries = _kw_run(G, S_mask, params.f, params.R)
        container_mask = S_mask | replay_A
        container_size_max = max(container_size_max, container_mask.bit_count())
        if len(S) > params.f:
            fingerprint_ok = False
        if A_final.bit_count() > params.R:
            a_final_ok = False
        if (I_mask & ~S_mask) & ~container_mask:
            soundness_ok = False
        if replay_queries != queries or replay_A != A_final or replay_S != S:
            replay_ok = False
    for flag in (fingerprint_ok, soundness_ok, a_final_ok, replay_ok):
        if not flag:
            violations += 1

    report.update(
        bound_lhs=lhs,
        bound_rhs=rhs,
        bound_ok=lhs <= rhs,
        fingerprint_ok=fingerprint_ok,
        soundness_ok=soundness_ok,
        a_final_ok=a_final_ok,
        replay_ok=replay_ok,
        container_size_max=container_size_max,
        violations=violations,
    )
    return report


# -- randomized instance batches ------------------------------------------------


def random_graph(n: int, p: Fraction, rng: CounterRng) -> Graph:
    """G(n, p) with exact rational edge probability."""
    p = Fraction(p)
    rows = [0] * n
    for u in range(n):
        for v in range(u + 1, n):
            if rng.below(p.denominator) < p.numerator:
                rows[u] |= 1 << v
                rows[v] |= 1 << u
    return Graph(rows)


def derive_params(G: Graph, rng: CounterRng, f_cap: int = 256) -> ContainerParams | None:
    """Sharpest admissible parameters for a given graph, or None.

    R is drawn near n so the exhaustive density minimum is cheap; beta is
    the exact measured minimum, f the least value making (1-beta)^f * n
    fit under R, r a small random excess.
    """
    n = G.n
    if n < 2:
        return None
    span = min(6, n - 2)
    R = n - rng.below(span + 1)
    beta = measure_local_density(G, R)
    if beta == 0 and R < n:
        return None
    shrink = Fraction(n)
    f = 0
    while shrink > R:
        f += 1
        shrink *= 1 - beta
        if f > f_cap:
            return None
    r = rng.below(4)
    if f <= n:
        r = min(r, n - f)
    return ContainerParams(n_vertices=n, beta=beta, f=f, r=r, R=R)


def _kw_instance(args: tuple[int, int, int, str | None, int | None, int | None, int | None]) -> dict:
    n, seed, index, beta_str, f, r, R = args
    rng = CounterRng(seed, n, index)
    p = Fraction(1 + rng.below(3), 4)
    G = random_graph(n, p, rng)
    if beta_str is not None:
        params = ContainerParams(
            n_vertices=n, beta=Fraction(beta_str), f=int(f), r=int(r), R=int(R)
        )
    else:
        params = derive_params(G, rng)
        if params is None:
            return {"n": n, "instance": index, "assumptions_met": False, "violations": 0}
    report = verify_container_bound(G, params)
    report["instance"] = index
    return report


def kw_verify_batch(
    n: int,
    instances: int,
    seed: int,
    threads: int = 1,
    beta: Fraction | None = None,
    f: int | None = None,
    r: int | None = None,
    R: int | None = None,
) -> list[dict]:
    """Verify the container lemma on a batch of random graphs.

    With no explicit parameters, each instance gets the sharpest
    admissible (beta, f, r, R) derived from its own graph; explicit
    parameters are applied to every instance as-is (and may legitimately
    yield assumptions_met = False rows).
    """
    overrides = (beta, f, r, R)
    if any(v is not None for v in overrides) and None in overrides:
        raise ValueError("beta, f, r, R must be supplied together")
    beta_str = None if beta is None else str(Fraction(beta))
    jobs = [(n, seed, i, beta_str, f, r, R) for i in range(instances)]
    return map_ordered(_kw_instance, jobs, threads)
