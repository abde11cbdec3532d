"""Exact arc census, the theorem bound chain, and the sampled lower bound.

The census is a depth-first search over point indices in increasing
order.  Adding point c to a partial arc forbids, for every current member
m, the remaining points of the line through c and m; those "third point"
masks are precomputed per ordered pair, so a node at depth d spawns its
children with d mask unions.  Every visited node is an arc, hence the
node count per depth is exactly N_m and the search cost is proportional
to the answer.

The bound chain reproduces, in exact arithmetic, the inequality pipeline
that converts fingerprint/container counting into an arc-count upper
bound: with f ~ sqrt(8 q ln q / eps), beta = eps*f/8q and R = (1+eps)q,

    N_m  <=  C(q^2,f) * C(q^2-f,f) * C(R, m-2f)
         <=  q^(4f) * m^(2f) * C(R, m)
         <=  q^(6f) * C(R, m)
         <=  C(R2, m)          (R2 = (1+2eps)q; only for q enormous)

The first two steps are unconditional given m >= 2f and m <= q and are
asserted; the last needs 6f ln(q)/m < eps/4, astronomically false at any
computable q, so it is reported with its flag and never asserted.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import ceil, comb, floor, sqrt

from mpmath import iv

from .arc_tools import PointSet, is_arc, parabola_arc
from .intervals import ceil_of_interval, certainly_ge, certainly_lt, rational_iv
from .parallel import map_ordered
from .plane_geometry import PlaneIndex, plane_for_order
from .rng import CounterRng

DEFAULT_NODE_BUDGET = 200_000_000


@dataclass(frozen=True)
class CensusRecord:
    """One N_m value, exact or sampled.

    Sampling fields are None on exhaustive records.  ``runtime`` is kept
    out of the serialized form so identical runs emit identical bytes.
    """

    q: int
    m: int
    count: int
    method: str
    trials: int | None = None
    seed: int | None = None
    fraction: float | None = None
    ci_low: float | None = None
    ci_high: float | None = None
    runtime: float | None = None

    _JSON_KEYS = ("q", "m", "count", "method", "trials", "seed", "fraction", "ci_low", "ci_high")

    def to_dict(self) -> dict:
        return {key: getattr(self, key) for key in self._JSON_KEYS}

    def to_json_line(self) -> str:
        return json.dumps(self.to_dict())


# -- exhaustive census -----------------------------------------------------------


@lru_cache(maxsize=8)
def _pair_third_masks(q: int) -> list[list[int]]:
    """mask[i][j] = points of line(i, j) other than i and j."""
    idx = plane_for_order(q)
    n = idx.n_points
    masks = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            line = idx.points_on_line[idx.line_of_pair(i, j)]
            rest = line & ~(1 << i) & ~(1 << j)
            masks[i][j] = rest
            masks[j][i] = rest
    return masks


def _census_subtree(args: tuple[int, int, int, int]) -> list[int]:
    """Count arcs by size whose smallest point index is p0."""
    q, p0, m_max, budget = args
    idx = plane_for_order(q)
    masks = _pair_third_masks(q)
    counts = [0] * (m_max + 1)
    nodes = 0

    def dfs(members: list[int], avail: int, depth: int) -> None:
        nonlocal nodes
        counts[depth] += 1
        nodes += 1
        if nodes > budget:
            raise RuntimeError(f"census node budget {budget} exceeded at q={q}")
        if depth == m_max:
            return
        bits = avail
        while bits:
            low = bits & -bits
            bits ^= low
            c = low.bit_length() - 1
            child_avail = bits
            for m in members:
                child_avail &= ~masks[c][m]
            members.append(c)
            dfs(members, child_avail, depth + 1)
            members.pop()

    if m_max >= 1:
        all_above = ((1 << idx.n_points) - 1) & ~((1 << (p0 + 1)) - 1)
        dfs([p0], all_above, 1)
    return counts


def enumerate_arcs(
    q: int,
    m_max: int | None = None,
    threads: int = 1,
    node_budget: int = DEFAULT_NODE_BUDGET,
) -> list[CensusRecord]:
    """Exact N_m for m = 0..m_max (default: all sizes, i.e. m_max = q^2).

    Work splits across processes by the smallest point of the arc; the
    per-size sums are reduced in fixed order, so the result is identical
    for any thread count.  The node budget aborts runs whose answer would
    be astronomically large; it is enforced per subtree.
    """
    idx = plane_for_order(q)
    if m_max is None:
        m_max = idx.n_points
    if not 0 <= m_max <= idx.n_points:
        raise ValueError(f"m_max {m_max} out of range")
    counts = [0] * (m_max + 1)
    counts[0] = 1
    if m_max >= 1:
        jobs = [(q, p0, m_max, node_budget) for p0 in range(idx.n_points)]
        for sub in map_ordered(_census_subtree, jobs, threads):
            for m, c in enumerate(sub):
                counts[m] += c
    return [CensusRecord(q=q, m=m, count=c, method="exhaustive") for m, c in enumerate(counts)]


def census_counts(q: int, m_max: int | None = None, threads: int = 1) -> list[int]:
    return [rec.count for rec in enumerate_arcs(q, m_max, threads)]


def naive_census_counts(q: int, m_max: int) -> list[int]:
    """Independent oracle: test every m-subset of the plane directly."""
    from itertools import combinations

    idx = plane_for_order(q)
    counts = [0] * (m_max + 1)
    for m in range(m_max + 1):
        total = 0
        for combo in combinations(range(idx.n_points), m):
            if is_arc(PointSet.from_indices(combo), idx):
                total += 1
        counts[m] = total
    return counts


def trivial_lower_bound(q: int, m: int) -> int:
    """C(q, m): every m-subset of the parabola {(x, x^2)} is an arc."""
    if m > q:
        raise ValueError(f"m = {m} exceeds the parabola size q = {q}")
    if m < 0:
        raise ValueError("negative m")
    return comb(q, m)


# -- Monte Carlo arc fraction ----------------------------------------------------

WILSON_Z = 1.959963984540054


def _wilson_interval(successes: int, trials: int, z: float = WILSON_Z) -> tuple[float, float]:
    if trials == 0:
        return 0.0, 1.0
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * sqrt(phat * (1.0 - phat) / trials + z * z / (4.0 * trials * trials)) / denom
    return max(0.0, center - half), min(1.0, center + half)


def _sample_chunk(args: tuple[int, int, int, int, int]) -> int:
    q, m, seed, t_lo, t_hi = args
    idx = plane_for_order(q)
    successes = 0
    for t in range(t_lo, t_hi):
        rng = CounterRng(seed, t)
        subset = PointSet.from_indices(rng.sample_indices(idx.n_points, m))
        if is_arc(subset, idx):
            successes += 1
    return successes


def sample_arc_fraction(
    q: int, m: int, trials: int, seed: int, threads: int = 1
) -> CensusRecord:
    """Estimate the fraction of m-subsets of the plane that are arcs.

    Each trial is keyed by (seed, trial index), so the estimate does not
    depend on how trials are distributed over workers.  ``count`` is the
    implied lower bound floor(fraction * C(q^2, m)); the Wilson 95%
    interval rides along as (ci_low, ci_high) on the fraction scale.
    """
    if trials < 1:
        raise ValueError("need at least one trial")
    idx = plane_for_order(q)
    if not 0 <= m <= idx.n_points:
        raise ValueError(f"m = {m} out of range")
    chunk = 4096
    jobs = []
    t = 0
    while t < trials:
        jobs.append((q, m, seed, t, min(t + chunk, trials)))
        t += chunk
    successes = sum(map_ordered(_sample_chunk, jobs, threads))
    fraction = Fraction(successes, trials)
    implied = floor(fraction * comb(idx.n_points, m))
    low, high = _wilson_interval(successes, trials)
    return CensusRecord(
        q=q,
        m=m,
        count=implied,
        method="sampled",
        trials=trials,
        seed=seed,
        fraction=successes / trials,
        ci_low=low,
        ci_high=high,
    )


# -- the bound chain -------------------------------------------------------------


def choose_f(q: int, epsilon: Fraction) -> int:
    """f = ceil(sqrt(8 q ln q / eps))."""
    epsilon = Fraction(epsilon)

    def build():
        val = iv.mpf(8 * q * epsilon.denominator) / iv.mpf(epsilon.numerator)
        return iv.sqrt(val * iv.log(q))

    return ceil_of_interval(build)


@lru_cache(maxsize=1)
def parameter_identity_symbolic() -> bool:
    """Does e^(-beta*f) * q^2 = q hold exactly at f = sqrt(8 q ln q / eps),
    beta = eps*f/(8q)?  Checked once, symbolically."""
    import sympy

    q, eps = sympy.symbols("q epsilon", positive=True)
    f = sympy.sqrt(8 * q * sympy.log(q) / eps)
    beta = eps * f / (8 * q)
    residual = sympy.simplify(sympy.exp(-beta * f) * q**2 - q)
    slack = sympy.simplify((1 + eps) * q - q)
    return residual == 0 and slack.equals(eps * q) is True


@dataclass(frozen=True)
class BoundReport:
    """Every quantity of the bound chain at one (q, epsilon, m), exact."""

    q: int
    epsilon: Fraction
    m: int
    f: int
    beta: Fraction
    R: int
    R2: int
    t1: int
    t2: int
    t3: int
    t4: int
    m_ge_2f: bool
    m_le_q: bool
    m_lower_ok: bool
    admissible_rational: bool
    admissible_analytic: bool
    alpha_lt_eps_quarter: bool
    chain_t1_le_t2: bool
    chain_t2_le_t3: bool
    absorption_t3_le_t4: bool
    symbolic_identity: bool
    chain_ok: bool | None

    _JSON_KEYS = (
        "q", "epsilon", "m", "f", "beta", "R", "R2",
        "t1", "t2", "t3", "t4",
        "m_ge_2f", "m_le_q", "m_lower_ok",
        "admissible_rational", "admissible_analytic", "alpha_lt_eps_quarter",
        "chain_t1_le_t2", "chain_t2_le_t3", "absorption_t3_le_t4",
        "symbolic_identity", "chain_ok",
    )

    def to_dict(self) -> dict:
        out = {}
        for key in self._JSON_KEYS:
            val = getattr(self, key)
            out[key] = str(val) if isinstance(val, Fraction) else val
        return out

    def to_json_line(self) -> str:
        return json.dumps(self.to_dict())


def theorem_bound_chain(
    q: int, epsilon: Fraction, m: int, c_lower: Fraction = Fraction(1)
) -> BoundReport:
    """Compute the full bound chain and all of its side-condition flags.

    ``c_lower`` is the constant in the applicability condition
    m >= c * q^(1/2) * (ln q)^(3/2); the flag uses whatever is supplied.
    Terms that the proof multiplies as e^(c*f*ln q) are computed as the
    exact integer q^(c*f).
    """
    if q < 2 or m < 1:
        raise ValueError("need q >= 2 and m >= 1")
    epsilon = Fraction(epsilon)
    if epsilon <= 0:
        raise ValueError("epsilon must be positive")
    f = choose_f(q, epsilon)
    beta = epsilon * f / (8 * q)
    R = ceil((1 + epsilon) * q)
    R2 = ceil((1 + 2 * epsilon) * q)
    n_plane = q * q

    t1 = comb(n_plane, f) * comb(n_plane - f, f) * (comb(R, m - 2 * f) if m >= 2 * f else 0)
    t2 = q ** (4 * f) * m ** (2 * f) * comb(R, m)
    t3 = q ** (6 * f) * comb(R, m)
    t4 = comb(R2, m)

    m_ge_2f = m >= 2 * f
    m_le_q = m <= q
    m_lower_ok = _m_lower_flag(q, m, c_lower)
    remaining = n_plane - f
    admissible_rational = remaining <= 0 or (1 - beta) ** f * remaining <= R
    admissible_analytic = _admissible_analytic(beta, f, remaining, R)
    alpha_ok = _alpha_flag(q, f, m, epsilon)

    chain_t1_le_t2 = t1 <= t2
    chain_t2_le_t3 = t2 <= t3
    absorption = t3 <= t4
    chain_ok = (chain_t1_le_t2 and chain_t2_le_t3) if (m_ge_2f and m_le_q) else None

    return BoundReport(
        q=q,
        epsilon=epsilon,
        m=m,
        f=f,
        beta=beta,
        R=R,
        R2=R2,
        t1=t1,
        t2=t2,
        t3=t3,
        t4=t4,
        m_ge_2f=m_ge_2f,
        m_le_q=m_le_q,
        m_lower_ok=m_lower_ok,
        admissible_rational=admissible_rational,
        admissible_analytic=admissible_analytic,
        alpha_lt_eps_quarter=alpha_ok,
        chain_t1_le_t2=chain_t1_le_t2,
        chain_t2_le_t3=chain_t2_le_t3,
        absorption_t3_le_t4=absorption,
        symbolic_identity=parameter_identity_symbolic(),
        chain_ok=chain_ok,
    )


def _m_lower_flag(q: int, m: int, c_lower: Fraction) -> bool:
    """m >= c * sqrt(q) * (ln q)^(3/2), certified via the interval upper bound."""
    return certainly_ge(
        m,
        lambda: rational_iv(c_lower) * iv.sqrt(iv.mpf(q)) * iv.log(q) ** iv.mpf("1.5"),
    )


def _admissible_analytic(beta: Fraction, f: int, n: int, R: int) -> bool:
    if n <= 0:
        return True
    return certainly_ge(
        R,
        lambda: iv.exp(iv.mpf(-beta.numerator * f) / iv.mpf(beta.denominator)) * n,
    )


def _alpha_flag(q: int, f: int, m: int, epsilon: Fraction) -> bool:
    """alpha = 6 f ln q / m strictly below eps/4, certified by intervals."""
    return certainly_lt(
        lambda: iv.mpf(6 * f) * iv.log(q) / iv.mpf(m),
        rhs=epsilon / 4,
    )


def verify_theorem_instance(
    q: int,
    epsilon: Fraction,
    m: int,
    threads: int = 1,
    census_count: int | None = None,
) -> dict:
    """Compare the exact N_m against both sides of the theorem at one point.

    The lower bound C(q, m) <= N_m is asserted (``lower_ok``); the upper
    comparison against C((1+eps)q, m) is reported only, since the theorem
    is asymptotic and desk-scale q carries no guarantee.
    """
    if census_count is None:
        census_count = enumerate_arcs(q, m_max=m, threads=threads)[m].count
    report = theorem_bound_chain(q, epsilon, m)
    lower = trivial_lower_bound(q, m) if m <= q else 0
    return {
        "q": q,
        "epsilon": str(Fraction(epsilon)),
        "m": m,
        "census": census_count,
        "lower_bound": lower,
        "lower_ok": lower <= census_count,
        "upper_binomial": comb(report.R, m),
        "upper_observed": census_count <= comb(report.R, m),
        "chain": report.to_dict(),
    }


def parabola_is_witness(q: int) -> bool:
    """The parabola really is an arc of size q (the lower-bound witness)."""
    idx = plane_for_order(q)
    arc = parabola_arc(idx)
    return arc.size == q and is_arc(arc, idx)
