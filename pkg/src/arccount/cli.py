"""Command-line entry point: verifiers, census, and bound tables.

Exit codes: 0 when every asserted invariant passed, 2 on a verification
failure, 1 on usage errors (bad flags, malformed rationals, unsupported
q, projected-infeasible census runs).  Machine-readable output (JSONL or
CSV, fixed key order) goes to --out or standard output; the human
summary goes to standard error only, so redirected output stays clean.

Epsilon is accepted only as an exact rational like "1/2" or "2";
floating-point notation is rejected, because every verifier verdict is
computed in exact arithmetic and the input must not smuggle rounding in.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

from .arc_tools import supersat_check
from .census import (
    CensusRecord,
    DEFAULT_NODE_BUDGET,
    enumerate_arcs,
    sample_arc_fraction,
    theorem_bound_chain,
)
from .collinearity_graph import density_check
from .container_engine import kw_verify_batch
from .finite_field import factor_prime_power
from .parallel import resolve_threads
from .plane_geometry import incidence_report, plane_for_order


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        raise UsageError(message)


@dataclass
class RunConfig:
    subcommand: str
    q: int | None = None
    epsilon: Fraction | None = None
    seed: int = 0
    threads: int = 1
    out: str | None = None
    format: str = "jsonl"
    extra: dict = field(default_factory=dict)


def parse_rational(text: str) -> Fraction:
    """Exact rational "A/B" or integer "A"; floating point is rejected."""
    cleaned = text.strip()
    if any(ch in cleaned for ch in ".eE"):
        raise UsageError(f"epsilon must be an exact rational like 1/2, got {text!r}")
    try:
        value = Fraction(cleaned)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"malformed rational {text!r}: {exc}") from None
    return value


def _check_seed(seed: int) -> int:
    if not 0 <= seed < 1 << 64:
        raise UsageError(f"seed must fit in 64 bits, got {seed}")
    return seed


def _check_order(q: int) -> int:
    try:
        factor_prime_power(q)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return q


def build_parser() -> _Parser:
    parser = _Parser(prog="arccount", description=__doc__)
    sub = parser.add_subparsers(dest="subcommand", required=True)

    def common(p: _Parser, *, seed: bool = True) -> None:
        p.add_argument("--threads", type=int, default=None)
        p.add_argument("--out", type=str, default=None)
        p.add_argument("--format", choices=("jsonl", "csv"), default="jsonl")
        p.add_argument("--cache-dir", type=str, default=None)
        if seed:
            p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("plane", help="incidence structure report")
    p.add_argument("action", choices=("info",))
    p.add_argument("--q", type=int, required=True)
    common(p, seed=False)

    p = sub.add_parser("census", help="exact arc counts N_m")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--m-max", type=int, default=None)
    p.add_argument("--node-budget", type=int, default=DEFAULT_NODE_BUDGET)
    common(p, seed=False)

    p = sub.add_parser("supersat-check", help="per-point collinear-triple lower bound")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--trials", type=int, default=1000)
    common(p)

    p = sub.add_parser("density-check", help="collinearity-graph edge density bound")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--epsilon", type=str, required=True)
    p.add_argument("--trials", type=int, default=200)
    common(p)

    p = sub.add_parser("kw-verify", help="container lemma on random graphs")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--instances", type=int, default=100)
    p.add_argument("--beta", type=str, default=None)
    p.add_argument("--f", type=int, default=None)
    p.add_argument("--r", type=int, default=None)
    p.add_argument("--R", type=int, default=None)
    common(p)

    p = sub.add_parser("bound-table", help="theorem bound chain per m")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--epsilon", type=str, required=True)
    p.add_argument("--m-list", type=str, required=True)
    p.add_argument("--c-lower", type=str, default="1")
    common(p, seed=False)

    p = sub.add_parser("sample-lower", help="Monte Carlo arc-fraction estimate")
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--trials", type=int, default=100_000)
    common(p)

    return parser


def _rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    if not rows:
        return ""
    writer = csv.writer(buf, lineterminator="\n")
    keys = list(rows[0].keys())
    writer.writerow(keys)
    for row in rows:
        cells = []
        for key in keys:
            val = row.get(key)
            if val is None:
                cells.append("")
            elif isinstance(val, bool):
                cells.append("true" if val else "false")
            else:
                cells.append(str(val))
        writer.writerow(cells)
    return buf.getvalue()


def _emit(rows: list[dict], config: RunConfig) -> None:
    if config.format == "csv":
        payload = _rows_to_csv(rows)
    else:
        payload = "".join(json.dumps(row) + "\n" for row in rows)
    if config.out:
        Path(config.out).write_text(payload)
    else:
        sys.stdout.write(payload)


def _cache_path(cache_dir: str | None, q: int, m_max: int | None) -> Path | None:
    if cache_dir is None:
        cache_dir = os.environ.get("ARC_CACHE_DIR") or None
    if cache_dir is None:
        return None
    tag = "all" if m_max is None else str(m_max)
    return Path(cache_dir) / f"census-q{q}-m{tag}.jsonl"


# -- subcommand drivers: each returns (rows, failed, summary) --------------------


def _run_plane(config: RunConfig) -> tuple[list[dict], bool, str]:
    report = incidence_report(plane_for_order(config.q))
    ok = report["axioms_ok"]
    return [report], not ok, f"q={config.q}: incidence axioms {'ok' if ok else 'VIOLATED'}"


def _run_census(config: RunConfig) -> tuple[list[dict], bool, str]:
    q, m_max = config.q, config.extra["m_max"]
    cache = _cache_path(config.extra["cache_dir"], q, m_max)
    if cache is not None and cache.exists():
        rows = [json.loads(line) for line in cache.read_text().splitlines()]
        return rows, False, f"census q={q} served from cache {cache}"
    records = enumerate_arcs(q, m_max, config.threads, config.extra["node_budget"])
    rows = [rec.to_dict() for rec in records]
    if cache is not None:
        cache.parent.mkdir(parents=True, exist_ok=True)
        cache.write_text("".join(json.dumps(row) + "\n" for row in rows))
    total = sum(rec.count for rec in records)
    return rows, False, f"census q={q}: {total} arcs across {len(rows)} sizes"


def _run_supersat(config: RunConfig) -> tuple[list[dict], bool, str]:
    result = supersat_check(plane_for_order(config.q), config.extra["trials"], config.seed)
    failed = result["violations"] > 0
    return (
        [result],
        failed,
        f"supersat q={config.q}: {result['violations']} violations, "
        f"min slack {result['min_slack']} over {result['trials']} subsets",
    )


def _run_density(config: RunConfig) -> tuple[list[dict], bool, str]:
    result = density_check(
        config.q, config.epsilon, config.extra["trials"], config.seed, config.threads
    )
    failed = result["violations"] > 0
    return (
        [result],
        failed,
        f"density q={config.q} eps={config.epsilon}: {result['violations']} violations, "
        f"min clean q {result['min_q_clean']}",
    )


_KW_KEYS = ("instance", "assumptions_met", "bound_lhs", "bound_rhs", "violations")


def _run_kw(config: RunConfig) -> tuple[list[dict], bool, str]:
    extra = config.extra
    beta = None if extra["beta"] is None else parse_rational(extra["beta"])
    reports = kw_verify_batch(
        extra["n"],
        extra["instances"],
        config.seed,
        config.threads,
        beta=beta,
        f=extra["f"],
        r=extra["r"],
        R=extra["R"],
    )
    rows = [{key: rep.get(key) for key in _KW_KEYS} for rep in reports]
    met = [rep for rep in reports if rep.get("assumptions_met")]
    bad = sum(rep["violations"] for rep in met)
    return (
        rows,
        bad > 0,
        f"kw-verify n={extra['n']}: {len(met)}/{len(reports)} instances met assumptions, "
        f"{bad} violations",
    )


def _run_bound_table(config: RunConfig) -> tuple[list[dict], bool, str]:
    m_values = []
    for piece in config.extra["m_list"].split(","):
        piece = piece.strip()
        if piece:
            m_values.append(int(piece))
    if not m_values:
        raise UsageError("--m-list is empty")
    c_lower = parse_rational(config.extra["c_lower"])
    rows = []
    failed = False
    green = 0
    for m in m_values:
        report = theorem_bound_chain(config.q, config.epsilon, m, c_lower)
        rows.append(report.to_dict())
        if report.chain_ok is False:
            failed = True
        if report.chain_ok:
            green += 1
    return (
        rows,
        failed,
        f"bound-table q={config.q} eps={config.epsilon}: "
        f"{green}/{len(m_values)} rows chain-verified",
    )


def _run_sample(config: RunConfig) -> tuple[list[dict], bool, str]:
    record = sample_arc_fraction(
        config.q, config.extra["m"], config.extra["trials"], config.seed, config.threads
    )
    return (
        [record.to_dict()],
        False,
        f"sample q={config.q} m={record.m}: fraction {record.fraction:.6f}, "
        f"implied lower bound {record.count}",
    )


_DRIVERS = {
    "plane": _run_plane,
    "census": _run_census,
    "supersat-check": _run_supersat,
    "density-check": _run_density,
    "kw-verify": _run_kw,
    "bound-table": _run_bound_table,
    "sample-lower": _run_sample,
}


def _config_from_namespace(ns: argparse.Namespace) -> RunConfig:
    extra = {
        key: val
        for key, val in vars(ns).items()
        if key not in {"subcommand", "q", "epsilon", "seed", "threads", "out", "format"}
    }
    return RunConfig(
        subcommand=ns.subcommand,
        q=_check_order(ns.q) if getattr(ns, "q", None) is not None else None,
        epsilon=parse_rational(ns.epsilon) if getattr(ns, "epsilon", None) else None,
        seed=_check_seed(getattr(ns, "seed", 0)),
        threads=resolve_threads(getattr(ns, "threads", None)),
        out=getattr(ns, "out", None),
        format=getattr(ns, "format", "jsonl"),
        extra=extra,
    )


def run(config: RunConfig) -> int:
    """Execute one subcommand; returns the process exit code."""
    driver = _DRIVERS.get(config.subcommand)
    if driver is None:
        raise UsageError(f"unknown subcommand {config.subcommand!r}")
    rows, failed, summary = driver(config)
    _emit(rows, config)
    print(summary, file=sys.stderr)
    return 2 if failed else 0


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        ns = parser.parse_args(argv)
        config = _config_from_namespace(ns)
        return run(config)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except (ValueError, RuntimeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
