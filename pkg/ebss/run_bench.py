"""
ebss/run_bench.py

Benchmark runner:
- builds the instance set of a domain (tile puzzle, pancake, Mero, random)
- runs one algorithm per instance under a cooperative time limit
- replays every returned path against the domain before recording it
- writes out/<run_id>/ with manifest.json, records CSV, runs.db and summary.txt

Usage:
  python -m ebss.run_bench mero --alg astar --instances k=100,1000 --table
  python -m ebss.run_bench stp --alg ebts --c1 10 --c2 20 --delta 1e6 --resolution 1e6 --instances 1..20
  python -m ebss.run_bench pancake --alg ebts --size 14 --instances 1..100 --workers 4

Exit code is 0 iff every instance was solved (or proven unsolvable).
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from datetime import datetime, timezone
from functools import lru_cache
from pathlib import Path
from typing import Optional

from ebss.baselines import astar, idastar, oracle
from ebss.bounded import make_engine
from ebss.config import load_config, parse_int, parse_rational
from ebss.core import (
    Deadline,
    SearchError,
    SearchOutcome,
    SearchTimeout,
    StateLimitExceeded,
    StateSpace,
    solution_raw_cost,
    validate_solution,
)
from ebss.db import RunDB
from ebss.driver import EBParams, EBSSS
from ebss.mero import mero_graph
from ebss.pancake import generate_hard_pancakes, pancake_space
from ebss.randomspace import random_space
from ebss.report import (
    STATUS_ERROR,
    STATUS_RESOURCE,
    STATUS_SOLVED,
    STATUS_TIMEOUT,
    STATUS_UNSOLVABLE,
    AggregateRow,
    ExperimentConfig,
    RunRecord,
    aggregate,
    emit_csv,
    emit_table,
    write_summary,
)
from ebss.tiles import load_korf_table, random_walk_tiles, stp_space

try:
    import resource
except ImportError:  # pragma: no cover - non-POSIX
    resource = None

logger = logging.getLogger(__name__)


def utc_now_iso() -> str:
    return datetime.now(timezone.utc).isoformat()


def peak_rss_kb() -> Optional[int]:
    """Peak resident set size of this process (KiB on Linux), if available."""
    if resource is None:
        return None
    return int(resource.getrusage(resource.RUSAGE_SELF).ru_maxrss)


def parse_instances(selector: str) -> list[int]:
    """
    Instance selector:
      "a..b"      inclusive 1-based range
      "k=10,100"  explicit list (Mero sizes)
      "3,5,8"     explicit list
      ""          nothing
    """
    text = selector.strip()
    if not text:
        return []
    if text.startswith("k="):
        text = text[2:]
    if ".." in text:
        lo, hi = text.split("..", 1)
        a, b = parse_int(lo), parse_int(hi)
        if a < 1 or b < a - 1:
            raise ValueError(f"bad instance range: {selector!r}")
        return list(range(a, b + 1))
    return [parse_int(part) for part in text.split(",") if part.strip()]


@lru_cache(maxsize=8)
def _korf(path: str) -> dict:
    return load_korf_table(path)


@lru_cache(maxsize=8)
def _walks(n: int, walk_length: int, seed: int) -> tuple:
    return tuple(random_walk_tiles(n, walk_length, seed))


@lru_cache(maxsize=8)
def _pancakes(n: int, size: int, seed: int) -> tuple:
    return tuple(generate_hard_pancakes(n, size, seed))


@dataclass(frozen=True)
class Problem:
    space: StateSpace
    name: str
    size: Optional[int] = None
    c_star: Optional[int] = None


def build_problem(config: ExperimentConfig, index: int, count: int) -> Problem:
    """Instance `index` (1-based; the Mero parameter k for mero) of a suite of `count`."""
    if config.domain == "stp":
        if config.korf_path is not None:
            boards = _korf(str(config.korf_path))
            board = boards.get(index)
            if board is None:
                raise ValueError(f"instance {index} outside the {len(boards)} boards of {config.korf_path}")
        else:
            board = _walks(max(index, count), config.walk_length, config.seed)[index - 1]
        return Problem(stp_space(board, config.resolution), str(index), size=16)
    if config.domain == "pancake":
        stack = _pancakes(max(index, count), config.size, config.seed)[index - 1]
        return Problem(pancake_space(stack, config.resolution), str(index), size=config.size)
    if config.domain == "mero":
        graph = mero_graph(index, verify=config.debug)
        return Problem(graph, f"k={index}", size=index, c_star=graph.c_star)
    space = random_space(seed=config.seed * 1_000_003 + index)
    return Problem(space, str(index), size=space.n_states)


def _default_engine(config: ExperimentConfig) -> str:
    if config.engine:
        return config.engine
    if config.algorithm == "ebgs":
        return "dijkstra"
    if config.algorithm == "ebts":
        return "dfbnb"
    return "dijkstra" if config.domain in ("mero", "random") else "dfbnb"


def solve(config: ExperimentConfig, problem: Problem, deadline: Optional[Deadline]) -> SearchOutcome:
    space = problem.space
    alg = config.algorithm
    if alg in ("ebts", "ebgs"):
        engine = make_engine(_default_engine(config), deadline=deadline, debug=config.debug)
        params = EBParams(config.c1, config.c2, config.delta)
        return EBSSS(space, engine, params).search()
    if alg == "astar":
        return astar(space, deadline=deadline)
    if alg == "idastar":
        return idastar(space, deadline=deadline)
    c_star = problem.c_star
    if c_star is None:
        # The oracle is told C*; computing it is not part of its cost.
        reference = astar(space)
        if reference.solution is None:
            return reference
        c_star = reference.solution.cost
    engine = make_engine(_default_engine(config), deadline=deadline, debug=config.debug)
    return oracle(space, engine, c_star)


def run_instance(config: ExperimentConfig, index: int, count: int = 1) -> RunRecord:
    """Run one instance; failures are recorded, never raised."""
    started = time.perf_counter()
    name = f"k={index}" if config.domain == "mero" else str(index)
    size = None
    try:
        problem = build_problem(config, index, count)
        name, size = problem.name, problem.size
        deadline = Deadline(config.time_limit) if config.time_limit else None
        outcome = solve(config, problem, deadline)
    except SearchTimeout as e:
        logger.info("instance %s timed out: %s", name, e)
        return RunRecord.for_config(
            config, name, STATUS_TIMEOUT,
            time_s=time.perf_counter() - started, peak_rss_kb=peak_rss_kb(),
            problem_size=size, error=str(e),
        )
    except (MemoryError, StateLimitExceeded) as e:
        logger.warning("instance %s hit a resource limit: %s", name, e)
        return RunRecord.for_config(
            config, name, STATUS_RESOURCE,
            time_s=time.perf_counter() - started, peak_rss_kb=peak_rss_kb(),
            problem_size=size, error=str(e) or type(e).__name__,
        )
    except (SearchError, ValueError) as e:
        logger.error("instance %s failed: %s", name, e)
        return RunRecord.for_config(
            config, name, STATUS_ERROR,
            time_s=time.perf_counter() - started, peak_rss_kb=peak_rss_kb(),
            problem_size=size, error=f"{type(e).__name__}: {e}",
        )

    stats = outcome.stats
    common = dict(
        expansions=stats.expansions,
        generations=stats.generations,
        heuristic_evals=stats.heuristic_evals,
        time_s=stats.wall_time,
        peak_rss_kb=peak_rss_kb(),
        problem_size=size,
        iterations=list(stats.iteration_log),
    )
    if outcome.solution is None:
        return RunRecord.for_config(config, name, STATUS_UNSOLVABLE, **common)
    try:
        cost = validate_solution(problem.space, outcome.solution)
    except SearchError as e:
        logger.error("instance %s returned an invalid path: %s", name, e)
        return RunRecord.for_config(config, name, STATUS_ERROR, error=str(e), **common)
    raw = solution_raw_cost(problem.space, outcome.solution)
    logger.info("instance %s solved: cost=%s expansions=%s", name, cost, stats.expansions)
    return RunRecord.for_config(config, name, STATUS_SOLVED, cost_int=cost, cost_raw=raw, **common)


def _run_instance_job(args: tuple[ExperimentConfig, int, int]) -> RunRecord:
    return run_instance(*args)


@dataclass
class SuiteResult:
    records: list[RunRecord]
    aggregate: list[AggregateRow]

    @property
    def all_solved(self) -> bool:
        return all(r.status in (STATUS_SOLVED, STATUS_UNSOLVABLE) for r in self.records)


def run_suite(config: ExperimentConfig) -> SuiteResult:
    """Run every selected instance; records come back in instance order."""
    indices = parse_instances(config.instances)
    count = max(indices, default=0)
    jobs = [(config, i, count) for i in indices]
    if config.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            records = list(pool.map(_run_instance_job, jobs))
    else:
        records = [_run_instance_job(job) for job in jobs]
    return SuiteResult(records=records, aggregate=aggregate(records))


def _manifest(config: ExperimentConfig, run_id: str) -> dict:
    data = asdict(config)
    data["c1"] = str(config.c1)
    data["c2"] = str(config.c2)
    data["label"] = config.label()
    data["run_id"] = run_id
    data["created_at_utc"] = utc_now_iso()
    return {k: (str(v) if isinstance(v, Path) else v) for k, v in data.items()}


def build_parser() -> argparse.ArgumentParser:
    settings = load_config()
    p = argparse.ArgumentParser(prog="bench", description="Run a heuristic-search benchmark suite.")
    p.add_argument("domain", choices=["stp", "pancake", "mero", "random"])
    p.add_argument("--alg", required=True, choices=["ebts", "ebgs", "astar", "idastar", "oracle"])
    p.add_argument("--c1", default=str(settings.c1), help="Node lower-bound factor (rational, e.g. 2 or 3/2).")
    p.add_argument("--c2", default=str(settings.c2), help="Node upper-bound factor (rational).")
    p.add_argument("--delta", default=str(settings.delta), help="Initial f-bound increment (integer, 1e6 allowed).")
    p.add_argument("--resolution", default=str(settings.resolution), help="Cost resolution (integer, 1e6 allowed).")
    p.add_argument("--instances", default="1..1", help="a..b, k=10,100 or a comma list.")
    p.add_argument("--seed", type=int, default=settings.seed)
    p.add_argument("--timeout", type=float, default=settings.timeout_s, help="Per-instance time limit in seconds.")
    p.add_argument("--out", default=None, help="CSV path (default: <run dir>/records.csv).")
    p.add_argument("--workers", type=int, default=settings.workers)
    p.add_argument("--table", action="store_true", help="Print the aggregate table.")
    p.add_argument("--engine", choices=["dfbnb", "dijkstra"], default=None, help="Bounded engine for the oracle.")
    p.add_argument("--size", type=int, default=14, help="Pancake stack size.")
    p.add_argument("--walk", type=int, default=30, help="Random-walk length for tile boards without a Korf file.")
    p.add_argument("--korf", default=str(settings.korf_path), help="Korf instance file (numbered lines).")
    p.add_argument("--walks", action="store_true", help="Use random-walk tile boards instead of the Korf file.")
    p.add_argument("--debug", action="store_true", default=settings.debug)
    p.add_argument("--verbose", action="store_true")
    return p


def config_from_args(args: argparse.Namespace) -> ExperimentConfig:
    return ExperimentConfig(
        domain=args.domain,
        algorithm=args.alg,
        c1=parse_rational(args.c1),
        c2=parse_rational(args.c2),
        delta=parse_int(args.delta),
        resolution=parse_int(args.resolution),
        instances=args.instances,
        seed=args.seed,
        time_limit=args.timeout,
        output=Path(args.out) if args.out else None,
        workers=max(1, args.workers),
        engine=args.engine,
        size=args.size,
        walk_length=args.walk,
        korf_path=None if args.walks or not args.korf else Path(args.korf),
        debug=bool(args.debug),
    )


def main(argv: Optional[list[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(asctime)s %(levelname)s %(name)s: %(message)s",
    )
    config = config_from_args(args)
    if config.algorithm in ("ebts", "ebgs"):
        # Validate the parameter tuple before any work starts.
        EBParams(config.c1, config.c2, config.delta)

    settings = load_config()
    run_id = datetime.now(timezone.utc).strftime("%Y%m%dT%H%M%SZ")
    out_root = settings.out_dir
    run_dir = out_root / run_id
    run_dir.mkdir(parents=True, exist_ok=True)

    # Maintain a pointer to the most recent run for convenience.
    (out_root / "latest.txt").write_text(str(run_dir) + "\n")

    manifest = _manifest(config, run_id)
    (run_dir / "manifest.json").write_text(json.dumps(manifest, indent=2) + "\n")

    print(f"[{utc_now_iso()}] run {run_id}: {config.domain} {config.label()} instances={config.instances}")
    result = run_suite(config)

    csv_path = config.output or (run_dir / "records.csv")
    emit_csv(result.records, csv_path)

    with RunDB(str(run_dir / "runs.db"), fast_mode=True, batch_size=settings.db_batch_size) as db:
        db.insert_run(run_id, config.domain, config.algorithm, config.label(), manifest)
        for seq, record in enumerate(result.records):
            db.insert_record(run_id, seq, record)

    write_summary(run_dir, run_id, manifest, result.records)

    for r in result.records:
        cost = "" if r.cost_int is None else f" cost={r.cost_int}"
        print(f"  {r.instance:>8} {r.status:<10}{cost} exp={r.expansions} t={r.time_s:.2f}s")
    solved = sum(1 for r in result.records if r.solved)
    print(f"[{utc_now_iso()}] solved {solved}/{len(result.records)}; csv={csv_path}; run_dir={run_dir}")
    if args.table:
        print()
        print(emit_table(result.records))
    return 0 if result.all_solved else 1


if __name__ == "__main__":
    sys.exit(main())
